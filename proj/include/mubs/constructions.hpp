#pragma once

#include <array>
#include <optional>
#include <vector>

#include "mubs/core.hpp"
#include "mubs/cyclotomic.hpp"

namespace mubs {

struct WeylPair {
    ComplexMatrix x;  // shift: X|j> = |j-1>
    ComplexMatrix z;  // clock: diag(1, q, ..., q^(N-1))
    Complex q;
};

/// Unitaries with XZ = qZX, q = exp(2 pi i / N).
WeylPair weyl_pair(int n);

/// Normalized Fourier matrix F_ab = q^(ab) / sqrt(N); column b is the
/// eigenvector of X with eigenvalue q^b.
Basis fourier(int n);
RootMatrix fourier_roots(int n);

bool is_prime(int n);

/// Eigenbasis of X Z^k in root form (order 2p). Column j has entries
/// rho^(2ja + k a (p - a)) / sqrt(p) with rho = exp(i pi / p); its first
/// entry is 1.
RootMatrix weyl_eigenbasis_roots(int p, int k);

/// Standard basis followed by the eigenbases of X Z^k, k = 0..p-1.
std::vector<Basis> prime_mub_set(int p);

/// Entrywise complex conjugate relative to the standard basis.
Basis conjugate(const Basis& b);

struct RealCensus {
    std::vector<RealVector> representatives;  // one per +/- class, first entry positive
    std::vector<double> dot_products;         // distinct pairwise values over all sign vectors
    bool mub_pair_exists = false;
    std::string verdict;
};

/// Real unit vectors unbiased to the standard basis of R^3 and whether any
/// two of them are orthogonal.
RealCensus real_unbiased_census(int n = 3);

struct RealMubSet4 {
    std::vector<RealMatrix> bases;           // standard, even-parity and odd-parity half vectors
    std::vector<RealVector> cell24_vertices;  // +/- every basis vector (24 points)
};

RealMubSet4 real_mub_set_dim4();

/// Vertices of the dual 24-cell: permutations of (+/-1, +/-1, 0, 0) / sqrt(2).
std::vector<RealVector> dual_cell24_vertices();

/// The 24-cell together with its dual (48 vectors, 24 rays).
std::vector<RealVector> dual_pair_cell24_vertices();

struct KsResult {
    bool uncolourable = false;
    std::vector<RealVector> rays;          // input reduced to one vector per ray
    std::vector<std::array<int, 4>> tetrads; // complete orthogonal 4-subsets (ray indices)
    std::optional<std::vector<int>> colouring;  // a valid 0/1 colouring when one exists
    std::uint64_t nodes = 0;
};

/// Exhaustive search for a 0/1 colouring of 4-dimensional rays with exactly
/// one 1 in every complete orthogonal 4-subset.
KsResult ks_uncolourable(const std::vector<RealVector>& vectors, double tol = 1e-9);

}  // namespace mubs
