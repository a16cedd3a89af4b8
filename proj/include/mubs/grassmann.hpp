#pragma once

#include <span>
#include <string>
#include <vector>

#include "mubs/core.hpp"

namespace mubs {

/// Coordinates of a traceless Hermitian matrix in the generalized Gell-Mann
/// frame, ordered: symmetric (j<k), antisymmetric (j<k), diagonal l = 1..N-1.
/// The frame is orthonormal for the product e.f = Tr(ef)/2.
RealVector hermitian_coordinates(const ComplexMatrix& a);

/// Generalized Gell-Mann matrix `index` (0-based, ordering as above).
ComplexMatrix gell_mann(int n, int index);

/// Unit vector in R^(N^2-1) for the state |v>: coordinates of
/// sqrt(2N/(N-1)) (|v><v| - 1/N).
RealVector bloch_embed(const ComplexVector& v, double tol = 1e-10);

/// Tr((A - B)^2) / 2 for Hermitian A, B.
double hs_distance_sq(const ComplexMatrix& a, const ComplexMatrix& b);

struct BasisProjector {
    RealMatrix matrix;
    int dim = 0;

    double idempotency_defect() const;  // max |P^2 - P|
    double trace() const { return matrix.trace(); }
};

/// The (N^2-1) x N frame sqrt((N-1)/N) [e_1 ... e_N].
RealMatrix basis_frame(const Basis& b, const Tolerance& tol = {});

/// P = (N-1)/N sum_a e_a e_a^T, accumulated without the frame matrix.
BasisProjector basis_projector(const Basis& b, const Tolerance& tol = {});

/// D_c^2 = N - 1 - Tr P1 P2.
double chordal_distance_sq(const BasisProjector& p1, const BasisProjector& p2);

/// D_c^2 = N - 1 - sum_ab (|<e_a|f_b>|^2 - 1/N)^2, computed from overlaps.
double chordal_distance_sq_overlap(const Basis& a, const Basis& b, const Tolerance& tol = {});

/// Pairwise D_c^2; zero diagonal.
RealMatrix distance_table(std::span<const Basis> bases, const Tolerance& tol = {});

/// Header row of labels, one row per basis, 12 significant digits.
std::string distance_table_csv(const RealMatrix& table, const std::vector<std::string>& labels);

/// Sum of D_c^2 over unordered pairs.
double spread_objective(std::span<const Basis> bases, const Tolerance& tol = {});

/// C(m, 2) (N - 1).
double spread_upper_bound(int n, int m);

}  // namespace mubs
