#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mubs/core.hpp"
#include "mubs/cyclotomic.hpp"
#include "mubs/io.hpp"

namespace mubs {

/// x~_a = (1/sqrt N) sum_b x_b q^(ab), q = exp(2 pi i / N).
ComplexVector dft(const ComplexVector& x);

struct BiunimodularVerdict {
    bool biunimodular = false;
    double deviation = 0.0;  // max over | |x_a| - 1 | and | |x~_a| - 1 |
};

BiunimodularVerdict is_biunimodular(const ComplexVector& x, const Tolerance& tol = {});

/// gamma_b = (1/N) sum_a conj(x_a) x_(a+b), indices mod N.
ComplexVector autocorrelation(const ComplexVector& x);

/// x_a -> x_(a+s) / x_s: the cyclic shift, rephased so that entry 0 is 1.
ComplexVector normalized_shift(const ComplexVector& x, int s);

enum class SequenceClass { gaussian, bjorck };  // bjorck: every non-Gaussian solution

const char* to_string(SequenceClass c);

struct BiuniSequence {
    ComplexVector entries;  // unimodular, entries(0) == 1
    SequenceClass cls = SequenceClass::gaussian;
    int first_restart = -1;  // restart index that first produced it (Newton only)
};

enum class CensusStatus { complete, unconverged, not_zero_dimensional };

const char* to_string(CensusStatus s);

struct CensusMetadata {
    int n = 0;
    std::string method;  // "newton" or "roots"
    int k = 0;           // root order (roots method)
    std::uint64_t seed = 0;
    int restarts = 0;
    int converged_restarts = 0;
    int last_new_restart = -1;
    int rank_deficient = 0;  // converged starts with a singular Jacobian
    int max_iterations = 0;
    double residual_tol = 0.0;
    Tolerance tol;
    int unique_up_to_shift = 0;
    int unique_up_to_shift_and_conjugation = 0;
    int bjorck_entries_matching_d = 0;  // entries of the form zeta_12^j d^(-1,0,1)
    int bjorck_entries_total = 0;
};

struct CensusResult {
    std::vector<BiuniSequence> sequences;
    std::vector<Basis> bases;
    std::vector<std::vector<int>> basis_members;  // sequence indices per basis
    std::vector<bool> circulant;
    std::vector<int> membership;  // bases containing each sequence
    CensusMetadata metadata;
    CensusStatus status = CensusStatus::complete;

    int gaussian_count() const;
};

struct NewtonSettings {
    int restarts = 20000;
    std::uint64_t seed = 1;
    int max_iterations = 200;
    double residual_tol = 1e-12;
    int threads = 1;
    Tolerance tol;
};

/// Multi-start damped Newton on |x~_a|^2 - 1 = 0 (a = 1..N-1) over the
/// phases of x_1..x_(N-1), x_0 = 1. Starts come from a randomly shifted
/// Halton sequence on the phase torus.
CensusResult newton_census(int n, const NewtonSettings& settings = {});

/// Every x with x_0 = 1 and k-th root entries that is exactly biunimodular.
std::vector<RootVector> enumerate_biunimodular_roots(int n, int k, std::uint64_t budget = 100'000'000);

CensusResult root_census(int n, int k, std::uint64_t budget = 100'000'000);

/// All orthonormal N-subsets of the census vectors (closed under cyclic
/// shift) that are unbiased to the standard and Fourier bases.
CensusResult assemble_bases(const CensusResult& census);

struct RangeStat {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
};

struct DistanceReport {
    RealMatrix table;
    std::vector<std::string> labels;
    std::vector<int> gaussian;
    std::vector<int> sixplet_circulant;
    std::vector<int> sixplet_other;
    RangeStat gaussian_side;
    RangeStat gaussian_diagonal;
    RangeStat gaussian_to_other;
    RangeStat sixplet_cross;
    RangeStat within_sixplets;
    double global_max = 0.0;
    bool sixplets_isometric = false;
    std::string summary;
};

DistanceReport census_distance_report(const CensusResult& census);

Json census_to_json(const CensusResult& c);
CensusResult census_from_json(const Json& j, const std::string& where);

}  // namespace mubs
