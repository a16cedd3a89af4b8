#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mubs/catalog.hpp"
#include "mubs/core.hpp"
#include "mubs/io.hpp"

namespace mubs {

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// diag(R) absorbed into Q.
ComplexMatrix random_unitary(int n, std::mt19937_64& rng);

/// F = sum_{i<j} (N - sum_ab |(U_i^dagger U_j)_ab|^4); equals spread_objective
/// for unitary inputs.
double spread_value(const std::vector<ComplexMatrix>& us);

/// Riemannian gradient of F at each U_i for steps U_i -> U_i exp(t A_i):
/// returns the antihermitian Omega_i with dF = sum_i Re Tr(Omega_i^dagger A_i).
/// Entries with frozen[i] set are zero.
std::vector<ComplexMatrix> spread_gradient(const std::vector<ComplexMatrix>& us, const std::vector<bool>& frozen);

/// exp(A) for antihermitian A, through the eigendecomposition of -iA.
ComplexMatrix expm_antihermitian(const ComplexMatrix& a);

struct SpreadSettings {
    int n = 2;
    int m = 2;
    std::uint64_t seed = 1;
    int iterations = 2000;
    double gradient_tol = 1e-9;  // stop when the gradient norm falls below
    std::vector<ComplexMatrix> frozen;  // held fixed after the standard basis
};

struct SpreadResult {
    std::vector<Basis> bases;
    double f = 0.0;
    double upper_bound = 0.0;
    std::vector<double> trace;  // F after each accepted step, starting value first
    int iterations = 0;
    bool stationary = false;  // gradient tolerance reached
};

/// Ascent over the m - 1 - frozen.size() free unitaries; the first basis is
/// the standard basis.
SpreadResult maximize_spread(const SpreadSettings& s);

struct MultistartReport {
    int n = 0, m = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<SpreadResult> runs;
    std::size_t best = 0;
    std::vector<double> local_optima;  // distinct final F values (1e-6), descending
    double upper_bound = 0.0;

    Json to_json(std::size_t trace_points = 50) const;
};

MultistartReport multistart_spread(const SpreadSettings& base, int seeds, int threads = 1);

struct ScanSettings {
    int points = 360;           // h4, bn: grid size; f6: points per axis
    int m = 0;                  // extension target; 0 = N + 1
    int restarts = 6;           // 0 disables the extension score
    int iterations = 3000;
    std::uint64_t seed = 1;
    double success_slack = 1e-6;
    SqrtBranch bn_branch = SqrtBranch::plus;
    int threads = 1;
};

struct ScanRow {
    std::vector<double> params;
    bool admissible = true;
    std::vector<double> distances;  // D_c^2 to each reference basis
    double hadamard_defect = 0.0;
    std::optional<double> extension;  // best F with the member frozen
    bool success = false;             // extension reached C(m,2)(N-1) - slack
    std::string note;
};

struct ScanResult {
    Family family;
    int n = 0, m = 0;
    double target = 0.0;
    std::vector<std::string> reference_labels;
    std::vector<ScanRow> rows;

    std::string csv() const;
};

/// Grid: h4 phi in [0, 2 pi); f6 (phi1, phi2) on a square grid; bn y = e^(i theta).
/// Inadmissible points become rows with admissible = false.
ScanResult scan_family(Family family, const std::vector<Basis>& against, const ScanSettings& s);

}  // namespace mubs
