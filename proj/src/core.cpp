#include "mubs/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace mubs {

namespace {

double env_double(const char* name, double fallback) {
    const char* raw = std::getenv(name);
    if (raw == nullptr || *raw == '\0') return fallback;
    char* end = nullptr;
    const double value = std::strtod(raw, &end);
    if (end == raw || *end != '\0') {
        throw DomainError(std::string("environment variable ") + name + " is not a number: " + raw);
    }
    return value;
}

std::string basis_name(const Basis& b, const char* fallback) {
    return b.label.empty() ? std::string(fallback) : "'" + b.label + "'";
}

void require_same_dim(const Basis& a, const Basis& b) {
    if (a.matrix.rows() != b.matrix.rows()) {
        throw DimensionError("bases have different dimensions: " + std::to_string(a.matrix.rows()) + " vs " +
                             std::to_string(b.matrix.rows()));
    }
}

}  // namespace

void Tolerance::validate() const {
    if (!(eq_tol >= 0.0) || !(dedupe_tol >= 0.0)) throw DomainError("tolerances must be non-negative");
    if (!(eq_tol < dedupe_tol)) throw DomainError("eq_tol must be smaller than dedupe_tol");
}

Tolerance Tolerance::from_env() {
    Tolerance t;
    t.eq_tol = env_double("MUBS_EQ_TOL", t.eq_tol);
    t.dedupe_tol = env_double("MUBS_DEDUPE_TOL", t.dedupe_tol);
    t.validate();
    return t;
}

Basis Basis::standard(int n) {
    if (n < 1) throw DomainError("dimension must be positive");
    return Basis(ComplexMatrix::Identity(n, n), "standard");
}

double unitarity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) return std::numeric_limits<double>::infinity();
    const ComplexMatrix g = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
    return g.cwiseAbs().maxCoeff();
}

void require_unitary(const Basis& b, double tol) {
    if (b.matrix.rows() != b.matrix.cols()) {
        throw DimensionError("basis " + basis_name(b, "matrix") + " is not square");
    }
    const double defect = unitarity_defect(b.matrix);
    if (!(defect <= tol)) {
        throw NotUnitaryError("basis " + basis_name(b, "(unlabelled)") + " is not unitary (defect " +
                              std::to_string(defect) + ")");
    }
}

RealMatrix overlap_squares(const Basis& a, const Basis& b, const Tolerance& tol) {
    require_same_dim(a, b);
    require_unitary(a, tol.eq_tol);
    require_unitary(b, tol.eq_tol);
    return (a.matrix.adjoint() * b.matrix).cwiseAbs2();
}

UnbiasedVerdict is_unbiased_pair(const Basis& a, const Basis& b, const Tolerance& tol) {
    const RealMatrix o = overlap_squares(a, b, tol);
    const double target = 1.0 / static_cast<double>(a.dim());
    const double dev = (o.array() - target).abs().maxCoeff();
    return {dev <= tol.eq_tol, dev};
}

double hadamard_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) return std::numeric_limits<double>::infinity();
    const double target = 1.0 / std::sqrt(static_cast<double>(m.rows()));
    const double modulus = (m.cwiseAbs().array() - target).abs().maxCoeff();
    return std::max(modulus, unitarity_defect(m));
}

bool is_complex_hadamard(const ComplexMatrix& m, const Tolerance& tol) {
    if (m.rows() != m.cols()) throw DimensionError("Hadamard test needs a square matrix");
    return hadamard_defect(m) <= tol.eq_tol;
}

ComplexMatrix dephase(const ComplexMatrix& m, const Tolerance& tol) {
    if (m.rows() != m.cols()) throw DimensionError("dephase needs a square matrix");
    const double floor = 1.0 / std::sqrt(static_cast<double>(m.rows())) * 1e-3;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (std::abs(m(i, j)) < floor) {
                throw DomainError("dephase: zero entry at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }
    if (!is_complex_hadamard(m, tol)) throw DomainError("dephase: input is not a complex Hadamard matrix");

    ComplexMatrix out = m;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const Complex phase = std::conj(out(i, 0)) / std::abs(out(i, 0));
        out.row(i) *= phase;
    }
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        const Complex phase = std::conj(out(0, j)) / std::abs(out(0, j));
        out.col(j) *= phase;
    }
    // The first row and column are now real up to rounding; snap them.
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, 0) = std::abs(out(i, 0));
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(0, j) = std::abs(out(0, j));
    return out;
}

HaagerupSet::HaagerupSet(std::vector<double> phases, double grid) : phases_(std::move(phases)), grid_(grid) {
    std::sort(phases_.begin(), phases_.end());
}

std::vector<Complex> HaagerupSet::values() const {
    std::vector<Complex> out;
    out.reserve(phases_.size());
    for (double p : phases_) out.push_back(std::polar(1.0, p));
    return out;
}

double HaagerupSet::max_difference(const HaagerupSet& other) const {
    if (phases_.size() != other.phases_.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < phases_.size(); ++i) {
        worst = std::max(worst, std::abs(phases_[i] - other.phases_[i]));
    }
    return worst;
}

bool HaagerupSet::matches(const HaagerupSet& other, double slack) const {
    const double g = std::max(grid_, other.grid_);
    return max_difference(other) <= slack * g + 1e-15;
}

HaagerupSet haagerup_invariants(const ComplexMatrix& m, const Tolerance& tol) {
    if (m.rows() != m.cols()) throw DimensionError("Haagerup invariants need a square matrix");
    const Eigen::Index n = m.rows();
    ComplexMatrix u(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double r = std::abs(m(i, j));
            if (r == 0.0) throw DomainError("Haagerup invariants: zero entry");
            u(i, j) = m(i, j) / r;
        }
    }
    const double two_pi = 2.0 * kPi;
    const double grid = tol.dedupe_tol;
    std::vector<double> phases;
    phases.reserve(static_cast<std::size_t>(n * n * n * n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < n; ++k) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const Complex left = u(i, j) * std::conj(u(k, j));
                for (Eigen::Index l = 0; l < n; ++l) {
                    const Complex v = left * u(k, l) * std::conj(u(i, l));
                    double p = std::atan2(v.imag(), v.real());
                    if (p < 0.0) p += two_pi;
                    if (grid > 0.0) p = std::round(p / grid) * grid;
                    if (p >= two_pi - 0.5 * grid) p = 0.0;
                    phases.push_back(p);
                }
            }
        }
    }
    return HaagerupSet(std::move(phases), grid);
}

const char* to_string(Equivalence e) {
    return e == Equivalence::inequivalent ? "inequivalent" : "probably-equivalent";
}

Equivalence equivalent_heuristic(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrices have different shapes");
    return haagerup_invariants(a, tol).matches(haagerup_invariants(b, tol)) ? Equivalence::probably_equivalent
                                                                            : Equivalence::inequivalent;
}

ComplexMatrix apply_equivalence(const ComplexMatrix& m, const std::vector<int>& row_perm,
                                const std::vector<int>& col_perm, const std::vector<double>& row_phases,
                                const std::vector<double>& col_phases) {
    const auto n = static_cast<std::size_t>(m.rows());
    if (row_perm.size() != n || col_perm.size() != n || row_phases.size() != n || col_phases.size() != n) {
        throw DimensionError("equivalence transform has the wrong size");
    }
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::polar(1.0, row_phases[i] + col_phases[j]) * m(row_perm[i], col_perm[j]);
        }
    }
    return out;
}

}  // namespace mubs
