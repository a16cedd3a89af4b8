#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mubs/errors.hpp"

namespace mubs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Numerical tolerances shared by all predicates.
///
/// `eq_tol` is used for algebraic identities (unitarity, unit modulus,
/// unbiasedness); `dedupe_tol` for merging numerically found solutions and
/// for rounding invariant sets. `eq_tol < dedupe_tol` must hold.
struct Tolerance {
    double eq_tol = 1e-10;
    double dedupe_tol = 1e-6;

    void validate() const;

    /// Defaults overridden by MUBS_EQ_TOL / MUBS_DEDUPE_TOL when set.
    static Tolerance from_env();
};

/// An orthonormal basis stored as the columns of an N x N matrix.
///
/// Construction does not enforce unitarity; operations that need it call
/// require_unitary() so that errors can name the offending basis.
struct Basis {
    ComplexMatrix matrix;
    std::string label;

    Basis() = default;
    explicit Basis(ComplexMatrix m, std::string l = {}) : matrix(std::move(m)), label(std::move(l)) {}

    int dim() const { return static_cast<int>(matrix.rows()); }
    ComplexVector vector(int a) const { return matrix.col(a); }

    static Basis standard(int n);
};

/// max |(M^dagger M - I)_ij|; +inf for non-square input.
double unitarity_defect(const ComplexMatrix& m);

void require_unitary(const Basis& b, double tol);

/// Entry (i, j) is |<a_i|b_j>|^2.
RealMatrix overlap_squares(const Basis& a, const Basis& b, const Tolerance& tol = {});

struct UnbiasedVerdict {
    bool unbiased = false;
    double deviation = 0.0;  // max_ij | |<a_i|b_j>|^2 - 1/N |
};

UnbiasedVerdict is_unbiased_pair(const Basis& a, const Basis& b, const Tolerance& tol = {});

/// Largest of the entry-modulus defect | |m_ij| - 1/sqrt(N) | and the
/// unitarity defect.
double hadamard_defect(const ComplexMatrix& m);

bool is_complex_hadamard(const ComplexMatrix& m, const Tolerance& tol = {});

/// Equivalent matrix with real positive first row and first column.
ComplexMatrix dephase(const ComplexMatrix& m, const Tolerance& tol = {});

/// Multiset of Haagerup invariants m_ij conj(m_kj) m_kl conj(m_il).
///
/// The products are taken on the unimodular matrix sqrt(N) m, so each value
/// is a phase; the set stores those phases in [0, 2 pi) rounded to a grid of
/// width `dedupe_tol`, sorted ascending.
class HaagerupSet {
public:
    HaagerupSet() = default;
    HaagerupSet(std::vector<double> phases, double grid);

    const std::vector<double>& phases() const { return phases_; }
    std::vector<Complex> values() const;
    std::size_t size() const { return phases_.size(); }
    double grid() const { return grid_; }

    /// Elementwise comparison of the sorted phases, allowing `slack` grid steps.
    bool matches(const HaagerupSet& other, double slack = 1.5) const;
    double max_difference(const HaagerupSet& other) const;

private:
    std::vector<double> phases_;
    double grid_ = 0.0;
};

HaagerupSet haagerup_invariants(const ComplexMatrix& m, const Tolerance& tol = {});

enum class Equivalence { inequivalent, probably_equivalent };

const char* to_string(Equivalence e);

/// Compares Haagerup sets only; a match is never a proof of equivalence.
Equivalence equivalent_heuristic(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol = {});

/// Applies the equivalence operations: m -> Pr D1 m D2 Pc.
ComplexMatrix apply_equivalence(const ComplexMatrix& m, const std::vector<int>& row_perm,
                                const std::vector<int>& col_perm, const std::vector<double>& row_phases,
                                const std::vector<double>& col_phases);

}  // namespace mubs
