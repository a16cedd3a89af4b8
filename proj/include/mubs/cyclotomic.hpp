#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mubs/core.hpp"

namespace mubs {

int euler_phi(int k);

/// Integer coefficients of the k-th cyclotomic polynomial, lowest degree first.
std::vector<std::int64_t> cyclotomic_polynomial(int k);

/// Element of Z[zeta_k], stored as coefficients of zeta_k^0 .. zeta_k^(k-1).
///
/// The representation is not unique (the powers of zeta are linearly
/// dependent); `reduced()` gives the canonical form modulo the k-th
/// cyclotomic polynomial, which the zero test and equality use.
class CyclotomicInt {
public:
    explicit CyclotomicInt(int order);
    CyclotomicInt(int order, std::vector<std::int64_t> coeffs);

    static CyclotomicInt root(int order, int exponent);
    static CyclotomicInt integer(int order, std::int64_t value);

    int order() const { return order_; }
    const std::vector<std::int64_t>& coeffs() const { return coeffs_; }

    CyclotomicInt operator+(const CyclotomicInt& o) const;
    CyclotomicInt operator-(const CyclotomicInt& o) const;
    CyclotomicInt operator*(const CyclotomicInt& o) const;
    CyclotomicInt conj() const;

    /// Coefficients modulo Phi_k in the power basis 1, zeta, ..., zeta^(phi(k)-1).
    std::vector<std::int64_t> reduced() const;
    bool is_zero() const;
    bool operator==(const CyclotomicInt& o) const { return (*this - o).is_zero(); }

    Complex to_complex() const;

private:
    void require_same_order(const CyclotomicInt& o) const;

    int order_;
    std::vector<std::int64_t> coeffs_;
};

/// The vector (zeta_k^e_0, ..., zeta_k^e_(N-1)) before normalization by 1/sqrt(N).
struct RootVector {
    int order = 1;
    std::vector<int> exponents;

    RootVector() = default;
    RootVector(int k, std::vector<int> e);

    int dim() const { return static_cast<int>(exponents.size()); }
    ComplexVector to_complex(bool normalized = true) const;
    /// Same vector expressed with roots of order `new_order` (a multiple of `order`).
    RootVector lifted(int new_order) const;

    /// Reads a vector whose entries, times sqrt(N) when `normalized`, are k-th
    /// roots of unity. Throws DomainError otherwise.
    static RootVector from_complex(const ComplexVector& v, int k, bool normalized = true, double tol = 1e-9);

    bool operator==(const RootVector&) const = default;
};

CyclotomicInt root_inner(const RootVector& a, const RootVector& b);

bool is_orthogonal(const RootVector& a, const RootVector& b);

/// For the normalized vectors: |<a|b>|^2 = 1/N, i.e. |root_inner|^2 = N exactly.
bool is_unbiased_exact(const RootVector& a, const RootVector& b);

/// N x N matrix of roots of unity, row-major exponents; represents the matrix
/// with entries zeta_k^e / sqrt(N).
struct RootMatrix {
    int n = 0;
    int order = 1;
    std::vector<int> exponents;

    RootMatrix() = default;
    RootMatrix(int n_, int k, std::vector<int> e);
    static RootMatrix from_columns(int k, const std::vector<RootVector>& cols);

    int at(int row, int col) const { return exponents[static_cast<std::size_t>(row * n + col)]; }
    RootVector column(int j) const;
    ComplexMatrix to_complex() const;

    /// Tries to express m (entries of modulus 1/sqrt(N)) with k-th roots.
    static RootMatrix from_complex(const ComplexMatrix& m, int k, double tol = 1e-9);

    bool operator==(const RootMatrix&) const = default;
};

/// Exact Hadamard test for a root matrix: all columns pairwise orthogonal.
bool is_hadamard_exact(const RootMatrix& m);

/// Table-driven exact tests on raw exponent arrays of a fixed order.
///
/// Each power zeta^j is pre-reduced modulo Phi_k, so an inner product is
/// zero-tested by summing N small integer vectors of length phi(k). Used by
/// the exhaustive searches; agrees with CyclotomicInt by construction.
class ExactRootTester {
public:
    explicit ExactRootTester(int order);

    int order() const { return order_; }
    bool orthogonal(std::span<const int> a, std::span<const int> b) const;
    bool unbiased(std::span<const int> a, std::span<const int> b) const;

private:
    int order_;
    int phi_;
    std::vector<std::int32_t> reduce_;     // order_ rows of phi_ entries
    std::vector<std::int32_t> symmetric_;  // reduce_[d] + reduce_[-d]
};

}  // namespace mubs
