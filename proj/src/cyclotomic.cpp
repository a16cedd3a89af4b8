#include "mubs/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

namespace mubs {

namespace {

int mod(int a, int k) {
    const int r = a % k;
    return r < 0 ? r + k : r;
}

// Exact polynomial division by a monic divisor; returns the quotient.
std::vector<std::int64_t> divide_exact(std::vector<std::int64_t> num, const std::vector<std::int64_t>& den) {
    const std::size_t dn = den.size() - 1;
    std::vector<std::int64_t> quot(num.size() - dn, 0);
    for (std::size_t i = num.size(); i-- > dn;) {
        const std::int64_t c = num[i];
        quot[i - dn] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    return quot;
}

const std::vector<std::int64_t>& cyclotomic_locked(int k, std::map<int, std::vector<std::int64_t>>& cache) {
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    // Phi_k = (x^k - 1) / prod_{d | k, d < k} Phi_d
    std::vector<std::int64_t> poly(static_cast<std::size_t>(k) + 1, 0);
    poly[0] = -1;
    poly[static_cast<std::size_t>(k)] = 1;
    for (int d = 1; d < k; ++d) {
        if (k % d == 0) poly = divide_exact(poly, cyclotomic_locked(d, cache));
    }
    return cache.emplace(k, std::move(poly)).first->second;
}

const std::vector<std::int64_t>& cached_cyclotomic(int k) {
    static std::mutex lock;
    static std::map<int, std::vector<std::int64_t>> cache;
    std::lock_guard guard(lock);
    return cyclotomic_locked(k, cache);
}

void require_order(int k) {
    if (k < 1) throw DomainError("cyclotomic order must be positive, got " + std::to_string(k));
}

}  // namespace

int euler_phi(int k) {
    require_order(k);
    int result = k;
    int n = k;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

std::vector<std::int64_t> cyclotomic_polynomial(int k) {
    require_order(k);
    return cached_cyclotomic(k);
}

CyclotomicInt::CyclotomicInt(int order) : order_(order) {
    require_order(order);
    coeffs_.assign(static_cast<std::size_t>(order), 0);
}

CyclotomicInt::CyclotomicInt(int order, std::vector<std::int64_t> coeffs) : order_(order), coeffs_(std::move(coeffs)) {
    require_order(order);
    if (coeffs_.size() != static_cast<std::size_t>(order)) {
        throw DimensionError("cyclotomic coefficient vector must have length equal to the order");
    }
}

CyclotomicInt CyclotomicInt::root(int order, int exponent) {
    CyclotomicInt out(order);
    out.coeffs_[static_cast<std::size_t>(mod(exponent, order))] = 1;
    return out;
}

CyclotomicInt CyclotomicInt::integer(int order, std::int64_t value) {
    CyclotomicInt out(order);
    out.coeffs_[0] = value;
    return out;
}

void CyclotomicInt::require_same_order(const CyclotomicInt& o) const {
    if (o.order_ != order_) {
        throw DomainError("cyclotomic orders differ: " + std::to_string(order_) + " vs " + std::to_string(o.order_));
    }
}

CyclotomicInt CyclotomicInt::operator+(const CyclotomicInt& o) const {
    require_same_order(o);
    CyclotomicInt out = *this;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] += o.coeffs_[i];
    return out;
}

CyclotomicInt CyclotomicInt::operator-(const CyclotomicInt& o) const {
    require_same_order(o);
    CyclotomicInt out = *this;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] -= o.coeffs_[i];
    return out;
}

CyclotomicInt CyclotomicInt::operator*(const CyclotomicInt& o) const {
    require_same_order(o);
    CyclotomicInt out(order_);
    const auto k = static_cast<std::size_t>(order_);
    for (std::size_t i = 0; i < k; ++i) {
        if (coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < k; ++j) {
            out.coeffs_[(i + j) % k] += coeffs_[i] * o.coeffs_[j];
        }
    }
    return out;
}

CyclotomicInt CyclotomicInt::conj() const {
    CyclotomicInt out(order_);
    for (int j = 0; j < order_; ++j) {
        out.coeffs_[static_cast<std::size_t>(mod(-j, order_))] = coeffs_[static_cast<std::size_t>(j)];
    }
    return out;
}

std::vector<std::int64_t> CyclotomicInt::reduced() const {
    const auto& phi = cached_cyclotomic(order_);
    const std::size_t deg = phi.size() - 1;
    std::vector<std::int64_t> rem = coeffs_;
    for (std::size_t i = rem.size(); i-- > deg;) {
        const std::int64_t c = rem[i];
        if (c == 0) continue;
        for (std::size_t j = 0; j <= deg; ++j) rem[i - deg + j] -= c * phi[j];
    }
    rem.resize(deg);
    return rem;
}

bool CyclotomicInt::is_zero() const {
    for (std::int64_t c : reduced()) {
        if (c != 0) return false;
    }
    return true;
}

Complex CyclotomicInt::to_complex() const {
    Complex sum = 0.0;
    for (int j = 0; j < order_; ++j) {
        const auto c = coeffs_[static_cast<std::size_t>(j)];
        if (c != 0) sum += static_cast<double>(c) * std::polar(1.0, 2.0 * kPi * j / order_);
    }
    return sum;
}

RootVector::RootVector(int k, std::vector<int> e) : order(k), exponents(std::move(e)) {
    require_order(k);
    if (exponents.empty()) throw DimensionError("root vector must have at least one entry");
    for (int& x : exponents) x = mod(x, k);
}

ComplexVector RootVector::to_complex(bool normalized) const {
    ComplexVector v(dim());
    const double scale = normalized ? 1.0 / std::sqrt(static_cast<double>(dim())) : 1.0;
    for (int i = 0; i < dim(); ++i) {
        v(i) = std::polar(scale, 2.0 * kPi * exponents[static_cast<std::size_t>(i)] / order);
    }
    return v;
}

RootVector RootVector::lifted(int new_order) const {
    if (new_order % order != 0) throw DomainError("lifted order must be a multiple of the current order");
    std::vector<int> e = exponents;
    for (int& x : e) x *= new_order / order;
    return RootVector(new_order, std::move(e));
}

RootVector RootVector::from_complex(const ComplexVector& v, int k, bool normalized, double tol) {
    require_order(k);
    const double scale = normalized ? std::sqrt(static_cast<double>(v.size())) : 1.0;
    std::vector<int> e(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const Complex z = v(i) * scale;
        if (std::abs(std::abs(z) - 1.0) > tol) {
            throw DomainError("entry " + std::to_string(i) + " is not unimodular (not a root of unity)");
        }
        const double turns = std::arg(z) / (2.0 * kPi) * k;
        const int ex = static_cast<int>(std::lround(turns));
        if (std::abs(z - std::polar(1.0, 2.0 * kPi * ex / k)) > tol) {
            throw DomainError("entry " + std::to_string(i) + " is not a " + std::to_string(k) + "-th root of unity");
        }
        e[static_cast<std::size_t>(i)] = ex;
    }
    return RootVector(k, std::move(e));
}

CyclotomicInt root_inner(const RootVector& a, const RootVector& b) {
    if (a.order != b.order) throw DomainError("root vectors have different orders");
    if (a.dim() != b.dim()) throw DimensionError("root vectors have different lengths");
    std::vector<std::int64_t> c(static_cast<std::size_t>(a.order), 0);
    for (std::size_t j = 0; j < a.exponents.size(); ++j) {
        c[static_cast<std::size_t>(mod(b.exponents[j] - a.exponents[j], a.order))] += 1;
    }
    return CyclotomicInt(a.order, std::move(c));
}

bool is_orthogonal(const RootVector& a, const RootVector& b) { return root_inner(a, b).is_zero(); }

bool is_unbiased_exact(const RootVector& a, const RootVector& b) {
    const CyclotomicInt c = root_inner(a, b);
    return (c * c.conj()) == CyclotomicInt::integer(a.order, a.dim());
}

RootMatrix::RootMatrix(int n_, int k, std::vector<int> e) : n(n_), order(k), exponents(std::move(e)) {
    require_order(k);
    if (n < 1 || exponents.size() != static_cast<std::size_t>(n * n)) {
        throw DimensionError("root matrix needs n*n exponents");
    }
    for (int& x : exponents) x = mod(x, k);
}

RootMatrix RootMatrix::from_columns(int k, const std::vector<RootVector>& cols) {
    const int n = static_cast<int>(cols.size());
    std::vector<int> e(static_cast<std::size_t>(n * n));
    for (int j = 0; j < n; ++j) {
        if (cols[static_cast<std::size_t>(j)].dim() != n || cols[static_cast<std::size_t>(j)].order != k) {
            throw DimensionError("column has wrong length or order");
        }
        for (int i = 0; i < n; ++i) {
            e[static_cast<std::size_t>(i * n + j)] = cols[static_cast<std::size_t>(j)].exponents[static_cast<std::size_t>(i)];
        }
    }
    return RootMatrix(n, k, std::move(e));
}

RootVector RootMatrix::column(int j) const {
    std::vector<int> e(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = at(i, j);
    return RootVector(order, std::move(e));
}

ComplexMatrix RootMatrix::to_complex() const {
    ComplexMatrix m(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = std::polar(scale, 2.0 * kPi * at(i, j) / order);
    }
    return m;
}

RootMatrix RootMatrix::from_complex(const ComplexMatrix& m, int k, double tol) {
    if (m.rows() != m.cols()) throw DimensionError("root matrix must be square");
    std::vector<RootVector> cols;
    for (Eigen::Index j = 0; j < m.cols(); ++j) cols.push_back(RootVector::from_complex(m.col(j), k, true, tol));
    return from_columns(k, cols);
}

bool is_hadamard_exact(const RootMatrix& m) {
    for (int a = 0; a < m.n; ++a) {
        const RootVector ca = m.column(a);
        for (int b = a + 1; b < m.n; ++b) {
            if (!is_orthogonal(ca, m.column(b))) return false;
        }
    }
    return true;
}

ExactRootTester::ExactRootTester(int order) : order_(order), phi_(euler_phi(order)) {
    reduce_.assign(static_cast<std::size_t>(order_ * phi_), 0);
    symmetric_.assign(static_cast<std::size_t>(order_ * phi_), 0);
    for (int j = 0; j < order_; ++j) {
        const auto r = CyclotomicInt::root(order_, j).reduced();
        for (int t = 0; t < phi_; ++t) reduce_[static_cast<std::size_t>(j * phi_ + t)] = static_cast<std::int32_t>(r[static_cast<std::size_t>(t)]);
    }
    for (int j = 0; j < order_; ++j) {
        const int neg = mod(-j, order_);
        for (int t = 0; t < phi_; ++t) {
            symmetric_[static_cast<std::size_t>(j * phi_ + t)] =
                reduce_[static_cast<std::size_t>(j * phi_ + t)] + reduce_[static_cast<std::size_t>(neg * phi_ + t)];
        }
    }
}

bool ExactRootTester::orthogonal(std::span<const int> a, std::span<const int> b) const {
    std::int32_t acc[64] = {};
    std::vector<std::int32_t> big;
    std::int32_t* sum = acc;
    if (phi_ > 64) {
        big.assign(static_cast<std::size_t>(phi_), 0);
        sum = big.data();
    }
    for (std::size_t j = 0; j < a.size(); ++j) {
        const std::int32_t* row = &reduce_[static_cast<std::size_t>(mod(b[j] - a[j], order_) * phi_)];
        for (int t = 0; t < phi_; ++t) sum[t] += row[t];
    }
    for (int t = 0; t < phi_; ++t) {
        if (sum[t] != 0) return false;
    }
    return true;
}

bool ExactRootTester::unbiased(std::span<const int> a, std::span<const int> b) const {
    // |c|^2 = sum_{j,l} zeta^(d_j - d_l) = N + sum_{j<l} (zeta^(d_j-d_l) + zeta^(d_l-d_j)).
    std::int32_t acc[64] = {};
    std::vector<std::int32_t> big;
    std::int32_t* sum = acc;
    if (phi_ > 64) {
        big.assign(static_cast<std::size_t>(phi_), 0);
        sum = big.data();
    }
    int diff[64];
    std::vector<int> diff_big;
    int* d = diff;
    if (a.size() > 64) {
        diff_big.resize(a.size());
        d = diff_big.data();
    }
    for (std::size_t j = 0; j < a.size(); ++j) d[j] = b[j] - a[j];
    for (std::size_t j = 0; j < a.size(); ++j) {
        for (std::size_t l = j + 1; l < a.size(); ++l) {
            const std::int32_t* row = &symmetric_[static_cast<std::size_t>(mod(d[j] - d[l], order_) * phi_)];
            for (int t = 0; t < phi_; ++t) sum[t] += row[t];
        }
    }
    for (int t = 0; t < phi_; ++t) {
        if (sum[t] != 0) return false;
    }
    return true;
}

}  // namespace mubs
