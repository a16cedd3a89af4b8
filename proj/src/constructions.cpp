#include "mubs/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>

namespace mubs {

WeylPair weyl_pair(int n) {
    if (n < 2) throw DomainError("weyl_pair needs N >= 2");
    WeylPair w;
    w.q = std::polar(1.0, 2.0 * kPi / n);
    w.x = ComplexMatrix::Zero(n, n);
    w.z = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        w.x((j + n - 1) % n, j) = 1.0;
        w.z(j, j) = std::polar(1.0, 2.0 * kPi * j / n);
    }
    return w;
}

RootMatrix fourier_roots(int n) {
    if (n < 1) throw DomainError("fourier needs N >= 1");
    std::vector<int> e(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) e[static_cast<std::size_t>(a * n + b)] = (a * b) % n;
    }
    return RootMatrix(n, n, std::move(e));
}

Basis fourier(int n) { return Basis(fourier_roots(n).to_complex(), "fourier"); }

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

RootMatrix weyl_eigenbasis_roots(int p, int k) {
    const int order = 2 * p;
    std::vector<int> e(static_cast<std::size_t>(p * p));
    for (int a = 0; a < p; ++a) {
        for (int j = 0; j < p; ++j) e[static_cast<std::size_t>(a * p + j)] = (2 * j * a + k * a * (p - a)) % order;
    }
    return RootMatrix(p, order, std::move(e));
}

std::vector<Basis> prime_mub_set(int p) {
    if (!is_prime(p)) {
        throw DomainError("prime_mub_set: " + std::to_string(p) +
                          " is not prime; prime-power and composite dimensions need the Galois-field "
                          "construction, which is not provided");
    }
    std::vector<Basis> out;
    out.push_back(Basis::standard(p));
    for (int k = 0; k < p; ++k) {
        out.emplace_back(weyl_eigenbasis_roots(p, k).to_complex(), k == 0 ? "X" : "XZ^" + std::to_string(k));
    }
    return out;
}

Basis conjugate(const Basis& b) { return Basis(b.matrix.conjugate(), b.label.empty() ? "" : b.label + "*"); }

RealCensus real_unbiased_census(int n) {
    if (n != 3) throw DomainError("real_unbiased_census is defined for N = 3 only");
    const double s = 1.0 / std::sqrt(3.0);
    std::vector<RealVector> all;
    for (int mask = 0; mask < 8; ++mask) {
        RealVector v(3);
        for (int i = 0; i < 3; ++i) v(i) = (mask >> i & 1) ? -s : s;
        all.push_back(v);
    }
    RealCensus out;
    for (const auto& v : all) {
        if (v(0) > 0) out.representatives.push_back(v);
    }
    std::set<long long> seen;
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const double d = all[i].dot(all[j]);
            if (std::abs(d) < 1e-12) out.mub_pair_exists = true;
            const long long key = std::llround(d * 3.0);
            if (seen.insert(key).second) out.dot_products.push_back(static_cast<double>(key) / 3.0);
        }
    }
    std::sort(out.dot_products.begin(), out.dot_products.end());
    // A second basis unbiased to the first would need three mutually orthogonal cube corners.
    out.verdict = out.mub_pair_exists ? "orthogonal cube corners found" : "no real MUB pair in dimension 3";
    return out;
}

RealMubSet4 real_mub_set_dim4() {
    RealMubSet4 out;
    out.bases.push_back(RealMatrix::Identity(4, 4));
    RealMatrix even(4, 4), odd(4, 4);
    int ne = 0, no = 0;
    // Representatives of the 8 rays (+/-1,+/-1,+/-1,+/-1)/2 with first entry +1,
    // except that for odd parity the representative with one leading minus is used.
    for (int mask = 0; mask < 16; ++mask) {
        const int minus = __builtin_popcount(static_cast<unsigned>(mask));
        RealVector v(4);
        for (int i = 0; i < 4; ++i) v(i) = (mask >> i & 1) ? -0.5 : 0.5;
        if (minus % 2 == 0) {
            if (v(0) > 0) even.col(ne++) = v;
        } else if (minus == 1) {
            odd.col(no++) = v;
        }
    }
    out.bases.push_back(even);
    out.bases.push_back(odd);
    for (const auto& b : out.bases) {
        for (int j = 0; j < 4; ++j) {
            out.cell24_vertices.push_back(b.col(j));
            out.cell24_vertices.push_back(-b.col(j));
        }
    }
    return out;
}

std::vector<RealVector> dual_cell24_vertices() {
    std::vector<RealVector> out;
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            for (int si : {1, -1}) {
                for (int sj : {1, -1}) {
                    RealVector v = RealVector::Zero(4);
                    v(i) = si * s;
                    v(j) = sj * s;
                    out.push_back(v);
                }
            }
        }
    }
    return out;
}

std::vector<RealVector> dual_pair_cell24_vertices() {
    std::vector<RealVector> out = real_mub_set_dim4().cell24_vertices;
    for (auto& v : dual_cell24_vertices()) out.push_back(v);
    return out;
}

KsResult ks_uncolourable(const std::vector<RealVector>& vectors, double tol) {
    KsResult out;
    for (const auto& v : vectors) {
        if (v.size() != 4) throw DomainError("ks_uncolourable: vectors must be 4-dimensional");
        const double norm = v.norm();
        if (norm < tol) throw DomainError("ks_uncolourable: zero vector in input");
        const RealVector u = v / norm;
        const bool dup = std::any_of(out.rays.begin(), out.rays.end(),
                                     [&](const RealVector& r) { return std::abs(std::abs(r.dot(u)) - 1.0) < tol; });
        if (!dup) out.rays.push_back(u);
    }
    const int n = static_cast<int>(out.rays.size());
    std::vector<std::vector<char>> orth(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) orth[i][j] = std::abs(out.rays[i].dot(out.rays[j])) < tol;
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (!orth[a][b]) continue;
            for (int c = b + 1; c < n; ++c) {
                if (!orth[a][c] || !orth[b][c]) continue;
                for (int d = c + 1; d < n; ++d) {
                    if (orth[a][d] && orth[b][d] && orth[c][d]) out.tetrads.push_back({a, b, c, d});
                }
            }
        }
    std::vector<int> membership(static_cast<std::size_t>(n), 0);
    for (const auto& t : out.tetrads)
        for (int r : t) membership[static_cast<std::size_t>(r)]++;
    for (int r = 0; r < n; ++r) {
        if (membership[static_cast<std::size_t>(r)] == 0) {
            throw DomainError("ks_uncolourable: ray " + std::to_string(r) +
                              " lies in no complete orthogonal 4-subset");
        }
    }

    // Backtracking over rays in index order; -1 = unassigned.
    std::vector<int> colour(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> tetrads_of(static_cast<std::size_t>(n));
    for (std::size_t t = 0; t < out.tetrads.size(); ++t)
        for (int r : out.tetrads[t]) tetrads_of[static_cast<std::size_t>(r)].push_back(static_cast<int>(t));

    auto consistent = [&](int ray) {
        for (int t : tetrads_of[static_cast<std::size_t>(ray)]) {
            int ones = 0, open = 0;
            for (int r : out.tetrads[static_cast<std::size_t>(t)]) {
                if (colour[static_cast<std::size_t>(r)] == 1) ++ones;
                if (colour[static_cast<std::size_t>(r)] == -1) ++open;
            }
            if (ones > 1 || (ones == 0 && open == 0)) return false;
        }
        return true;
    };
    std::function<bool(int)> assign = [&](int ray) -> bool {
        ++out.nodes;
        if (ray == n) return true;
        for (int c : {1, 0}) {
            colour[static_cast<std::size_t>(ray)] = c;
            if (consistent(ray) && assign(ray + 1)) return true;
        }
        colour[static_cast<std::size_t>(ray)] = -1;
        return false;
    };
    if (assign(0)) {
        out.colouring = colour;
        out.uncolourable = false;
    } else {
        out.uncolourable = true;
    }
    return out;
}

}  // namespace mubs
