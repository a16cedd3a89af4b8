#include "mubs/biunimodular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "mubs/constructions.hpp"
#include "mubs/grassmann.hpp"

namespace mubs {

namespace {

constexpr std::array<int, 8> kHaltonPrimes = {2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(std::uint64_t i, int base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
        i /= static_cast<std::uint64_t>(base);
        f *= inv;
    }
    return r;
}

double wrap_phase(double p) {
    p = std::fmod(p, 2.0 * kPi);
    if (p < 0) p += 2.0 * kPi;
    return p;
}

bool is_root_of_order(Complex z, int order, double tol) {
    const double t = std::arg(z) * order / (2.0 * kPi);
    return std::abs(t - std::round(t)) * 2.0 * kPi / order < tol && std::abs(std::abs(z) - 1.0) < tol;
}

bool close(const ComplexVector& a, const ComplexVector& b, double tol) {
    return (a - b).cwiseAbs().maxCoeff() <= tol;
}

std::vector<long long> canonical_key(const ComplexVector& x, double grid) {
    std::vector<long long> key(static_cast<std::size_t>(x.size()));
    const auto period = static_cast<long long>(std::llround(2.0 * kPi / grid));
    for (Eigen::Index a = 0; a < x.size(); ++a) {
        long long v = std::llround(wrap_phase(std::arg(x(a))) / grid);
        if (v >= period) v = 0;
        key[static_cast<std::size_t>(a)] = v;
    }
    return key;
}

SequenceClass classify(const ComplexVector& x) {
    const int order = 2 * static_cast<int>(x.size());
    for (Eigen::Index a = 0; a < x.size(); ++a) {
        if (!is_root_of_order(x(a), order, 1e-8)) return SequenceClass::bjorck;
    }
    return SequenceClass::gaussian;
}

struct NewtonOutcome {
    bool converged = false;
    bool rank_deficient = false;
    ComplexVector x;
};

ComplexVector phases_to_vector(const RealVector& phi) {
    ComplexVector x(phi.size() + 1);
    x(0) = 1.0;
    for (Eigen::Index b = 0; b < phi.size(); ++b) x(b + 1) = std::polar(1.0, phi(b));
    return x;
}

// Residual r_a = |x~_a|^2 - 1 for a = 1..N-1 and its Jacobian in phi_1..phi_(N-1).
void residual(const RealVector& phi, const ComplexMatrix& qpow, RealVector& r, RealMatrix* jac) {
    const Eigen::Index n = phi.size() + 1;
    const ComplexVector x = phases_to_vector(phi);
    const ComplexVector xt = qpow * x / std::sqrt(static_cast<double>(n));
    r.resize(n - 1);
    for (Eigen::Index a = 1; a < n; ++a) r(a - 1) = std::norm(xt(a)) - 1.0;
    if (!jac) return;
    jac->resize(n - 1, n - 1);
    const double c = -2.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index a = 1; a < n; ++a) {
        for (Eigen::Index b = 1; b < n; ++b) {
            (*jac)(a - 1, b - 1) = c * (std::conj(xt(a)) * x(b) * qpow(a, b)).imag();
        }
    }
}

NewtonOutcome newton_solve(RealVector phi, const ComplexMatrix& qpow, const NewtonSettings& s) {
    RealVector r, trial_r;
    RealMatrix jac;
    residual(phi, qpow, r, &jac);
    for (int it = 0; it < s.max_iterations; ++it) {
        if (r.cwiseAbs().maxCoeff() <= s.residual_tol) break;
        const RealVector step = jac.colPivHouseholderQr().solve(-r);
        if (!step.allFinite()) return {};
        const double merit = r.squaredNorm();
        double alpha = 1.0;
        bool accepted = false;
        while (alpha > 1e-10) {
            residual(phi + alpha * step, qpow, trial_r, nullptr);
            if (trial_r.squaredNorm() <= (1.0 - 1e-4 * alpha) * merit) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) return {};
        phi += alpha * step;
        residual(phi, qpow, r, &jac);
    }
    if (r.cwiseAbs().maxCoeff() > s.residual_tol) return {};
    NewtonOutcome out;
    out.converged = true;
    const Eigen::JacobiSVD<RealMatrix> svd(jac);
    const RealVector sv = svd.singularValues();
    out.rank_deficient = sv(sv.size() - 1) < 1e-7 * std::max(1.0, sv(0));
    out.x = phases_to_vector(phi);
    return out;
}

// Connected components under x ~ normalized_shift(x, s) (and conj when asked).
int count_classes(const std::vector<BiuniSequence>& seqs, bool with_conjugation, double tol) {
    const std::size_t m = seqs.size();
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < m; ++i) {
        const ComplexVector& x = seqs[i].entries;
        const int n = static_cast<int>(x.size());
        std::vector<ComplexVector> images;
        for (int s = 0; s < n; ++s) {
            images.push_back(normalized_shift(x, s));
            if (with_conjugation) images.push_back(images.back().conjugate());
        }
        for (std::size_t j = 0; j < m; ++j) {
            for (const auto& y : images) {
                if (close(y, seqs[j].entries, tol)) {
                    parent[find(i)] = find(j);
                    break;
                }
            }
        }
    }
    int classes = 0;
    for (std::size_t i = 0; i < m; ++i) classes += find(i) == i ? 1 : 0;
    return classes;
}

void fill_entry_statistics(CensusResult& c) {
    // d = (1 - sqrt 3)/2 + i sqrt(sqrt 3 / 2), the entry of Bjorck's matrix.
    const Complex d(0.5 * (1.0 - std::sqrt(3.0)), std::sqrt(std::sqrt(3.0) / 2.0));
    int match = 0, total = 0;
    for (const auto& s : c.sequences) {
        if (s.cls != SequenceClass::bjorck) continue;
        for (Eigen::Index a = 0; a < s.entries.size(); ++a) {
            ++total;
            const Complex z = s.entries(a);
            if (is_root_of_order(z, 12, 1e-8) || is_root_of_order(z / d, 12, 1e-8) ||
                is_root_of_order(z * d, 12, 1e-8)) {
                ++match;
            }
        }
    }
    c.metadata.bjorck_entries_matching_d = match;
    c.metadata.bjorck_entries_total = total;
    const double tol = c.metadata.tol.dedupe_tol;
    c.metadata.unique_up_to_shift = count_classes(c.sequences, false, tol);
    c.metadata.unique_up_to_shift_and_conjugation = count_classes(c.sequences, true, tol);
}

void sort_canonical(std::vector<BiuniSequence>& seqs, double grid) {
    std::stable_sort(seqs.begin(), seqs.end(), [grid](const BiuniSequence& a, const BiuniSequence& b) {
        return canonical_key(a.entries, grid) < canonical_key(b.entries, grid);
    });
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

RangeStat range_of(const RealMatrix& t, const std::vector<std::pair<int, int>>& pairs) {
    RangeStat r;
    for (auto [i, j] : pairs) {
        const double v = t(i, j);
        if (r.count == 0) {
            r.min = r.max = v;
        } else {
            r.min = std::min(r.min, v);
            r.max = std::max(r.max, v);
        }
        ++r.count;
    }
    return r;
}

bool isometric(const RealMatrix& t, const std::vector<int>& a, const std::vector<int>& b, double tol) {
    if (a.size() != b.size() || a.size() > 8) return false;
    std::vector<int> perm(b.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < a.size() && ok; ++i) {
            for (std::size_t j = i + 1; j < a.size() && ok; ++j) {
                ok = std::abs(t(a[i], a[j]) - t(b[static_cast<std::size_t>(perm[i])], b[static_cast<std::size_t>(perm[j])])) <= tol;
            }
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace

ComplexVector dft(const ComplexVector& x) {
    const Eigen::Index n = x.size();
    ComplexVector out = ComplexVector::Zero(n);
    if (n == 0) return out;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (Eigen::Index a = 0; a < n; ++a) {
        Complex s = 0.0;
        for (Eigen::Index b = 0; b < n; ++b) s += x(b) * std::polar(1.0, 2.0 * kPi * static_cast<double>((a * b) % n) / n);
        out(a) = s * scale;
    }
    return out;
}

BiunimodularVerdict is_biunimodular(const ComplexVector& x, const Tolerance& tol) {
    if (x.size() == 0) return {false, 0.0};
    const ComplexVector xt = dft(x);
    double dev = 0.0;
    for (Eigen::Index a = 0; a < x.size(); ++a) {
        dev = std::max(dev, std::abs(std::abs(x(a)) - 1.0));
        dev = std::max(dev, std::abs(std::abs(xt(a)) - 1.0));
    }
    return {dev <= tol.eq_tol, dev};
}

ComplexVector autocorrelation(const ComplexVector& x) {
    const Eigen::Index n = x.size();
    ComplexVector g = ComplexVector::Zero(n);
    for (Eigen::Index b = 0; b < n; ++b) {
        Complex s = 0.0;
        for (Eigen::Index a = 0; a < n; ++a) s += std::conj(x(a)) * x((a + b) % n);
        g(b) = s / static_cast<double>(n);
    }
    return g;
}

ComplexVector normalized_shift(const ComplexVector& x, int s) {
    const Eigen::Index n = x.size();
    if (n == 0) return x;
    const Eigen::Index sh = ((s % n) + n) % n;
    if (std::abs(x(sh)) == 0.0) throw DomainError("normalized_shift: zero entry");
    ComplexVector y(n);
    for (Eigen::Index a = 0; a < n; ++a) y(a) = x((a + sh) % n) / x(sh);
    return y;
}

const char* to_string(SequenceClass c) { return c == SequenceClass::gaussian ? "gaussian" : "bjorck"; }

const char* to_string(CensusStatus s) {
    switch (s) {
        case CensusStatus::complete: return "complete";
        case CensusStatus::unconverged: return "unconverged census";
        case CensusStatus::not_zero_dimensional: return "not zero-dimensional";
    }
    return "?";
}

int CensusResult::gaussian_count() const {
    return static_cast<int>(std::count_if(sequences.begin(), sequences.end(),
                                          [](const BiuniSequence& s) { return s.cls == SequenceClass::gaussian; }));
}

CensusResult newton_census(int n, const NewtonSettings& s) {
    if (n < 2 || n > static_cast<int>(kHaltonPrimes.size()) + 1) throw DomainError("newton_census supports 2 <= N <= 9");
    if (s.restarts < 1) throw DomainError("newton_census needs at least one restart");
    s.tol.validate();
    ComplexMatrix qpow(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) qpow(a, b) = std::polar(1.0, 2.0 * kPi * ((a * b) % n) / n);

    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> shift(static_cast<std::size_t>(n - 1));
    for (auto& u : shift) u = uni(rng);

    std::vector<NewtonOutcome> outcomes(static_cast<std::size_t>(s.restarts));
    const auto run_range = [&](int lo, int hi) {
        RealVector phi(n - 1);
        for (int i = lo; i < hi; ++i) {
            for (int d = 0; d < n - 1; ++d) {
                const double h = radical_inverse(static_cast<std::uint64_t>(i) + 1, kHaltonPrimes[static_cast<std::size_t>(d)]);
                const double u = h + shift[static_cast<std::size_t>(d)];
                phi(d) = 2.0 * kPi * (u - std::floor(u));
            }
            outcomes[static_cast<std::size_t>(i)] = newton_solve(phi, qpow, s);
        }
    };
    const int threads = std::max(1, std::min(s.threads, s.restarts));
    if (threads == 1) {
        run_range(0, s.restarts);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (s.restarts + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int lo = t * chunk, hi = std::min(s.restarts, lo + chunk);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    CensusResult c;
    c.metadata.n = n;
    c.metadata.method = "newton";
    c.metadata.seed = s.seed;
    c.metadata.restarts = s.restarts;
    c.metadata.max_iterations = s.max_iterations;
    c.metadata.residual_tol = s.residual_tol;
    c.metadata.tol = s.tol;
    // Merge in restart order so that first_restart does not depend on threads.
    for (int i = 0; i < s.restarts; ++i) {
        const auto& o = outcomes[static_cast<std::size_t>(i)];
        if (!o.converged) continue;
        ++c.metadata.converged_restarts;
        if (o.rank_deficient) ++c.metadata.rank_deficient;
        const bool known = std::any_of(c.sequences.begin(), c.sequences.end(), [&](const BiuniSequence& q) {
            return close(q.entries, o.x, s.tol.dedupe_tol);
        });
        if (known) continue;
        c.sequences.push_back({o.x, classify(o.x), i});
        c.metadata.last_new_restart = i;
    }
    sort_canonical(c.sequences, s.tol.dedupe_tol);
    if (c.metadata.rank_deficient > 0) {
        c.status = CensusStatus::not_zero_dimensional;
    } else if (c.sequences.empty() || 2 * c.metadata.last_new_restart >= s.restarts) {
        c.status = CensusStatus::unconverged;
    }
    fill_entry_statistics(c);
    return c;
}

std::vector<RootVector> enumerate_biunimodular_roots(int n, int k, std::uint64_t budget) {
    if (n < 1 || k < 1) throw DomainError("enumerate_biunimodular_roots: N and k must be positive");
    std::uint64_t total = 1;
    for (int i = 0; i < n - 1; ++i) {
        total *= static_cast<std::uint64_t>(k);
        if (total > budget) {
            throw BudgetExceeded("k^(N-1) candidates exceed the budget of " + std::to_string(budget) +
                                 "; use newton_census instead");
        }
    }
    const int l = std::lcm(k, n);
    const ExactRootTester tester(l);
    std::vector<std::vector<int>> fourier_cols(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) fourier_cols[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a * b % n) * (l / n);

    std::vector<int> digits(static_cast<std::size_t>(n), 0), lifted(static_cast<std::size_t>(n), 0);
    std::vector<RootVector> out;
    const int step = l / k;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) ok = tester.unbiased(lifted, fourier_cols[static_cast<std::size_t>(a)]);
        if (ok) out.emplace_back(k, digits);
        for (int p = n - 1; p >= 1; --p) {
            auto& dg = digits[static_cast<std::size_t>(p)];
            if (++dg < k) {
                lifted[static_cast<std::size_t>(p)] = dg * step;
                break;
            }
            dg = 0;
            lifted[static_cast<std::size_t>(p)] = 0;
        }
    }
    return out;
}

CensusResult root_census(int n, int k, std::uint64_t budget) {
    CensusResult c;
    c.metadata.n = n;
    c.metadata.method = "roots";
    c.metadata.k = k;
    for (const auto& v : enumerate_biunimodular_roots(n, k, budget)) {
        const ComplexVector x = v.to_complex(false);
        c.sequences.push_back({x, classify(x), -1});
    }
    sort_canonical(c.sequences, c.metadata.tol.dedupe_tol);
    fill_entry_statistics(c);
    return c;
}

CensusResult assemble_bases(const CensusResult& census) {
    if (census.status != CensusStatus::complete) {
        throw DomainError(std::string("census incomplete: status is ") + to_string(census.status));
    }
    if (census.sequences.empty()) throw DomainError("census incomplete: no sequences");
    const int n = static_cast<int>(census.sequences[0].entries.size());
    const double tol = census.metadata.tol.dedupe_tol;

    CensusResult out = census;
    out.bases.clear();
    out.basis_members.clear();
    out.circulant.clear();

    // Shifts of a biunimodular sequence are again biunimodular, so the
    // closure normally adds nothing; additions are kept as candidates.
    std::vector<BiuniSequence> pool = census.sequences;
    const auto find = [&](const ComplexVector& y) -> int {
        for (std::size_t j = 0; j < pool.size(); ++j) {
            if (close(pool[j].entries, y, tol)) return static_cast<int>(j);
        }
        return -1;
    };
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (int s = 1; s < n; ++s) {
            const ComplexVector y = normalized_shift(pool[i].entries, s);
            if (find(y) < 0) pool.push_back({y, classify(y), -1});
        }
    }

    const std::size_t m = pool.size();
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    // Orthogonality threshold sits well above solver noise and far below
    // the smallest nonzero overlap of distinct unimodular vectors here.
    const double orth_tol = 0.1 * tol;
    std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const Complex ip = pool[i].entries.dot(pool[j].entries) * (scale * scale);
            adj[i][j] = adj[j][i] = std::abs(ip) <= orth_tol ? 1 : 0;
        }
    }

    std::vector<std::vector<int>> cliques;
    std::vector<int> current;
    const auto extend = [&](auto&& self, const std::vector<int>& candidates) -> void {
        if (static_cast<int>(current.size()) == n) {
            cliques.push_back(current);
            return;
        }
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (static_cast<int>(current.size() + candidates.size() - c) < n) return;
            const int v = candidates[c];
            std::vector<int> next;
            for (std::size_t d = c + 1; d < candidates.size(); ++d) {
                if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(candidates[d])]) next.push_back(candidates[d]);
            }
            current.push_back(v);
            self(self, next);
            current.pop_back();
        }
    };
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    extend(extend, all);

    const Basis std_basis = Basis::standard(n);
    const Basis four = fourier(n);
    const Tolerance check{1e-9, tol};
    struct Assembled {
        int group;  // 0 gaussian, 1 circulant, 2 other
        Basis basis;
        std::vector<int> members;
        bool circulant;
    };
    std::vector<Assembled> found;
    for (const auto& cl : cliques) {
        ComplexMatrix mat(n, n);
        for (int c = 0; c < n; ++c) mat.col(c) = pool[static_cast<std::size_t>(cl[static_cast<std::size_t>(c)])].entries * scale;
        Basis b(mat);
        if (unitarity_defect(mat) > 1e-9) continue;
        if (!is_unbiased_pair(std_basis, b, check).unbiased || !is_unbiased_pair(four, b, check).unbiased) continue;

        // Circulant: the shifts of one member give every member.
        const ComplexVector& first = pool[static_cast<std::size_t>(cl[0])].entries;
        bool circ = true;
        for (int s = 1; s < n && circ; ++s) {
            const int j = find(normalized_shift(first, s));
            circ = j >= 0 && std::find(cl.begin(), cl.end(), j) != cl.end();
        }
        if (circ) {
            // Column c is the first member moved down c places.
            for (int c = 0; c < n; ++c)
                for (int r = 0; r < n; ++r) mat(r, c) = first(((r - c) % n + n) % n) * scale;
            b = Basis(mat);
        }
        const bool gauss = std::all_of(cl.begin(), cl.end(), [&](int v) {
            return pool[static_cast<std::size_t>(v)].cls == SequenceClass::gaussian;
        });
        found.push_back({gauss ? 0 : (circ ? 1 : 2), b, cl, circ});
    }
    std::stable_sort(found.begin(), found.end(), [](const Assembled& a, const Assembled& b) { return a.group < b.group; });
    std::array<int, 3> counters{0, 0, 0};
    const std::array<const char*, 3> prefix{"G", "C", "R"};
    for (auto& f : found) {
        f.basis.label = prefix[static_cast<std::size_t>(f.group)] + std::to_string(counters[static_cast<std::size_t>(f.group)]++);
        out.bases.push_back(f.basis);
        out.basis_members.push_back(f.members);
        out.circulant.push_back(f.circulant);
    }
    out.membership.assign(census.sequences.size(), 0);
    for (const auto& mem : out.basis_members) {
        for (int v : mem) {
            if (v < static_cast<int>(census.sequences.size())) ++out.membership[static_cast<std::size_t>(v)];
        }
    }
    return out;
}

DistanceReport census_distance_report(const CensusResult& census) {
    if (census.bases.size() < 2) throw DomainError("census_distance_report: bases missing; run assemble_bases first");
    if (census.basis_members.size() != census.bases.size() || census.circulant.size() != census.bases.size()) {
        throw DomainError("census_distance_report: basis metadata missing");
    }
    DistanceReport rep;
    rep.table = distance_table(census.bases);
    for (std::size_t i = 0; i < census.bases.size(); ++i) {
        rep.labels.push_back(census.bases[i].label);
        const auto& mem = census.basis_members[i];
        const bool gauss = std::all_of(mem.begin(), mem.end(), [&](int v) {
            return static_cast<std::size_t>(v) < census.sequences.size() &&
                   census.sequences[static_cast<std::size_t>(v)].cls == SequenceClass::gaussian;
        });
        const int idx = static_cast<int>(i);
        if (gauss) {
            rep.gaussian.push_back(idx);
        } else if (census.circulant[i]) {
            rep.sixplet_circulant.push_back(idx);
        } else {
            rep.sixplet_other.push_back(idx);
        }
    }
    const auto pairs_within = [](const std::vector<int>& g) {
        std::vector<std::pair<int, int>> p;
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = i + 1; j < g.size(); ++j) p.emplace_back(g[i], g[j]);
        return p;
    };
    const auto pairs_across = [](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<std::pair<int, int>> p;
        for (int i : a)
            for (int j : b) p.emplace_back(i, j);
        return p;
    };

    auto gpairs = pairs_within(rep.gaussian);
    std::sort(gpairs.begin(), gpairs.end(), [&](auto a, auto b) { return rep.table(a.first, a.second) < rep.table(b.first, b.second); });
    if (rep.gaussian.size() == 4) {
        rep.gaussian_side = range_of(rep.table, {gpairs.begin(), gpairs.begin() + 4});
        rep.gaussian_diagonal = range_of(rep.table, {gpairs.begin() + 4, gpairs.end()});
    } else {
        rep.gaussian_side = range_of(rep.table, gpairs);
    }
    std::vector<int> sixplets = rep.sixplet_circulant;
    sixplets.insert(sixplets.end(), rep.sixplet_other.begin(), rep.sixplet_other.end());
    rep.gaussian_to_other = range_of(rep.table, pairs_across(rep.gaussian, sixplets));
    rep.sixplet_cross = range_of(rep.table, pairs_across(rep.sixplet_circulant, rep.sixplet_other));
    auto within = pairs_within(rep.sixplet_circulant);
    const auto w2 = pairs_within(rep.sixplet_other);
    within.insert(within.end(), w2.begin(), w2.end());
    rep.within_sixplets = range_of(rep.table, within);
    rep.global_max = rep.table.maxCoeff();
    rep.sixplets_isometric = isometric(rep.table, rep.sixplet_circulant, rep.sixplet_other, 0.01);

    const int n = census.bases[0].dim();
    const auto mean = [](const RangeStat& r) { return 0.5 * (r.min + r.max); };
    const auto range = [](const RangeStat& r) {
        return "[min " + fmt("%.6f", r.min) + ", max " + fmt("%.6f", r.max) + ", pairs " + std::to_string(r.count) + "]";
    };
    std::ostringstream s;
    s << "bases: " << census.bases.size() << " (" << rep.gaussian.size() << " gaussian, " << rep.sixplet_circulant.size()
      << " circulant six-plet, " << rep.sixplet_other.size() << " non-circulant six-plet)\n";
    s << "gaussian square side D2 = " << fmt("%.3f", mean(rep.gaussian_side)) << ' ' << range(rep.gaussian_side) << '\n';
    if (rep.gaussian_diagonal.count > 0) {
        s << "gaussian square diagonal D2 = " << fmt("%.3f", mean(rep.gaussian_diagonal)) << ' ' << range(rep.gaussian_diagonal) << '\n';
    }
    s << "gaussian to six-plet D2 = " << fmt("%.2f", mean(rep.gaussian_to_other)) << ' ' << range(rep.gaussian_to_other) << '\n';
    s << "six-plet to six-plet D2 = " << fmt("%.2f", mean(rep.sixplet_cross)) << ' ' << range(rep.sixplet_cross) << '\n';
    s << "within six-plets max D2 = " << fmt("%.2f", rep.within_sixplets.max) << ' ' << range(rep.within_sixplets) << '\n';
    s << "six-plets isometric: " << (rep.sixplets_isometric ? "yes" : "no") << '\n';
    s << "global max D2 = " << fmt("%.2f", rep.global_max) << " (unbiased value " << n - 1 << ")";
    if (rep.global_max < n - 1 - 0.1) s << ": no candidate is unbiased to another, so fourier(" << n << ") lies in no set of more than three MUBs";
    s << '\n';
    rep.summary = s.str();
    return rep;
}

Json census_to_json(const CensusResult& c) {
    Json seqs = Json::array();
    for (const auto& s : c.sequences) {
        Json e = Json::array();
        for (Eigen::Index a = 0; a < s.entries.size(); ++a) e.push_back(complex_to_json(s.entries(a)));
        seqs.push_back({{"entries", std::move(e)}, {"class", to_string(s.cls)}, {"first_restart", s.first_restart}});
    }
    const auto& m = c.metadata;
    Json meta = {{"n", m.n},
                 {"method", m.method},
                 {"k", m.k},
                 {"seed", m.seed},
                 {"restarts", m.restarts},
                 {"converged_restarts", m.converged_restarts},
                 {"last_new_restart", m.last_new_restart},
                 {"rank_deficient", m.rank_deficient},
                 {"max_iterations", m.max_iterations},
                 {"residual_tol", m.residual_tol},
                 {"eq_tol", m.tol.eq_tol},
                 {"dedupe_tol", m.tol.dedupe_tol},
                 {"unique_up_to_shift", m.unique_up_to_shift},
                 {"unique_up_to_shift_and_conjugation", m.unique_up_to_shift_and_conjugation},
                 {"bjorck_entries_matching_d", m.bjorck_entries_matching_d},
                 {"bjorck_entries_total", m.bjorck_entries_total}};
    Json j = {{"status", to_string(c.status)}, {"metadata", std::move(meta)}, {"sequences", std::move(seqs)}};
    if (!c.bases.empty()) {
        Json bases = Json::array();
        for (const auto& b : c.bases) bases.push_back(matrix_to_json(b.matrix, b.label));
        j["bases"] = std::move(bases);
        j["basis_members"] = c.basis_members;
        j["circulant"] = c.circulant;
        j["membership"] = c.membership;
    }
    return j;
}

CensusResult census_from_json(const Json& j, const std::string& where) {
    const auto field = [&](const Json& obj, const char* key, const std::string& at) -> const Json& {
        if (!obj.is_object() || !obj.contains(key)) throw FormatError(at + ": missing field \"" + key + "\"");
        return obj.at(key);
    };
    CensusResult c;
    try {
        const std::string status = field(j, "status", where).get<std::string>();
        if (status == to_string(CensusStatus::complete)) {
            c.status = CensusStatus::complete;
        } else if (status == to_string(CensusStatus::unconverged)) {
            c.status = CensusStatus::unconverged;
        } else if (status == to_string(CensusStatus::not_zero_dimensional)) {
            c.status = CensusStatus::not_zero_dimensional;
        } else {
            throw FormatError(where + ".status: unknown value \"" + status + "\"");
        }
        const Json& meta = field(j, "metadata", where);
        auto& m = c.metadata;
        m.n = meta.value("n", 0);
        m.method = meta.value("method", std::string{});
        m.k = meta.value("k", 0);
        m.seed = meta.value("seed", std::uint64_t{0});
        m.restarts = meta.value("restarts", 0);
        m.converged_restarts = meta.value("converged_restarts", 0);
        m.last_new_restart = meta.value("last_new_restart", -1);
        m.rank_deficient = meta.value("rank_deficient", 0);
        m.max_iterations = meta.value("max_iterations", 0);
        m.residual_tol = meta.value("residual_tol", 0.0);
        m.tol.eq_tol = meta.value("eq_tol", m.tol.eq_tol);
        m.tol.dedupe_tol = meta.value("dedupe_tol", m.tol.dedupe_tol);
        m.unique_up_to_shift = meta.value("unique_up_to_shift", 0);
        m.unique_up_to_shift_and_conjugation = meta.value("unique_up_to_shift_and_conjugation", 0);
        m.bjorck_entries_matching_d = meta.value("bjorck_entries_matching_d", 0);
        m.bjorck_entries_total = meta.value("bjorck_entries_total", 0);
        const Json& seqs = field(j, "sequences", where);
        if (!seqs.is_array()) throw FormatError(where + ".sequences: expected an array");
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            const std::string at = where + ".sequences[" + std::to_string(i) + "]";
            const Json& e = field(seqs[i], "entries", at);
            if (!e.is_array() || e.empty()) throw FormatError(at + ".entries: expected a non-empty array");
            BiuniSequence s;
            s.entries.resize(static_cast<Eigen::Index>(e.size()));
            for (std::size_t a = 0; a < e.size(); ++a) s.entries(static_cast<Eigen::Index>(a)) = complex_from_json(e[a], at + ".entries[" + std::to_string(a) + "]");
            const std::string cls = seqs[i].value("class", std::string("bjorck"));
            s.cls = cls == "gaussian" ? SequenceClass::gaussian : SequenceClass::bjorck;
            s.first_restart = seqs[i].value("first_restart", -1);
            c.sequences.push_back(std::move(s));
        }
        if (j.contains("bases")) {
            const Json& bases = j["bases"];
            if (!bases.is_array()) throw FormatError(where + ".bases: expected an array");
            for (std::size_t i = 0; i < bases.size(); ++i) {
                auto rec = matrix_from_json(bases[i], where + ".bases[" + std::to_string(i) + "]");
                c.bases.emplace_back(rec.matrix, rec.label);
            }
            c.basis_members = field(j, "basis_members", where).get<std::vector<std::vector<int>>>();
            c.circulant = field(j, "circulant", where).get<std::vector<bool>>();
            c.membership = field(j, "membership", where).get<std::vector<int>>();
        }
    } catch (const Json::type_error& e) {
        throw FormatError(where + ": " + e.what());
    }
    return c;
}

}  // namespace mubs
