#include "mubs/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "mubs/grassmann.hpp"

namespace mubs {

namespace {

// Polar factor of a nearly unitary matrix.
ComplexMatrix reunitarize(const ComplexMatrix& u) {
    const Eigen::JacobiSVD<ComplexMatrix> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    // splitmix64 steps keep nearby grid indices from sharing streams.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (a + 1) + 0xBF58476D1CE4E5B9ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, threads)), std::max<std::size_t>(1, count));
    if (nt <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += nt) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
    if (n < 1) throw DomainError("random_unitary needs N >= 1");
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
    const Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

double spread_value(const std::vector<ComplexMatrix>& us) {
    double f = 0.0;
    for (std::size_t i = 0; i < us.size(); ++i) {
        for (std::size_t j = i + 1; j < us.size(); ++j) {
            const ComplexMatrix w = us[i].adjoint() * us[j];
            f += static_cast<double>(w.rows()) - w.cwiseAbs2().array().square().sum();
        }
    }
    return f;
}

std::vector<ComplexMatrix> spread_gradient(const std::vector<ComplexMatrix>& us, const std::vector<bool>& frozen) {
    if (frozen.size() != us.size()) throw DimensionError("spread_gradient: frozen mask size mismatch");
    std::vector<ComplexMatrix> g;
    for (const auto& u : us) g.push_back(ComplexMatrix::Zero(u.rows(), u.cols()));
    for (std::size_t i = 0; i < us.size(); ++i) {
        for (std::size_t j = i + 1; j < us.size(); ++j) {
            if (frozen[i] && frozen[j]) continue;
            const ComplexMatrix w = us[i].adjoint() * us[j];
            const ComplexMatrix mm = (w.cwiseAbs2().array() * w.array()).matrix();
            if (!frozen[j]) g[j] -= 4.0 * w.adjoint() * mm;
            if (!frozen[i]) g[i] += 4.0 * mm * w.adjoint();
        }
    }
    for (std::size_t i = 0; i < us.size(); ++i) {
        if (frozen[i]) continue;
        const ComplexMatrix s = 0.5 * (g[i] - g[i].adjoint());
        g[i] = s;
    }
    return g;
}

ComplexMatrix expm_antihermitian(const ComplexMatrix& a) {
    const ComplexMatrix h = Complex(0.0, -1.0) * a;
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
    ComplexVector ph(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) ph(i) = std::polar(1.0, es.eigenvalues()(i));
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

SpreadResult maximize_spread(const SpreadSettings& s) {
    if (s.n < 2) throw DomainError("maximize_spread needs N >= 2");
    if (s.m < 2) throw DomainError("maximize_spread needs m >= 2");
    if (static_cast<int>(s.frozen.size()) > s.m - 1) throw DomainError("more frozen bases than m - 1");
    if (s.iterations < 0) throw DomainError("iterations must be non-negative");
    std::vector<ComplexMatrix> us{ComplexMatrix::Identity(s.n, s.n)};
    std::vector<bool> frozen{true};
    for (const auto& f : s.frozen) {
        if (f.rows() != s.n || f.cols() != s.n) throw DimensionError("frozen basis has the wrong dimension");
        if (unitarity_defect(f) > 1e-8) throw NotUnitaryError("frozen basis is not unitary");
        us.push_back(f);
        frozen.push_back(true);
    }
    std::mt19937_64 rng(s.seed);
    while (static_cast<int>(us.size()) < s.m) {
        us.push_back(random_unitary(s.n, rng));
        frozen.push_back(false);
    }

    SpreadResult r;
    r.upper_bound = spread_upper_bound(s.n, s.m);
    double f = spread_value(us);
    r.trace.push_back(f);
    double eps = 0.1;
    const bool any_free = static_cast<int>(s.frozen.size()) < s.m - 1;
    while (any_free && r.iterations < s.iterations) {
        const auto g = spread_gradient(us, frozen);
        double g2 = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) g2 += g[i].squaredNorm();
        if (std::sqrt(g2) < s.gradient_tol) {
            r.stationary = true;
            break;
        }
        bool accepted = false;
        std::vector<ComplexMatrix> trial(us.size());
        double ft = f;
        for (int tries = 0; tries < 60; ++tries) {
            for (std::size_t i = 0; i < us.size(); ++i) trial[i] = frozen[i] ? us[i] : us[i] * expm_antihermitian(eps * g[i]);
            ft = spread_value(trial);
            if (ft >= f + 1e-4 * eps * g2) {
                accepted = true;
                break;
            }
            eps *= 0.5;
        }
        if (!accepted) {
            r.stationary = true;
            break;
        }
        us.swap(trial);
        f = ft;
        ++r.iterations;
        if (r.iterations % 100 == 0) {
            for (std::size_t i = 0; i < us.size(); ++i)
                if (!frozen[i]) us[i] = reunitarize(us[i]);
            f = spread_value(us);
        }
        r.trace.push_back(f);
        eps = std::min(eps * 2.0, 10.0);
    }
    r.f = f;
    for (std::size_t i = 0; i < us.size(); ++i) r.bases.emplace_back(us[i], "B" + std::to_string(i));
    return r;
}

MultistartReport multistart_spread(const SpreadSettings& base, int seeds, int threads) {
    if (seeds < 1) throw DomainError("multistart needs at least one seed");
    MultistartReport rep;
    rep.n = base.n;
    rep.m = base.m;
    rep.upper_bound = spread_upper_bound(base.n, base.m);
    rep.runs.resize(static_cast<std::size_t>(seeds));
    for (int i = 0; i < seeds; ++i) rep.seeds.push_back(base.seed + static_cast<std::uint64_t>(i));
    parallel_for(rep.runs.size(), threads, [&](std::size_t i) {
        SpreadSettings s = base;
        s.seed = rep.seeds[i];
        rep.runs[i] = maximize_spread(s);
    });
    for (std::size_t i = 0; i < rep.runs.size(); ++i) {
        if (rep.runs[i].f > rep.runs[rep.best].f) rep.best = i;
    }
    std::vector<double> fs;
    for (const auto& r : rep.runs) fs.push_back(r.f);
    std::sort(fs.begin(), fs.end(), std::greater<>());
    for (double v : fs) {
        if (rep.local_optima.empty() || std::abs(rep.local_optima.back() - v) > 1e-6) rep.local_optima.push_back(v);
    }
    return rep;
}

Json MultistartReport::to_json(std::size_t trace_points) const {
    Json runs_j = Json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& t = runs[i].trace;
        Json tr = Json::array();
        const std::size_t step = std::max<std::size_t>(1, t.size() / std::max<std::size_t>(1, trace_points));
        for (std::size_t p = 0; p < t.size(); p += step) tr.push_back(t[p]);
        if (!t.empty() && (t.size() - 1) % step != 0) tr.push_back(t.back());
        runs_j.push_back({{"seed", seeds[i]},
                          {"f", runs[i].f},
                          {"iterations", runs[i].iterations},
                          {"stationary", runs[i].stationary},
                          {"trace", std::move(tr)}});
    }
    Json bases = Json::array();
    for (const auto& b : runs[best].bases) bases.push_back(matrix_to_json(b.matrix, b.label));
    return {{"n", n},
            {"m", m},
            {"seeds", seeds},
            {"best_f", runs[best].f},
            {"best_seed", seeds[best]},
            {"upper_bound", upper_bound},
            {"local_optima", local_optima},
            {"runs", std::move(runs_j)},
            {"bases", std::move(bases)}};
}

ScanResult scan_family(Family family, const std::vector<Basis>& against, const ScanSettings& s) {
    if (s.points < 1) throw DomainError("scan needs at least one grid point");
    ScanResult res;
    res.family = family;
    switch (family) {
        case Family::H4: res.n = 4; break;
        case Family::F6:
        case Family::F6_transpose:
        case Family::BN: res.n = 6; break;
        default: throw DomainError(std::string("scan is not defined for family ") + to_string(family));
    }
    res.m = s.m == 0 ? res.n + 1 : s.m;
    if (res.m < 3) throw DomainError("scan extension needs m >= 3");
    res.target = spread_upper_bound(res.n, res.m);
    for (const auto& b : against) {
        if (b.dim() != res.n) throw DimensionError("reference basis " + b.label + " has the wrong dimension");
        require_unitary(b, 1e-9);
        res.reference_labels.push_back(b.label.empty() ? "ref" + std::to_string(res.reference_labels.size()) : b.label);
    }

    std::vector<std::vector<double>> grid;
    const double step = 2.0 * kPi / s.points;
    if (family == Family::F6 || family == Family::F6_transpose) {
        for (int i = 0; i < s.points; ++i)
            for (int j = 0; j < s.points; ++j) grid.push_back({i * step, j * step});
    } else {
        for (int i = 0; i < s.points; ++i) grid.push_back({i * step});
    }
    res.rows.resize(grid.size());
    std::vector<BasisProjector> refs;
    for (const auto& b : against) refs.push_back(basis_projector(b));

    parallel_for(grid.size(), s.threads, [&](std::size_t idx) {
        ScanRow& row = res.rows[idx];
        row.params = grid[idx];
        ComplexMatrix mat;
        try {
            switch (family) {
                case Family::H4: mat = h4(row.params[0]); break;
                case Family::F6: mat = f6(row.params[0], row.params[1]); break;
                case Family::F6_transpose: mat = f6_transpose(row.params[0], row.params[1]); break;
                default: mat = beauchamp_nicoara(std::polar(1.0, row.params[0]), s.bn_branch).matrix; break;
            }
        } catch (const InadmissibleParameter& e) {
            row.admissible = false;
            row.note = e.what();
            return;
        }
        row.hadamard_defect = hadamard_defect(mat);
        const Basis member(mat, to_string(family));
        const BasisProjector p = basis_projector(member);
        for (const auto& q : refs) row.distances.push_back(chordal_distance_sq(p, q));
        if (s.restarts <= 0) return;
        for (int r = 0; r < s.restarts; ++r) {
            SpreadSettings ss;
            ss.n = res.n;
            ss.m = res.m;
            ss.seed = mix_seed(s.seed, idx, static_cast<std::uint64_t>(r));
            ss.iterations = s.iterations;
            ss.frozen = {mat};
            const SpreadResult sr = maximize_spread(ss);
            if (!row.extension || sr.f > *row.extension) row.extension = sr.f;
            if (sr.f >= res.target - s.success_slack) {
                row.success = true;
                break;
            }
        }
    });
    return res;
}

std::string ScanResult::csv() const {
    std::ostringstream out;
    if (family == Family::F6 || family == Family::F6_transpose) {
        out << "phi1,phi2";
    } else if (family == Family::BN) {
        out << "theta";
    } else {
        out << "phi";
    }
    out << ",admissible";
    for (const auto& l : reference_labels) out << ",D2_" << l;
    out << ",hadamard_defect,extension_f,extension_success\n";
    char buf[48];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.params.size(); ++i) out << (i ? "," : "") << num(r.params[i]);
        out << ',' << (r.admissible ? 1 : 0);
        for (std::size_t i = 0; i < reference_labels.size(); ++i) {
            out << ',';
            if (r.admissible) out << num(r.distances[i]);
        }
        out << ',';
        if (r.admissible) out << num(r.hadamard_defect);
        out << ',';
        if (r.extension) out << num(*r.extension);
        out << ',';
        if (r.admissible && r.extension) out << (r.success ? 1 : 0);
        out << '\n';
    }
    return out.str();
}

}  // namespace mubs
