// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mubs/biunimodular.hpp"
#include "mubs/catalog.hpp"
#include "mubs/constructions.hpp"
#include "mubs/grassmann.hpp"
#include "mubs/optimize.hpp"
#include "mubs/search.hpp"

using namespace mubs;

namespace {

// Tolerances and limits, fixed here so a run is comparable across machines.
constexpr double kPrimeDistanceTol = 1e-9;
constexpr double kPrimeSeconds = 5.0;
constexpr int kCensusRestarts = 20000;
constexpr double kSquareTol = 1e-3;
constexpr double kDistanceTol = 1e-2;
constexpr double kGlobalMaxBound = 4.9;
constexpr double kRealSeconds = 1.0;
constexpr int kH4Grid = 360;
constexpr double kH4Slack = 1e-6;
constexpr double kHadamardTol = 1e-9;
constexpr double kQuadraticTol = 1e-14;
constexpr double kTwoFormulaTol = 1e-9;
constexpr double kGradientRelTol = 1e-5;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

bool within(const RangeStat& r, double target, double tol) {
    return r.count > 0 && std::abs(r.min - target) <= tol && std::abs(r.max - target) <= tol;
}

const CensusResult& assembled() {
    static const CensusResult a = [] {
        NewtonSettings s;
        s.restarts = kCensusRestarts;
        return assemble_bases(newton_census(6, s));
    }();
    return a;
}

Outcome prime_sets() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    bool counts = true;
    for (int p : {2, 3, 5, 7, 11, 13}) {
        const auto set = prime_mub_set(p);
        counts = counts && set.size() == static_cast<std::size_t>(p + 1);
        const RealMatrix t = distance_table(set);
        for (Eigen::Index i = 0; i < t.rows(); ++i)
            for (Eigen::Index j = i + 1; j < t.cols(); ++j) worst = std::max(worst, std::abs(t(i, j) - (p - 1)));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {counts && worst <= kPrimeDistanceTol && secs < kPrimeSeconds,
            "max |D2 - (p-1)| = " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome gaussian_census() {
    const CensusResult a = root_census(6, 12);
    const CensusResult b = root_census(6, 24);
    bool same = a.sequences.size() == b.sequences.size();
    for (const auto& x : a.sequences) {
        bool found = false;
        for (const auto& y : b.sequences) found = found || (x.entries - y.entries).cwiseAbs().maxCoeff() < 1e-12;
        same = same && found;
    }
    return {a.sequences.size() == 12 && same,
            "k=12: " + std::to_string(a.sequences.size()) + ", k=24: " + std::to_string(b.sequences.size()) +
                (same ? " (same set)" : " (sets differ)")};
}

Outcome full_census() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        NewtonSettings s;
        s.restarts = kCensusRestarts;
        s.seed = seed;
        const CensusResult c = newton_census(6, s);
        const int g = c.gaussian_count();
        const int total = static_cast<int>(c.sequences.size());
        ok = ok && c.status == CensusStatus::complete && total == 48 && g == 12;
        detail += "seed " + std::to_string(seed) + ": " + std::to_string(total) + " = " + std::to_string(g) + " + " +
                  std::to_string(total - g) + " (" + to_string(c.status) + "); ";
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

Outcome assembly() {
    const CensusResult& a = assembled();
    int circulant = 0, circulant_gaussian = 0;
    for (std::size_t i = 0; i < a.bases.size(); ++i) {
        if (!a.circulant[i]) continue;
        ++circulant;
        bool gaussian = true;
        for (int m : a.basis_members[i]) gaussian = gaussian && a.sequences[static_cast<std::size_t>(m)].cls == SequenceClass::gaussian;
        circulant_gaussian += gaussian ? 1 : 0;
    }
    bool twice = !a.membership.empty();
    for (int m : a.membership) twice = twice && m == 2;
    const int circulant_other = circulant - circulant_gaussian;
    return {a.bases.size() == 16 && twice && circulant_gaussian == 2 && circulant_other == 6,
            std::to_string(a.bases.size()) + " bases, every vector in 2: " + (twice ? "yes" : "no") +
                ", circulant " + std::to_string(circulant_gaussian) + " + " + std::to_string(circulant_other)};
}

Outcome distances() {
    const DistanceReport r = census_distance_report(assembled());
    const bool ok = within(r.gaussian_side, 2.0, kSquareTol) && within(r.gaussian_diagonal, 4.0, kSquareTol) &&
                    within(r.gaussian_to_other, 4.62, kDistanceTol) && within(r.sixplet_cross, 3.71, kDistanceTol) &&
                    std::abs(r.within_sixplets.max - 4.64) <= kDistanceTol && r.global_max < kGlobalMaxBound;
    return {ok, "side " + fmt("%.4f", r.gaussian_side.min) + ".." + fmt("%.4f", r.gaussian_side.max) + ", diagonal " +
                    fmt("%.4f", r.gaussian_diagonal.max) + ", gaussian-other " + fmt("%.4f", r.gaussian_to_other.min) +
                    ".." + fmt("%.4f", r.gaussian_to_other.max) + ", six-plet cross " +
                    fmt("%.4f", r.sixplet_cross.min) + ".." + fmt("%.4f", r.sixplet_cross.max) + ", within max " +
                    fmt("%.4f", r.within_sixplets.max) + ", global max " + fmt("%.4f", r.global_max)};
}

Outcome quartets() {
    const SearchResult r = mub_quartet_search(6, 12);
    return {r.complete && r.quartets.empty() && r.verdict() == "empty",
            "verdict " + r.verdict() + ", " + std::to_string(r.units_completed) + "/" + std::to_string(r.units_total) +
                " units, " + std::to_string(r.nodes) + " nodes"};
}

Outcome real_dimensions() {
    const auto t0 = std::chrono::steady_clock::now();
    const RealCensus c = real_unbiased_census(3);
    const RealMubSet4 s = real_mub_set_dim4();
    double worst = 0.0;
    for (std::size_t i = 0; i < s.bases.size(); ++i)
        for (std::size_t j = i + 1; j < s.bases.size(); ++j)
            worst = std::max(worst, ((s.bases[i].transpose() * s.bases[j]).cwiseAbs2().array() - 0.25).abs().maxCoeff());
    const KsResult pair = ks_uncolourable(dual_pair_cell24_vertices());
    const KsResult single = ks_uncolourable(s.cell24_vertices);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {!c.mub_pair_exists && worst < 1e-14 && pair.uncolourable && secs < kRealSeconds,
            std::string("R^3 pair: ") + (c.mub_pair_exists ? "found" : "none") + ", R^4 max ||dot|^2 - 1/4| = " +
                fmt("%.1e", worst) + ", 24-cell + dual (" + std::to_string(pair.rays.size()) + " rays): " +
                (pair.uncolourable ? "uncolourable" : "colourable") + ", single 24-cell: " +
                (single.uncolourable ? "uncolourable" : "colourable") + ", " + fmt("%.3f", secs) + " s"};
}

Outcome h4_scan() {
    ScanSettings s;
    s.points = kH4Grid;
    s.m = 5;
    s.success_slack = kH4Slack;
    const ScanResult r = scan_family(Family::H4, {Basis::standard(4)}, s);
    std::vector<int> hits;
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        if (r.rows[i].success) hits.push_back(static_cast<int>(i));
    std::string list;
    for (int h : hits) list += (list.empty() ? "" : ",") + std::to_string(h);
    const bool ok = hits == std::vector<int>{0, kH4Grid / 2};
    return {ok, "successful grid indices {" + list + "} of " + std::to_string(kH4Grid) + " (target F = " +
                    fmt("%.0f", r.target) + ")"};
}

Outcome families() {
    const Tolerance tol{kHadamardTol, 1e-6};
    bool ok = true;
    int checked = 0;
    auto check = [&](const ComplexMatrix& m) {
        ok = ok && is_complex_hadamard(m, tol);
        ++checked;
    };
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) {
            check(f6(2.0 * kPi * i / 24, 2.0 * kPi * j / 24));
            check(f6_transpose(2.0 * kPi * i / 24, 2.0 * kPi * j / 24));
        }
    check(bjorck_c());
    int bn = 0;
    for (int i = 0; i < 360; ++i) {
        const double theta = 2.0 * kPi * i / 360;
        if (!bn_admissible(theta)) continue;
        check(beauchamp_nicoara(std::polar(1.0, theta)).matrix);
        ++bn;
    }
    check(load_fixture("S").matrix);
    check(load_fixture("DITA0").matrix);
    const Complex d = bjorck_d();
    const double q = std::abs(d * d - (1.0 - std::sqrt(3.0)) * d + 1.0);
    return {ok && bn > 0 && q < kQuadraticTol, std::to_string(checked) + " matrices (" + std::to_string(bn) +
                                                    " admissible BN points), d quadratic residual " + fmt("%.1e", q)};
}

Outcome properties() {
    std::mt19937_64 rng(20240);
    std::normal_distribution<double> g;
    std::vector<std::string> failed;

    double two = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 2 + t % 5;
        const Basis a(random_unitary(n, rng)), b(random_unitary(n, rng));
        two = std::max(two, std::abs(chordal_distance_sq(basis_projector(a), basis_projector(b)) -
                                     chordal_distance_sq_overlap(a, b)));
    }
    if (two > kTwoFormulaTol) failed.push_back("two-formula");

    double proj = 0.0;
    for (int n = 2; n <= 7; ++n) {
        const BasisProjector p = basis_projector(Basis(random_unitary(n, rng)));
        proj = std::max({proj, p.idempotency_defect(), std::abs(p.trace() - (n - 1))});
    }
    if (proj > 1e-10) failed.push_back("projector");

    double unit = 0.0;
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + t % 12;
        ComplexVector x(n);
        for (int i = 0; i < n; ++i) x(i) = Complex(g(rng), g(rng));
        unit = std::max(unit, std::abs(dft(x).norm() - x.norm()));
    }
    if (unit > 1e-12) failed.push_back("dft");

    double delta = 0.0;
    for (const auto& s : assembled().sequences) {
        ComplexVector gamma = autocorrelation(s.entries);
        gamma(0) -= 1.0;
        delta = std::max(delta, gamma.cwiseAbs().maxCoeff());
    }
    if (delta > 1e-9) failed.push_back("autocorrelation");

    double grad = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + t % 3;
        std::vector<ComplexMatrix> us{ComplexMatrix::Identity(n, n), random_unitary(n, rng), random_unitary(n, rng)};
        const auto gr = spread_gradient(us, {true, false, false});
        std::vector<ComplexMatrix> dir(3, ComplexMatrix::Zero(n, n));
        double analytic = 0.0;
        for (int i = 1; i < 3; ++i) {
            ComplexMatrix a(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) a(r, c) = Complex(g(rng), g(rng));
            dir[static_cast<std::size_t>(i)] = 0.5 * (a - a.adjoint());
            analytic += (gr[static_cast<std::size_t>(i)].adjoint() * dir[static_cast<std::size_t>(i)]).trace().real();
        }
        auto f = [&](double h) {
            std::vector<ComplexMatrix> v = us;
            for (int i = 1; i < 3; ++i) v[static_cast<std::size_t>(i)] = us[static_cast<std::size_t>(i)] * expm_antihermitian(h * dir[static_cast<std::size_t>(i)]);
            return spread_value(v);
        };
        const double numeric = (f(1e-5) - f(-1e-5)) / 2e-5;
        grad = std::max(grad, std::abs(numeric - analytic) / std::max(1e-8, std::abs(analytic)));
    }
    if (grad > kGradientRelTol) failed.push_back("gradient");

    int mismatches = 0, samples = 0;
    for (int k : {3, 4, 6, 8, 12, 24}) {
        const ExactRootTester tester(k);
        std::uniform_int_distribution<int> e(0, k - 1);
        for (int t = 0; t < 1700; ++t, ++samples) {
            const int n = t % 2 == 0 ? 4 : 6;
            std::vector<int> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
            for (auto& x : a) x = e(rng);
            for (auto& x : b) x = e(rng);
            if (t % 4 == 0) b = a;
            if (t % 8 == 0 && k % n == 0)
                for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(i)] = (a[static_cast<std::size_t>(i)] + i * (k / n)) % k;
            const Complex ip = RootVector(k, a).to_complex(false).dot(RootVector(k, b).to_complex(false));
            mismatches += tester.orthogonal(a, b) != (std::abs(ip) < 1e-9) ? 1 : 0;
            mismatches += tester.unbiased(a, b) != (std::abs(std::norm(ip) - n) < 1e-9) ? 1 : 0;
        }
    }
    if (mismatches != 0 || samples < 10000) failed.push_back("cyclotomic");

    std::string detail = "two-formula " + fmt("%.1e", two) + ", projector " + fmt("%.1e", proj) + ", dft " +
                         fmt("%.1e", unit) + ", autocorrelation " + fmt("%.1e", delta) + ", gradient rel " +
                         fmt("%.1e", grad) + ", cyclotomic mismatches " + std::to_string(mismatches) + "/" +
                         std::to_string(samples);
    for (const auto& f : failed) detail += " [failed: " + f + "]";
    return {failed.empty(), detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"prime MUB sets, D2 = p - 1", prime_sets},
        {"Gaussian census k=12 and k=24", gaussian_census},
        {"Newton census 48 = 12 + 36 for three seeds", full_census},
        {"16 assembled bases, membership 2, circulant 2 + 6", assembly},
        {"distance geometry of the assembled bases", distances},
        {"no MUB quartet with 12th-root entries in N = 6", quartets},
        {"real dimensions 3 and 4, Kochen-Specker", real_dimensions},
        {"H4 extends to 5 MUBs only at phi = 0, pi", h4_scan},
        {"catalog families and fixtures are Hadamard", families},
        {"property suites", properties},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += o.pass ? 0 : 1;
        std::printf("[%s] criterion %zu: %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
