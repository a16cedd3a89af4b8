#include <doctest.h>

#include <random>
#include <set>

#include "mubs/biunimodular.hpp"
#include "mubs/catalog.hpp"
#include "mubs/constructions.hpp"
#include "mubs/grassmann.hpp"

using namespace mubs;

namespace {

// Plain O(N^2) transform from the definition.
ComplexVector naive_dft(const ComplexVector& x) {
    const int n = static_cast<int>(x.size());
    ComplexVector out = ComplexVector::Zero(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out(a) += x(b) * std::polar(1.0, 2.0 * kPi * a * b / n);
    return out / std::sqrt(static_cast<double>(n));
}

// Every x0 = 1 vector of k-th roots whose transform is unimodular, by floating point.
std::vector<ComplexVector> brute_force_roots(int n, int k) {
    std::vector<ComplexVector> out;
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    while (true) {
        ComplexVector x(n);
        for (int i = 0; i < n; ++i) x(i) = std::polar(1.0, 2.0 * kPi * e[static_cast<std::size_t>(i)] / k);
        const ComplexVector t = naive_dft(x);
        if ((t.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-9) out.push_back(x);
        int i = 1;
        while (i < n && ++e[static_cast<std::size_t>(i)] == k) e[static_cast<std::size_t>(i++)] = 0;
        if (i == n) break;
    }
    return out;
}

const CensusResult& census6() {
    static const CensusResult c = newton_census(6);
    return c;
}

}  // namespace

TEST_CASE("dft matches the definition and is unitary") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + t % 9;
        ComplexVector x(n);
        for (int i = 0; i < n; ++i) x(i) = Complex(g(rng), g(rng));
        const ComplexVector y = dft(x);
        CHECK((y - naive_dft(x)).norm() < 1e-12);
        CHECK(std::abs(y.norm() - x.norm()) < 1e-12);
        // Applying it twice reverses indices.
        const ComplexVector z = dft(y);
        for (int a = 0; a < n; ++a) CHECK(std::abs(z(a) - x((n - a) % n)) < 1e-12);
    }
    // delta_0 goes to the flat vector.
    ComplexVector d = ComplexVector::Zero(4);
    d(0) = 1.0;
    CHECK((dft(d) - ComplexVector::Constant(4, 0.5)).norm() < 1e-15);
}

TEST_CASE("biunimodular predicate") {
    CHECK_FALSE(is_biunimodular(ComplexVector::Ones(6)).biunimodular);
    // A Fourier column times sqrt(N) transforms to a scaled delta.
    CHECK_FALSE(is_biunimodular(std::sqrt(5.0) * fourier(5).matrix.col(2)).biunimodular);
    ComplexVector g(2);
    g << 1.0, Complex(0.0, 1.0);
    CHECK(is_biunimodular(g).biunimodular);
    // Rows of a circulant Hadamard matrix are biunimodular.
    const ComplexVector row = std::sqrt(6.0) * bjorck_c().row(0).transpose();
    CHECK(is_biunimodular(row).deviation < 1e-12);
}

TEST_CASE("autocorrelation of a biunimodular sequence is a delta") {
    for (const auto& s : census6().sequences) {
        const ComplexVector gamma = autocorrelation(s.entries);
        CHECK(std::abs(gamma(0) - 1.0) < 1e-10);
        for (int b = 1; b < 6; ++b) CHECK(std::abs(gamma(b)) < 1e-9);
    }
    ComplexVector x = ComplexVector::Ones(3);
    CHECK(std::abs(autocorrelation(x)(1) - 1.0) < 1e-15);
}

TEST_CASE("exact root census agrees with a floating-point brute force") {
    for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 4}, {3, 3}, {3, 6}, {4, 8}, {5, 5}, {6, 12}}) {
        const auto exact = enumerate_biunimodular_roots(n, k);
        const auto brute = brute_force_roots(n, k);
        CHECK(exact.size() == brute.size());
        for (const auto& v : exact) {
            const ComplexVector x = v.to_complex(false);
            bool found = false;
            for (const auto& b : brute) found = found || (x - b).norm() < 1e-9;
            CHECK(found);
        }
    }
    // N = 2: (1, i) and (1, -i).
    const auto two = enumerate_biunimodular_roots(2, 4);
    REQUIRE(two.size() == 2u);
    CHECK(two[0].exponents[1] % 2 == 1);
    CHECK_THROWS_AS(enumerate_biunimodular_roots(6, 24, 1000), BudgetExceeded);
}

TEST_CASE("Newton census for N = 6") {
    const CensusResult& c = census6();
    CHECK(c.status == CensusStatus::complete);
    CHECK(c.sequences.size() == 48u);
    CHECK(c.gaussian_count() == 12);
    CHECK(c.metadata.unique_up_to_shift == 8);
    CHECK(c.metadata.unique_up_to_shift_and_conjugation == 5);
    for (const auto& s : c.sequences) {
        CHECK(std::abs(s.entries(0) - 1.0) < 1e-15);
        CHECK(is_biunimodular(s.entries).deviation < 1e-10);
    }
    // The Gaussian sequences are exactly the 12th-root solutions.
    const auto roots = root_census(6, 12);
    REQUIRE(roots.sequences.size() == 12u);
    for (const auto& r : roots.sequences) {
        int hits = 0;
        for (const auto& s : c.sequences) {
            if ((s.entries - r.entries).cwiseAbs().maxCoeff() < 1e-8) {
                ++hits;
                CHECK(s.cls == SequenceClass::gaussian);
            }
        }
        CHECK(hits == 1);
    }
    // Closed under conjugation and normalized shifts.
    auto contains = [&](const ComplexVector& y) {
        for (const auto& s : c.sequences)
            if ((s.entries - y).cwiseAbs().maxCoeff() < 1e-8) return true;
        return false;
    };
    for (const auto& s : c.sequences) {
        CHECK(contains(s.entries.conjugate()));
        for (int sh = 1; sh < 6; ++sh) CHECK(contains(normalized_shift(s.entries, sh)));
    }
}

TEST_CASE("small censuses and status flags") {
    NewtonSettings s;
    s.restarts = 2000;
    const CensusResult three = newton_census(3, s);
    CHECK(three.status == CensusStatus::complete);
    CHECK(three.sequences.size() == 6u);
    CHECK(root_census(3, 3).sequences.size() == 6u);
    // N = 4 has a one-parameter family of solutions.
    CHECK(newton_census(4, s).status == CensusStatus::not_zero_dimensional);
    s.restarts = 20;
    CHECK(newton_census(6, s).status == CensusStatus::unconverged);
    CHECK_THROWS_AS(newton_census(10, s), DomainError);
}

TEST_CASE("seed determinism") {
    NewtonSettings s;
    s.restarts = 600;
    s.seed = 5;
    const CensusResult a = newton_census(5, s), b = newton_census(5, s);
    REQUIRE(a.sequences.size() == b.sequences.size());
    for (std::size_t i = 0; i < a.sequences.size(); ++i) CHECK((a.sequences[i].entries - b.sequences[i].entries).norm() == 0.0);
}

TEST_CASE("assembled bases for N = 6") {
    const CensusResult a = assemble_bases(census6());
    REQUIRE(a.bases.size() == 16u);
    int circulant = 0;
    for (std::size_t i = 0; i < a.bases.size(); ++i) {
        const Basis& b = a.bases[i];
        CHECK(unitarity_defect(b.matrix) < 1e-9);
        CHECK(is_unbiased_pair(Basis::standard(6), b, {1e-9, 1e-6}).unbiased);
        CHECK(is_unbiased_pair(fourier(6), b, {1e-9, 1e-6}).unbiased);
        circulant += a.circulant[i] ? 1 : 0;
    }
    CHECK(circulant == 8);
    for (int m : a.membership) CHECK(m == 2);

    const DistanceReport r = census_distance_report(a);
    CHECK(r.gaussian.size() == 4u);
    CHECK(r.sixplet_circulant.size() == 6u);
    CHECK(r.sixplet_other.size() == 6u);
    CHECK(r.sixplets_isometric);
    CHECK(r.global_max < 5.0 - 0.1);
    CHECK(std::abs(r.gaussian_side.min - 2.0) < 1e-9);
    CHECK(std::abs(r.gaussian_diagonal.max - 4.0) < 1e-9);
    CHECK(std::abs((r.table - r.table.transpose()).maxCoeff()) < 1e-12);

    const CensusResult unfinished = [] {
        NewtonSettings s;
        s.restarts = 20;
        return newton_census(6, s);
    }();
    CHECK_THROWS_AS(assemble_bases(unfinished), DomainError);
}

TEST_CASE("census JSON round trip") {
    const CensusResult a = assemble_bases(census6());
    const std::string text = dump_json(census_to_json(a));
    const CensusResult b = census_from_json(parse_json_text(text, "c"), "c");
    CHECK(b.sequences.size() == a.sequences.size());
    CHECK(b.bases.size() == a.bases.size());
    CHECK(b.status == a.status);
    CHECK(dump_json(census_to_json(b)) == text);
    CHECK_THROWS_AS(census_from_json(parse_json_text("{\"n\": 6}", "c"), "c"), FormatError);
}
