#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "mubs/catalog.hpp"
#include "mubs/constructions.hpp"
#include "mubs/core.hpp"
#include "mubs/optimize.hpp"

using namespace mubs;

namespace {

struct RandomEquivalence {
    std::vector<int> rows, cols;
    std::vector<double> row_phases, col_phases;
};

RandomEquivalence random_equivalence(int n, std::mt19937_64& rng) {
    RandomEquivalence e;
    e.rows.resize(static_cast<std::size_t>(n));
    e.cols.resize(static_cast<std::size_t>(n));
    std::iota(e.rows.begin(), e.rows.end(), 0);
    std::iota(e.cols.begin(), e.cols.end(), 0);
    std::shuffle(e.rows.begin(), e.rows.end(), rng);
    std::shuffle(e.cols.begin(), e.cols.end(), rng);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
    for (int i = 0; i < n; ++i) {
        e.row_phases.push_back(ph(rng));
        e.col_phases.push_back(ph(rng));
    }
    return e;
}

}  // namespace

TEST_CASE("tolerance ordering is validated") {
    CHECK_NOTHROW(Tolerance{}.validate());
    CHECK_THROWS_AS((Tolerance{1e-5, 1e-6}.validate()), DomainError);
    CHECK_THROWS_AS((Tolerance{-1.0, 1e-6}.validate()), DomainError);
}

TEST_CASE("unitarity and unbiasedness of the standard and Fourier bases") {
    const Basis e = Basis::standard(5);
    const Basis f = fourier(5);
    CHECK(unitarity_defect(e.matrix) == 0.0);
    CHECK(unitarity_defect(f.matrix) < 1e-14);
    const auto v = is_unbiased_pair(e, f);
    CHECK(v.unbiased);
    CHECK(v.deviation < 1e-14);
    CHECK_FALSE(is_unbiased_pair(f, f).unbiased);
    const RealMatrix o = overlap_squares(e, f);
    CHECK(o.sum() == doctest::Approx(5.0));
}

TEST_CASE("errors name the offending basis") {
    ComplexMatrix m = ComplexMatrix::Identity(3, 3);
    m(0, 1) = 0.5;
    const Basis bad(m, "skewed");
    try {
        (void)overlap_squares(Basis::standard(3), bad);
        FAIL("expected NotUnitaryError");
    } catch (const NotUnitaryError& e) {
        CHECK(std::string(e.what()).find("skewed") != std::string::npos);
    }
    CHECK_THROWS_AS(overlap_squares(Basis::standard(3), Basis::standard(4)), DimensionError);
}

TEST_CASE("hadamard predicate") {
    CHECK(is_complex_hadamard(fourier(6).matrix));
    CHECK(is_complex_hadamard(bjorck_c()));
    CHECK_FALSE(is_complex_hadamard(Basis::standard(4).matrix));
    CHECK(hadamard_defect(ComplexMatrix::Identity(3, 2)) == std::numeric_limits<double>::infinity());
}

TEST_CASE("dephase gives real positive first row and column") {
    std::mt19937_64 rng(3);
    const ComplexMatrix base = f6(0.4, 1.3);
    for (int t = 0; t < 20; ++t) {
        const auto e = random_equivalence(6, rng);
        const ComplexMatrix m = apply_equivalence(base, e.rows, e.cols, e.row_phases, e.col_phases);
        const ComplexMatrix d = dephase(m);
        for (int i = 0; i < 6; ++i) {
            CHECK(std::abs(d(0, i) - 1.0 / std::sqrt(6.0)) < 1e-12);
            CHECK(std::abs(d(i, 0) - 1.0 / std::sqrt(6.0)) < 1e-12);
        }
        CHECK(is_complex_hadamard(d));
    }
    ComplexMatrix z = fourier(4).matrix;
    z(0, 0) = 0.0;
    CHECK_THROWS_AS(dephase(z), DomainError);
}

TEST_CASE("Haagerup set is invariant under random equivalence transforms") {
    std::mt19937_64 rng(11);
    const std::vector<ComplexMatrix> seeds = {fourier(6).matrix, f6(0.7, 2.1), bjorck_c(), h4(0.9)};
    int transforms = 0;
    for (const auto& m : seeds) {
        const HaagerupSet ref = haagerup_invariants(m);
        for (int t = 0; t < 30; ++t, ++transforms) {
            const auto e = random_equivalence(static_cast<int>(m.rows()), rng);
            const ComplexMatrix mt = apply_equivalence(m, e.rows, e.cols, e.row_phases, e.col_phases);
            CHECK(haagerup_invariants(mt).matches(ref));
            CHECK(equivalent_heuristic(m, mt) == Equivalence::probably_equivalent);
        }
    }
    CHECK(transforms >= 100);
}

TEST_CASE("Haagerup set separates inequivalent matrices") {
    CHECK(equivalent_heuristic(fourier(6).matrix, bjorck_c()) == Equivalence::inequivalent);
    CHECK(equivalent_heuristic(h4(0.0), h4(0.5)) == Equivalence::inequivalent);
    CHECK(equivalent_heuristic(fourier(6).matrix, f6(0.3, 0.0)) == Equivalence::inequivalent);
    // Of size N^4 and closed under conjugation.
    const HaagerupSet s = haagerup_invariants(f6(0.3, 1.1));
    CHECK(s.size() == 6u * 6u * 6u * 6u);
    std::vector<double> conj;
    for (double p : s.phases()) conj.push_back(p == 0.0 ? 0.0 : 2.0 * kPi - p);
    std::sort(conj.begin(), conj.end());
    CHECK(HaagerupSet(conj, s.grid()).matches(s));
}

TEST_CASE("H4 at 0 and pi share their Haagerup set") {
    // H4(pi) is H4(0) with rows 1 and 3 exchanged.
    const ComplexMatrix swapped = apply_equivalence(h4(0.0), {0, 3, 2, 1}, {0, 1, 2, 3}, {0, 0, 0, 0}, {0, 0, 0, 0});
    CHECK((swapped - h4(kPi)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(equivalent_heuristic(h4(0.0), h4(kPi)) == Equivalence::probably_equivalent);
}

TEST_CASE("tolerance from the environment") {
    setenv("MUBS_EQ_TOL", "1e-8", 1);
    const Tolerance t = Tolerance::from_env();
    CHECK(t.eq_tol == doctest::Approx(1e-8));
    unsetenv("MUBS_EQ_TOL");
    CHECK(Tolerance::from_env().eq_tol == doctest::Approx(1e-10));
}
