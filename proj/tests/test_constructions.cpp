#include <doctest.h>

#include <bit>
#include <cstdint>

#include "mubs/constructions.hpp"
#include "mubs/grassmann.hpp"

using namespace mubs;

namespace {

// Brute force over all 0/1 colourings, written against the tetrad list only.
bool brute_force_colourable(const KsResult& r) {
    const int n = static_cast<int>(r.rays.size());
    std::vector<std::uint32_t> masks;
    for (const auto& t : r.tetrads) {
        std::uint32_t m = 0;
        for (int i : t) m |= 1u << i;
        masks.push_back(m);
    }
    for (std::uint32_t c = 0; c < (1u << n); ++c) {
        bool ok = true;
        for (auto m : masks) {
            if (std::popcount(c & m) != 1) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("Weyl commutation relation") {
    for (int n : {2, 3, 5, 6, 8}) {
        const WeylPair w = weyl_pair(n);
        CHECK((w.x * w.z - w.q * w.z * w.x).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(unitarity_defect(w.x) < 1e-14);
        CHECK(unitarity_defect(w.z) < 1e-14);
        // Fourier column b is the eigenvector of X with eigenvalue q^b.
        const ComplexMatrix f = fourier(n).matrix;
        for (int b = 0; b < n; ++b) {
            const ComplexVector col = f.col(b);
            CHECK((w.x * col - std::pow(w.q, b) * col).norm() < 1e-12);
        }
    }
    CHECK_THROWS_AS(weyl_pair(1), DomainError);
}

TEST_CASE("prime-dimensional MUB sets") {
    for (int p : {2, 3, 5, 7, 11}) {
        const auto set = prime_mub_set(p);
        REQUIRE(set.size() == static_cast<std::size_t>(p + 1));
        for (std::size_t i = 0; i < set.size(); ++i) {
            CHECK(unitarity_defect(set[i].matrix) < 1e-12);
            for (std::size_t j = i + 1; j < set.size(); ++j) {
                const auto v = is_unbiased_pair(set[i], set[j]);
                CHECK(v.unbiased);
                CHECK(v.deviation < 1e-12);
            }
        }
        // Each eigenbasis diagonalizes X Z^k.
        const WeylPair w = weyl_pair(p);
        for (int k = 0; k < p; ++k) {
            ComplexMatrix op = w.x;
            for (int t = 0; t < k; ++t) op = op * w.z;
            const ComplexMatrix b = set[static_cast<std::size_t>(k + 1)].matrix;
            const ComplexMatrix d = b.adjoint() * op * b;
            CHECK((d - ComplexMatrix(d.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    CHECK_THROWS_AS(prime_mub_set(6), DomainError);
    CHECK_THROWS_AS(prime_mub_set(1), DomainError);
    CHECK(is_prime(13));
    CHECK_FALSE(is_prime(15));
}

TEST_CASE("no real MUB pair in dimension 3") {
    const RealCensus c = real_unbiased_census();
    CHECK(c.representatives.size() == 4u);
    CHECK_FALSE(c.mub_pair_exists);
    // Dot products between cube corners are +/-1/3 and -1, never 0.
    for (double d : c.dot_products) CHECK(std::abs(d) > 0.3);
    CHECK_THROWS_AS(real_unbiased_census(4), DomainError);
}

TEST_CASE("three real MUBs in dimension 4") {
    const RealMubSet4 s = real_mub_set_dim4();
    REQUIRE(s.bases.size() == 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK((s.bases[i].transpose() * s.bases[i] - RealMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);
        for (std::size_t j = i + 1; j < 3; ++j) {
            const RealMatrix g = s.bases[i].transpose() * s.bases[j];
            CHECK((g.cwiseAbs2().array() - 0.25).abs().maxCoeff() < 1e-14);
        }
    }
    CHECK(s.cell24_vertices.size() == 24u);
    // The 24 vertices have norm 1 and pairwise inner products in {0, +/-1/2, +/-1}.
    for (const auto& a : s.cell24_vertices) {
        CHECK(std::abs(a.norm() - 1.0) < 1e-14);
        for (const auto& b : s.cell24_vertices) {
            const double d = std::abs(a.dot(b));
            CHECK(std::min({d, std::abs(d - 0.5), std::abs(d - 1.0)}) < 1e-14);
        }
    }
}

TEST_CASE("Kochen-Specker colouring of 24-cell rays") {
    const KsResult single = ks_uncolourable(real_mub_set_dim4().cell24_vertices);
    CHECK(single.rays.size() == 12u);
    CHECK_FALSE(single.uncolourable);
    REQUIRE(single.colouring.has_value());
    for (const auto& t : single.tetrads) {
        int ones = 0;
        for (int r : t) ones += (*single.colouring)[static_cast<std::size_t>(r)];
        CHECK(ones == 1);
    }
    CHECK(brute_force_colourable(single));

    const KsResult pair = ks_uncolourable(dual_pair_cell24_vertices());
    CHECK(pair.rays.size() == 24u);
    CHECK(pair.uncolourable);
    CHECK_FALSE(pair.colouring.has_value());
    CHECK_FALSE(brute_force_colourable(pair));
}

TEST_CASE("Kochen-Specker input checks") {
    CHECK_THROWS_AS(ks_uncolourable({RealVector::Zero(4)}), DomainError);
    CHECK_THROWS_AS(ks_uncolourable({RealVector::Ones(3)}), DomainError);
    // A ray that completes no orthogonal tetrad.
    std::vector<RealVector> v;
    for (int i = 0; i < 4; ++i) v.push_back(RealVector::Unit(4, i));
    v.push_back(RealVector::Ones(4));
    CHECK_THROWS_AS(ks_uncolourable(v), DomainError);
}

TEST_CASE("conjugate basis of a prime MUB is still unbiased to the standard basis") {
    const auto set = prime_mub_set(5);
    const Basis c = conjugate(set[2]);
    CHECK(is_unbiased_pair(set[0], c).unbiased);
    CHECK(chordal_distance_sq(basis_projector(set[0]), basis_projector(c)) == doctest::Approx(4.0).epsilon(1e-12));
}
