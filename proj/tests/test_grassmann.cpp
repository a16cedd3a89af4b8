#include <doctest.h>

#include <random>

#include "mubs/constructions.hpp"
#include "mubs/grassmann.hpp"
#include "mubs/optimize.hpp"

using namespace mubs;

TEST_CASE("Gell-Mann frame is orthonormal and traceless") {
    for (int n : {2, 3, 4, 6}) {
        const int dim = n * n - 1;
        for (int a = 0; a < dim; ++a) {
            const ComplexMatrix ga = gell_mann(n, a);
            CHECK(std::abs(ga.trace()) < 1e-14);
            CHECK((ga - ga.adjoint()).norm() < 1e-14);
            for (int b = 0; b < dim; ++b) {
                const double ip = (ga * gell_mann(n, b)).trace().real() / 2.0;
                CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-13);
            }
            // Coordinates recover the frame element.
            const RealVector c = hermitian_coordinates(ga);
            CHECK(std::abs(c(a) - 1.0) < 1e-13);
            CHECK(std::abs(c.norm() - 1.0) < 1e-13);
        }
    }
}

TEST_CASE("Bloch vectors are unit vectors with fixed overlaps") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int n : {2, 3, 5}) {
        for (int t = 0; t < 20; ++t) {
            ComplexVector u(n), v(n);
            for (int i = 0; i < n; ++i) {
                u(i) = Complex(g(rng), g(rng));
                v(i) = Complex(g(rng), g(rng));
            }
            u.normalize();
            v.normalize();
            const RealVector bu = bloch_embed(u), bv = bloch_embed(v);
            CHECK(std::abs(bu.norm() - 1.0) < 1e-12);
            // e_u . e_v = (N |<u|v>|^2 - 1) / (N - 1).
            const double expected = (n * std::norm(u.dot(v)) - 1.0) / (n - 1.0);
            CHECK(std::abs(bu.dot(bv) - expected) < 1e-12);
        }
    }
    CHECK_THROWS(bloch_embed(ComplexVector::Ones(3)));
}

TEST_CASE("basis projectors") {
    std::mt19937_64 rng(9);
    for (int n : {2, 3, 4, 6}) {
        const BasisProjector p = basis_projector(Basis(random_unitary(n, rng)));
        CHECK(p.idempotency_defect() < 1e-12);
        CHECK(std::abs(p.trace() - (n - 1)) < 1e-12);
        const RealMatrix f = basis_frame(Basis(random_unitary(n, rng)));
        CHECK(f.rows() == n * n - 1);
        CHECK(f.cols() == n);
    }
}

TEST_CASE("two chordal distance formulas agree on 1000 random pairs") {
    std::mt19937_64 rng(17);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 2 + t % 5;
        const Basis a(random_unitary(n, rng)), b(random_unitary(n, rng));
        const double d1 = chordal_distance_sq(basis_projector(a), basis_projector(b));
        const double d2 = chordal_distance_sq_overlap(a, b);
        worst = std::max(worst, std::abs(d1 - d2));
        CHECK(d1 >= -1e-12);
        CHECK(d1 <= n - 1 + 1e-12);
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("distance extremes and invariance") {
    std::mt19937_64 rng(23);
    for (int n : {2, 3, 5, 6}) {
        const Basis e = Basis::standard(n), f = fourier(n);
        CHECK(std::abs(chordal_distance_sq(basis_projector(e), basis_projector(f)) - (n - 1)) < 1e-12);
        CHECK(std::abs(chordal_distance_sq(basis_projector(f), basis_projector(f))) < 1e-12);
        // Reordering and rephasing the vectors leaves the distance at zero.
        ComplexMatrix g = f.matrix;
        g.col(0).swap(g.col(n - 1));
        g.col(1) *= std::polar(1.0, 0.7);
        CHECK(std::abs(chordal_distance_sq_overlap(f, Basis(g))) < 1e-12);
        // A common unitary preserves distances.
        const ComplexMatrix u = random_unitary(n, rng);
        const Basis a(random_unitary(n, rng)), b(random_unitary(n, rng));
        const double d = chordal_distance_sq_overlap(a, b);
        CHECK(std::abs(chordal_distance_sq_overlap(Basis(u * a.matrix), Basis(u * b.matrix)) - d) < 1e-10);
    }
}

TEST_CASE("distance table and spread") {
    const auto set = prime_mub_set(3);
    const RealMatrix t = distance_table(set);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(std::abs(t(i, j) - (i == j ? 0.0 : 2.0)) < 1e-12);
    CHECK(std::abs(spread_objective(set) - spread_upper_bound(3, 4)) < 1e-12);
    CHECK(spread_upper_bound(6, 7) == 105.0);
    const std::string csv = distance_table_csv(t, {"a", "b", "c", "d"});
    CHECK(csv.rfind("label,a,b,c,d\n", 0) == 0);
}
