#include "mubs/catalog.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "mubs/io.hpp"

#ifndef MUBS_FIXTURE_DIR
#define MUBS_FIXTURE_DIR "data/fixtures"
#endif

namespace mubs {

namespace {

constexpr double kAdmissibleTol = 1e-8;

ComplexMatrix normalized(ComplexMatrix m) { return m / std::sqrt(static_cast<double>(m.rows())); }

}  // namespace

const char* to_string(Family f) {
    switch (f) {
        case Family::H4: return "H4";
        case Family::F6: return "F6";
        case Family::F6_transpose: return "F6_transpose";
        case Family::DITA: return "DITA";
        case Family::S: return "S";
        case Family::BJORCK_C: return "BJORCK_C";
        case Family::BN: return "BN";
    }
    return "?";
}

Family family_from_string(std::string_view name) {
    for (Family f : {Family::H4, Family::F6, Family::F6_transpose, Family::DITA, Family::S, Family::BJORCK_C,
                     Family::BN}) {
        if (name == to_string(f)) return f;
    }
    throw DomainError("unknown family '" + std::string(name) + "'");
}

std::size_t family_arity(Family f) {
    switch (f) {
        case Family::H4: return 1;
        case Family::F6: return 2;
        case Family::F6_transpose: return 2;
        case Family::DITA: return 1;
        case Family::S: return 0;
        case Family::BJORCK_C: return 0;
        case Family::BN: return 1;
    }
    return 0;
}

void FamilyPoint::validate() const {
    if (params.size() != family_arity(family)) {
        throw DomainError(std::string("family ") + to_string(family) + " takes " +
                          std::to_string(family_arity(family)) + " parameter(s), got " +
                          std::to_string(params.size()));
    }
}

ComplexMatrix h4(double phi) {
    const Complex e = std::polar(1.0, phi);
    ComplexMatrix m(4, 4);
    m << 1.0, 1.0, 1.0, 1.0,
         1.0, e, -1.0, -e,
         1.0, -1.0, 1.0, -1.0,
         1.0, -e, -1.0, e;
    return normalized(m);
}

ComplexMatrix f6(double phi1, double phi2) {
    ComplexMatrix m(6, 6);
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
            double phase = 2.0 * kPi * ((a * b) % 6) / 6.0;
            if (a % 2 == 1 && b % 3 == 1) phase += phi1;
            if (a % 2 == 1 && b % 3 == 2) phase += phi2;
            m(a, b) = std::polar(1.0, phase);
        }
    }
    return normalized(m);
}

ComplexMatrix f6_transpose(double phi1, double phi2) { return f6(phi1, phi2).transpose(); }

Complex bjorck_d() {
    const double s3 = std::sqrt(3.0);
    return {(1.0 - s3) / 2.0, std::sqrt(s3 / 2.0)};
}

ComplexMatrix bjorck_c() {
    const Complex d = bjorck_d();
    const Complex i(0.0, 1.0);
    const Complex row[6] = {1.0, i * d, -d, -i, -std::conj(d), i * std::conj(d)};
    ComplexMatrix m(6, 6);
    for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) m(r, c) = row[(c - r + 6) % 6];
    }
    return normalized(m);
}

BeauchampNicoara beauchamp_nicoara(Complex y, SqrtBranch branch) {
    if (std::abs(std::abs(y) - 1.0) > 1e-10) throw DomainError("beauchamp_nicoara: y must be unimodular");
    const Complex one(1.0, 0.0);
    const Complex zden = y * (-one + 2.0 * y + y * y);
    const Complex xden = one + 2.0 * y - y * y;
    if (std::abs(zden) < 1e-12 || std::abs(xden) < 1e-12) {
        throw InadmissibleParameter("inadmissible parameter: a denominator vanishes at this y");
    }
    const Complex z = xden / zden;
    const double sign = branch == SqrtBranch::plus ? 1.0 : -1.0;
    const Complex root = std::sqrt(2.0) * std::sqrt(one + 2.0 * y + 2.0 * y * y * y + y * y * y * y);
    const Complex x = (one + 2.0 * y + y * y + sign * root) / xden;
    if (std::abs(std::abs(x) - 1.0) > kAdmissibleTol) {
        throw InadmissibleParameter("inadmissible parameter: |x| = " + std::to_string(std::abs(x)) +
                                    " at arg(y) = " + std::to_string(std::arg(y)));
    }
    const Complex t = x * y * z;
    ComplexMatrix m(6, 6);
    m << one, one, one, one, one, one,
         one, -one, -one / x, -y, y, one / x,
         one, -x, one, y, one / z, -one / t,
         one, -one / y, one / y, -one, -one / t, one / t,
         one, one / y, z, -t, one, -one / x,
         one, x, -t, t, -x, -one;
    return {normalized(m), x, y, z, t};
}

bool bn_admissible(double theta, SqrtBranch branch) {
    try {
        beauchamp_nicoara(std::polar(1.0, theta), branch);
        return true;
    } catch (const InadmissibleParameter&) {
        return false;
    }
}

std::pair<double, double> bn_admissible_arc(SqrtBranch branch) {
    // The excluded interval contains y = 1 and the arc contains y = -1.
    auto edge = [&](double inside, double outside) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (inside + outside);
            if (mid == inside || mid == outside) break;
            (bn_admissible(mid, branch) ? inside : outside) = mid;
        }
        return inside;
    };
    if (!bn_admissible(kPi, branch)) throw InadmissibleParameter("y = -1 is not admissible on this branch");
    return {edge(kPi, 1e-9), edge(kPi, 2.0 * kPi - 1e-9)};
}

ComplexMatrix family_matrix(const FamilyPoint& p) {
    p.validate();
    switch (p.family) {
        case Family::H4: return h4(p.params[0]);
        case Family::F6: return f6(p.params[0], p.params[1]);
        case Family::F6_transpose: return f6_transpose(p.params[0], p.params[1]);
        case Family::BJORCK_C: return bjorck_c();
        case Family::BN: return beauchamp_nicoara(std::polar(1.0, p.params[0])).matrix;
        case Family::S: return load_fixture("S").matrix;
        case Family::DITA:
            if (p.params[0] != 0.0) {
                throw DomainError("only the zero-phase member DITA0 of the Dita family is available");
            }
            return load_fixture("DITA0").matrix;
    }
    throw DomainError("unknown family");
}

std::filesystem::path default_fixture_dir() {
    if (const char* env = std::getenv("MUBS_FIXTURE_DIR"); env != nullptr && *env != '\0') return env;
    return MUBS_FIXTURE_DIR;
}

int fixture_order(std::string_view name) {
    if (name == "S") return 3;
    if (name == "DITA0") return 4;
    throw FixtureError("unknown fixture '" + std::string(name) + "' (expected S or DITA0)");
}

Fixture load_fixture(std::string_view name, const std::filesystem::path& dir) {
    const int order = fixture_order(name);
    const auto path = dir / (std::string(name) + ".json");
    const std::string hint = "; regenerate it with `mubs fixtures --out-dir " + dir.string() + "`";
    std::vector<MatrixRecord> records;
    try {
        records = read_matrix_file(path.string());
    } catch (const Error& e) {
        throw FixtureError("cannot load fixture " + path.string() + ": " + e.what() + hint);
    }
    if (records.size() != 1 || !records[0].roots) {
        throw FixtureError("fixture " + path.string() + " must hold one matrix in root form" + hint);
    }
    const RootMatrix& roots = *records[0].roots;
    if (roots.n != 6 || roots.order != order) {
        throw FixtureError("fixture " + path.string() + " has the wrong size or root order" + hint);
    }
    if (!is_hadamard_exact(roots)) throw FixtureError("fixture " + path.string() + " fails the exact Hadamard test" + hint);
    for (int i = 0; i < roots.n; ++i) {
        if (roots.at(0, i) != 0 || roots.at(i, 0) != 0) {
            throw FixtureError("fixture " + path.string() + " is not dephased" + hint);
        }
    }
    return {std::string(name), roots, roots.to_complex()};
}

}  // namespace mubs
