#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mubs/core.hpp"
#include "mubs/cyclotomic.hpp"

namespace mubs {

enum class Family { H4, F6, F6_transpose, DITA, S, BJORCK_C, BN };

const char* to_string(Family f);
Family family_from_string(std::string_view name);
std::size_t family_arity(Family f);

/// A member of a named family. BN takes one real parameter, the phase of y.
struct FamilyPoint {
    Family family;
    std::vector<double> params;

    void validate() const;
};

ComplexMatrix h4(double phi);

/// Fourier matrix of order 6 with phases e^{i phi1} on odd rows of columns
/// 1 mod 3 and e^{i phi2} on odd rows of columns 2 mod 3.
ComplexMatrix f6(double phi1, double phi2);
ComplexMatrix f6_transpose(double phi1, double phi2);

/// Bjorck's unimodular number (1 - sqrt 3)/2 + i sqrt(sqrt 3 / 2).
Complex bjorck_d();
ComplexMatrix bjorck_c();

enum class SqrtBranch { plus, minus };

struct BeauchampNicoara {
    ComplexMatrix matrix;  // normalized
    Complex x, y, z, t;
};

/// Member of the Beauchamp-Nicoara family at unimodular y. Throws
/// InadmissibleParameter when the derived x is not unimodular (within 1e-8)
/// or a denominator vanishes.
BeauchampNicoara beauchamp_nicoara(Complex y, SqrtBranch branch = SqrtBranch::plus);
bool bn_admissible(double theta, SqrtBranch branch = SqrtBranch::plus);

/// Endpoints (radians, in (0, 2 pi)) of the admissible arc of arg(y),
/// located by bisection on admissibility.
std::pair<double, double> bn_admissible_arc(SqrtBranch branch = SqrtBranch::plus);

ComplexMatrix family_matrix(const FamilyPoint& p);

struct Fixture {
    std::string name;
    RootMatrix roots;
    ComplexMatrix matrix;
};

/// Directory holding the shipped fixtures; MUBS_FIXTURE_DIR overrides.
std::filesystem::path default_fixture_dir();

/// Loads the S or DITA0 fixture and verifies it exactly (root order, exact
/// orthogonality, dephased form). Throws FixtureError otherwise.
Fixture load_fixture(std::string_view name, const std::filesystem::path& dir = default_fixture_dir());

/// The root order each fixture must use: 3 for S, 4 for DITA0.
int fixture_order(std::string_view name);

}  // namespace mubs
