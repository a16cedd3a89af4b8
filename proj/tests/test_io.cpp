#include <doctest.h>

#include "mubs/catalog.hpp"
#include "mubs/constructions.hpp"
#include "mubs/io.hpp"

using namespace mubs;

namespace {

std::string format_error(const std::string& text) {
    try {
        (void)parse_matrix_document(text, "in.json");
    } catch (const FormatError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("complex form round trips byte-identically") {
    for (const ComplexMatrix& m : {h4(0.37), f6(1.1, 4.2), bjorck_c()}) {
        const std::string first = dump_json(matrix_to_json(m, "x"), 2);
        const auto back = parse_matrix_document(first, "doc");
        REQUIRE(back.size() == 1u);
        CHECK(back[0].label == "x");
        CHECK((back[0].matrix - m).norm() == 0.0);
        CHECK(dump_json(matrix_to_json(back[0].matrix, back[0].label), 2) == first);
    }
}

TEST_CASE("root form round trips and records roots") {
    const RootMatrix f = fourier_roots(6);
    const std::string text = dump_json(root_matrix_to_json(f, "F6"));
    const auto back = parse_matrix_document(text, "doc");
    REQUIRE(back[0].roots.has_value());
    CHECK(*back[0].roots == f);
    CHECK((back[0].matrix - fourier(6).matrix).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(dump_json(root_matrix_to_json(*back[0].roots, "F6")) == text);
}

TEST_CASE("documents with several matrices") {
    Json arr = Json::array({matrix_to_json(h4(0.0)), root_matrix_to_json(fourier_roots(4))});
    CHECK(parse_matrix_document(dump_json(arr), "a").size() == 2u);
    Json obj = {{"matrices", arr}};
    CHECK(parse_matrix_document(dump_json(obj), "o").size() == 2u);
}

TEST_CASE("format errors carry a location") {
    CHECK(format_error("{").find("in.json: invalid JSON") != std::string::npos);
    CHECK(format_error(R"({"form": "complex", "entries": []})").find("missing field \"n\"") != std::string::npos);
    CHECK(format_error(R"({"n": 2, "form": "complex", "entries": [[[1,0],[1,0]]]})").find("expected 2 rows") !=
          std::string::npos);
    CHECK(format_error(R"({"n": 2, "form": "complex", "entries": [[[1,0],[1,0]],[[1,0],[1]]]})")
              .find("[1]") != std::string::npos);
    CHECK(format_error(R"({"n": 2, "form": "roots", "k": 0, "exponents": [[0,0],[0,1]]})").find(".k") !=
          std::string::npos);
    CHECK(format_error(R"({"n": 2, "form": "polar"})").find("unknown form") != std::string::npos);
    CHECK_THROWS_AS(read_matrix_file("/nonexistent/file.json"), FormatError);
}

TEST_CASE("root form detection") {
    CHECK(to_root_matrix(fourier(6).matrix)->order == 6);
    CHECK(to_root_matrix(h4(kPi / 2.0))->order == 4);
    CHECK(to_root_matrix(h4(0.3)) == std::nullopt);
    CHECK(to_root_matrix(bjorck_c()) == std::nullopt);
    CHECK(to_root_matrix(fourier(6).matrix, {12})->order == 12);
}
