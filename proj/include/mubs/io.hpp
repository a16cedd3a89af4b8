#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mubs/core.hpp"
#include "mubs/cyclotomic.hpp"

namespace mubs {

using Json = nlohmann::json;

/// Serializes with every floating-point number printed to 17 significant
/// digits, so documents survive write -> read -> write byte-identically.
/// indent < 0 gives a single line.
std::string dump_json(const Json& doc, int indent = -1);

/// {"n", "form": "complex", "entries": [[[re, im], ...], ...]}
Json matrix_to_json(const ComplexMatrix& m, const std::string& label = {});

/// {"n", "form": "roots", "k", "exponents": [[...], ...]}
Json root_matrix_to_json(const RootMatrix& m, const std::string& label = {});

struct MatrixRecord {
    ComplexMatrix matrix;
    std::optional<RootMatrix> roots;  // set when the source was in root form
    std::string label;
    Json provenance;  // null when absent
};

/// Parses one matrix object; `where` prefixes error messages.
MatrixRecord matrix_from_json(const Json& j, const std::string& where);

/// A file holds one matrix object, an array of them, or an object with a
/// "matrices" (or "bases") array. "-" reads standard input.
std::vector<MatrixRecord> read_matrix_file(const std::string& path);
std::vector<MatrixRecord> parse_matrix_document(const std::string& text, const std::string& source);

Json parse_json_text(const std::string& text, const std::string& source);
std::string read_text(const std::string& path);

/// Smallest order k among `candidates` (or, when empty, common orders and
/// N, 2N) for which every entry of sqrt(N) m is a k-th root of unity.
std::optional<RootMatrix> to_root_matrix(const ComplexMatrix& m, const std::vector<int>& candidates = {},
                                         double tol = 1e-9);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& where);

/// Writes text to `path` via a temporary file and rename.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace mubs
