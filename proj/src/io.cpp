#include "mubs/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace mubs {

namespace {

void write_string(std::string& out, const std::string& s) {
    // nlohmann's own escaping is reused for strings.
    out += Json(s).dump();
}

void write_value(std::string& out, const Json& j, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                write_string(out, it.key());
                out += indent < 0 ? ":" : ": ";
                write_value(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Short numeric arrays stay on one line.
            const bool flat = indent < 0 || std::all_of(j.begin(), j.end(), [](const Json& e) {
                                  return e.is_number() || (e.is_array() && e.size() <= 2 &&
                                                           std::all_of(e.begin(), e.end(), [](const Json& x) {
                                                               return x.is_number();
                                                           }));
                              });
            out += '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += flat && indent >= 0 ? ", " : ",";
                first = false;
                if (!flat) newline(depth + 1);
                write_value(out, e, flat ? -1 : indent, depth + 1);
            }
            if (!flat) newline(depth);
            out += ']';
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                return;
            }
            char buf[64];
            // Integral values keep a ".0" so they re-parse as floats.
            if (v == std::floor(v) && std::abs(v) < 1e15) {
                std::snprintf(buf, sizeof buf, "%.1f", v);
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", v);
            }
            out += buf;
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

const Json& require_field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(where + ": missing field \"" + key + "\"");
    return j.at(key);
}

int require_int(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) throw FormatError(where + ": expected an integer");
    return j.get<int>();
}

}  // namespace

std::string dump_json(const Json& doc, int indent) {
    std::string out;
    write_value(out, doc, indent, 0);
    return out;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw FormatError(where + ": expected [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const ComplexMatrix& m, const std::string& label) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    Json j = {{"n", m.rows()}, {"form", "complex"}, {"entries", std::move(rows)}};
    if (!label.empty()) j["label"] = label;
    return j;
}

Json root_matrix_to_json(const RootMatrix& m, const std::string& label) {
    Json rows = Json::array();
    for (int i = 0; i < m.n; ++i) {
        Json row = Json::array();
        for (int k = 0; k < m.n; ++k) row.push_back(m.at(i, k));
        rows.push_back(std::move(row));
    }
    Json j = {{"n", m.n}, {"form", "roots"}, {"k", m.order}, {"exponents", std::move(rows)}};
    if (!label.empty()) j["label"] = label;
    return j;
}

MatrixRecord matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) throw FormatError(where + ": expected a matrix object");
    const int n = require_int(require_field(j, "n", where), where + ".n");
    if (n < 1) throw FormatError(where + ".n: must be positive");
    const Json& form = require_field(j, "form", where);
    if (!form.is_string()) throw FormatError(where + ".form: expected a string");
    MatrixRecord rec;
    if (j.contains("label")) {
        if (!j["label"].is_string()) throw FormatError(where + ".label: expected a string");
        rec.label = j["label"].get<std::string>();
    }
    if (j.contains("provenance")) rec.provenance = j["provenance"];
    const std::string f = form.get<std::string>();
    if (f == "complex") {
        const Json& rows = require_field(j, "entries", where);
        if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
            throw FormatError(where + ".entries: expected " + std::to_string(n) + " rows");
        }
        rec.matrix.resize(n, n);
        for (int r = 0; r < n; ++r) {
            const Json& row = rows[static_cast<std::size_t>(r)];
            const std::string rw = where + ".entries[" + std::to_string(r) + "]";
            if (!row.is_array() || static_cast<int>(row.size()) != n) {
                throw FormatError(rw + ": expected " + std::to_string(n) + " entries");
            }
            for (int c = 0; c < n; ++c) {
                rec.matrix(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]");
            }
        }
    } else if (f == "roots") {
        const int k = require_int(require_field(j, "k", where), where + ".k");
        if (k < 1) throw FormatError(where + ".k: must be positive");
        const Json& rows = require_field(j, "exponents", where);
        if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
            throw FormatError(where + ".exponents: expected " + std::to_string(n) + " rows");
        }
        std::vector<int> e;
        e.reserve(static_cast<std::size_t>(n * n));
        for (int r = 0; r < n; ++r) {
            const Json& row = rows[static_cast<std::size_t>(r)];
            const std::string rw = where + ".exponents[" + std::to_string(r) + "]";
            if (!row.is_array() || static_cast<int>(row.size()) != n) {
                throw FormatError(rw + ": expected " + std::to_string(n) + " entries");
            }
            for (int c = 0; c < n; ++c) e.push_back(require_int(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]"));
        }
        rec.roots = RootMatrix(n, k, std::move(e));
        rec.matrix = rec.roots->to_complex();
    } else {
        throw FormatError(where + ".form: unknown form \"" + f + "\"");
    }
    return rec;
}

std::string read_text(const std::string& path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw FormatError(source + ": invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

std::vector<MatrixRecord> parse_matrix_document(const std::string& text, const std::string& source) {
    const Json doc = parse_json_text(text, source);
    std::vector<MatrixRecord> out;
    auto from_array = [&](const Json& arr, const std::string& where) {
        for (std::size_t i = 0; i < arr.size(); ++i) {
            out.push_back(matrix_from_json(arr[i], where + "[" + std::to_string(i) + "]"));
        }
    };
    if (doc.is_array()) {
        from_array(doc, source);
    } else if (doc.is_object() && doc.contains("matrices") && doc["matrices"].is_array()) {
        from_array(doc["matrices"], source + ".matrices");
    } else if (doc.is_object() && doc.contains("bases") && doc["bases"].is_array()) {
        from_array(doc["bases"], source + ".bases");
    } else {
        out.push_back(matrix_from_json(doc, source));
    }
    return out;
}

std::vector<MatrixRecord> read_matrix_file(const std::string& path) {
    return parse_matrix_document(read_text(path), path == "-" ? "<stdin>" : path);
}

std::optional<RootMatrix> to_root_matrix(const ComplexMatrix& m, const std::vector<int>& candidates, double tol) {
    std::vector<int> ks = candidates;
    const int n = static_cast<int>(m.rows());
    if (ks.empty()) ks = {1, 2, 3, 4, 6, 8, 12, 24, n, 2 * n};
    std::sort(ks.begin(), ks.end());
    for (int k : ks) {
        try {
            return RootMatrix::from_complex(m, k, tol);
        } catch (const DomainError&) {
        }
    }
    return std::nullopt;
}

void write_text_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp);
        out << text;
        if (!out) throw Error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace mubs
