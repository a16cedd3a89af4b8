#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mubs/biunimodular.hpp"
#include "mubs/catalog.hpp"
#include "mubs/cli.hpp"
#include "mubs/constructions.hpp"
#include "mubs/grassmann.hpp"
#include "mubs/optimize.hpp"
#include "mubs/search.hpp"

namespace py = pybind11;
using namespace mubs;

namespace {

std::vector<Basis> as_bases(const std::vector<ComplexMatrix>& ms) {
    std::vector<Basis> out;
    for (std::size_t i = 0; i < ms.size(); ++i) out.emplace_back(ms[i], "b" + std::to_string(i));
    return out;
}

std::vector<ComplexMatrix> matrices(const std::vector<Basis>& bs) {
    std::vector<ComplexMatrix> out;
    for (const auto& b : bs) out.push_back(b.matrix);
    return out;
}

}  // namespace

PYBIND11_MODULE(_mubs, m) {
    m.doc() = "Mutually unbiased bases, complex Hadamard matrices and the N = 6 census";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<NotUnitaryError>(m, "NotUnitaryError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<InadmissibleParameter>(m, "InadmissibleParameter", PyExc_ValueError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<FixtureError>(m, "FixtureError", PyExc_RuntimeError);

    m.def("fourier", [](int n) { return fourier(n).matrix; }, py::arg("n"));
    m.def("prime_mub_set", [](int p) { return matrices(prime_mub_set(p)); }, py::arg("p"));
    m.def("hadamard_defect", &hadamard_defect, py::arg("m"));
    m.def("is_complex_hadamard", [](const ComplexMatrix& a, double tol) { return is_complex_hadamard(a, {tol, 1e-6}); },
          py::arg("m"), py::arg("tol") = 1e-10);
    m.def(
        "unbiased_deviation",
        [](const ComplexMatrix& a, const ComplexMatrix& b) { return is_unbiased_pair(Basis(a), Basis(b)).deviation; },
        py::arg("a"), py::arg("b"));
    m.def("dephase", [](const ComplexMatrix& a) { return dephase(a); }, py::arg("m"));
    m.def("haagerup_phases", [](const ComplexMatrix& a) { return haagerup_invariants(a).phases(); }, py::arg("m"));
    m.def(
        "equivalent",
        [](const ComplexMatrix& a, const ComplexMatrix& b) { return std::string(to_string(equivalent_heuristic(a, b))); },
        py::arg("a"), py::arg("b"));

    m.def("h4", &h4, py::arg("phi"));
    m.def("f6", &f6, py::arg("phi1"), py::arg("phi2"));
    m.def("f6_transpose", &f6_transpose, py::arg("phi1"), py::arg("phi2"));
    m.def("bjorck_d", &bjorck_d);
    m.def("bjorck_c", &bjorck_c);
    m.def(
        "beauchamp_nicoara",
        [](double theta, const std::string& branch) {
            return beauchamp_nicoara(std::polar(1.0, theta), branch == "minus" ? SqrtBranch::minus : SqrtBranch::plus).matrix;
        },
        py::arg("theta"), py::arg("branch") = "plus");
    m.def("load_fixture", [](const std::string& name) { return load_fixture(name).matrix; }, py::arg("name"));

    m.def(
        "chordal_distance_sq",
        [](const ComplexMatrix& a, const ComplexMatrix& b) {
            return chordal_distance_sq(basis_projector(Basis(a)), basis_projector(Basis(b)));
        },
        py::arg("a"), py::arg("b"));
    m.def("distance_table", [](const std::vector<ComplexMatrix>& ms) { return distance_table(as_bases(ms)); }, py::arg("bases"));
    m.def("spread", [](const std::vector<ComplexMatrix>& ms) { return spread_objective(as_bases(ms)); }, py::arg("bases"));

    m.def("dft", &dft, py::arg("x"));
    m.def("autocorrelation", &autocorrelation, py::arg("x"));
    m.def(
        "newton_census_json",
        [](int n, int restarts, std::uint64_t seed) {
            NewtonSettings s;
            s.restarts = restarts;
            s.seed = seed;
            py::gil_scoped_release release;
            return dump_json(census_to_json(newton_census(n, s)));
        },
        py::arg("n"), py::arg("restarts") = 20000, py::arg("seed") = 1);
    m.def(
        "root_census_json", [](int n, int k) { return dump_json(census_to_json(root_census(n, k))); }, py::arg("n"),
        py::arg("k"));
    m.def(
        "assemble_json",
        [](const std::string& census) {
            return dump_json(census_to_json(assemble_bases(census_from_json(parse_json_text(census, "census"), "census"))));
        },
        py::arg("census"));
    m.def(
        "report_summary",
        [](const std::string& census) {
            CensusResult c = census_from_json(parse_json_text(census, "census"), "census");
            if (c.bases.empty()) c = assemble_bases(c);
            return census_distance_report(c).summary;
        },
        py::arg("census"));

    m.def(
        "search_jsonl",
        [](const std::string& depth, int n, int k, std::uint64_t budget) {
            SearchSpec s;
            s.n = n;
            s.k = k;
            s.depth = search_depth_from_string(depth);
            s.budget = budget;
            py::gil_scoped_release release;
            return search_jsonl(run_search(s));
        },
        py::arg("depth"), py::arg("n"), py::arg("k"), py::arg("budget") = 0);

    m.def(
        "maximize_spread",
        [](int n, int mm, std::uint64_t seed, int iterations, const std::vector<ComplexMatrix>& frozen) {
            SpreadSettings s;
            s.n = n;
            s.m = mm;
            s.seed = seed;
            s.iterations = iterations;
            s.frozen = frozen;
            const SpreadResult r = maximize_spread(s);
            return py::make_tuple(r.f, matrices(r.bases), r.trace);
        },
        py::arg("n"), py::arg("m"), py::arg("seed") = 1, py::arg("iterations") = 2000,
        py::arg("frozen") = std::vector<ComplexMatrix>{});

    m.def("ks_uncolourable_dual_pair", [] { return ks_uncolourable(dual_pair_cell24_vertices()).uncolourable; });

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
