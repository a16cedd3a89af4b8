#include "mubs/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mubs/biunimodular.hpp"
#include "mubs/catalog.hpp"
#include "mubs/constructions.hpp"
#include "mubs/grassmann.hpp"
#include "mubs/io.hpp"
#include "mubs/optimize.hpp"
#include "mubs/search.hpp"

namespace mubs {

namespace {

struct Output {
    std::string path;
    std::string format = "auto";
};

struct Context {
    std::ostream& out;
    std::ostream& err;
    int threads = 1;
};

void emit(const Context& ctx, const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        ctx.out << text;
        ctx.out.flush();
    } else {
        write_text_atomic(path, text);
    }
}

Json matrix_json(const ComplexMatrix& m, const std::string& label, const std::string& format) {
    if (format == "complex") return matrix_to_json(m, label);
    const auto roots = to_root_matrix(m);
    if (roots) return root_matrix_to_json(*roots, label);
    if (format == "roots") throw InadmissibleParameter("matrix " + label + " has entries that are not roots of unity of a supported order");
    return matrix_to_json(m, label);
}

std::string document(const std::vector<Basis>& bases, const std::string& format) {
    if (bases.size() == 1) return dump_json(matrix_json(bases[0].matrix, bases[0].label, format), 2) + "\n";
    Json arr = Json::array();
    for (const auto& b : bases) arr.push_back(matrix_json(b.matrix, b.label, format));
    return dump_json(Json{{"bases", std::move(arr)}}, 2) + "\n";
}

struct LoadedBasis {
    Basis basis;
    std::optional<RootMatrix> roots;
    std::string where;
};

std::vector<LoadedBasis> load_all(const std::vector<std::string>& files) {
    std::vector<LoadedBasis> out;
    for (const auto& f : files) {
        const auto recs = read_matrix_file(f);
        for (std::size_t i = 0; i < recs.size(); ++i) {
            const std::string where = (f == "-" ? std::string("<stdin>") : f) + "#" + std::to_string(i);
            out.push_back({Basis(recs[i].matrix, recs[i].label.empty() ? where : recs[i].label), recs[i].roots, where});
        }
    }
    return out;
}

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string today_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[16];
    std::strftime(buf, sizeof buf, "%Y-%m-%d", &tm);
    return buf;
}

void add_output(CLI::App* app, Output& o, bool with_format = true) {
    app->add_option("-o,--output", o.path, "Output file (default: stdout)");
    if (with_format) {
        app->add_option("--format", o.format, "Matrix form: auto, roots or complex")
            ->check(CLI::IsMember({"auto", "roots", "complex"}));
    }
}

CensusResult read_census(const std::string& path) {
    const Json j = parse_json_text(read_text(path), path);
    return census_from_json(j, path);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mutually unbiased bases and complex Hadamard matrices", "mubs"};
    app.require_subcommand(1);
    Context ctx{out, err, static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))};
    app.add_option("--threads", ctx.threads, "Worker threads (default: available parallelism)")->check(CLI::PositiveNumber);

    std::vector<std::pair<CLI::App*, std::function<int()>>> handlers;
    const auto on = [&](CLI::App* sub, std::function<int()> fn) { handlers.emplace_back(sub, std::move(fn)); };

    // gen
    auto* gen = app.add_subcommand("gen", "Generate matrices and bases")->require_subcommand(1);
    Output gen_out;
    int gen_n = 6, gen_p = 3;
    double phi = 0.0, phi1 = 0.0, phi2 = 0.0, theta = kPi;
    bool transpose = false;
    std::string branch = "plus";
    {
        auto* s = gen->add_subcommand("fourier", "Fourier matrix F_N");
        s->add_option("--n", gen_n, "Dimension")->check(CLI::PositiveNumber);
        add_output(s, gen_out);
        on(s, [&] {
            emit(ctx, gen_out.path, document({fourier(gen_n)}, gen_out.format));
            return kExitOk;
        });
    }
    {
        auto* s = gen->add_subcommand("weyl", "Weyl shift X and clock Z");
        s->add_option("--n", gen_n, "Dimension")->check(CLI::PositiveNumber);
        add_output(s, gen_out, false);
        on(s, [&] {
            const WeylPair w = weyl_pair(gen_n);
            Json doc = {{"matrices", Json::array({matrix_to_json(w.x, "X"), matrix_to_json(w.z, "Z")})}};
            emit(ctx, gen_out.path, dump_json(doc, 2) + "\n");
            return kExitOk;
        });
    }
    {
        auto* s = gen->add_subcommand("prime-mubs", "Complete set of p + 1 MUBs for prime p");
        s->add_option("--p", gen_p, "Prime dimension")->required();
        add_output(s, gen_out);
        on(s, [&] {
            if (!is_prime(gen_p)) throw InadmissibleParameter(std::to_string(gen_p) + " is not prime");
            emit(ctx, gen_out.path, document(prime_mub_set(gen_p), gen_out.format));
            return kExitOk;
        });
    }
    {
        auto* s = gen->add_subcommand("h4", "H4(phi)");
        s->add_option("--phi", phi, "Phase");
        add_output(s, gen_out);
        on(s, [&] {
            emit(ctx, gen_out.path, document({Basis(h4(phi), "h4")}, gen_out.format));
            return kExitOk;
        });
    }
    {
        auto* s = gen->add_subcommand("f6", "F6(phi1, phi2)");
        s->add_option("--phi1", phi1, "First phase");
        s->add_option("--phi2", phi2, "Second phase");
        s->add_flag("--transpose", transpose, "Generate the transposed family");
        add_output(s, gen_out);
        on(s, [&] {
            const ComplexMatrix m = transpose ? f6_transpose(phi1, phi2) : f6(phi1, phi2);
            emit(ctx, gen_out.path, document({Basis(m, transpose ? "f6t" : "f6")}, gen_out.format));
            return kExitOk;
        });
    }
    {
        auto* s = gen->add_subcommand("bjorck", "Bjorck circulant matrix");
        add_output(s, gen_out);
        on(s, [&] {
            emit(ctx, gen_out.path, document({Basis(bjorck_c(), "bjorck")}, gen_out.format));
            return kExitOk;
        });
    }
    {
        auto* s = gen->add_subcommand("bn", "Beauchamp-Nicoara member at y = exp(i theta)");
        s->add_option("--theta", theta, "Phase of y");
        s->add_option("--branch", branch, "Square-root branch")->check(CLI::IsMember({"plus", "minus"}));
        add_output(s, gen_out);
        on(s, [&] {
            const auto bn = beauchamp_nicoara(std::polar(1.0, theta), branch == "plus" ? SqrtBranch::plus : SqrtBranch::minus);
            emit(ctx, gen_out.path, document({Basis(bn.matrix, "bn")}, gen_out.format));
            return kExitOk;
        });
    }
    {
        auto* s = gen->add_subcommand("real4", "Three real MUBs in dimension 4");
        add_output(s, gen_out, false);
        on(s, [&] {
            std::vector<Basis> bases;
            const auto set = real_mub_set_dim4();
            for (std::size_t i = 0; i < set.bases.size(); ++i) {
                bases.emplace_back(set.bases[i].cast<Complex>(), "real4-" + std::to_string(i));
            }
            emit(ctx, gen_out.path, document(bases, "complex"));
            return kExitOk;
        });
    }

    // convert
    std::string convert_file;
    {
        auto* s = app.add_subcommand("convert", "Re-serialize matrices");
        s->add_option("file", convert_file, "Input file or -")->required();
        add_output(s, gen_out);
        on(s, [&] {
            // With --format auto each matrix keeps the form it was read in.
            const std::string text = read_text(convert_file);
            const std::string source = convert_file == "-" ? "<stdin>" : convert_file;
            const auto recs = parse_matrix_document(text, source);
            const Json doc = parse_json_text(text, source);
            const std::string key = doc.is_object() && doc.contains("matrices") ? "matrices" : "bases";
            Json arr = Json::array();
            for (const auto& r : recs) {
                if (gen_out.format == "auto") {
                    arr.push_back(r.roots ? root_matrix_to_json(*r.roots, r.label) : matrix_to_json(r.matrix, r.label));
                } else {
                    arr.push_back(matrix_json(r.matrix, r.label, gen_out.format));
                }
            }
            emit(ctx, gen_out.path, dump_json(arr.size() == 1 ? arr[0] : Json{{key, arr}}, 2) + "\n");
            return kExitOk;
        });
    }

    // verify
    auto* verify = app.add_subcommand("verify", "Check Hadamard / unbiasedness properties")->require_subcommand(1);
    std::vector<std::string> vfiles;
    const Tolerance tol = Tolerance::from_env();
    {
        auto* s = verify->add_subcommand("hadamard", "Every matrix is a complex Hadamard matrix");
        s->add_option("files", vfiles, "Input files (- for stdin)")->required();
        on(s, [&] {
            bool ok = true;
            for (const auto& l : load_all(vfiles)) {
                const double d = hadamard_defect(l.basis.matrix);
                Json line = {{"matrix", l.where}, {"label", l.basis.label}, {"hadamard_defect", d}};
                bool pass = d <= tol.eq_tol;
                if (l.roots) {
                    const bool exact = is_hadamard_exact(*l.roots);
                    line["exact"] = exact;
                    pass = pass && exact;
                }
                line["pass"] = pass;
                ok = ok && pass;
                ctx.out << dump_json(line) << '\n';
            }
            return ok ? kExitOk : kExitCheckFailed;
        });
    }
    const auto pair_check = [&](bool all_pairs) {
        const auto bases = load_all(vfiles);
        if (bases.size() < 2) throw DomainError("need at least two bases");
        bool ok = true;
        for (std::size_t i = 0; i < bases.size(); ++i) {
            for (std::size_t j = i + 1; j < bases.size(); ++j) {
                if (!all_pairs && i > 0) break;
                Json line = {{"a", bases[i].basis.label}, {"b", bases[j].basis.label}};
                try {
                    const auto v = is_unbiased_pair(bases[i].basis, bases[j].basis, tol);
                    line["deviation"] = v.deviation;
                    line["pass"] = v.unbiased;
                    ok = ok && v.unbiased;
                } catch (const NotUnitaryError& e) {
                    line["error"] = e.what();
                    line["pass"] = false;
                    ok = false;
                }
                ctx.out << dump_json(line) << '\n';
            }
        }
        return ok ? kExitOk : kExitCheckFailed;
    };
    {
        auto* s = verify->add_subcommand("unbiased", "The first basis is unbiased to each of the others");
        s->add_option("files", vfiles, "Input files (- for stdin)")->required();
        on(s, [&] { return pair_check(false); });
    }
    {
        auto* s = verify->add_subcommand("mubset", "All bases are pairwise unbiased");
        s->add_option("files", vfiles, "Input files (- for stdin)")->required();
        on(s, [&] { return pair_check(true); });
    }

    // distance, table
    std::vector<std::string> dfiles;
    std::string csv_path;
    {
        auto* s = app.add_subcommand("distance", "Chordal distance D^2 between two bases");
        s->add_option("files", dfiles, "Two input files")->required()->expected(2);
        on(s, [&] {
            const auto a = load_all({dfiles[0]});
            const auto b = load_all({dfiles[1]});
            if (a.empty() || b.empty()) throw FormatError("empty input");
            const double d2 = chordal_distance_sq(basis_projector(a[0].basis, tol), basis_projector(b[0].basis, tol));
            const double d2o = chordal_distance_sq_overlap(a[0].basis, b[0].basis, tol);
            ctx.out << dump_json(Json{{"a", a[0].basis.label}, {"b", b[0].basis.label}, {"d2", d2}, {"d2_overlap", d2o}}) << '\n';
            return kExitOk;
        });
    }
    {
        auto* s = app.add_subcommand("table", "Pairwise distance table as CSV");
        s->add_option("files", dfiles, "Input files")->required();
        s->add_option("--csv", csv_path, "CSV output file (default: stdout)");
        on(s, [&] {
            std::vector<Basis> bases;
            std::vector<std::string> labels;
            for (auto& l : load_all(dfiles)) {
                labels.push_back(l.basis.label);
                bases.push_back(l.basis);
            }
            emit(ctx, csv_path, distance_table_csv(distance_table(bases, tol), labels));
            return kExitOk;
        });
    }

    // census, assemble, report
    auto* census = app.add_subcommand("census", "Biunimodular sequence census")->require_subcommand(1);
    Output census_out;
    int cn = 6, ck = 12, restarts = 20000, max_iter = 200;
    std::optional<std::uint64_t> seed;
    std::uint64_t budget = 0;
    const auto census_summary = [&](const CensusResult& c) {
        ctx.err << c.sequences.size() << " sequences (" << c.gaussian_count() << " gaussian), status " << to_string(c.status)
                << '\n';
        return c.status == CensusStatus::complete ? kExitOk : kExitCheckFailed;
    };
    {
        auto* s = census->add_subcommand("newton", "Multi-start Newton census");
        s->add_option("--n", cn, "Dimension");
        s->add_option("--restarts", restarts, "Number of starts")->check(CLI::PositiveNumber);
        s->add_option("--seed", seed, "Seed (default: drawn from entropy and recorded)");
        s->add_option("--max-iterations", max_iter, "Newton iterations per start");
        add_output(s, census_out, false);
        on(s, [&] {
            NewtonSettings ns;
            ns.restarts = restarts;
            ns.seed = seed ? *seed : entropy_seed();
            ns.max_iterations = max_iter;
            ns.threads = ctx.threads;
            ns.tol = tol;
            const auto c = newton_census(cn, ns);
            emit(ctx, census_out.path, dump_json(census_to_json(c), 2) + "\n");
            return census_summary(c);
        });
    }
    {
        auto* s = census->add_subcommand("roots", "Exact census over k-th roots");
        s->add_option("--n", cn, "Dimension");
        s->add_option("--k", ck, "Root order");
        s->add_option("--budget", budget, "Candidate limit (default 1e8)");
        add_output(s, census_out, false);
        on(s, [&] {
            const auto c = root_census(cn, ck, budget == 0 ? 100'000'000 : budget);
            emit(ctx, census_out.path, dump_json(census_to_json(c), 2) + "\n");
            return census_summary(c);
        });
    }
    std::string census_file;
    {
        auto* s = app.add_subcommand("assemble", "Assemble the candidate bases of a census");
        s->add_option("census", census_file, "Census JSON")->required();
        add_output(s, census_out, false);
        on(s, [&] {
            const auto a = assemble_bases(read_census(census_file));
            emit(ctx, census_out.path, dump_json(census_to_json(a), 2) + "\n");
            ctx.err << a.bases.size() << " bases assembled\n";
            return kExitOk;
        });
    }
    {
        auto* s = app.add_subcommand("report", "Distance geometry of the assembled bases");
        s->add_option("census", census_file, "Census JSON (assembled or not)")->required();
        s->add_option("--csv", csv_path, "Write the distance table here");
        on(s, [&] {
            CensusResult c = read_census(census_file);
            if (c.bases.empty()) c = assemble_bases(c);
            const auto rep = census_distance_report(c);
            if (!csv_path.empty()) write_text_atomic(csv_path, distance_table_csv(rep.table, rep.labels));
            std::vector<std::string> lines;
            std::istringstream ss(rep.summary);
            for (std::string l; std::getline(ss, l);) lines.push_back(l);
            const auto stat = [](const RangeStat& r) { return Json{{"min", r.min}, {"max", r.max}, {"pairs", r.count}}; };
            Json j = {{"summary", lines},
                      {"gaussian_side", stat(rep.gaussian_side)},
                      {"gaussian_diagonal", stat(rep.gaussian_diagonal)},
                      {"gaussian_to_sixplet", stat(rep.gaussian_to_other)},
                      {"sixplet_to_sixplet", stat(rep.sixplet_cross)},
                      {"within_sixplets", stat(rep.within_sixplets)},
                      {"sixplets_isometric", rep.sixplets_isometric},
                      {"global_max", rep.global_max}};
            ctx.out << dump_json(j, 2) << '\n';
            ctx.err << rep.summary;
            return kExitOk;
        });
    }

    // search
    auto* search = app.add_subcommand("search", "Exact root-restricted searches")->require_subcommand(1);
    int sn = 6, sk = 12;
    std::string resume, checkpoint, search_out;
    for (const char* depth : {"hadamards", "triplets", "quartets"}) {
        auto* s = search->add_subcommand(depth, std::string("Search for ") + depth);
        s->add_option("--n", sn, "Dimension");
        s->add_option("--k", sk, "Root order");
        s->add_option("--budget", budget, "Search-node limit for this run (0: none)");
        s->add_option("--resume", resume, "Resume token (checkpoint path) from an earlier run");
        s->add_option("--checkpoint", checkpoint, "Checkpoint file to write");
        s->add_option("-o,--output", search_out, "JSON-lines output (default: stdout)");
        const std::string d = depth;
        on(s, [&, d] {
            SearchSpec spec;
            spec.n = sn;
            spec.k = sk;
            spec.depth = search_depth_from_string(d);
            spec.budget = budget;
            spec.threads = ctx.threads;
            if (!resume.empty()) spec.resume_token = resume;
            if (!checkpoint.empty()) {
                spec.checkpoint_path = checkpoint;
            } else if (!resume.empty()) {
                spec.checkpoint_path = resume;
            } else if (budget > 0) {
                spec.checkpoint_path = "mubs-search-" + d + "-n" + std::to_string(sn) + "-k" + std::to_string(sk) + ".checkpoint.json";
            }
            const auto r = run_search(spec);
            emit(ctx, search_out, search_jsonl(r));
            ctx.err << d << " n=" << sn << " k=" << sk << ": " << r.verdict() << ", " << r.items.size() << " results, "
                    << r.units_completed << "/" << r.units_total << " units\n";
            if (!r.complete) {
                if (r.resume_token) ctx.err << "budget exhausted; resume with --resume " << *r.resume_token << '\n';
                return kExitBudget;
            }
            return kExitOk;
        });
    }

    // optimize, scan
    int on_n = 3, on_m = 4, seeds = 20, iterations = 2000;
    std::string opt_out;
    {
        auto* s = app.add_subcommand("optimize", "Maximize the spread of m bases");
        s->add_option("--n", on_n, "Dimension");
        s->add_option("--m", on_m, "Number of bases");
        s->add_option("--seeds", seeds, "Number of starts")->check(CLI::PositiveNumber);
        s->add_option("--seed", seed, "First seed (default: drawn from entropy and recorded)");
        s->add_option("--iterations", iterations, "Accepted steps per start");
        s->add_option("-o,--output", opt_out, "Report JSON (default: stdout)");
        on(s, [&] {
            SpreadSettings ss;
            ss.n = on_n;
            ss.m = on_m;
            ss.seed = seed ? *seed : entropy_seed();
            ss.iterations = iterations;
            const auto rep = multistart_spread(ss, seeds, ctx.threads);
            emit(ctx, opt_out, dump_json(rep.to_json(), 2) + "\n");
            ctx.err << "best F = " << rep.runs[rep.best].f << " of bound " << rep.upper_bound << '\n';
            return kExitOk;
        });
    }
    ScanSettings scan;
    std::vector<std::string> against_files;
    auto* scan_cmd = app.add_subcommand("scan", "Scan a catalog family")->require_subcommand(1);
    for (const char* fam : {"h4", "f6", "bn"}) {
        auto* s = scan_cmd->add_subcommand(fam, std::string("Scan ") + fam);
        s->add_option("--grid", scan.points, "Grid points (per axis for f6)")->check(CLI::PositiveNumber);
        s->add_option("--m", scan.m, "Extension target size (default N + 1)");
        s->add_option("--restarts", scan.restarts, "Extension starts per point (0: skip)");
        s->add_option("--iterations", scan.iterations, "Ascent steps per start");
        s->add_option("--seed", scan.seed, "Seed (default 1)");
        s->add_option("--branch", branch, "bn square-root branch")->check(CLI::IsMember({"plus", "minus"}));
        s->add_option("--against", against_files, "Reference bases (default: standard)");
        s->add_option("--csv", csv_path, "CSV output (default: stdout)");
        const std::string f = fam;
        on(s, [&, f] {
            const Family family = f == "h4" ? Family::H4 : f == "f6" ? Family::F6 : Family::BN;
            const int n = family == Family::H4 ? 4 : 6;
            std::vector<Basis> against{Basis(Basis::standard(n).matrix, "standard")};
            for (auto& l : load_all(against_files)) against.push_back(l.basis);
            scan.bn_branch = branch == "plus" ? SqrtBranch::plus : SqrtBranch::minus;
            scan.threads = ctx.threads;
            const auto res = scan_family(family, against, scan);
            emit(ctx, csv_path, res.csv());
            int gaps = 0, wins = 0;
            for (const auto& r : res.rows) {
                gaps += r.admissible ? 0 : 1;
                wins += r.success ? 1 : 0;
            }
            ctx.err << res.rows.size() << " points, " << gaps << " inadmissible, " << wins << " reach F = " << res.target << '\n';
            return kExitOk;
        });
    }

    // ks-check, fixtures
    bool single = false;
    {
        auto* s = app.add_subcommand("ks-check", "Kochen-Specker colouring check on 24-cell rays");
        s->add_flag("--single", single, "Use one 24-cell instead of the dual pair");
        on(s, [&] {
            const auto vecs = single ? real_mub_set_dim4().cell24_vertices : dual_pair_cell24_vertices();
            const auto r = ks_uncolourable(vecs);
            Json tetrads = Json::array();
            for (const auto& t : r.tetrads) tetrads.push_back(Json::array({t[0], t[1], t[2], t[3]}));
            Json j = {{"vectors", vecs.size()}, {"rays", r.rays.size()}, {"tetrads", tetrads.size()},
                      {"uncolourable", r.uncolourable}, {"nodes", r.nodes}, {"tetrad_list", std::move(tetrads)}};
            if (r.colouring) j["colouring"] = *r.colouring;
            ctx.out << dump_json(j) << '\n';
            return r.uncolourable ? kExitOk : kExitCheckFailed;
        });
    }
    std::string out_dir = "data/fixtures", date;
    {
        auto* s = app.add_subcommand("fixtures", "Regenerate the S and DITA0 fixtures by search");
        s->add_option("--out-dir", out_dir, "Target directory");
        s->add_option("--date", date, "Date recorded in the provenance (default: today, UTC)");
        on(s, [&] {
            std::filesystem::create_directories(out_dir);
            for (const auto& [name, doc] : generate_fixture_documents(date.empty() ? today_utc() : date)) {
                const auto path = (std::filesystem::path(out_dir) / (name + ".json")).string();
                write_text_atomic(path, dump_json(doc, 2) + "\n");
                load_fixture(name, out_dir);
                ctx.err << "wrote " << path << '\n';
            }
            return kExitOk;
        });
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }
    try {
        for (auto it = handlers.rbegin(); it != handlers.rend(); ++it) {
            if (it->first->parsed()) return it->second();
        }
        err << app.help();
        return kExitError;
    } catch (const FormatError& e) {
        err << "mubs: format error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const FixtureError& e) {
        err << "mubs: fixture error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const InadmissibleParameter& e) {
        err << "mubs: " << e.what() << '\n';
        return kExitInadmissible;
    } catch (const BudgetExceeded& e) {
        err << "mubs: budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::exception& e) {
        err << "mubs: error: " << e.what() << '\n';
        return kExitError;
    }
}

}  // namespace mubs
