#include "mubs/search.hpp"

#include <algorithm>
#include <bit>
#include <filesystem>
#include <functional>
#include <limits>
#include <thread>

#include "mubs/biunimodular.hpp"

namespace mubs {

namespace {

constexpr std::uint64_t kEnumerationLimit = 100'000'000;
constexpr std::uint64_t kUnlimited = std::numeric_limits<std::uint64_t>::max();

// Square adjacency relation stored as rows of 64-bit words.
struct BitGraph {
    std::size_t size = 0;
    std::size_t words = 0;
    std::vector<std::uint64_t> rows;

    explicit BitGraph(std::size_t n = 0) : size(n), words((n + 63) / 64), rows(size * words, 0) {}
    std::uint64_t* row(std::size_t i) { return rows.data() + i * words; }
    const std::uint64_t* row(std::size_t i) const { return rows.data() + i * words; }
    void set(std::size_t i, std::size_t j) { row(i)[j / 64] |= std::uint64_t{1} << (j % 64); }
};

std::size_t popcount(const std::vector<std::uint64_t>& b) {
    std::size_t c = 0;
    for (auto w : b) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

// Enumerates cliques of size `need` inside `cand`, members increasing.
class CliqueWalker {
public:
    CliqueWalker(const BitGraph& g, std::uint64_t cap, std::function<void(const std::vector<int>&)> emit)
        : g_(g), cap_(cap), emit_(std::move(emit)) {}

    void run(std::vector<int> prefix, const std::vector<std::uint64_t>& cand, int need) {
        current_ = std::move(prefix);
        walk(cand, need);
    }
    std::uint64_t nodes() const { return nodes_; }
    bool aborted() const { return aborted_; }

private:
    void walk(const std::vector<std::uint64_t>& cand, int need) {
        if (aborted_) return;
        if (++nodes_ > cap_) {
            aborted_ = true;
            return;
        }
        if (need == 0) {
            emit_(current_);
            return;
        }
        if (static_cast<int>(popcount(cand)) < need) return;
        std::vector<std::uint64_t> next(cand.size());
        for (std::size_t w = 0; w < cand.size(); ++w) {
            std::uint64_t bits = cand[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                bits &= bits - 1;
                const std::size_t v = w * 64 + static_cast<std::size_t>(b);
                const std::uint64_t* r = g_.row(v);
                for (std::size_t x = 0; x < cand.size(); ++x) {
                    std::uint64_t keep = cand[x] & r[x];
                    if (x < w) keep = 0;
                    if (x == w) keep &= (b == 63) ? 0 : (~std::uint64_t{0} << (b + 1));
                    next[x] = keep;
                }
                current_.push_back(static_cast<int>(v));
                walk(next, need - 1);
                current_.pop_back();
                if (aborted_) return;
            }
        }
    }

    const BitGraph& g_;
    std::uint64_t cap_;
    std::function<void(const std::vector<int>&)> emit_;
    std::vector<int> current_;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
};

struct Candidates {
    int n = 0, k = 0;
    std::vector<int> orth;      // dephased vectors orthogonal to all-ones, n ints each
    std::vector<int> unbiased;  // dephased vectors unbiased to all-ones
    BitGraph orth_graph;        // exact orthogonality among `orth`
    // Row i: bits over `unbiased` of vectors unbiased to orth[i].
    std::vector<std::uint64_t> unbiased_to;
    std::size_t unbiased_words = 0;

    std::size_t orth_count() const { return orth.size() / static_cast<std::size_t>(n); }
    std::size_t unbiased_count() const { return unbiased.size() / static_cast<std::size_t>(n); }
    std::span<const int> o(std::size_t i) const { return {orth.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)}; }
    std::span<const int> u(std::size_t i) const {
        return {unbiased.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
    }
};

std::uint64_t candidate_space(int n, int k) {
    std::uint64_t total = 1;
    for (int i = 0; i < n - 1; ++i) {
        total *= static_cast<std::uint64_t>(k);
        if (total > kEnumerationLimit) return kEnumerationLimit + 1;
    }
    return total;
}

Candidates build_candidates(int n, int k, bool with_unbiased, int threads) {
    Candidates c;
    c.n = n;
    c.k = k;
    const ExactRootTester t(k);
    const std::vector<int> ones(static_cast<std::size_t>(n), 0);
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    const std::uint64_t total = candidate_space(n, k);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        if (t.orthogonal(ones, digits)) c.orth.insert(c.orth.end(), digits.begin(), digits.end());
        if (with_unbiased && t.unbiased(ones, digits)) c.unbiased.insert(c.unbiased.end(), digits.begin(), digits.end());
        for (int p = n - 1; p >= 1; --p) {
            if (++digits[static_cast<std::size_t>(p)] < k) break;
            digits[static_cast<std::size_t>(p)] = 0;
        }
    }
    const std::size_t no = c.orth_count();
    c.orth_graph = BitGraph(no);
    const std::size_t nu = c.unbiased_count();
    c.unbiased_words = (nu + 63) / 64;
    if (with_unbiased) c.unbiased_to.assign(no * c.unbiased_words, 0);

    // Rows are independent, so threads split them without sharing writes
    // (orthogonality is filled for j > i and mirrored afterwards).
    const auto fill = [&](std::size_t lo, std::size_t step) {
        for (std::size_t i = lo; i < no; i += step) {
            for (std::size_t j = i + 1; j < no; ++j) {
                if (t.orthogonal(c.o(i), c.o(j))) c.orth_graph.set(i, j);
            }
            if (!with_unbiased) continue;
            std::uint64_t* row = c.unbiased_to.data() + i * c.unbiased_words;
            for (std::size_t j = 0; j < nu; ++j) {
                if (t.unbiased(c.o(i), c.u(j))) row[j / 64] |= std::uint64_t{1} << (j % 64);
            }
        }
    };
    const int nt = std::max(1, threads);
    if (nt == 1) {
        fill(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nt; ++w) pool.emplace_back(fill, static_cast<std::size_t>(w), static_cast<std::size_t>(nt));
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < no; ++i) {
        for (std::size_t j = i + 1; j < no; ++j) {
            if (c.orth_graph.row(i)[j / 64] >> (j % 64) & 1) c.orth_graph.set(j, i);
        }
    }
    return c;
}

struct UnitOutcome {
    std::uint64_t nodes = 0;
    bool aborted = false;
    std::vector<std::vector<int>> items;
};

UnitOutcome hadamard_unit(const Candidates& c, std::size_t u, std::uint64_t cap) {
    UnitOutcome out;
    std::vector<std::uint64_t> cand(c.orth_graph.words, 0);
    const std::uint64_t* r = c.orth_graph.row(u);
    for (std::size_t w = 0; w < cand.size(); ++w) cand[w] = r[w];
    for (std::size_t j = 0; j <= u; ++j) cand[j / 64] &= ~(std::uint64_t{1} << (j % 64));
    CliqueWalker walker(c.orth_graph, cap, [&](const std::vector<int>& cl) { out.items.push_back(cl); });
    walker.run({static_cast<int>(u)}, cand, c.n - 2);
    out.nodes = walker.nodes();
    out.aborted = walker.aborted();
    return out;
}

// Columns of H2 candidates for one H1, with their exact orthogonality graph.
struct LocalPool {
    std::vector<int> members;  // indices into unbiased candidates
    BitGraph graph;
};

LocalPool unbiased_pool(const Candidates& c, const std::vector<int>& h1_cols) {
    std::vector<std::uint64_t> acc(c.unbiased_words, ~std::uint64_t{0});
    for (int col : h1_cols) {
        const std::uint64_t* row = c.unbiased_to.data() + static_cast<std::size_t>(col) * c.unbiased_words;
        for (std::size_t w = 0; w < acc.size(); ++w) acc[w] &= row[w];
    }
    LocalPool p;
    for (std::size_t j = 0; j < c.unbiased_count(); ++j) {
        if (acc[j / 64] >> (j % 64) & 1) p.members.push_back(static_cast<int>(j));
    }
    const ExactRootTester t(c.k);
    p.graph = BitGraph(p.members.size());
    for (std::size_t a = 0; a < p.members.size(); ++a) {
        for (std::size_t b = a + 1; b < p.members.size(); ++b) {
            if (t.orthogonal(c.u(static_cast<std::size_t>(p.members[a])), c.u(static_cast<std::size_t>(p.members[b])))) {
                p.graph.set(a, b);
                p.graph.set(b, a);
            }
        }
    }
    return p;
}

UnitOutcome extension_unit(const Candidates& c, const std::vector<int>& h1_cols, int h1_index, bool quartets,
                           std::uint64_t cap) {
    UnitOutcome out;
    out.nodes = 1;
    const LocalPool p = unbiased_pool(c, h1_cols);
    std::vector<std::vector<int>> cliques;
    std::vector<std::uint64_t> all(p.graph.words, 0);
    for (std::size_t j = 0; j < p.members.size(); ++j) all[j / 64] |= std::uint64_t{1} << (j % 64);
    CliqueWalker walker(p.graph, cap - std::min(cap, out.nodes), [&](const std::vector<int>& cl) { cliques.push_back(cl); });
    walker.run({}, all, c.n);
    out.nodes += walker.nodes();
    if (walker.aborted()) {
        out.aborted = true;
        return out;
    }
    const auto global = [&](const std::vector<int>& cl) {
        std::vector<int> g;
        for (int v : cl) g.push_back(p.members[static_cast<std::size_t>(v)]);
        return g;
    };
    if (!quartets) {
        for (const auto& cl : cliques) {
            std::vector<int> item{h1_index};
            const auto g = global(cl);
            item.insert(item.end(), g.begin(), g.end());
            out.items.push_back(std::move(item));
        }
        return out;
    }
    const ExactRootTester t(c.k);
    for (std::size_t a = 0; a < cliques.size(); ++a) {
        const auto ga = global(cliques[a]);
        for (std::size_t b = a + 1; b < cliques.size(); ++b) {
            if (++out.nodes > cap) {
                out.aborted = true;
                return out;
            }
            const auto gb = global(cliques[b]);
            bool ok = true;
            for (int x : ga) {
                for (int y : gb) {
                    if (!t.unbiased(c.u(static_cast<std::size_t>(x)), c.u(static_cast<std::size_t>(y)))) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
            if (!ok) continue;
            std::vector<int> item{h1_index};
            item.insert(item.end(), ga.begin(), ga.end());
            item.insert(item.end(), gb.begin(), gb.end());
            out.items.push_back(std::move(item));
        }
    }
    return out;
}

RootMatrix hadamard_from(const Candidates& c, const std::vector<int>& cols) {
    std::vector<RootVector> v;
    v.emplace_back(c.k, std::vector<int>(static_cast<std::size_t>(c.n), 0));
    for (int i : cols) {
        const auto s = c.o(static_cast<std::size_t>(i));
        v.emplace_back(c.k, std::vector<int>(s.begin(), s.end()));
    }
    return RootMatrix::from_columns(c.k, v);
}

RootMatrix unbiased_matrix_from(const Candidates& c, std::span<const int> cols) {
    std::vector<RootVector> v;
    for (int i : cols) {
        const auto s = c.u(static_cast<std::size_t>(i));
        v.emplace_back(c.k, std::vector<int>(s.begin(), s.end()));
    }
    return RootMatrix::from_columns(c.k, v);
}

std::vector<std::vector<int>> all_hadamard_items(const Candidates& c) {
    std::vector<std::vector<int>> items;
    for (std::size_t u = 0; u < c.orth_count(); ++u) {
        auto o = hadamard_unit(c, u, kUnlimited);
        for (auto& it : o.items) items.push_back(std::move(it));
    }
    return items;
}

void fill_buckets(SearchResult& r) {
    std::vector<HaagerupSet> reps;
    for (const auto& h : r.hadamards) {
        const HaagerupSet s = haagerup_invariants(h.to_complex());
        int found = -1;
        for (std::size_t b = 0; b < reps.size(); ++b) {
            if (reps[b].matches(s)) {
                found = static_cast<int>(b);
                break;
            }
        }
        if (found < 0) {
            found = static_cast<int>(reps.size());
            reps.push_back(s);
        }
        r.buckets.push_back(found);
    }
}

Json spec_to_json(const SearchSpec& s) {
    return {{"n", s.n}, {"k", s.k}, {"depth", to_string(s.depth)}, {"budget", s.budget}};
}

}  // namespace

std::vector<RootVector> unbiased_vector_enumerate(int n, int k, std::uint64_t budget) {
    return enumerate_biunimodular_roots(n, k, budget);
}

const char* to_string(SearchDepth d) {
    switch (d) {
        case SearchDepth::hadamards: return "hadamards";
        case SearchDepth::triplets: return "triplets";
        case SearchDepth::quartets: return "quartets";
    }
    return "?";
}

SearchDepth search_depth_from_string(const std::string& s) {
    if (s == "hadamards") return SearchDepth::hadamards;
    if (s == "triplets") return SearchDepth::triplets;
    if (s == "quartets") return SearchDepth::quartets;
    throw DomainError("unknown search depth \"" + s + "\"");
}

void SearchSpec::validate() const {
    if (n < 2) throw DomainError("search needs N >= 2");
    if (k < 1) throw DomainError("search needs k >= 1");
    if (threads < 1) throw DomainError("threads must be positive");
    if (candidate_space(n, k) > kEnumerationLimit) {
        throw BudgetExceeded("k^(N-1) = " + std::to_string(k) + "^" + std::to_string(n - 1) +
                             " candidate columns exceed the enumeration limit");
    }
}

std::string SearchResult::verdict() const {
    if (spec.depth != SearchDepth::quartets) return complete ? "complete" : "incomplete";
    if (!quartets.empty()) return "non-empty";
    return complete ? "empty" : "inconclusive";
}

std::size_t SearchResult::bucket_count() const {
    return buckets.empty() ? 0 : static_cast<std::size_t>(*std::max_element(buckets.begin(), buckets.end())) + 1;
}

SearchResult run_search(const SearchSpec& spec) {
    spec.validate();
    const bool extend = spec.depth != SearchDepth::hadamards;
    const Candidates c = build_candidates(spec.n, spec.k, extend, spec.threads);

    SearchResult r;
    r.spec = spec;
    r.orthogonal_candidates = c.orth_count();
    r.unbiased_candidates = c.unbiased_count();

    std::vector<std::vector<int>> h1_list;
    if (extend) h1_list = all_hadamard_items(c);
    const std::size_t total = extend ? h1_list.size() : c.orth_count();
    r.units_total = total;

    std::vector<char> done(total, 0);
    std::vector<SearchItem> items;
    if (spec.resume_token) {
        const Checkpoint ck = Checkpoint::load(*spec.resume_token);
        if (ck.spec.n != spec.n || ck.spec.k != spec.k || ck.spec.depth != spec.depth) {
            throw FormatError(*spec.resume_token + ": checkpoint was written for a different search");
        }
        for (int u : ck.completed_units) {
            if (u < 0 || static_cast<std::size_t>(u) >= total) throw FormatError(*spec.resume_token + ": unit index out of range");
            done[static_cast<std::size_t>(u)] = 1;
        }
        items = ck.items;
    }

    const auto run_unit = [&](std::size_t u, std::uint64_t cap) {
        if (!extend) return hadamard_unit(c, u, cap);
        return extension_unit(c, h1_list[u], static_cast<int>(u), spec.depth == SearchDepth::quartets, cap);
    };

    std::vector<std::size_t> pending;
    for (std::size_t u = 0; u < total; ++u) {
        if (!done[u]) pending.push_back(u);
    }
    const std::uint64_t budget = spec.budget == 0 ? kUnlimited : spec.budget;
    const auto save = [&] {
        if (!spec.checkpoint_path) return;
        Checkpoint ck;
        ck.spec = spec;
        for (std::size_t u = 0; u < total; ++u) {
            if (done[u]) ck.completed_units.push_back(static_cast<int>(u));
        }
        ck.items = items;
        ck.counts = {{"items", items.size()}, {"nodes", r.nodes}, {"units_total", total}};
        ck.save(*spec.checkpoint_path);
    };

    // Units in a batch run concurrently with the budget left at the batch
    // start; acceptance is decided afterwards in unit order, so the outcome
    // does not depend on the thread count.
    const std::size_t batch = spec.threads == 1 ? 1 : static_cast<std::size_t>(spec.threads) * 4;
    bool exhausted = false;
    std::size_t since_save = 0;
    for (std::size_t start = 0; start < pending.size() && !exhausted; start += batch) {
        const std::size_t end = std::min(pending.size(), start + batch);
        const std::uint64_t cap = budget - r.nodes;
        std::vector<UnitOutcome> outs(end - start);
        if (end - start == 1) {
            outs[0] = run_unit(pending[start], cap);
        } else {
            std::vector<std::thread> pool;
            const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(spec.threads), end - start);
            for (std::size_t t = 0; t < nt; ++t) {
                pool.emplace_back([&, t] {
                    for (std::size_t i = t; i < end - start; i += nt) outs[i] = run_unit(pending[start + i], cap);
                });
            }
            for (auto& th : pool) th.join();
        }
        for (std::size_t i = 0; i < outs.size(); ++i) {
            auto& o = outs[i];
            if (o.aborted || o.nodes > budget - r.nodes) {
                exhausted = true;
                break;
            }
            r.nodes += o.nodes;
            const std::size_t u = pending[start + i];
            done[u] = 1;
            for (auto& it : o.items) items.push_back({static_cast<int>(u), std::move(it)});
            if (++since_save >= 256) {
                save();
                since_save = 0;
            }
        }
    }
    std::stable_sort(items.begin(), items.end(), [](const SearchItem& a, const SearchItem& b) { return a.unit < b.unit; });
    r.units_completed = static_cast<std::size_t>(std::count(done.begin(), done.end(), 1));
    r.complete = r.units_completed == total;
    save();
    if (!r.complete && spec.checkpoint_path) r.resume_token = spec.checkpoint_path;

    const std::size_t n = static_cast<std::size_t>(spec.n);
    for (const auto& it : items) {
        const auto& ix = it.indices;
        switch (spec.depth) {
            case SearchDepth::hadamards:
                r.hadamards.push_back(hadamard_from(c, ix));
                break;
            case SearchDepth::triplets:
                r.triplets.push_back({hadamard_from(c, h1_list[static_cast<std::size_t>(ix[0])]),
                                      unbiased_matrix_from(c, std::span<const int>(ix).subspan(1, n))});
                break;
            case SearchDepth::quartets:
                r.quartets.push_back({hadamard_from(c, h1_list[static_cast<std::size_t>(ix[0])]),
                                      unbiased_matrix_from(c, std::span<const int>(ix).subspan(1, n)),
                                      unbiased_matrix_from(c, std::span<const int>(ix).subspan(1 + n, n))});
                break;
        }
    }
    if (spec.depth == SearchDepth::hadamards) fill_buckets(r);
    r.items = std::move(items);
    return r;
}

SearchResult root_hadamard_enumerate(int n, int k, std::uint64_t budget) {
    SearchSpec s;
    s.n = n;
    s.k = k;
    s.budget = budget;
    s.depth = SearchDepth::hadamards;
    return run_search(s);
}

SearchResult mub_triplet_search(int n, int k, std::uint64_t budget) {
    SearchSpec s;
    s.n = n;
    s.k = k;
    s.budget = budget;
    s.depth = SearchDepth::triplets;
    return run_search(s);
}

SearchResult mub_quartet_search(int n, int k, std::uint64_t budget) {
    SearchSpec s;
    s.n = n;
    s.k = k;
    s.budget = budget;
    s.depth = SearchDepth::quartets;
    return run_search(s);
}

Json search_summary_json(const SearchResult& r) {
    Json j = {{"type", "summary"},
              {"spec", spec_to_json(r.spec)},
              {"orthogonal_candidates", r.orthogonal_candidates},
              {"unbiased_candidates", r.unbiased_candidates},
              {"units_total", r.units_total},
              {"units_completed", r.units_completed},
              {"nodes", r.nodes},
              {"complete", r.complete},
              {"verdict", r.verdict()}};
    switch (r.spec.depth) {
        case SearchDepth::hadamards:
            j["count"] = r.hadamards.size();
            j["buckets"] = r.bucket_count();
            break;
        case SearchDepth::triplets: j["count"] = r.triplets.size(); break;
        case SearchDepth::quartets: j["count"] = r.quartets.size(); break;
    }
    if (r.resume_token) j["resume_token"] = *r.resume_token;
    return j;
}

std::string search_jsonl(const SearchResult& r) {
    std::string out;
    const auto line = [&](const Json& j) {
        out += dump_json(j, -1);
        out += '\n';
    };
    for (std::size_t i = 0; i < r.items.size(); ++i) {
        const int unit = r.items[i].unit;
        switch (r.spec.depth) {
            case SearchDepth::hadamards:
                line({{"type", "hadamard"}, {"unit", unit}, {"bucket", r.buckets[i]}, {"matrix", root_matrix_to_json(r.hadamards[i])}});
                break;
            case SearchDepth::triplets:
                line({{"type", "triplet"},
                      {"unit", unit},
                      {"h1", root_matrix_to_json(r.triplets[i].h1)},
                      {"h2", root_matrix_to_json(r.triplets[i].h2)}});
                break;
            case SearchDepth::quartets:
                line({{"type", "quartet"},
                      {"unit", unit},
                      {"h1", root_matrix_to_json(r.quartets[i].h1)},
                      {"h2", root_matrix_to_json(r.quartets[i].h2)},
                      {"h3", root_matrix_to_json(r.quartets[i].h3)}});
                break;
        }
    }
    line(search_summary_json(r));
    return out;
}

std::vector<std::pair<std::string, Json>> generate_fixture_documents(const std::string& date) {
    std::vector<std::pair<std::string, Json>> out;
    for (const auto& [name, k] : {std::pair<std::string, int>{"S", 3}, {"DITA0", 4}}) {
        const SearchResult r = root_hadamard_enumerate(6, k);
        if (r.hadamards.empty()) throw Error("no Hadamard found for fixture " + name);
        Json doc = root_matrix_to_json(r.hadamards.front(), name);
        doc["provenance"] = {{"generator", "mubs fixtures"},
                             {"date", date},
                             {"search", {{"operation", "root_hadamard_enumerate"},
                                         {"n", 6},
                                         {"k", k},
                                         {"index", 0},
                                         {"matrices", r.hadamards.size()},
                                         {"buckets", r.bucket_count()}}}};
        out.emplace_back(name, std::move(doc));
    }
    return out;
}

Json Checkpoint::to_json() const {
    Json its = Json::array();
    for (const auto& it : items) its.push_back({{"unit", it.unit}, {"indices", it.indices}});
    return {{"spec", spec_to_json(spec)}, {"completed_units", completed_units}, {"items", std::move(its)}, {"counts", counts}};
}

Checkpoint Checkpoint::from_json(const Json& j, const std::string& where) {
    Checkpoint ck;
    try {
        const Json& s = j.at("spec");
        ck.spec.n = s.at("n").get<int>();
        ck.spec.k = s.at("k").get<int>();
        ck.spec.depth = search_depth_from_string(s.at("depth").get<std::string>());
        ck.spec.budget = s.value("budget", std::uint64_t{0});
        ck.completed_units = j.at("completed_units").get<std::vector<int>>();
        for (const auto& it : j.at("items")) ck.items.push_back({it.at("unit").get<int>(), it.at("indices").get<std::vector<int>>()});
        if (j.contains("counts")) ck.counts = j.at("counts").get<std::map<std::string, std::uint64_t>>();
    } catch (const Json::exception& e) {
        throw FormatError(where + ": malformed checkpoint: " + e.what());
    } catch (const DomainError& e) {
        throw FormatError(where + ": " + e.what());
    }
    return ck;
}

void Checkpoint::save(const std::string& path) const { write_text_atomic(path, dump_json(to_json(), -1) + "\n"); }

Checkpoint Checkpoint::load(const std::string& path) {
    return from_json(parse_json_text(read_text(path), path), path);
}

}  // namespace mubs
