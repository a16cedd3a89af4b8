#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mubs/cyclotomic.hpp"
#include "mubs/io.hpp"

namespace mubs {

/// Dephased k-th-root vectors exactly unbiased to every Fourier column.
std::vector<RootVector> unbiased_vector_enumerate(int n, int k, std::uint64_t budget = 100'000'000);

enum class SearchDepth { hadamards, triplets, quartets };

const char* to_string(SearchDepth d);
SearchDepth search_depth_from_string(const std::string& s);

struct SearchSpec {
    int n = 6;
    int k = 12;
    SearchDepth depth = SearchDepth::hadamards;
    std::uint64_t budget = 0;  // search-node limit for this invocation; 0 = none
    std::optional<std::string> resume_token;     // checkpoint path to resume from
    std::optional<std::string> checkpoint_path;  // where to write progress
    int threads = 1;

    void validate() const;
};

/// One emitted object, stored as candidate indices. Hadamards: the N-1
/// non-trivial columns (indices into the orthogonal candidates).
/// Triplets: H1 index, then N columns of H2 (indices into the unbiased
/// candidates). Quartets: H1 index, then N columns of H2 and of H3.
struct SearchItem {
    int unit = 0;
    std::vector<int> indices;
};

struct Triplet {
    RootMatrix h1, h2;
};

struct Quartet {
    RootMatrix h1, h2, h3;
};

struct SearchResult {
    SearchSpec spec;
    std::vector<RootMatrix> hadamards;
    std::vector<int> buckets;  // Haagerup bucket per hadamard
    std::vector<Triplet> triplets;
    std::vector<Quartet> quartets;
    std::vector<SearchItem> items;
    std::size_t orthogonal_candidates = 0;  // dephased vectors orthogonal to all-ones
    std::size_t unbiased_candidates = 0;    // dephased vectors unbiased to all-ones
    std::size_t units_total = 0;
    std::size_t units_completed = 0;
    std::uint64_t nodes = 0;  // nodes spent in this invocation
    bool complete = false;
    std::optional<std::string> resume_token;

    /// "complete" / "incomplete" for hadamards and triplets; for quartets
    /// "empty", "non-empty" or, when stopped without a result, "inconclusive".
    std::string verdict() const;
    std::size_t bucket_count() const;
};

/// Dephased Hadamards with k-th-root entries: first column all-ones, the
/// other columns in increasing candidate order, pairwise exactly orthogonal.
SearchResult root_hadamard_enumerate(int n, int k, std::uint64_t budget = 0);

/// {I, H1, H2} with H1 from root_hadamard_enumerate and H2 a set of N
/// dephased k-th-root columns, each exactly unbiased to every column of H1.
SearchResult mub_triplet_search(int n, int k, std::uint64_t budget = 0);

/// Triplets extended by a third Hadamard H3 unbiased to H1 and H2 (H3
/// after H2 in the per-H1 order).
SearchResult mub_quartet_search(int n, int k, std::uint64_t budget = 0);

SearchResult run_search(const SearchSpec& spec);

/// One JSON object per line, root form; a final line holds the summary.
std::string search_jsonl(const SearchResult& r);

Json search_summary_json(const SearchResult& r);

/// Fixture documents (S from k = 3, DITA0 from k = 4) taken from
/// root_hadamard_enumerate(6, k), with a provenance block.
std::vector<std::pair<std::string, Json>> generate_fixture_documents(const std::string& date);

struct Checkpoint {
    SearchSpec spec;
    std::vector<int> completed_units;
    std::vector<SearchItem> items;
    std::map<std::string, std::uint64_t> counts;

    Json to_json() const;
    static Checkpoint from_json(const Json& j, const std::string& where);
    void save(const std::string& path) const;  // atomic
    static Checkpoint load(const std::string& path);
};

}  // namespace mubs
