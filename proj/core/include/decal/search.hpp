#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "decal/dataset.hpp"
#include "decal/model.hpp"

namespace decal {

using Conf = std::array<int, 3>;

struct SearchRecord {
    int p = 0;
    int q = 0;
    int r = 0;
    double val_mrr = 0.0;
    double train_seconds = 0.0;
};

struct SearchResult {
    SearchRecord best;
    std::vector<SearchRecord> trace;
    int iterations = 0;
};

/// One signature evaluation: trains with the shared config and returns the
/// validation MRR plus the wall-clock cost.
struct EvalOutcome {
    double val_mrr = 0.0;
    double train_seconds = 0.0;
};

using Evaluator = std::function<EvalOutcome(int p, int q, int r)>;

/// Every (p,q,r) with p+q+r <= d, lexicographic. |result| = (d+1)(d+2)(d+3)/6.
std::vector<Conf> les_enumerate(int d);

/// Every (p,q,r) with (1+p+q+r) dividing d, lexicographic.
std::vector<Conf> gsdc_enumerate(int d);

/// The up-to-27 offset combinations of current not already seen, in fixed
/// (-1,0,1)^3 iteration order. Negative components are kept; scoring rejects
/// them later.
std::vector<Conf> generate_conf(const std::set<Conf>& seen, const Conf& current);

/// Appends one record per candidate with non-negative components and
/// 1+p+q+r <= d; everything else is skipped silently. With workers > 1 the
/// evaluator runs concurrently, but records are still appended in candidate
/// order.
void score_confs(const std::vector<Conf>& candidates, int d, const Evaluator& evaluator,
                 std::vector<SearchRecord>& prior, int workers = 1);

/// Greedy hill climb over the (p,q,r) lattice from (1,1,1): each iteration
/// scores the unseen neighborhood of the incumbent, re-sorts all records by
/// MRR descending (ties by ascending (p,q,r)), and stops when the top record
/// keeps the incumbent configuration. Candidates within a generation may be
/// scored concurrently; the sort is a synchronization point.
SearchResult greedy_search(int max_iterations, int d, const Evaluator& evaluator,
                           int workers = 1);

/// Scores an explicit candidate list (LES or GSDC); invalid entries are
/// skipped, so the trace can be shorter than the list.
SearchResult sweep(const std::vector<Conf>& candidates, int d, const Evaluator& evaluator,
                   int workers = 1);

/// FNV-1a 64-bit hash, used for cache keys.
std::uint64_t fnv1a64(std::string_view bytes);

/// Disk cache of signature evaluations keyed by (dataset hash, config hash,
/// p, q, r). A default-constructed cache stores nothing.
class SearchCache {
public:
    SearchCache() = default;
    SearchCache(std::filesystem::path dir, std::uint64_t dataset_hash, std::uint64_t config_hash);

    bool enabled() const { return enabled_; }
    std::optional<EvalOutcome> lookup(int p, int q, int r) const;
    void store(int p, int q, int r, const EvalOutcome& outcome) const;

private:
    std::filesystem::path entry_path(int p, int q, int r) const;

    std::filesystem::path dir_;
    std::uint64_t dataset_hash_ = 0;
    std::uint64_t config_hash_ = 0;
    bool enabled_ = false;
};

/// Wraps an evaluator with cache lookups and write-through.
Evaluator cached_evaluator(Evaluator inner, SearchCache cache);

/// Feature matrix for sequence-model signature prediction: one row per
/// original training triple, the concatenation of head, relation and tail
/// rows (3d columns, file order).
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
};

FeatureMatrix vsp_export_features(const TripleStore& store, const EmbeddingTable& table_111);

} // namespace decal
