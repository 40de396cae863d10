#pragma once

#include <cstddef>
#include <span>
#include <string>

#include <json.hpp>

#include "decal/dataset.hpp"
#include "decal/model.hpp"

namespace decal {

struct DirectionReport {
    double mrr = 0.0;
    double hits1 = 0.0;
    double hits3 = 0.0;
    double hits10 = 0.0;
    std::size_t num_queries = 0;
};

/// Filtered link-prediction metrics over a split; `tail` covers the
/// (h, r, ?) direction, `head` the (t, r^-1, ?) direction.
struct EvalReport {
    double mrr = 0.0;
    double hits1 = 0.0;
    double hits3 = 0.0;
    double hits10 = 0.0;
    std::size_t num_queries = 0;
    DirectionReport tail;
    DirectionReport head;
};

/// Filtered rank of true_tail: 1 + number of entities outside known_tails
/// scoring >= the true tail (ties pessimistic). known_tails must be sorted
/// and contain true_tail.
int filtered_rank(std::span<const double> scores, int true_tail, std::span<const int> known_tails);

/// Ranks every triple of the split in both directions against the filter
/// index built over all three splits.
EvalReport evaluate(const EmbeddingTable& table, const TripleStore& store, Split split);

nlohmann::json report_to_json(const EvalReport& report);

} // namespace decal
