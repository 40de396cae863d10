#include "decal/eval.hpp"

#include <algorithm>

#include "decal/errors.hpp"

namespace decal {

namespace {

struct RankTally {
    double reciprocal_sum = 0.0;
    std::size_t hits1 = 0;
    std::size_t hits3 = 0;
    std::size_t hits10 = 0;
    std::size_t count = 0;

    void add(int rank) {
        reciprocal_sum += 1.0 / static_cast<double>(rank);
        if (rank <= 1) ++hits1;
        if (rank <= 3) ++hits3;
        if (rank <= 10) ++hits10;
        ++count;
    }

    DirectionReport report() const {
        DirectionReport rep;
        rep.num_queries = count;
        if (count == 0) return rep;
        const double n = static_cast<double>(count);
        rep.mrr = reciprocal_sum / n;
        rep.hits1 = static_cast<double>(hits1) / n;
        rep.hits3 = static_cast<double>(hits3) / n;
        rep.hits10 = static_cast<double>(hits10) / n;
        return rep;
    }
};

const std::vector<int>& filter_answers(const TripleStore& store, int head, int relation) {
    auto it = store.filter.find(QueryKey{head, relation});
    if (it == store.filter.end()) {
        throw TrueTailMissing("query (" + std::to_string(head) + ", " + std::to_string(relation) +
                              ") absent from the filter index");
    }
    return it->second;
}

} // namespace

int filtered_rank(std::span<const double> scores, int true_tail, std::span<const int> known_tails) {
    if (true_tail < 0 || true_tail >= static_cast<int>(scores.size())) {
        throw IdOutOfRange("true tail id " + std::to_string(true_tail) + " outside score vector");
    }
    if (!std::binary_search(known_tails.begin(), known_tails.end(), true_tail)) {
        throw TrueTailMissing("true tail " + std::to_string(true_tail) +
                              " not among the known answers");
    }
    const double threshold = scores[static_cast<std::size_t>(true_tail)];
    int rank = 1;
    std::size_t known_idx = 0;
    for (int t = 0; t < static_cast<int>(scores.size()); ++t) {
        while (known_idx < known_tails.size() && known_tails[known_idx] < t) ++known_idx;
        if (known_idx < known_tails.size() && known_tails[known_idx] == t) continue;
        if (scores[static_cast<std::size_t>(t)] >= threshold) ++rank;
    }
    return rank;
}

EvalReport evaluate(const EmbeddingTable& table, const TripleStore& store, Split split) {
    const std::vector<Triple>& triples = store.split(split);
    if (triples.empty()) {
        throw EmptySplit(std::string(split_name(split)) + " split is empty");
    }

    std::vector<double> scores(static_cast<std::size_t>(table.num_entities), 0.0);
    RankTally tail_tally;
    RankTally head_tally;
    RankTally overall;

    for (const Triple& triple : triples) {
        score_all_tails(triple.head, triple.relation, table, scores);
        const std::vector<int>& tail_known = filter_answers(store, triple.head, triple.relation);
        const int tail_rank = filtered_rank(scores, triple.tail, tail_known);
        tail_tally.add(tail_rank);
        overall.add(tail_rank);

        const int inv = store.vocab.inverse(triple.relation);
        score_all_tails(triple.tail, inv, table, scores);
        const std::vector<int>& head_known = filter_answers(store, triple.tail, inv);
        const int head_rank = filtered_rank(scores, triple.head, head_known);
        head_tally.add(head_rank);
        overall.add(head_rank);
    }

    EvalReport report;
    report.tail = tail_tally.report();
    report.head = head_tally.report();
    const DirectionReport both = overall.report();
    report.mrr = both.mrr;
    report.hits1 = both.hits1;
    report.hits3 = both.hits3;
    report.hits10 = both.hits10;
    report.num_queries = both.num_queries;
    return report;
}

nlohmann::json report_to_json(const EvalReport& report) {
    auto direction = [](const DirectionReport& d) {
        return nlohmann::json{{"mrr", d.mrr},
                              {"hits1", d.hits1},
                              {"hits3", d.hits3},
                              {"hits10", d.hits10},
                              {"num_queries", d.num_queries}};
    };
    return nlohmann::json{{"mrr", report.mrr},
                          {"hits1", report.hits1},
                          {"hits3", report.hits3},
                          {"hits10", report.hits10},
                          {"num_queries", report.num_queries},
                          {"tail", direction(report.tail)},
                          {"head", direction(report.head)}};
}

} // namespace decal
