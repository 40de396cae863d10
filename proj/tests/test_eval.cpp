#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <decal/errors.hpp>
#include <decal/eval.hpp>
#include <decal/model.hpp>
#include <decal/train.hpp>

#include "support/synth_kg.hpp"

using decal::EmbeddingTable;
using decal::Signature;
using decal::Split;

namespace {

int rank_of(const std::vector<double>& scores, int true_tail, const std::vector<int>& known) {
    return decal::filtered_rank({scores.data(), scores.size()}, true_tail,
                                {known.data(), known.size()});
}

// Store for a 3-entity, single-relation graph where every answer set is known.
decal::TripleStore tiny_store() {
    decal::TripleStore store;
    store.vocab.add_entity("a");
    store.vocab.add_entity("b");
    store.vocab.add_entity("c");
    store.vocab.add_relation("r");
    store.train = {{0, 0, 1}, {1, 0, 2}};
    store.test = {{2, 0, 0}};
    auto index = [&](const std::vector<decal::Triple>& triples, decal::KvsAllIndex& out) {
        for (const decal::Triple& t : triples) {
            out[{t.head, t.relation}].push_back(t.tail);
            out[{t.tail, store.vocab.inverse(t.relation)}].push_back(t.head);
        }
        for (auto& [key, answers] : out) std::sort(answers.begin(), answers.end());
    };
    index(store.train, store.kvsall_train);
    index(store.test, store.kvsall_test);
    index(store.train, store.filter);
    index(store.test, store.filter);
    for (auto& [key, answers] : store.filter) {
        std::sort(answers.begin(), answers.end());
        answers.erase(std::unique(answers.begin(), answers.end()), answers.end());
    }
    return store;
}

} // namespace

TEST_SUITE("eval") {

TEST_CASE("filtered rank worked examples") {
    // Strict best score ranks first.
    CHECK(rank_of({3.0, 1.0, 2.0}, 0, {0}) == 1);
    // All scores equal: pessimistic ties put the true tail last.
    CHECK(rank_of(std::vector<double>(10, 0.5), 4, {4}) == 10);
    // Two known competitors are filtered out of the count.
    CHECK(rank_of({5.0, 4.0, 3.0, 2.0}, 2, {0, 2}) == 2);
    // Filtering everything better leaves rank 1.
    CHECK(rank_of({9.0, 8.0, 7.0}, 2, {0, 1, 2}) == 1);
}

TEST_CASE("filtered rank rejects inconsistent inputs") {
    std::vector<double> scores{1.0, 2.0};
    std::vector<int> known{0};
    CHECK_THROWS_AS(decal::filtered_rank({scores.data(), 2}, 5, {known.data(), 1}),
                    decal::IdOutOfRange);
    CHECK_THROWS_AS(decal::filtered_rank({scores.data(), 2}, 1, {known.data(), 1}),
                    decal::TrueTailMissing);
}

TEST_CASE("rank is invariant under score shifts") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> scores(25);
    for (int trial = 0; trial < 10; ++trial) {
        for (double& s : scores) s = dist(rng);
        const int true_tail = static_cast<int>(rng() % scores.size());
        std::vector<int> known{true_tail};
        std::vector<double> shifted = scores;
        for (double& s : shifted) s += 17.25;
        CHECK(rank_of(scores, true_tail, known) == rank_of(shifted, true_tail, known));
    }
}

TEST_CASE("growing the filter never worsens the rank") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> scores(30);
    for (double& s : scores) s = dist(rng);
    const int true_tail = 7;
    std::vector<int> known{true_tail};
    int prev = rank_of(scores, true_tail, known);
    for (int extra : {0, 3, 12, 21, 28}) {
        known.push_back(extra);
        std::sort(known.begin(), known.end());
        known.erase(std::unique(known.begin(), known.end()), known.end());
        const int next = rank_of(scores, true_tail, known);
        CHECK(next <= prev);
        prev = next;
    }
    // With every entity filtered, nothing outranks the truth.
    known.resize(scores.size());
    std::iota(known.begin(), known.end(), 0);
    CHECK(rank_of(scores, true_tail, known) == 1);
}

TEST_CASE("two ranks give the textbook mrr") {
    // Tail direction rank 1, head direction rank 4 => MRR (1 + 1/4) / 2.
    decal::TripleStore store;
    store.vocab.add_entity("a");
    store.vocab.add_entity("b");
    store.vocab.add_entity("c");
    store.vocab.add_entity("d");
    store.vocab.add_relation("r");
    store.test = {{0, 0, 1}};
    store.kvsall_test[{0, 0}] = {1};
    store.kvsall_test[{1, 1}] = {0};
    store.filter = store.kvsall_test;

    Signature sig(0, 0, 0, 4);
    EmbeddingTable table(sig, 4, 2);
    // Forward scores: favour the true tail b.
    table.relations = {1, 1, 1, 1, 0, 0, 0, 0};
    table.entities = {
        1.0, 0.0, 0.0, 0.0, // a
        5.0, 0.0, 0.0, 0.0, // b
        2.0, 0.0, 0.0, 0.0, // c
        3.0, 0.0, 0.0, 0.0, // d
    };
    // (a, r): scores 1*e -> b=5 best, rank 1. (b, r^-1): relation row is all
    // zero, every score ties at 0, pessimistic rank over {a,c,d,b}\{a... }.
    decal::EvalReport report = decal::evaluate(table, store, Split::Test);
    CHECK(report.num_queries == 2);
    CHECK(report.tail.num_queries == 1);
    CHECK(report.head.num_queries == 1);
    CHECK(report.tail.mrr == doctest::Approx(1.0));
    CHECK(report.head.mrr == doctest::Approx(0.25));
    CHECK(report.mrr == doctest::Approx(0.625));
    CHECK(report.hits1 == doctest::Approx(0.5));
    CHECK(report.hits3 == doctest::Approx(0.5));
    CHECK(report.hits10 == doctest::Approx(1.0));
}

TEST_CASE("evaluate agrees with a brute-force oracle") {
    decal::TripleStore store = tiny_store();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Signature sig(1, 1, 0, 9);
    EmbeddingTable table(sig, 3, 2);
    for (int trial = 0; trial < 20; ++trial) {
        for (double& v : table.entities) v = dist(rng);
        for (double& v : table.relations) v = dist(rng);

        double rr_sum = 0.0;
        std::size_t n = 0;
        auto add_query = [&](int head, int rel, int truth) {
            std::vector<double> scores = decal::score_all_tails(head, rel, table);
            const std::vector<int>& known = store.filter.at({head, rel});
            int rank = 1;
            for (int t = 0; t < 3; ++t) {
                if (std::binary_search(known.begin(), known.end(), t)) continue;
                if (scores[static_cast<std::size_t>(t)] >=
                    scores[static_cast<std::size_t>(truth)]) {
                    ++rank;
                }
            }
            rr_sum += 1.0 / rank;
            ++n;
        };
        for (const decal::Triple& t : store.test) {
            add_query(t.head, t.relation, t.tail);
            add_query(t.tail, store.vocab.inverse(t.relation), t.head);
        }
        decal::EvalReport report = decal::evaluate(table, store, Split::Test);
        CHECK(report.num_queries == n);
        CHECK(report.mrr == doctest::Approx(rr_sum / static_cast<double>(n)).epsilon(1e-12));
    }
}

TEST_CASE("hits are ordered and bounded") {
    decal::TripleStore store = testref::synth_store();
    Signature sig(0, 1, 0, 16);
    EmbeddingTable table = decal::init_table(sig, store.vocab.num_entities(),
                                             store.vocab.num_relation_rows(), 3);
    for (Split split : {Split::Valid, Split::Test}) {
        decal::EvalReport report = decal::evaluate(table, store, split);
        CHECK(report.num_queries == 48);
        for (const decal::DirectionReport* dir : {&report.tail, &report.head}) {
            CHECK(dir->num_queries == 24);
            CHECK(dir->mrr > 0.0);
            CHECK(dir->mrr <= 1.0);
            CHECK(dir->hits1 <= dir->hits3);
            CHECK(dir->hits3 <= dir->hits10);
            CHECK(dir->hits10 <= 1.0);
            CHECK(dir->mrr >= dir->hits1);
        }
        CHECK(report.mrr ==
              doctest::Approx((report.tail.mrr + report.head.mrr) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("a trained model beats the untrained one") {
    decal::TripleStore store = testref::synth_store();
    Signature sig(0, 1, 0, 16);
    decal::TrainConfig cfg;
    cfg.epochs = 60;
    cfg.batch_size = 64;
    decal::TrainResult trained = decal::train(store, sig, cfg);
    EmbeddingTable fresh = decal::init_table(sig, store.vocab.num_entities(),
                                             store.vocab.num_relation_rows(), cfg.seed);
    const double before = decal::evaluate(fresh, store, Split::Test).mrr;
    const double after = decal::evaluate(trained.table, store, Split::Test).mrr;
    CHECK(after > before + 0.2);
    CHECK(after > 0.5);
}

TEST_CASE("empty split is rejected") {
    decal::TripleStore store = tiny_store();
    store.valid.clear();
    Signature sig(0, 0, 0, 4);
    EmbeddingTable table(sig, 3, 2);
    CHECK_THROWS_AS(decal::evaluate(table, store, Split::Valid), decal::EmptySplit);
}

TEST_CASE("report serialization carries both directions") {
    decal::TripleStore store = tiny_store();
    Signature sig(0, 0, 0, 4);
    EmbeddingTable table(sig, 3, 2);
    decal::EvalReport report = decal::evaluate(table, store, Split::Test);
    nlohmann::json j = decal::report_to_json(report);
    CHECK(j.contains("mrr"));
    CHECK(j.contains("hits1"));
    CHECK(j.contains("hits3"));
    CHECK(j.contains("hits10"));
    CHECK(j.at("num_queries") == 2);
    CHECK(j.at("tail").contains("mrr"));
    CHECK(j.at("head").contains("num_queries"));
}

} // TEST_SUITE
