#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <decal/errors.hpp>
#include <decal/model.hpp>

#include "support/reference_models.hpp"

using decal::CliffordElement;
using decal::EmbeddingTable;
using decal::GradientTable;
using decal::QueryScoreParts;
using decal::Signature;

namespace {

void randomize(EmbeddingTable& table, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : table.entities) v = dist(rng);
    for (double& v : table.relations) v = dist(rng);
}

std::vector<double> row_copy(std::span<const double> row) {
    return {row.begin(), row.end()};
}

std::vector<int> rank_order(const std::vector<double>& scores) {
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    return order;
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("decode slices rows into blocks") {
    Signature sig(1, 1, 1, 4);
    std::vector<double> row{1, 2, 3, 4};
    CliffordElement elem = decal::decode({row.data(), row.size()}, sig);
    REQUIRE(elem.blocks.size() == 4);
    CHECK(elem.blocks[0][0] == 1.0);
    CHECK(elem.blocks[3][0] == 4.0);

    Signature flat(0, 0, 0, 16);
    std::vector<double> wide(16, 0.5);
    CHECK(decal::decode({wide.data(), wide.size()}, flat).blocks.size() == 1);
    CHECK(decal::decode({wide.data(), wide.size()}, flat).blocks[0].size() == 16);

    Signature uneven(1, 1, 1, 10);
    std::vector<double> ten(10, 1.0);
    CliffordElement e10 = decal::decode({ten.data(), ten.size()}, uneven);
    CHECK(e10.blocks.size() == 4);
    CHECK(e10.blocks[0].size() == 2);

    CHECK_THROWS_AS(decal::decode({row.data(), 3}, sig), decal::ShapeMismatch);
}

TEST_CASE("worked score and query parts in Cl_{1,1,1}(R^1)") {
    Signature sig(1, 1, 1, 4);
    EmbeddingTable table(sig, 2, 1);
    std::vector<double> xrow{1, 2, 3, 4};
    std::vector<double> yrow{5, 6, 7, 8};
    std::vector<double> zrow{1, 1, 1, 1};
    std::copy(xrow.begin(), xrow.end(), table.entity_row(0).begin());
    std::copy(zrow.begin(), zrow.end(), table.entity_row(1).begin());
    std::copy(yrow.begin(), yrow.end(), table.relation_row(0).begin());

    QueryScoreParts parts = decal::query_parts(0, 0, table);
    REQUIRE(parts.phi.size() == 4);
    CHECK(parts.phi[0] == doctest::Approx(-4.0));
    CHECK(parts.phi[1] == doctest::Approx(16.0));
    CHECK(parts.phi[2] == doctest::Approx(22.0));
    CHECK(parts.phi[3] == doctest::Approx(28.0));
    CHECK(parts.bias == doctest::Approx(-16.0));

    CliffordElement x = decal::decode({xrow.data(), xrow.size()}, sig);
    CliffordElement y = decal::decode({yrow.data(), yrow.size()}, sig);
    CliffordElement z = decal::decode({zrow.data(), zrow.size()}, sig);
    CHECK(decal::score_triple(x, y, z, sig) == doctest::Approx(46.0));
    CHECK(decal::score_all_tails(0, 0, table)[1] == doctest::Approx(46.0));
}

TEST_CASE("identity relation recovers the head") {
    std::mt19937_64 rng(3);
    Signature sig(2, 0, 1, 8);
    EmbeddingTable table(sig, 3, 1);
    randomize(table, rng);
    std::fill(table.relation_row(0).begin(), table.relation_row(0).end(), 0.0);
    for (int k = 0; k < sig.m(); ++k) table.relation_row(0)[k] = 1.0;

    QueryScoreParts parts = decal::query_parts(1, 0, table);
    CHECK(parts.bias == 0.0);
    for (int k = 0; k < sig.active_width(); ++k) {
        CHECK(parts.phi[k] == doctest::Approx(table.entity_row(1)[k]).epsilon(1e-14));
    }
}

TEST_CASE("bias vanishes without generator pairs") {
    std::mt19937_64 rng(9);
    for (Signature sig : {Signature(0, 0, 0, 6), Signature(1, 0, 0, 6), Signature(0, 0, 1, 6)}) {
        EmbeddingTable table(sig, 2, 1);
        randomize(table, rng);
        CHECK(decal::query_parts(0, 0, table).bias == 0.0);
    }
}

TEST_CASE("score_all_tails equals per-triple scoring") {
    std::mt19937_64 rng(17);
    Signature sig(2, 1, 1, 16);
    EmbeddingTable table(sig, 50, 3);
    randomize(table, rng);
    for (int rel = 0; rel < 3; ++rel) {
        std::vector<double> scores = decal::score_all_tails(7, rel, table);
        CliffordElement x = decal::decode(table.entity_row(7), sig);
        CliffordElement y = decal::decode(table.relation_row(rel), sig);
        for (int t = 0; t < 50; ++t) {
            CliffordElement z = decal::decode(table.entity_row(t), sig);
            CHECK(std::abs(scores[static_cast<std::size_t>(t)] -
                           decal::score_triple(x, y, z, sig)) < 1e-10);
        }
    }
}

TEST_CASE("decomposition identity on random triples") {
    std::mt19937_64 rng(29);
    for (Signature sig : {Signature(1, 1, 1, 10), Signature(3, 0, 2, 16), Signature(0, 3, 1, 10)}) {
        EmbeddingTable table(sig, 6, 2);
        randomize(table, rng);
        for (int h = 0; h < 6; ++h) {
            QueryScoreParts parts = decal::query_parts(h, 1, table);
            CliffordElement x = decal::decode(table.entity_row(h), sig);
            CliffordElement y = decal::decode(table.relation_row(1), sig);
            for (int t = 0; t < 6; ++t) {
                double dot = parts.bias;
                for (int k = 0; k < sig.active_width(); ++k) {
                    dot += parts.phi[k] * table.entity_row(t)[k];
                }
                CliffordElement z = decal::decode(table.entity_row(t), sig);
                CHECK(std::abs(dot - decal::score_triple(x, y, z, sig)) < 1e-10);
            }
        }
    }
}

TEST_CASE("reduction to DistMult at (0,0,0)") {
    std::mt19937_64 rng(41);
    Signature sig(0, 0, 0, 16);
    EmbeddingTable table(sig, 2, 1);
    for (int trial = 0; trial < 50; ++trial) {
        randomize(table, rng);
        const double got = decal::score_all_tails(0, 0, table)[1];
        const double want = testref::distmult_score(row_copy(table.entity_row(0)),
                                                    row_copy(table.relation_row(0)),
                                                    row_copy(table.entity_row(1)));
        CHECK(std::abs(got - want) < 1e-12);
    }
}

TEST_CASE("reduction to the ComplEx real-part score at (0,1,0)") {
    std::mt19937_64 rng(43);
    Signature sig(0, 1, 0, 16);
    EmbeddingTable table(sig, 2, 1);
    for (int trial = 0; trial < 50; ++trial) {
        randomize(table, rng);
        const double got = decal::score_all_tails(0, 0, table)[1];
        const double want = testref::complex_score(row_copy(table.entity_row(0)),
                                                   row_copy(table.relation_row(0)),
                                                   row_copy(table.entity_row(1)));
        CHECK(std::abs(got - want) < 1e-12);
    }
}

TEST_CASE("reduction to Keci for r = 0") {
    std::mt19937_64 rng(47);
    for (auto [p, q, d] : {std::array<int, 3>{1, 1, 12}, {2, 1, 12}, {0, 2, 12}, {3, 2, 12}}) {
        Signature sig(p, q, 0, d);
        EmbeddingTable table(sig, 2, 1);
        for (int trial = 0; trial < 20; ++trial) {
            randomize(table, rng);
            const double got = decal::score_all_tails(0, 0, table)[1];
            const double want =
                testref::keci_score(p, q, sig.m(), row_copy(table.entity_row(0)),
                                    row_copy(table.relation_row(0)), row_copy(table.entity_row(1)));
            CHECK(std::abs(got - want) < 1e-12);
        }
    }
}

TEST_CASE("bias never changes the ranking") {
    std::mt19937_64 rng(53);
    Signature sig(1, 2, 1, 16);
    EmbeddingTable table(sig, 40, 4);
    for (int trial = 0; trial < 20; ++trial) {
        randomize(table, rng);
        const int h = static_cast<int>(rng() % 40);
        const int rel = static_cast<int>(rng() % 4);
        std::vector<double> with_bias = decal::score_all_tails(h, rel, table);
        QueryScoreParts parts = decal::query_parts(h, rel, table);
        std::vector<double> without(40, 0.0);
        for (int t = 0; t < 40; ++t) {
            without[static_cast<std::size_t>(t)] =
                with_bias[static_cast<std::size_t>(t)] - parts.bias;
        }
        CHECK(rank_order(with_bias) == rank_order(without));
    }
}

TEST_CASE("zero tail gradient yields zero parameter gradients") {
    std::mt19937_64 rng(59);
    Signature sig(1, 1, 1, 8);
    EmbeddingTable table(sig, 5, 2);
    randomize(table, rng);
    std::vector<double> zeros(5, 0.0);
    GradientTable grads = decal::score_gradients(1, 0, zeros, table);
    for (double g : grads.entities) CHECK(g == 0.0);
    for (double g : grads.relations) CHECK(g == 0.0);
}

TEST_CASE("analytic gradients match finite differences") {
    std::mt19937_64 rng(61);
    const int num_entities = 7;
    const int num_relations = 3;
    for (Signature sig : {Signature(0, 0, 0, 10), Signature(0, 1, 0, 10), Signature(1, 1, 1, 10),
                          Signature(3, 0, 2, 16), Signature(0, 3, 1, 10)}) {
        for (int trial = 0; trial < 4; ++trial) {
            EmbeddingTable table(sig, num_entities, num_relations);
            randomize(table, rng);
            const int h = static_cast<int>(rng() % num_entities);
            const int rel = static_cast<int>(rng() % num_relations);
            std::vector<double> t_grad = testref::random_vector(rng, num_entities);

            GradientTable grads = decal::score_gradients(h, rel, t_grad, table);

            auto objective = [&](const EmbeddingTable& tb) {
                std::vector<double> scores = decal::score_all_tails(h, rel, tb);
                double s = 0.0;
                for (int t = 0; t < num_entities; ++t) {
                    s += t_grad[static_cast<std::size_t>(t)] * scores[static_cast<std::size_t>(t)];
                }
                return s;
            };

            const double step = 1e-5;
            EmbeddingTable probe = table;
            for (std::size_t i = 0; i < table.entities.size(); ++i) {
                probe.entities[i] = table.entities[i] + step;
                const double up = objective(probe);
                probe.entities[i] = table.entities[i] - step;
                const double down = objective(probe);
                probe.entities[i] = table.entities[i];
                const double fd = (up - down) / (2.0 * step);
                CHECK(testref::rel_err(grads.entities[i], fd) < 1e-4);
            }
            for (std::size_t i = 0; i < table.relations.size(); ++i) {
                probe.relations[i] = table.relations[i] + step;
                const double up = objective(probe);
                probe.relations[i] = table.relations[i] - step;
                const double down = objective(probe);
                probe.relations[i] = table.relations[i];
                const double fd = (up - down) / (2.0 * step);
                CHECK(testref::rel_err(grads.relations[i], fd) < 1e-4);
            }
        }
    }
}

TEST_CASE("trailing row scalars get no gradient") {
    std::mt19937_64 rng(67);
    Signature sig(1, 1, 1, 10);
    EmbeddingTable table(sig, 4, 2);
    randomize(table, rng);
    std::vector<double> t_grad = testref::random_vector(rng, 4);
    GradientTable grads = decal::score_gradients(2, 1, t_grad, table);
    for (int row = 0; row < 4; ++row) {
        for (int k = sig.active_width(); k < sig.d(); ++k) {
            CHECK(grads.entities[static_cast<std::size_t>(row) * sig.d() + k] == 0.0);
        }
    }
    for (int row = 0; row < 2; ++row) {
        for (int k = sig.active_width(); k < sig.d(); ++k) {
            CHECK(grads.relations[static_cast<std::size_t>(row) * sig.d() + k] == 0.0);
        }
    }
}

TEST_CASE("table construction and id guards") {
    Signature sig(0, 1, 0, 8);
    EmbeddingTable table(sig, 3, 2);
    CHECK_THROWS_AS(table.entity_row(3), decal::IdOutOfRange);
    CHECK_THROWS_AS(table.entity_row(-1), decal::IdOutOfRange);
    CHECK_THROWS_AS(table.relation_row(2), decal::IdOutOfRange);
    CHECK_THROWS_AS(decal::query_parts(0, 5, table), decal::IdOutOfRange);
    CHECK_THROWS_AS(EmbeddingTable(sig, 0, 1), decal::InvalidSignature);

    std::vector<double> wrong(2, 0.0);
    CHECK_THROWS_AS(decal::score_all_tails(0, 0, table, {wrong.data(), wrong.size()}),
                    decal::ShapeMismatch);
}

TEST_CASE("init_table is deterministic and small-scale") {
    Signature sig(1, 1, 0, 12);
    decal::EmbeddingTable a = decal::init_table(sig, 20, 6, 123);
    decal::EmbeddingTable b = decal::init_table(sig, 20, 6, 123);
    decal::EmbeddingTable c = decal::init_table(sig, 20, 6, 124);
    CHECK(a.entities == b.entities);
    CHECK(a.relations == b.relations);
    CHECK(a.entities != c.entities);
    double max_abs = 0.0;
    for (double v : a.entities) max_abs = std::max(max_abs, std::abs(v));
    CHECK(max_abs < 0.1);
    CHECK(max_abs > 0.0);
}

} // TEST_SUITE
