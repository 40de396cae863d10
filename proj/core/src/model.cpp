#include "decal/model.hpp"

#include <random>

#include "decal/errors.hpp"

namespace decal {

namespace {

void check_entity_id(int id, int count) {
    if (id < 0 || id >= count) {
        throw IdOutOfRange("entity id " + std::to_string(id) + " outside [0, " +
                           std::to_string(count) + ")");
    }
}

void check_relation_id(int id, int count) {
    if (id < 0 || id >= count) {
        throw IdOutOfRange("relation id " + std::to_string(id) + " outside [0, " +
                           std::to_string(count) + ")");
    }
}

} // namespace

EmbeddingTable::EmbeddingTable(const Signature& s, int n_entities, int n_relations)
    : sig(s), num_entities(n_entities), num_relations(n_relations) {
    if (n_entities <= 0 || n_relations <= 0) {
        throw InvalidSignature("embedding table needs at least one entity and one relation row");
    }
    entities.assign(static_cast<std::size_t>(n_entities) * sig.d(), 0.0);
    relations.assign(static_cast<std::size_t>(n_relations) * sig.d(), 0.0);
}

std::span<const double> EmbeddingTable::entity_row(int id) const {
    check_entity_id(id, num_entities);
    return {entities.data() + static_cast<std::size_t>(id) * sig.d(),
            static_cast<std::size_t>(sig.d())};
}

std::span<double> EmbeddingTable::entity_row(int id) {
    check_entity_id(id, num_entities);
    return {entities.data() + static_cast<std::size_t>(id) * sig.d(),
            static_cast<std::size_t>(sig.d())};
}

std::span<const double> EmbeddingTable::relation_row(int id) const {
    check_relation_id(id, num_relations);
    return {relations.data() + static_cast<std::size_t>(id) * sig.d(),
            static_cast<std::size_t>(sig.d())};
}

std::span<double> EmbeddingTable::relation_row(int id) {
    check_relation_id(id, num_relations);
    return {relations.data() + static_cast<std::size_t>(id) * sig.d(),
            static_cast<std::size_t>(sig.d())};
}

EmbeddingTable init_table(const Signature& sig, int num_entities, int num_relations,
                          std::uint64_t seed) {
    EmbeddingTable table(sig, num_entities, num_relations);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 0.01);
    for (double& v : table.entities) v = dist(rng);
    for (double& v : table.relations) v = dist(rng);
    return table;
}

CliffordElement decode(std::span<const double> row, const Signature& sig) {
    if (static_cast<int>(row.size()) != sig.d()) {
        throw ShapeMismatch("row length " + std::to_string(row.size()) + " does not match d=" +
                            std::to_string(sig.d()));
    }
    const int m = sig.m();
    CliffordElement elem;
    elem.blocks.resize(sig.blocks());
    for (int b = 0; b < sig.blocks(); ++b) {
        const double* base = row.data() + static_cast<std::size_t>(b) * m;
        elem.blocks[b].assign(base, base + m);
    }
    return elem;
}

double score_triple(const CliffordElement& x, const CliffordElement& y, const CliffordElement& z,
                    const Signature& sig) {
    ProductResult prod = clifford_product(x, y, sig);
    const int m = sig.m();
    double score = 0.0;
    for (int k = 0; k < m; ++k) score += prod.scalar[k] * z.blocks[0][k];
    for (int t = 1; t <= sig.generators(); ++t) {
        const std::vector<double>& g1 = prod.grade1[t - 1];
        for (int k = 0; k < m; ++k) score += g1[k] * z.blocks[t][k];
    }
    for (const auto& entry : prod.grade2) {
        for (int k = 0; k < m; ++k) score += entry.second[k];
    }
    return score;
}

QueryScoreParts query_parts(int head, int relation, const EmbeddingTable& table) {
    const Signature& sig = table.sig;
    const int m = sig.m();
    const int n = sig.generators();
    std::span<const double> xr = table.entity_row(head);
    std::span<const double> yr = table.relation_row(relation);
    const double* x = xr.data();
    const double* y = yr.data();

    QueryScoreParts parts;
    parts.phi.assign(static_cast<std::size_t>(sig.active_width()), 0.0);

    for (int k = 0; k < m; ++k) parts.phi[k] = x[k] * y[k];
    for (int t = 1; t <= n; ++t) {
        const double sq = static_cast<double>(sig.square(t));
        const double* xt = x + static_cast<std::size_t>(t) * m;
        const double* yt = y + static_cast<std::size_t>(t) * m;
        double* phi0 = parts.phi.data();
        double* phit = parts.phi.data() + static_cast<std::size_t>(t) * m;
        for (int k = 0; k < m; ++k) {
            if (sq != 0.0) phi0[k] += sq * xt[k] * yt[k];
            phit[k] = x[k] * yt[k] + xt[k] * y[k];
        }
    }

    double bias = 0.0;
    for (int a = 1; a <= n; ++a) {
        const double* xa = x + static_cast<std::size_t>(a) * m;
        const double* ya = y + static_cast<std::size_t>(a) * m;
        for (int b = a + 1; b <= n; ++b) {
            const double* xb = x + static_cast<std::size_t>(b) * m;
            const double* yb = y + static_cast<std::size_t>(b) * m;
            for (int k = 0; k < m; ++k) bias += xa[k] * yb[k] - xb[k] * ya[k];
        }
    }
    parts.bias = bias;
    return parts;
}

void score_all_tails(int head, int relation, const EmbeddingTable& table, std::span<double> out) {
    if (static_cast<int>(out.size()) != table.num_entities) {
        throw ShapeMismatch("score buffer length " + std::to_string(out.size()) +
                            " does not match entity count " + std::to_string(table.num_entities));
    }
    QueryScoreParts parts = query_parts(head, relation, table);
    const int aw = table.sig.active_width();
    const int d = table.sig.d();
    const double* phi = parts.phi.data();
    const double* rows = table.entities.data();
    for (int e = 0; e < table.num_entities; ++e) {
        const double* z = rows + static_cast<std::size_t>(e) * d;
        double s = parts.bias;
        for (int k = 0; k < aw; ++k) s += phi[k] * z[k];
        out[e] = s;
    }
}

std::vector<double> score_all_tails(int head, int relation, const EmbeddingTable& table) {
    std::vector<double> scores(static_cast<std::size_t>(table.num_entities), 0.0);
    score_all_tails(head, relation, table, scores);
    return scores;
}

GradientTable GradientTable::zeros_like(const EmbeddingTable& table) {
    GradientTable g;
    g.entities.assign(table.entities.size(), 0.0);
    g.relations.assign(table.relations.size(), 0.0);
    return g;
}

void GradientTable::reset() {
    std::fill(entities.begin(), entities.end(), 0.0);
    std::fill(relations.begin(), relations.end(), 0.0);
}

void accumulate_score_gradients(int head, int relation, std::span<const double> tail_grad,
                                const EmbeddingTable& table, GradientTable& grads) {
    if (static_cast<int>(tail_grad.size()) != table.num_entities) {
        throw ShapeMismatch("tail gradient length " + std::to_string(tail_grad.size()) +
                            " does not match entity count " + std::to_string(table.num_entities));
    }
    if (grads.entities.size() != table.entities.size() ||
        grads.relations.size() != table.relations.size()) {
        throw ShapeMismatch("gradient table shape does not match embedding table");
    }
    const Signature& sig = table.sig;
    const int m = sig.m();
    const int n = sig.generators();
    const int aw = sig.active_width();
    const int d = sig.d();

    QueryScoreParts parts = query_parts(head, relation, table);
    const double* phi = parts.phi.data();

    // Aggregated tail w = sum_t g_t z_t over the active width, plus the tail
    // role of every entity row: grad_z += g_t phi.
    std::vector<double> w(static_cast<std::size_t>(aw), 0.0);
    double big_g = 0.0;
    const double* rows = table.entities.data();
    double* grows = grads.entities.data();
    for (int e = 0; e < table.num_entities; ++e) {
        const double g = tail_grad[e];
        if (g == 0.0) continue;
        big_g += g;
        const double* z = rows + static_cast<std::size_t>(e) * d;
        double* gz = grows + static_cast<std::size_t>(e) * d;
        for (int k = 0; k < aw; ++k) {
            w[k] += g * z[k];
            gz[k] += g * phi[k];
        }
    }

    const double* x = table.entity_row(head).data();
    const double* y = table.relation_row(relation).data();
    double* gx = grads.entities.data() + static_cast<std::size_t>(head) * d;
    double* gy = grads.relations.data() + static_cast<std::size_t>(relation) * d;

    // Suffix and prefix block sums drive the bias term of the gradient.
    std::vector<double> ysuf(static_cast<std::size_t>(n + 2) * m, 0.0);
    std::vector<double> ypre(static_cast<std::size_t>(n + 2) * m, 0.0);
    std::vector<double> xsuf(static_cast<std::size_t>(n + 2) * m, 0.0);
    std::vector<double> xpre(static_cast<std::size_t>(n + 2) * m, 0.0);
    for (int t = n; t >= 1; --t) {
        for (int k = 0; k < m; ++k) {
            ysuf[static_cast<std::size_t>(t) * m + k] =
                ysuf[static_cast<std::size_t>(t + 1) * m + k] + y[static_cast<std::size_t>(t) * m + k];
            xsuf[static_cast<std::size_t>(t) * m + k] =
                xsuf[static_cast<std::size_t>(t + 1) * m + k] + x[static_cast<std::size_t>(t) * m + k];
        }
    }
    for (int t = 1; t <= n; ++t) {
        for (int k = 0; k < m; ++k) {
            ypre[static_cast<std::size_t>(t) * m + k] =
                ypre[static_cast<std::size_t>(t - 1) * m + k] + y[static_cast<std::size_t>(t) * m + k];
            xpre[static_cast<std::size_t>(t) * m + k] =
                xpre[static_cast<std::size_t>(t - 1) * m + k] + x[static_cast<std::size_t>(t) * m + k];
        }
    }

    const double* w0 = w.data();
    for (int k = 0; k < m; ++k) {
        gx[k] += w0[k] * y[k];
        gy[k] += w0[k] * x[k];
    }
    for (int t = 1; t <= n; ++t) {
        const double sq = static_cast<double>(sig.square(t));
        const double* wt = w.data() + static_cast<std::size_t>(t) * m;
        const double* xt = x + static_cast<std::size_t>(t) * m;
        const double* yt = y + static_cast<std::size_t>(t) * m;
        double* gxt = gx + static_cast<std::size_t>(t) * m;
        double* gyt = gy + static_cast<std::size_t>(t) * m;
        const double* ya = ypre.data() + static_cast<std::size_t>(t - 1) * m;
        const double* yb = ysuf.data() + static_cast<std::size_t>(t + 1) * m;
        const double* xa = xpre.data() + static_cast<std::size_t>(t - 1) * m;
        const double* xb = xsuf.data() + static_cast<std::size_t>(t + 1) * m;
        for (int k = 0; k < m; ++k) {
            gx[k] += wt[k] * yt[k];
            gy[k] += wt[k] * xt[k];
            gxt[k] += sq * w0[k] * yt[k] + wt[k] * y[k] + big_g * (yb[k] - ya[k]);
            gyt[k] += sq * w0[k] * xt[k] + wt[k] * x[k] + big_g * (xa[k] - xb[k]);
        }
    }
}

GradientTable score_gradients(int head, int relation, std::span<const double> tail_grad,
                              const EmbeddingTable& table) {
    GradientTable grads = GradientTable::zeros_like(table);
    accumulate_score_gradients(head, relation, tail_grad, table, grads);
    return grads;
}

} // namespace decal
