#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "decal/clifford.hpp"
#include "decal/element.hpp"
#include "decal/signature.hpp"

namespace decal {

/// Dense entity and relation parameter matrices, row width d. Relation rows
/// cover base relations and their inverses. Rows are reinterpreted as
/// CliffordElements through the signature; trailing d - (1+p+q+r)*m scalars
/// of each row stay allocated but never enter a score.
struct EmbeddingTable {
    Signature sig;
    int num_entities = 0;
    int num_relations = 0;
    std::vector<double> entities;
    std::vector<double> relations;

    EmbeddingTable(const Signature& s, int n_entities, int n_relations);

    std::span<const double> entity_row(int id) const;
    std::span<double> entity_row(int id);
    std::span<const double> relation_row(int id) const;
    std::span<double> relation_row(int id);
};

/// N(0, 0.01^2) init, seeded; entity matrix filled first, then relations.
EmbeddingTable init_table(const Signature& sig, int num_entities, int num_relations,
                          std::uint64_t seed);

/// Slices a parameter row into blocks: block t = row[t*m .. (t+1)*m).
CliffordElement decode(std::span<const double> row, const Signature& sig);

/// DeCaL score (x o y) . z. The tail contributes its grade-0/1 blocks; every
/// grade-2 coefficient of the tail is fixed to the all-ones vector, so
/// grade-2 parts of the product enter as plain coordinate sums.
double score_triple(const CliffordElement& x, const CliffordElement& y, const CliffordElement& z,
                    const Signature& sig);

/// Tail-facing factorization of the score for one (head, relation) query:
/// score(h,r,t) = bias + <phi, first (1+p+q+r)*m scalars of t's row>.
/// phi block 0 is the scalar part of x o y, phi block t the e_t coefficient;
/// bias collects the coordinate sums of all grade-2 coefficients.
struct QueryScoreParts {
    std::vector<double> phi;
    double bias = 0.0;
};

QueryScoreParts query_parts(int head, int relation, const EmbeddingTable& table);

/// KvsAll batch form: scores (head, relation) against every entity.
std::vector<double> score_all_tails(int head, int relation, const EmbeddingTable& table);
void score_all_tails(int head, int relation, const EmbeddingTable& table, std::span<double> out);

/// Gradient accumulators shaped like an EmbeddingTable.
struct GradientTable {
    std::vector<double> entities;
    std::vector<double> relations;

    static GradientTable zeros_like(const EmbeddingTable& table);
    void reset();
};

/// Accumulates exact gradients of sum_t tail_grad[t] * score(h,r,t) into
/// `grads`. Entity rows collect the tail role for every t plus, for the head
/// row itself, the head role; trailing row scalars receive nothing.
void accumulate_score_gradients(int head, int relation, std::span<const double> tail_grad,
                                const EmbeddingTable& table, GradientTable& grads);

/// Convenience wrapper returning fresh buffers.
GradientTable score_gradients(int head, int relation, std::span<const double> tail_grad,
                              const EmbeddingTable& table);

} // namespace decal
