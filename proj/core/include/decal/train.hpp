#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "decal/dataset.hpp"
#include "decal/model.hpp"
#include "decal/signature.hpp"

namespace decal {

struct TrainConfig {
    int d = 16;
    int epochs = 250;
    int batch_size = 1024;
    double learning_rate = 0.1;
    std::uint64_t seed = 0;
    double label_smoothing = 0.0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double weight_decay = 0.0;
    double grad_clip = 0.0;
};

/// Adam moments mirroring an EmbeddingTable, plus the step counter.
struct AdamState {
    std::vector<double> m_entities;
    std::vector<double> v_entities;
    std::vector<double> m_relations;
    std::vector<double> v_relations;
    long step = 0;

    static AdamState zeros_like(const EmbeddingTable& table);
};

/// Stable binary cross-entropy over logits with label smoothing.
/// Returns the mean loss and d(loss)/d(logit) per entry.
std::pair<double, std::vector<double>> bce_loss(std::span<const double> logits,
                                                std::span<const double> targets,
                                                double smoothing);

/// Bias-corrected Adam update applied densely to both matrices.
/// Throws NonFiniteGradient if any gradient entry is NaN or infinite.
void adam_step(EmbeddingTable& table, const GradientTable& grads, AdamState& state,
               const TrainConfig& cfg);

struct TrainResult {
    EmbeddingTable table;
    std::vector<double> loss_trace;
};

/// KvsAll training: each epoch shuffles the distinct (head, relation)
/// queries of the augmented train index, scores each query against all
/// entities, and applies one Adam step per batch with gradients summed
/// across the batch's queries. Deterministic given cfg.seed.
/// The trace holds one mean per-query loss value per epoch.
TrainResult train(const TripleStore& store, const Signature& sig, const TrainConfig& cfg);

} // namespace decal
