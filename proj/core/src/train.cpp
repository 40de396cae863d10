#include "decal/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "decal/errors.hpp"

namespace decal {

namespace {

// Decorrelates the shuffle stream from the init stream under a shared seed.
constexpr std::uint64_t kShuffleStreamSalt = 0x9e3779b97f4a7c15ULL;

double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

void adam_update_span(std::span<double> params, std::span<const double> grads,
                      std::span<double> m, std::span<double> v, double lr, double bias1,
                      double bias2, double beta1, double beta2, double eps, double weight_decay,
                      double clip_scale) {
    for (std::size_t i = 0; i < params.size(); ++i) {
        double g = grads[i] * clip_scale;
        if (weight_decay != 0.0) g += weight_decay * params[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        const double m_hat = m[i] / bias1;
        const double v_hat = v[i] / bias2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
}

double squared_sum(const std::vector<double>& values) {
    double s = 0.0;
    for (double g : values) s += g * g;
    return s;
}

void check_finite(const std::vector<double>& grads, const char* which) {
    for (double g : grads) {
        if (!std::isfinite(g)) {
            throw NonFiniteGradient(std::string("non-finite gradient in ") + which + " matrix");
        }
    }
}

} // namespace

AdamState AdamState::zeros_like(const EmbeddingTable& table) {
    AdamState state;
    state.m_entities.assign(table.entities.size(), 0.0);
    state.v_entities.assign(table.entities.size(), 0.0);
    state.m_relations.assign(table.relations.size(), 0.0);
    state.v_relations.assign(table.relations.size(), 0.0);
    return state;
}

std::pair<double, std::vector<double>> bce_loss(std::span<const double> logits,
                                                std::span<const double> targets,
                                                double smoothing) {
    if (logits.size() != targets.size()) {
        throw LengthMismatch("logits length " + std::to_string(logits.size()) +
                             " vs targets length " + std::to_string(targets.size()));
    }
    if (logits.empty()) throw LengthMismatch("empty logit vector");
    const double n = static_cast<double>(logits.size());
    const double uniform = smoothing / n;
    double loss = 0.0;
    std::vector<double> grad(logits.size(), 0.0);
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double s = logits[i];
        const double y = targets[i] * (1.0 - smoothing) + uniform;
        // -[y log sig(s) + (1-y) log(1-sig(s))] = softplus(s) - y*s
        loss += softplus(s) - y * s;
        const double sigma = 1.0 / (1.0 + std::exp(-std::abs(s)));
        const double sig_s = s >= 0.0 ? sigma : 1.0 - sigma;
        grad[i] = (sig_s - y) / n;
    }
    return {loss / n, std::move(grad)};
}

void adam_step(EmbeddingTable& table, const GradientTable& grads, AdamState& state,
               const TrainConfig& cfg) {
    if (grads.entities.size() != table.entities.size() ||
        grads.relations.size() != table.relations.size() ||
        state.m_entities.size() != table.entities.size() ||
        state.m_relations.size() != table.relations.size()) {
        throw ShapeMismatch("gradient or optimizer state shape does not match table");
    }
    check_finite(grads.entities, "entity");
    check_finite(grads.relations, "relation");

    double clip_scale = 1.0;
    if (cfg.grad_clip > 0.0) {
        const double norm = std::sqrt(squared_sum(grads.entities) + squared_sum(grads.relations));
        if (norm > cfg.grad_clip) clip_scale = cfg.grad_clip / norm;
    }

    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double bias1 = 1.0 - std::pow(cfg.adam_beta1, t);
    const double bias2 = 1.0 - std::pow(cfg.adam_beta2, t);

    adam_update_span(table.entities, grads.entities, state.m_entities, state.v_entities,
                     cfg.learning_rate, bias1, bias2, cfg.adam_beta1, cfg.adam_beta2,
                     cfg.adam_eps, cfg.weight_decay, clip_scale);
    adam_update_span(table.relations, grads.relations, state.m_relations, state.v_relations,
                     cfg.learning_rate, bias1, bias2, cfg.adam_beta1, cfg.adam_beta2,
                     cfg.adam_eps, cfg.weight_decay, clip_scale);
}

TrainResult train(const TripleStore& store, const Signature& sig, const TrainConfig& cfg) {
    if (store.kvsall_train.empty()) throw EmptyTrainSet("no training queries");
    if (sig.d() != cfg.d) {
        throw InvalidSignature("signature d=" + std::to_string(sig.d()) +
                               " disagrees with config d=" + std::to_string(cfg.d));
    }

    const int num_entities = store.vocab.num_entities();
    const int num_relations = store.vocab.num_relation_rows();
    EmbeddingTable table = init_table(sig, num_entities, num_relations, cfg.seed);
    AdamState state = AdamState::zeros_like(table);
    std::mt19937_64 shuffle_rng(cfg.seed ^ kShuffleStreamSalt);

    struct Query {
        int head;
        int relation;
        const std::vector<int>* tails;
    };
    std::vector<Query> queries;
    queries.reserve(store.kvsall_train.size());
    for (const auto& [key, tails] : store.kvsall_train) {
        queries.push_back({key.first, key.second, &tails});
    }

    std::vector<std::size_t> order(queries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    GradientTable grads = GradientTable::zeros_like(table);
    std::vector<double> scores(static_cast<std::size_t>(num_entities), 0.0);
    std::vector<double> targets(static_cast<std::size_t>(num_entities), 0.0);

    TrainResult result{std::move(table), {}};
    result.loss_trace.reserve(static_cast<std::size_t>(std::max(cfg.epochs, 0)));

    const std::size_t batch = cfg.batch_size > 0 ? static_cast<std::size_t>(cfg.batch_size)
                                                 : queries.size();
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t end = std::min(start + batch, order.size());
            grads.reset();
            for (std::size_t idx = start; idx < end; ++idx) {
                const Query& query = queries[order[idx]];
                score_all_tails(query.head, query.relation, result.table, scores);
                std::fill(targets.begin(), targets.end(), 0.0);
                for (int tail : *query.tails) targets[static_cast<std::size_t>(tail)] = 1.0;
                auto [loss, grad] = bce_loss(scores, targets, cfg.label_smoothing);
                epoch_loss += loss;
                accumulate_score_gradients(query.head, query.relation, grad, result.table, grads);
            }
            adam_step(result.table, grads, state, cfg);
        }
        result.loss_trace.push_back(epoch_loss / static_cast<double>(queries.size()));
    }
    return result;
}

} // namespace decal
