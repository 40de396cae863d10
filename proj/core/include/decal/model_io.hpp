#pragma once

#include <filesystem>

#include "decal/dataset.hpp"
#include "decal/model.hpp"

namespace decal {

/// Binary model format: magic "DCAL", format version u32, then p, q, r, d,
/// entity and relation row counts (i32 each), then both matrices row-major
/// as little-endian f64. The vocabulary lives in a JSON sidecar at
/// <path>.vocab.json.
inline constexpr std::uint32_t kModelFormatVersion = 1;

std::filesystem::path vocab_sidecar_path(const std::filesystem::path& model_path);

void save_model(const std::filesystem::path& path, const EmbeddingTable& table,
                const Vocab& vocab);

struct LoadedModel {
    EmbeddingTable table;
    Vocab vocab;
};

LoadedModel load_model(const std::filesystem::path& path);

} // namespace decal
