#include "decal/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "decal/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "model files are little-endian; byte swapping is not implemented");

namespace decal {

namespace {

constexpr char kMagic[4] = {'D', 'C', 'A', 'L'};

void write_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_i32(std::ostream& out, std::int32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& in, const char* what) {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
        throw Error(std::string("model file truncated while reading ") + what);
    }
    return v;
}

std::int32_t read_i32(std::istream& in, const char* what) {
    std::int32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(v))) {
        throw Error(std::string("model file truncated while reading ") + what);
    }
    return v;
}

void write_matrix(std::ostream& out, const std::vector<double>& values) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
}

void read_matrix(std::istream& in, std::vector<double>& values, const char* what) {
    if (!in.read(reinterpret_cast<char*>(values.data()),
                 static_cast<std::streamsize>(values.size() * sizeof(double)))) {
        throw Error(std::string("model file truncated while reading the ") + what + " matrix");
    }
}

} // namespace

std::filesystem::path vocab_sidecar_path(const std::filesystem::path& model_path) {
    return std::filesystem::path(model_path.string() + ".vocab.json");
}

void save_model(const std::filesystem::path& path, const EmbeddingTable& table,
                const Vocab& vocab) {
    if (table.num_entities != vocab.num_entities() ||
        table.num_relations != vocab.num_relation_rows()) {
        throw ShapeMismatch("vocabulary sizes do not match the embedding table");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MissingFile("cannot open " + path.string() + " for writing");
    out.write(kMagic, sizeof(kMagic));
    write_u32(out, kModelFormatVersion);
    write_i32(out, table.sig.p());
    write_i32(out, table.sig.q());
    write_i32(out, table.sig.r());
    write_i32(out, table.sig.d());
    write_i32(out, table.num_entities);
    write_i32(out, table.num_relations);
    write_matrix(out, table.entities);
    write_matrix(out, table.relations);
    if (!out) throw Error("failed writing model file " + path.string());
    out.close();

    nlohmann::json sidecar{{"entities", vocab.entity_names()},
                           {"relations", vocab.relation_names()}};
    std::ofstream vout(vocab_sidecar_path(path));
    if (!vout) {
        throw MissingFile("cannot open " + vocab_sidecar_path(path).string() + " for writing");
    }
    vout << sidecar.dump(2) << "\n";
}

LoadedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFile("model file not found: " + path.string());
    char magic[4] = {};
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw Error("not a model file: " + path.string());
    }
    const std::uint32_t version = read_u32(in, "format version");
    if (version != kModelFormatVersion) {
        throw Error("unsupported model format version " + std::to_string(version));
    }
    const int p = read_i32(in, "p");
    const int q = read_i32(in, "q");
    const int r = read_i32(in, "r");
    const int d = read_i32(in, "d");
    const int num_entities = read_i32(in, "entity count");
    const int num_relations = read_i32(in, "relation count");
    Signature sig(p, q, r, d);

    EmbeddingTable table(sig, num_entities, num_relations);
    read_matrix(in, table.entities, "entity");
    read_matrix(in, table.relations, "relation");

    const std::filesystem::path sidecar = vocab_sidecar_path(path);
    std::ifstream vin(sidecar);
    if (!vin) throw MissingFile("vocabulary sidecar not found: " + sidecar.string());
    nlohmann::json parsed;
    try {
        vin >> parsed;
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed vocabulary sidecar " + sidecar.string() + ": " + e.what());
    }
    Vocab vocab;
    for (const auto& name : parsed.at("entities")) vocab.add_entity(name.get<std::string>());
    for (const auto& name : parsed.at("relations")) vocab.add_relation(name.get<std::string>());
    if (vocab.num_entities() != num_entities || vocab.num_relation_rows() != num_relations) {
        throw ShapeMismatch("vocabulary sidecar sizes do not match the model file");
    }
    return {std::move(table), std::move(vocab)};
}

} // namespace decal
