#pragma once

// Deterministic synthetic knowledge graph used by training and CLI tests:
// 31 entities on a cycle, 8 shift relations, split 200/24/24. The shuffle is
// hand-rolled so the split is identical on every platform.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <decal/dataset.hpp>

namespace testref {

struct RawTriple {
    std::string h, r, t;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::vector<RawTriple> synth_kg_triples() {
    constexpr int n = 31;
    constexpr std::array<int, 8> shifts{1, 2, 3, 5, 8, 12, 18, 25};
    std::vector<RawTriple> triples;
    for (int s : shifts) {
        for (int a = 0; a < n; ++a) {
            triples.push_back({"e" + std::to_string(a), "shift" + std::to_string(s),
                               "e" + std::to_string((a + s) % n)});
        }
    }
    std::uint64_t state = 77;
    for (std::size_t i = triples.size() - 1; i > 0; --i) {
        const std::size_t j = splitmix64(state) % (i + 1);
        std::swap(triples[i], triples[j]);
    }
    return triples;
}

inline void write_split(const std::filesystem::path& path, const std::vector<RawTriple>& triples,
                        std::size_t begin, std::size_t end) {
    std::ofstream out(path);
    for (std::size_t i = begin; i < end; ++i) {
        out << triples[i].h << "\t" << triples[i].r << "\t" << triples[i].t << "\n";
    }
}

/// Writes the synthetic KG once per process and returns its directory.
inline const std::filesystem::path& synth_kg_dir() {
    static const std::filesystem::path dir = [] {
        const std::filesystem::path d =
            std::filesystem::temp_directory_path() / "decal-tests-synthkg";
        std::filesystem::create_directories(d);
        const std::vector<RawTriple> triples = synth_kg_triples();
        const std::size_t n_test = triples.size() / 10;
        const std::size_t n_valid = triples.size() / 10;
        write_split(d / "test.txt", triples, 0, n_test);
        write_split(d / "valid.txt", triples, n_test, n_test + n_valid);
        write_split(d / "train.txt", triples, n_test + n_valid, triples.size());
        return d;
    }();
    return dir;
}

/// Parsed once per process.
inline const decal::TripleStore& synth_store() {
    static const decal::TripleStore store = decal::load_dataset(synth_kg_dir());
    return store;
}

} // namespace testref
