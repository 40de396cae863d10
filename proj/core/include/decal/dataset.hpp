#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "decal/errors.hpp"

namespace decal {

struct Triple {
    int head;
    int relation;
    int tail;

    friend bool operator==(const Triple&, const Triple&) = default;
};

enum class Split { Train, Valid, Test };

const char* split_name(Split s);

/// Entity and relation vocabularies with dense ids in first-appearance order.
/// Base relations occupy [0, |R|); their inverses occupy [|R|, 2|R|).
class Vocab {
public:
    int entity_id(const std::string& name) const;
    int relation_id(const std::string& name) const;
    int add_entity(const std::string& name);
    int add_relation(const std::string& name);

    const std::string& entity_name(int id) const { return entity_names_.at(id); }
    const std::string& relation_name(int id) const;

    int num_entities() const { return static_cast<int>(entity_names_.size()); }
    int num_base_relations() const { return static_cast<int>(relation_names_.size()); }
    int num_relation_rows() const { return 2 * num_base_relations(); }

    /// Maps a relation id to its inverse and back.
    int inverse(int rel) const;

    const std::vector<std::string>& entity_names() const { return entity_names_; }
    const std::vector<std::string>& relation_names() const { return relation_names_; }

    friend bool operator==(const Vocab& a, const Vocab& b) {
        return a.entity_names_ == b.entity_names_ && a.relation_names_ == b.relation_names_;
    }

private:
    std::vector<std::string> entity_names_;
    std::vector<std::string> relation_names_;
    std::unordered_map<std::string, int> entity_ids_;
    std::unordered_map<std::string, int> relation_ids_;
};

/// (head, relation) query key; relation may be an inverse id.
using QueryKey = std::pair<int, int>;

/// KvsAll index: query -> sorted unique answer ids.
using KvsAllIndex = std::map<QueryKey, std::vector<int>>;

/// Parsed dataset with vocabularies, per-split KvsAll indices over the
/// inverse-augmented query space, and the filter index spanning all splits.
struct TripleStore {
    Vocab vocab;

    // Original triples in file order (duplicates preserved).
    std::vector<Triple> train;
    std::vector<Triple> valid;
    std::vector<Triple> test;

    KvsAllIndex kvsall_train;
    KvsAllIndex kvsall_valid;
    KvsAllIndex kvsall_test;
    KvsAllIndex filter;

    const std::vector<Triple>& split(Split s) const;
    const KvsAllIndex& kvsall(Split s) const;
};

/// Loads train.txt/valid.txt/test.txt ("head<TAB>relation<TAB>tail", UTF-8)
/// from a directory and builds all indices. Vocabulary covers all three
/// splits; training queries are augmented with (tail, r^-1) -> head.
TripleStore load_dataset(const std::filesystem::path& dir);

struct DatasetStats {
    int num_entities = 0;
    int num_relations = 0;
    std::size_t train_size = 0;
    std::size_t valid_size = 0;
    std::size_t test_size = 0;
    std::size_t train_queries = 0;
    std::size_t valid_queries = 0;
    std::size_t test_queries = 0;
    std::size_t max_tail_set = 0;
    // Entities/relations of valid/test never seen in a train triple.
    std::size_t entities_not_in_train = 0;
    std::size_t relations_not_in_train = 0;
};

DatasetStats stats(const TripleStore& store);

nlohmann::json stats_to_json(const DatasetStats& s);

} // namespace decal
