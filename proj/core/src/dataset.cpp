#include "decal/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace decal {

const char* split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Valid: return "valid";
        case Split::Test: return "test";
    }
    return "?";
}

int Vocab::entity_id(const std::string& name) const {
    auto it = entity_ids_.find(name);
    if (it == entity_ids_.end()) throw IdOutOfRange("unknown entity: " + name);
    return it->second;
}

int Vocab::relation_id(const std::string& name) const {
    auto it = relation_ids_.find(name);
    if (it == relation_ids_.end()) throw IdOutOfRange("unknown relation: " + name);
    return it->second;
}

int Vocab::add_entity(const std::string& name) {
    auto it = entity_ids_.find(name);
    if (it != entity_ids_.end()) return it->second;
    const int id = num_entities();
    entity_ids_.emplace(name, id);
    entity_names_.push_back(name);
    return id;
}

int Vocab::add_relation(const std::string& name) {
    auto it = relation_ids_.find(name);
    if (it != relation_ids_.end()) return it->second;
    const int id = num_base_relations();
    relation_ids_.emplace(name, id);
    relation_names_.push_back(name);
    return id;
}

const std::string& Vocab::relation_name(int id) const {
    if (id < 0 || id >= num_relation_rows()) {
        throw IdOutOfRange("relation id " + std::to_string(id) + " out of range");
    }
    return relation_names_.at(id % num_base_relations());
}

int Vocab::inverse(int rel) const {
    const int base = num_base_relations();
    if (rel < 0 || rel >= 2 * base) {
        throw IdOutOfRange("relation id " + std::to_string(rel) + " out of range");
    }
    return rel < base ? rel + base : rel - base;
}

const std::vector<Triple>& TripleStore::split(Split s) const {
    switch (s) {
        case Split::Train: return train;
        case Split::Valid: return valid;
        case Split::Test: return test;
    }
    throw Error("bad split");
}

const KvsAllIndex& TripleStore::kvsall(Split s) const {
    switch (s) {
        case Split::Train: return kvsall_train;
        case Split::Valid: return kvsall_valid;
        case Split::Test: return kvsall_test;
    }
    throw Error("bad split");
}

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::array<std::string, 3>> read_triple_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile("cannot open " + path.string());

    std::vector<std::array<std::string, 3>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;

        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos) {
            throw MalformedLine(path.string() + ":" + std::to_string(lineno) +
                                ": expected head<TAB>relation<TAB>tail");
        }
        std::array<std::string, 3> fields = {trim(line.substr(0, tab1)),
                                             trim(line.substr(tab1 + 1, tab2 - tab1 - 1)),
                                             trim(line.substr(tab2 + 1))};
        if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
            throw MalformedLine(path.string() + ":" + std::to_string(lineno) + ": empty field");
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

void index_augmented(const std::vector<Triple>& triples, const Vocab& vocab, KvsAllIndex& out) {
    for (const Triple& t : triples) {
        out[{t.head, t.relation}].push_back(t.tail);
        out[{t.tail, vocab.inverse(t.relation)}].push_back(t.head);
    }
    for (auto& [key, answers] : out) {
        std::sort(answers.begin(), answers.end());
        answers.erase(std::unique(answers.begin(), answers.end()), answers.end());
    }
}

} // namespace

TripleStore load_dataset(const std::filesystem::path& dir) {
    const auto train_rows = read_triple_file(dir / "train.txt");
    const auto valid_rows = read_triple_file(dir / "valid.txt");
    const auto test_rows = read_triple_file(dir / "test.txt");

    TripleStore store;
    auto ingest = [&](const std::vector<std::array<std::string, 3>>& rows,
                      std::vector<Triple>& out) {
        out.reserve(rows.size());
        for (const auto& row : rows) {
            out.push_back(Triple{store.vocab.add_entity(row[0]), store.vocab.add_relation(row[1]),
                                 store.vocab.add_entity(row[2])});
        }
    };
    ingest(train_rows, store.train);
    ingest(valid_rows, store.valid);
    ingest(test_rows, store.test);

    index_augmented(store.train, store.vocab, store.kvsall_train);
    index_augmented(store.valid, store.vocab, store.kvsall_valid);
    index_augmented(store.test, store.vocab, store.kvsall_test);

    for (const KvsAllIndex* idx : {&store.kvsall_train, &store.kvsall_valid, &store.kvsall_test}) {
        for (const auto& [key, answers] : *idx) {
            auto& dst = store.filter[key];
            dst.insert(dst.end(), answers.begin(), answers.end());
        }
    }
    for (auto& [key, answers] : store.filter) {
        std::sort(answers.begin(), answers.end());
        answers.erase(std::unique(answers.begin(), answers.end()), answers.end());
    }
    return store;
}

DatasetStats stats(const TripleStore& store) {
    DatasetStats s;
    s.num_entities = store.vocab.num_entities();
    s.num_relations = store.vocab.num_base_relations();
    s.train_size = store.train.size();
    s.valid_size = store.valid.size();
    s.test_size = store.test.size();
    s.train_queries = store.kvsall_train.size();
    s.valid_queries = store.kvsall_valid.size();
    s.test_queries = store.kvsall_test.size();
    for (const auto& [key, answers] : store.kvsall_train) {
        s.max_tail_set = std::max(s.max_tail_set, answers.size());
    }

    std::set<int> train_entities;
    std::set<int> train_relations;
    for (const Triple& t : store.train) {
        train_entities.insert(t.head);
        train_entities.insert(t.tail);
        train_relations.insert(t.relation);
    }
    std::set<int> eval_entities;
    std::set<int> eval_relations;
    for (const std::vector<Triple>* split : {&store.valid, &store.test}) {
        for (const Triple& t : *split) {
            eval_entities.insert(t.head);
            eval_entities.insert(t.tail);
            eval_relations.insert(t.relation);
        }
    }
    for (int e : eval_entities) {
        if (!train_entities.contains(e)) ++s.entities_not_in_train;
    }
    for (int r : eval_relations) {
        if (!train_relations.contains(r)) ++s.relations_not_in_train;
    }
    return s;
}

nlohmann::json stats_to_json(const DatasetStats& s) {
    return nlohmann::json{{"num_entities", s.num_entities},
                          {"num_relations", s.num_relations},
                          {"train_size", s.train_size},
                          {"valid_size", s.valid_size},
                          {"test_size", s.test_size},
                          {"train_queries", s.train_queries},
                          {"valid_queries", s.valid_queries},
                          {"test_queries", s.test_queries},
                          {"max_tail_set", s.max_tail_set},
                          {"entities_not_in_train", s.entities_not_in_train},
                          {"relations_not_in_train", s.relations_not_in_train}};
}

} // namespace decal
