#include "decal/search.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "decal/errors.hpp"

namespace decal {

namespace {

bool record_before(const SearchRecord& a, const SearchRecord& b) {
    if (a.val_mrr != b.val_mrr) return a.val_mrr > b.val_mrr;
    if (a.p != b.p) return a.p < b.p;
    if (a.q != b.q) return a.q < b.q;
    return a.r < b.r;
}

bool valid_conf(const Conf& c, int d) {
    return c[0] >= 0 && c[1] >= 0 && c[2] >= 0 && 1 + c[0] + c[1] + c[2] <= d;
}

} // namespace

std::vector<Conf> les_enumerate(int d) {
    if (d < 1) throw InvalidSignature("d must be at least 1");
    std::vector<Conf> confs;
    for (int p = 0; p <= d; ++p) {
        for (int q = 0; p + q <= d; ++q) {
            for (int r = 0; p + q + r <= d; ++r) {
                confs.push_back({p, q, r});
            }
        }
    }
    return confs;
}

std::vector<Conf> gsdc_enumerate(int d) {
    if (d < 1) throw InvalidSignature("d must be at least 1");
    std::vector<Conf> confs;
    for (int p = 0; p <= d; ++p) {
        for (int q = 0; p + q <= d; ++q) {
            for (int r = 0; p + q + r <= d; ++r) {
                if (d % (1 + p + q + r) == 0) confs.push_back({p, q, r});
            }
        }
    }
    return confs;
}

std::vector<Conf> generate_conf(const std::set<Conf>& seen, const Conf& current) {
    std::vector<Conf> out;
    for (int dp = -1; dp <= 1; ++dp) {
        for (int dq = -1; dq <= 1; ++dq) {
            for (int dr = -1; dr <= 1; ++dr) {
                Conf c{current[0] + dp, current[1] + dq, current[2] + dr};
                if (!seen.contains(c)) out.push_back(c);
            }
        }
    }
    return out;
}

void score_confs(const std::vector<Conf>& candidates, int d, const Evaluator& evaluator,
                 std::vector<SearchRecord>& prior, int workers) {
    std::vector<Conf> valid;
    for (const Conf& c : candidates) {
        if (valid_conf(c, d)) valid.push_back(c);
    }
    std::vector<EvalOutcome> outcomes(valid.size());
    const std::size_t thread_count =
        std::min<std::size_t>(std::max(workers, 1), valid.size());
    if (thread_count <= 1) {
        for (std::size_t i = 0; i < valid.size(); ++i) {
            outcomes[i] = evaluator(valid[i][0], valid[i][1], valid[i][2]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        auto run = [&] {
            for (std::size_t i = next.fetch_add(1); i < valid.size(); i = next.fetch_add(1)) {
                try {
                    outcomes[i] = evaluator(valid[i][0], valid[i][1], valid[i][2]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        };
        std::vector<std::thread> threads;
        threads.reserve(thread_count);
        for (std::size_t t = 0; t < thread_count; ++t) threads.emplace_back(run);
        for (std::thread& t : threads) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    for (std::size_t i = 0; i < valid.size(); ++i) {
        prior.push_back({valid[i][0], valid[i][1], valid[i][2], outcomes[i].val_mrr,
                         outcomes[i].train_seconds});
    }
}

SearchResult greedy_search(int max_iterations, int d, const Evaluator& evaluator,
                           int workers) {
    if (max_iterations < 1) throw Error("max_iterations must be at least 1");
    if (d < 1) throw InvalidSignature("d must be at least 1");

    Conf incumbent{1, 1, 1};
    std::set<Conf> seen;
    std::vector<SearchRecord> prior;
    SearchResult result;

    for (int i = 0; i < max_iterations; ++i) {
        ++result.iterations;
        std::vector<Conf> to_score = generate_conf(seen, incumbent);
        const std::size_t before = prior.size();
        score_confs(to_score, d, evaluator, prior, workers);
        result.trace.insert(result.trace.end(), prior.begin() + static_cast<std::ptrdiff_t>(before),
                            prior.end());
        if (prior.empty()) throw Error("greedy search scored no valid configuration");
        std::sort(prior.begin(), prior.end(), record_before);
        const SearchRecord& top = prior.front();
        Conf top_conf{top.p, top.q, top.r};
        if (top_conf == incumbent) break;
        incumbent = top_conf;
        seen.insert(to_score.begin(), to_score.end());
    }

    result.best = *std::min_element(result.trace.begin(), result.trace.end(), record_before);
    return result;
}

SearchResult sweep(const std::vector<Conf>& candidates, int d, const Evaluator& evaluator,
                   int workers) {
    SearchResult result;
    result.iterations = 1;
    score_confs(candidates, d, evaluator, result.trace, workers);
    if (result.trace.empty()) throw Error("sweep scored no valid configuration");
    result.best = *std::min_element(result.trace.begin(), result.trace.end(), record_before);
    return result;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

SearchCache::SearchCache(std::filesystem::path dir, std::uint64_t dataset_hash,
                         std::uint64_t config_hash)
    : dir_(std::move(dir)), dataset_hash_(dataset_hash), config_hash_(config_hash),
      enabled_(true) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path SearchCache::entry_path(int p, int q, int r) const {
    std::ostringstream name;
    name << std::hex << dataset_hash_ << "-" << config_hash_ << std::dec << "-p" << p << "q" << q
         << "r" << r << ".txt";
    return dir_ / name.str();
}

std::optional<EvalOutcome> SearchCache::lookup(int p, int q, int r) const {
    if (!enabled_) return std::nullopt;
    std::ifstream in(entry_path(p, q, r));
    if (!in) return std::nullopt;
    EvalOutcome outcome;
    if (!(in >> outcome.val_mrr >> outcome.train_seconds)) return std::nullopt;
    return outcome;
}

void SearchCache::store(int p, int q, int r, const EvalOutcome& outcome) const {
    if (!enabled_) return;
    const std::filesystem::path path = entry_path(p, q, r);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out.precision(17);
        out << outcome.val_mrr << " " << outcome.train_seconds << "\n";
    }
    std::filesystem::rename(tmp, path);
}

Evaluator cached_evaluator(Evaluator inner, SearchCache cache) {
    return [inner = std::move(inner), cache = std::move(cache)](int p, int q, int r) {
        if (auto hit = cache.lookup(p, q, r)) return *hit;
        EvalOutcome outcome = inner(p, q, r);
        cache.store(p, q, r, outcome);
        return outcome;
    };
}

FeatureMatrix vsp_export_features(const TripleStore& store, const EmbeddingTable& table_111) {
    if (store.train.empty()) throw EmptyTrainSet("no training triples to export");
    const Signature& sig = table_111.sig;
    if (sig.p() != 1 || sig.q() != 1 || sig.r() != 1) {
        throw InvalidSignature("feature export expects a Cl_{1,1,1} table, got " + sig.str());
    }
    const std::size_t d = static_cast<std::size_t>(sig.d());
    FeatureMatrix matrix;
    matrix.rows = store.train.size();
    matrix.cols = 3 * d;
    matrix.values.reserve(matrix.rows * matrix.cols);
    for (const Triple& triple : store.train) {
        for (double v : table_111.entity_row(triple.head)) matrix.values.push_back(v);
        for (double v : table_111.relation_row(triple.relation)) matrix.values.push_back(v);
        for (double v : table_111.entity_row(triple.tail)) matrix.values.push_back(v);
    }
    return matrix;
}

} // namespace decal
