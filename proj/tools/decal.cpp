// decal: train, search, evaluate and export DeCaL knowledge-graph embeddings.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <decal/dataset.hpp>
#include <decal/errors.hpp>
#include <decal/eval.hpp>
#include <decal/model.hpp>
#include <decal/model_io.hpp>
#include <decal/search.hpp>
#include <decal/signature.hpp>
#include <decal/train.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct SigFlags {
    int p = 0;
    int q = 0;
    int r = 0;
    int d = 16;
};

struct TrainFlags {
    int epochs = 250;
    int batch_size = 1024;
    double lr = 0.1;
    std::uint64_t seed = 0;
    double label_smoothing = 0.0;
    double weight_decay = 0.0;
    double grad_clip = 0.0;
};

decal::TrainConfig make_config(const TrainFlags& t, int d) {
    decal::TrainConfig cfg;
    cfg.d = d;
    cfg.epochs = t.epochs;
    cfg.batch_size = t.batch_size;
    cfg.learning_rate = t.lr;
    cfg.seed = t.seed;
    cfg.label_smoothing = t.label_smoothing;
    cfg.weight_decay = t.weight_decay;
    cfg.grad_clip = t.grad_clip;
    return cfg;
}

json config_json(const decal::TrainConfig& cfg) {
    return json{{"d", cfg.d},
                {"epochs", cfg.epochs},
                {"batch_size", cfg.batch_size},
                {"learning_rate", cfg.learning_rate},
                {"seed", cfg.seed},
                {"label_smoothing", cfg.label_smoothing},
                {"adam_beta1", cfg.adam_beta1},
                {"adam_beta2", cfg.adam_beta2},
                {"adam_eps", cfg.adam_eps},
                {"weight_decay", cfg.weight_decay},
                {"grad_clip", cfg.grad_clip}};
}

json signature_json(const decal::Signature& sig) {
    return json{{"p", sig.p()}, {"q", sig.q()}, {"r", sig.r()}, {"d", sig.d()}, {"m", sig.m()},
                {"algebra", sig.str()}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw decal::MissingFile("cannot open " + path.string() + " for writing");
    out << text;
}

void write_json_file(const fs::path& path, const json& value) {
    write_text(path, value.dump(2) + "\n");
}

/// One manifest per run; holds everything needed to reproduce it.
class Manifest {
public:
    Manifest(const std::string& command, const fs::path& out_dir)
        : out_dir_(out_dir), start_(Clock::now()) {
        body_["command"] = command;
        body_["build_id"] = DECAL_BUILD_ID;
        body_["outputs"] = json::object();
    }

    json& body() { return body_; }

    void add_output(const std::string& key, const fs::path& path) {
        body_["outputs"][key] = path.string();
    }

    void finish() {
        body_["wall_seconds"] = seconds_since(start_);
        write_json_file(out_dir_ / "manifest.json", body_);
    }

private:
    fs::path out_dir_;
    json body_;
    Clock::time_point start_;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw decal::MissingFile("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::uint64_t dataset_hash(const fs::path& dir) {
    std::string all;
    for (const char* name : {"train.txt", "valid.txt", "test.txt"}) {
        all += read_file(dir / name);
        all += '\0';
    }
    return decal::fnv1a64(all);
}

std::uint64_t config_hash(const decal::TrainConfig& cfg) {
    return decal::fnv1a64(config_json(cfg).dump());
}

void write_loss_trace(const fs::path& path, const std::vector<double>& trace) {
    std::ostringstream out;
    out.precision(17);
    out << "epoch,loss\n";
    for (std::size_t i = 0; i < trace.size(); ++i) out << i << "," << trace[i] << "\n";
    write_text(path, out.str());
}

void write_search_trace(const fs::path& path, const std::vector<decal::SearchRecord>& trace) {
    std::ostringstream out;
    out.precision(17);
    out << "p,q,r,val_mrr,train_seconds\n";
    for (const decal::SearchRecord& rec : trace) {
        out << rec.p << "," << rec.q << "," << rec.r << "," << rec.val_mrr << ","
            << rec.train_seconds << "\n";
    }
    write_text(path, out.str());
}

void print_report(const char* split, const decal::EvalReport& rep) {
    std::cout << split << ": mrr=" << rep.mrr << " hits@1=" << rep.hits1
              << " hits@3=" << rep.hits3 << " hits@10=" << rep.hits10
              << " queries=" << rep.num_queries << "\n";
}

/// Evaluates eval-split reports for a trained table, skipping empty splits.
void write_split_reports(const decal::EmbeddingTable& table, const decal::TripleStore& store,
                         const fs::path& out_dir, Manifest& manifest) {
    for (decal::Split split : {decal::Split::Train, decal::Split::Valid, decal::Split::Test}) {
        const char* name = decal::split_name(split);
        if (store.split(split).empty()) {
            std::cout << name << ": skipped (empty split)\n";
            continue;
        }
        decal::EvalReport rep = decal::evaluate(table, store, split);
        const fs::path path = out_dir / (std::string("eval_") + name + ".json");
        write_json_file(path, decal::report_to_json(rep));
        manifest.add_output(std::string("eval_") + name, path);
        print_report(name, rep);
    }
}

decal::Evaluator make_search_evaluator(const decal::TripleStore& store,
                                       const decal::TrainConfig& cfg, bool quiet) {
    auto log_mutex = std::make_shared<std::mutex>();
    return [&store, cfg, quiet, log_mutex](int p, int q, int r) {
        const Clock::time_point start = Clock::now();
        decal::Signature sig(p, q, r, cfg.d);
        decal::TrainResult trained = decal::train(store, sig, cfg);
        decal::EvalReport rep = decal::evaluate(trained.table, store, decal::Split::Valid);
        decal::EvalOutcome outcome{rep.mrr, seconds_since(start)};
        if (!quiet) {
            std::lock_guard<std::mutex> lock(*log_mutex);
            std::cout << sig.str() << ": val mrr=" << outcome.val_mrr << " ("
                      << outcome.train_seconds << "s)" << std::endl;
        }
        return outcome;
    };
}

decal::SearchCache make_cache(const fs::path& data_dir, const decal::TrainConfig& cfg) {
    const char* dir = std::getenv("DECAL_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return {};
    return decal::SearchCache(fs::path(dir), dataset_hash(data_dir), config_hash(cfg));
}

int run_train(const std::string& data, const SigFlags& sig_flags, const TrainFlags& train_flags,
              const fs::path& out_dir) {
    fs::create_directories(out_dir);
    Manifest manifest("train", out_dir);
    decal::Signature sig(sig_flags.p, sig_flags.q, sig_flags.r, sig_flags.d);
    decal::TrainConfig cfg = make_config(train_flags, sig_flags.d);
    manifest.body()["data"] = data;
    manifest.body()["signature"] = signature_json(sig);
    manifest.body()["config"] = config_json(cfg);

    decal::TripleStore store = decal::load_dataset(data);
    std::cout << "loaded " << data << ": " << store.vocab.num_entities() << " entities, "
              << store.vocab.num_base_relations() << " relations, " << store.train.size()
              << " train triples\n";

    const Clock::time_point train_start = Clock::now();
    decal::TrainResult result = decal::train(store, sig, cfg);
    manifest.body()["train_seconds"] = seconds_since(train_start);
    if (!result.loss_trace.empty()) {
        std::cout << "final loss " << result.loss_trace.back() << " after " << cfg.epochs
                  << " epochs\n";
    }

    const fs::path model_path = out_dir / "model.bin";
    decal::save_model(model_path, result.table, store.vocab);
    manifest.add_output("model", model_path);
    manifest.add_output("vocab", decal::vocab_sidecar_path(model_path));

    const fs::path trace_path = out_dir / "loss_trace.csv";
    write_loss_trace(trace_path, result.loss_trace);
    manifest.add_output("loss_trace", trace_path);

    write_split_reports(result.table, store, out_dir, manifest);
    manifest.finish();
    return 0;
}

int run_search(const std::string& data, const std::string& strategy, const SigFlags& sig_flags,
               const TrainFlags& train_flags, int max_iterations, int budget_epochs, int workers,
               const fs::path& out_dir) {
    fs::create_directories(out_dir);
    Manifest manifest("search", out_dir);
    decal::TrainConfig cfg = make_config(train_flags, sig_flags.d);
    if (budget_epochs > 0) cfg.epochs = budget_epochs;
    manifest.body()["data"] = data;
    manifest.body()["strategy"] = strategy;
    manifest.body()["config"] = config_json(cfg);
    manifest.body()["max_iterations"] = max_iterations;
    manifest.body()["workers"] = workers;

    decal::TripleStore store = decal::load_dataset(data);
    decal::Evaluator evaluator =
        decal::cached_evaluator(make_search_evaluator(store, cfg, false), make_cache(data, cfg));

    decal::SearchResult result;
    if (strategy == "les") {
        result = decal::sweep(decal::les_enumerate(cfg.d), cfg.d, evaluator, workers);
    } else if (strategy == "gsdc") {
        result = decal::sweep(decal::gsdc_enumerate(cfg.d), cfg.d, evaluator, workers);
    } else {
        result = decal::greedy_search(max_iterations, cfg.d, evaluator, workers);
    }

    const fs::path trace_path = out_dir / "trace.csv";
    write_search_trace(trace_path, result.trace);
    manifest.add_output("trace", trace_path);

    json best{{"p", result.best.p},
              {"q", result.best.q},
              {"r", result.best.r},
              {"d", cfg.d},
              {"val_mrr", result.best.val_mrr},
              {"train_seconds", result.best.train_seconds},
              {"iterations", result.iterations},
              {"evaluations", result.trace.size()}};
    const fs::path best_path = out_dir / "best.json";
    write_json_file(best_path, best);
    manifest.add_output("best", best_path);

    std::cout << "best: Cl_{" << result.best.p << "," << result.best.q << "," << result.best.r
              << "} val mrr=" << result.best.val_mrr << " after " << result.trace.size()
              << " evaluations, " << result.iterations << " iterations\n";
    manifest.finish();
    return 0;
}

int run_evaluate(const std::string& data, const fs::path& model_path, const std::string& split,
                 const fs::path& out_dir) {
    fs::create_directories(out_dir);
    Manifest manifest("evaluate", out_dir);
    manifest.body()["data"] = data;
    manifest.body()["model"] = model_path.string();
    manifest.body()["split"] = split;

    decal::LoadedModel model = decal::load_model(model_path);
    decal::TripleStore store = decal::load_dataset(data);
    if (!(store.vocab == model.vocab)) {
        throw decal::ShapeMismatch("model vocabulary does not match dataset " + data);
    }
    manifest.body()["signature"] = signature_json(model.table.sig);

    decal::Split which = split == "train"   ? decal::Split::Train
                         : split == "valid" ? decal::Split::Valid
                                            : decal::Split::Test;
    decal::EvalReport rep = decal::evaluate(model.table, store, which);
    const json rep_json = decal::report_to_json(rep);
    std::cout << rep_json.dump(2) << "\n";

    const fs::path report_path = out_dir / ("eval_" + split + ".json");
    write_json_file(report_path, rep_json);
    manifest.add_output("report", report_path);
    manifest.finish();
    return 0;
}

int run_export_features(const std::string& data, const fs::path& model_path,
                        const std::string& format, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    Manifest manifest("export-features", out_dir);
    manifest.body()["data"] = data;
    manifest.body()["model"] = model_path.string();
    manifest.body()["format"] = format;

    decal::LoadedModel model = decal::load_model(model_path);
    decal::TripleStore store = decal::load_dataset(data);
    if (!(store.vocab == model.vocab)) {
        throw decal::ShapeMismatch("model vocabulary does not match dataset " + data);
    }
    decal::FeatureMatrix matrix = decal::vsp_export_features(store, model.table);

    fs::path out_path;
    if (format == "bin") {
        out_path = out_dir / "features.bin";
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw decal::MissingFile("cannot open " + out_path.string() + " for writing");
        const std::uint64_t rows = matrix.rows;
        out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
        out.write(reinterpret_cast<const char*>(matrix.values.data()),
                  static_cast<std::streamsize>(matrix.values.size() * sizeof(double)));
    } else {
        out_path = out_dir / "features.csv";
        std::ostringstream out;
        out.precision(17);
        const std::size_t d = matrix.cols / 3;
        for (const char* role : {"h", "r", "t"}) {
            for (std::size_t k = 0; k < d; ++k) {
                if (role != std::string("h") || k > 0) out << ",";
                out << role << "_" << k;
            }
        }
        out << "\n";
        for (std::size_t row = 0; row < matrix.rows; ++row) {
            const double* base = matrix.values.data() + row * matrix.cols;
            for (std::size_t col = 0; col < matrix.cols; ++col) {
                if (col > 0) out << ",";
                out << base[col];
            }
            out << "\n";
        }
        write_text(out_path, out.str());
    }
    manifest.add_output("features", out_path);
    std::cout << "wrote " << matrix.rows << " x " << matrix.cols << " feature matrix to "
              << out_path.string() << "\n";
    manifest.finish();
    return 0;
}

int run_stats(const std::string& data, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    Manifest manifest("stats", out_dir);
    manifest.body()["data"] = data;

    decal::TripleStore store = decal::load_dataset(data);
    const json stats_json = decal::stats_to_json(decal::stats(store));
    std::cout << stats_json.dump(2) << "\n";

    const fs::path stats_path = out_dir / "stats.json";
    write_json_file(stats_path, stats_json);
    manifest.add_output("stats", stats_path);
    manifest.finish();
    return 0;
}

int exit_code_for(const decal::Error& e) {
    if (dynamic_cast<const decal::InvalidSignature*>(&e) != nullptr ||
        dynamic_cast<const decal::IdOutOfRange*>(&e) != nullptr) {
        return 1;
    }
    if (dynamic_cast<const decal::NonFiniteGradient*>(&e) != nullptr) return 3;
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DeCaL: knowledge-graph embeddings in degenerate Clifford algebras"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI/TOML file (flags win)");

    std::string data;
    std::string out = "decal-out";
    SigFlags sig_flags;
    TrainFlags train_flags;
    std::string strategy = "gs";
    std::string split = "test";
    std::string format = "csv";
    std::string model_path = "decal-out/model.bin";
    int max_iterations = 10;
    int budget_epochs = 0;
    int workers = 1;

    auto add_data = [&](CLI::App* cmd) {
        cmd->add_option("--data", data, "Dataset directory with train.txt/valid.txt/test.txt")
            ->required();
    };
    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", out, "Output directory (default decal-out)");
    };
    auto add_sig = [&](CLI::App* cmd) {
        cmd->add_option("--p", sig_flags.p, "Generators squaring to +1");
        cmd->add_option("--q", sig_flags.q, "Generators squaring to -1");
        cmd->add_option("--r", sig_flags.r, "Nilpotent generators");
        cmd->add_option("--d", sig_flags.d, "Embedding dimension per row (default 16)");
    };
    auto add_train = [&](CLI::App* cmd) {
        cmd->add_option("--epochs", train_flags.epochs, "Training epochs (default 250)");
        cmd->add_option("--batch-size", train_flags.batch_size,
                        "Queries per optimizer step (default 1024)");
        cmd->add_option("--lr", train_flags.lr, "Adam learning rate (default 0.1)");
        cmd->add_option("--seed", train_flags.seed, "RNG seed (default 0)");
        cmd->add_option("--label-smoothing", train_flags.label_smoothing,
                        "Label smoothing in [0,1) (default 0)");
        cmd->add_option("--weight-decay", train_flags.weight_decay, "L2 penalty (default 0)");
        cmd->add_option("--grad-clip", train_flags.grad_clip,
                        "Global gradient-norm clip, 0 disables (default 0)");
    };

    CLI::App* cmd_train = app.add_subcommand("train", "Train one signature and evaluate it");
    add_data(cmd_train);
    add_sig(cmd_train);
    add_train(cmd_train);
    add_out(cmd_train);

    CLI::App* cmd_search = app.add_subcommand("search", "Search the (p,q,r) lattice");
    add_data(cmd_search);
    add_sig(cmd_search);
    add_train(cmd_search);
    add_out(cmd_search);
    cmd_search->add_option("--strategy", strategy, "les, gsdc or gs (default gs)")
        ->check(CLI::IsMember({"les", "gsdc", "gs"}));
    cmd_search->add_option("--max-iterations", max_iterations,
                           "Greedy search iteration cap (default 10)");
    cmd_search->add_option("--budget-epochs", budget_epochs,
                           "Override epochs during search runs, 0 keeps --epochs");
    cmd_search->add_option("--workers", workers, "Concurrent signature evaluations (default 1)");

    CLI::App* cmd_evaluate = app.add_subcommand("evaluate", "Evaluate a saved model");
    add_data(cmd_evaluate);
    add_out(cmd_evaluate);
    cmd_evaluate->add_option("--model", model_path, "Model file (default decal-out/model.bin)");
    cmd_evaluate->add_option("--split", split, "train, valid or test (default test)")
        ->check(CLI::IsMember({"train", "valid", "test"}));

    CLI::App* cmd_export = app.add_subcommand(
        "export-features", "Concatenated (head, relation, tail) rows per training triple");
    add_data(cmd_export);
    add_out(cmd_export);
    cmd_export->add_option("--model", model_path, "Model file (default decal-out/model.bin)");
    cmd_export->add_option("--format", format, "csv or bin (default csv)")
        ->check(CLI::IsMember({"csv", "bin"}));

    CLI::App* cmd_stats = app.add_subcommand("stats", "Dataset statistics as JSON");
    add_data(cmd_stats);
    add_out(cmd_stats);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_train->parsed()) return run_train(data, sig_flags, train_flags, out);
        if (cmd_search->parsed()) {
            return run_search(data, strategy, sig_flags, train_flags, max_iterations,
                              budget_epochs, workers, out);
        }
        if (cmd_evaluate->parsed()) return run_evaluate(data, model_path, split, out);
        if (cmd_export->parsed()) return run_export_features(data, model_path, format, out);
        if (cmd_stats->parsed()) return run_stats(data, out);
    } catch (const decal::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
