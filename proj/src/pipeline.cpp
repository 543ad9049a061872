#include "egonet/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <unordered_set>

#include "egonet/errors.hpp"
#include "egonet/graph.hpp"
#include "egonet/ingest.hpp"
#include "egonet/rng.hpp"

namespace egonet {

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<std::string> kKnownKeys = {
    "calls", "sms",   "bank",  "synth", "out_dir",            "levels",
    "models", "modes", "seeds", "grid",  "inner_neighbor_set", "cv_folds"};

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

} // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("run config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
            throw ValidationError("unknown config key: " + key);
        }
    }

    RunConfig c;
    if (j.contains("calls")) c.calls = j.at("calls").get<std::string>();
    if (j.contains("sms")) c.sms = j.at("sms").get<std::string>();
    if (j.contains("bank")) c.bank = j.at("bank").get<std::string>();
    if (j.contains("synth")) c.synth = synth_config_from_json(j.at("synth"));
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();

    if (j.contains("levels")) {
        c.levels.clear();
        for (const auto& s : j.at("levels")) {
            c.levels.push_back(level_spec_from_string(s.get<std::string>()));
        }
    } else {
        for (const auto family : {LevelFamily::Ego, LevelFamily::Cat}) {
            for (int n = 1; n <= 3; ++n) c.levels.push_back({family, n});
        }
    }
    if (j.contains("models")) {
        c.models.clear();
        for (const auto& s : j.at("models")) {
            c.models.push_back(model_kind_from_string(s.get<std::string>()));
        }
    } else {
        c.models = {ModelKind::Random, ModelKind::Majority, ModelKind::Bayes,
                    ModelKind::LogisticRegression, ModelKind::RandomForest};
    }
    if (j.contains("modes")) {
        c.modes.clear();
        for (const auto& s : j.at("modes")) {
            c.modes.push_back(graph_mode_from_string(s.get<std::string>()));
        }
    } else {
        c.modes = {GraphMode::Full, GraphMode::Inner};
    }
    if (j.contains("seeds")) {
        const auto& seeds = j.at("seeds");
        if (seeds.contains("partition")) c.partition_seed = seeds.at("partition").get<std::uint64_t>();
        if (seeds.contains("model")) c.model_seed = seeds.at("model").get<std::uint64_t>();
        if (seeds.contains("fold")) c.fold_seed = seeds.at("fold").get<std::uint64_t>();
    }
    if (j.contains("grid")) {
        const auto& grid = j.at("grid");
        if (grid.contains("lr_reg")) c.grid.lr_reg = grid.at("lr_reg").get<std::vector<double>>();
        if (grid.contains("rf_trees")) c.grid.rf_trees = grid.at("rf_trees").get<std::vector<int>>();
        if (grid.contains("rf_depths")) c.grid.rf_depths = grid.at("rf_depths").get<std::vector<int>>();
    }
    if (j.contains("inner_neighbor_set")) {
        const std::string s = j.at("inner_neighbor_set").get<std::string>();
        if (s == "feature") {
            c.inner_neighbor_set = InnerNeighborSet::FeatureSet;
        } else if (s == "train") {
            c.inner_neighbor_set = InnerNeighborSet::TrainSet;
        } else {
            throw ValidationError("inner_neighbor_set must be 'feature' or 'train'");
        }
    }
    if (j.contains("cv_folds")) c.cv_folds = j.at("cv_folds").get<int>();
    return c;
}

nlohmann::json run_config_to_json(const RunConfig& c) {
    nlohmann::json j;
    if (c.calls) j["calls"] = c.calls->string();
    if (c.sms) j["sms"] = c.sms->string();
    if (c.bank) j["bank"] = c.bank->string();
    if (c.synth) j["synth"] = synth_config_to_json(*c.synth);
    j["out_dir"] = c.out_dir.string();
    nlohmann::json levels = nlohmann::json::array();
    for (const LevelSpec& l : c.levels) levels.push_back(to_string(l));
    j["levels"] = std::move(levels);
    nlohmann::json models = nlohmann::json::array();
    for (const ModelKind m : c.models) models.push_back(to_string(m));
    j["models"] = std::move(models);
    nlohmann::json modes = nlohmann::json::array();
    for (const GraphMode m : c.modes) modes.push_back(to_string(m));
    j["modes"] = std::move(modes);
    j["seeds"] = {{"partition", c.partition_seed},
                  {"model", c.model_seed},
                  {"fold", c.fold_seed}};
    j["grid"] = {{"lr_reg", c.grid.lr_reg},
                 {"rf_trees", c.grid.rf_trees},
                 {"rf_depths", c.grid.rf_depths}};
    j["inner_neighbor_set"] =
        c.inner_neighbor_set == InnerNeighborSet::FeatureSet ? "feature" : "train";
    j["cv_folds"] = c.cv_folds;
    return j;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) throw IoError("cannot open config file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("invalid JSON in " + path.string() + ": " + e.what());
    }
    if (j.is_object() && j.contains("manifest_version") && j.contains("config")) {
        return run_config_from_json(j.at("config"));
    }
    return run_config_from_json(j);
}

namespace {

void validate(const RunConfig& c) {
    if (c.models.empty()) throw ValidationError("config selects zero models");
    if (c.levels.empty()) throw ValidationError("config selects zero levels");
    if (c.modes.empty()) throw ValidationError("config selects zero graph modes");
    if (c.cv_folds < 2) throw ValidationError("cv_folds must be >= 2");
    const bool have_files = c.calls && c.sms && c.bank;
    if (c.synth && have_files) {
        throw ValidationError("config must give either synth or input files, not both");
    }
    if (!c.synth && !have_files) {
        throw ValidationError("config needs synth or all three input files");
    }
}

struct StageTimer {
    nlohmann::json& stages;
    std::ostream* log;

    template <typename Fn>
    auto run(const char* name, Fn&& fn) -> decltype(fn()) {
        const auto start = Clock::now();
        try {
            if constexpr (std::is_void_v<decltype(fn())>) {
                fn();
                finish(name, start);
            } else {
                auto result = fn();
                finish(name, start);
                return result;
            }
        } catch (const std::exception& e) {
            throw_stage(name, e);
        }
    }

    void finish(const char* name, Clock::time_point start) {
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        stages.push_back({{"name", name}, {"seconds", secs}});
        if (log != nullptr) {
            *log << "[egonet] stage " << name << ": " << secs << " s\n";
        }
    }

    [[noreturn]] void throw_stage(const char* name, const std::exception& e) {
        const std::string msg = "stage '" + std::string(name) + "' failed: " + e.what();
        if (dynamic_cast<const IoError*>(&e) != nullptr) throw IoError(msg);
        if (dynamic_cast<const SchemaError*>(&e) != nullptr) throw SchemaError(msg);
        throw ValidationError(msg);
    }
};

} // namespace

RunResult run_pipeline(const RunConfig& config, std::ostream* log) {
    validate(config);
    std::filesystem::create_directories(config.out_dir);

    nlohmann::json stages = nlohmann::json::array();
    nlohmann::json counts = nlohmann::json::object();
    StageTimer timer{stages, log};

    RunConfig resolved = config;
    if (config.synth) {
        const SynthOutputs files = timer.run("synth", [&] {
            return generate(*config.synth, config.out_dir / "fixture");
        });
        resolved.calls = files.calls;
        resolved.sms = files.sms;
        resolved.bank = files.bank;
    }

    struct Ingested {
        ParseResult<CallRecord> calls;
        ParseResult<SmsRecord> sms;
        ParseResult<BankRecord> bank;
    };
    const Ingested input = timer.run("ingest", [&] {
        return Ingested{parse_calls(*resolved.calls), parse_sms(*resolved.sms),
                        parse_bank(*resolved.bank)};
    });
    counts["calls"] = input.calls.records.size();
    counts["calls_skipped"] = input.calls.skipped;
    counts["sms"] = input.sms.records.size();
    counts["sms_skipped"] = input.sms.skipped;
    counts["bank"] = input.bank.records.size();
    counts["bank_skipped"] = input.bank.skipped;

    const SocialGraph graph = timer.run("graph", [&] {
        return build_graph(input.calls.records, input.sms.records);
    });
    counts["nodes"] = graph.node_count();
    counts["edges"] = graph.edge_count();

    struct TruthState {
        GroundTruth truth;
        TruthPartition partition;
    };
    const TruthState ts = timer.run("truth", [&] {
        TruthState state;
        state.truth = label_users(input.bank.records, graph);
        state.partition = partition_truth(state.truth, config.partition_seed);
        return state;
    });
    counts["truth"] = ts.truth.size();
    counts["feature_set"] = ts.partition.feature_set.size();
    counts["train_set"] = ts.partition.train_set.size();

    const std::vector<UserId> train_nodes = ts.partition.sorted_train_set();
    std::vector<IncomeLabel> train_labels;
    train_labels.reserve(train_nodes.size());
    for (const UserId& u : train_nodes) train_labels.push_back(ts.truth.labels.at(u));

    std::map<std::string, FeatureMatrix> matrices;
    timer.run("features", [&] {
        for (const LevelSpec& level : config.levels) {
            matrices.emplace(to_string(level),
                             build_matrix(graph, train_nodes, level, &ts.partition,
                                          &ts.truth));
        }
    });

    // Grid seed drives the fold assignment; model seeds are derived per
    // (model, level) slot so rerunning a subset stays reproducible.
    HyperGrid grid = config.grid;
    grid.seed = config.fold_seed;

    struct FittedSlot {
        ModelKind kind;
        std::string level; // "-" for structural models
        TrainedModel model;
    };
    std::vector<FittedSlot> slots;
    timer.run("fit", [&] {
        for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
            const ModelKind kind = config.models[mi];
            if (!model_uses_features(kind)) {
                const std::uint64_t seed = mix_seed(config.model_seed, mi * 16);
                slots.push_back({kind, "-",
                                 fit_model(kind, graph, ts.truth, ts.partition, nullptr,
                                           nullptr, grid, config.cv_folds, seed)});
                continue;
            }
            for (std::size_t li = 0; li < config.levels.size(); ++li) {
                const std::string level = to_string(config.levels[li]);
                const std::uint64_t seed = mix_seed(config.model_seed, mi * 16 + li + 1);
                slots.push_back({kind, level,
                                 fit_model(kind, graph, ts.truth, ts.partition,
                                           &matrices.at(level), &train_labels, grid,
                                           config.cv_folds, seed)});
            }
        }
    });

    RunResult result;
    timer.run("eval", [&] {
        for (std::size_t mo = 0; mo < config.modes.size(); ++mo) {
            const GraphMode mode = config.modes[mo];
            const std::vector<UserId> nodes =
                eval_nodes(graph, ts.partition, mode, config.inner_neighbor_set);
            counts[std::string("eval_nodes_") + to_string(mode)] = nodes.size();
            if (nodes.empty()) {
                throw ValidationError(std::string("empty evaluation set for mode ") +
                                      to_string(mode));
            }

            std::map<std::string, FeatureMatrix> eval_matrices;
            for (const auto& [level, matrix] : matrices) {
                eval_matrices.emplace(level, matrix.subset(nodes));
            }

            EvalReport report;
            report.mode = mode;
            for (const FittedSlot& slot : slots) {
                const FeatureMatrix* matrix = model_uses_features(slot.kind)
                                                  ? &eval_matrices.at(slot.level)
                                                  : nullptr;
                const std::uint64_t eval_seed = mix_seed(slot.model.predict_seed, 100 + mo);
                report.rows.push_back(evaluate_model(slot.model, graph, nodes, ts.partition,
                                                     ts.truth, slot.level, matrix,
                                                     eval_seed));
            }
            const std::filesystem::path csv =
                config.out_dir / (std::string("report_") + to_string(mode) + ".csv");
            emit_report(report, csv);
            result.reports.push_back(std::move(report));
            result.report_paths.push_back(csv);
        }
    });

    const nlohmann::json config_json = run_config_to_json(config);
    result.manifest = {{"tool", "egonet"},
                       {"manifest_version", 1},
                       {"config", config_json},
                       {"config_hash", hex64(fnv1a64(config_json.dump()))},
                       {"stages", std::move(stages)},
                       {"counts", std::move(counts)}};
    std::ofstream manifest_out(config.out_dir / "run_manifest.json", std::ios::binary);
    if (!manifest_out.is_open()) {
        throw IoError("cannot write run manifest under " + config.out_dir.string());
    }
    manifest_out << result.manifest.dump(2) << '\n';
    return result;
}

} // namespace egonet
