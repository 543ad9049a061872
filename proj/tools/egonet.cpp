#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "egonet/errors.hpp"
#include "egonet/features.hpp"
#include "egonet/graph.hpp"
#include "egonet/ingest.hpp"
#include "egonet/pipeline.hpp"
#include "egonet/synth.hpp"
#include "egonet/truth.hpp"

namespace {

namespace fs = std::filesystem;
using namespace egonet;

nlohmann::json load_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) throw IoError("cannot open config file: " + path.string());
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

struct CommonOpts {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string mode;
};

void apply_overrides(RunConfig& config, const CommonOpts& opts) {
    if (!opts.out.empty()) config.out_dir = opts.out;
    if (opts.seed) {
        config.partition_seed = *opts.seed;
        config.model_seed = *opts.seed + 1;
        config.fold_seed = *opts.seed + 2;
        if (config.synth) config.synth->seed = *opts.seed;
    }
    if (!opts.mode.empty()) {
        if (opts.mode == "both") {
            config.modes = {GraphMode::Full, GraphMode::Inner};
        } else {
            config.modes = {graph_mode_from_string(opts.mode)};
        }
    }
}

int cmd_synth(const CommonOpts& opts) {
    const nlohmann::json j = load_json(opts.config);
    SynthConfig config = j.contains("synth") ? synth_config_from_json(j.at("synth"))
                                             : synth_config_from_json(j);
    if (opts.seed) config.seed = *opts.seed;
    fs::path out_dir = "out";
    if (j.contains("out_dir")) out_dir = j.at("out_dir").get<std::string>();
    if (!opts.out.empty()) out_dir = opts.out;

    const SynthOutputs files = generate(config, out_dir);
    std::cout << "wrote " << files.calls.string() << "\n"
              << "wrote " << files.sms.string() << "\n"
              << "wrote " << files.bank.string() << "\n"
              << "wrote " << files.truth.string() << "\n";
    return 0;
}

int cmd_run(const CommonOpts& opts) {
    RunConfig config = load_run_config(opts.config);
    apply_overrides(config, opts);
    const RunResult result = run_pipeline(config, &std::cout);
    for (const auto& path : result.report_paths) {
        std::cout << "wrote " << path.string() << "\n";
    }
    std::cout << "wrote " << (config.out_dir / "run_manifest.json").string() << "\n";
    return 0;
}

// Shared ingest+graph front end for the debug dumps.
struct LoadedGraph {
    SocialGraph graph;
    ParseResult<BankRecord> bank;
};

LoadedGraph load_graph(RunConfig& config) {
    if (config.synth) {
        const SynthOutputs files = generate(*config.synth, config.out_dir / "fixture");
        config.calls = files.calls;
        config.sms = files.sms;
        config.bank = files.bank;
    }
    if (!config.calls || !config.sms || !config.bank) {
        throw ValidationError("config needs synth or all three input files");
    }
    auto calls = parse_calls(*config.calls);
    auto sms = parse_sms(*config.sms);
    auto bank = parse_bank(*config.bank);
    LoadedGraph out{build_graph(calls.records, sms.records), std::move(bank)};
    return out;
}

int cmd_graph(const CommonOpts& opts) {
    RunConfig config = load_run_config(opts.config);
    apply_overrides(config, opts);
    fs::create_directories(config.out_dir);
    LoadedGraph loaded = load_graph(config);
    const GroundTruth truth = label_users(loaded.bank.records, loaded.graph);

    const fs::path graph_path = config.out_dir / "graph.csv";
    const fs::path labels_path = config.out_dir / "labels.csv";
    write_graph_csv(loaded.graph, graph_path);
    write_labels_csv(truth, labels_path);
    std::cout << "wrote " << graph_path.string() << " (" << loaded.graph.node_count()
              << " nodes, " << loaded.graph.edge_count() << " edges)\n"
              << "wrote " << labels_path.string() << " (" << truth.size() << " users)\n";
    return 0;
}

int cmd_features(const CommonOpts& opts, const std::string& level_str,
                 const std::string& node_set) {
    RunConfig config = load_run_config(opts.config);
    apply_overrides(config, opts);
    fs::create_directories(config.out_dir);
    const LevelSpec level = level_spec_from_string(level_str);

    LoadedGraph loaded = load_graph(config);
    const GroundTruth truth = label_users(loaded.bank.records, loaded.graph);
    const TruthPartition partition = partition_truth(truth, config.partition_seed);

    std::vector<UserId> nodes;
    if (node_set == "all") {
        nodes = loaded.graph.names();
    } else if (node_set == "truth") {
        nodes = truth.sorted_users();
    } else if (node_set == "train") {
        nodes = partition.sorted_train_set();
    } else if (node_set == "feature") {
        nodes = partition.sorted_feature_set();
    } else {
        throw ValidationError("unknown node set: " + node_set);
    }

    const FeatureMatrix matrix =
        build_matrix(loaded.graph, std::move(nodes), level, &partition, &truth);
    const fs::path path =
        config.out_dir / ("features_" + to_string(level) + ".csv");
    write_matrix_csv(matrix, path);
    std::cout << "wrote " << path.string() << " (" << matrix.rows() << " x "
              << matrix.cols() << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"communication-graph income inference pipeline"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string level_str = "ego1";
    std::string node_set = "truth";

    const auto add_common = [&](CLI::App* cmd, bool with_mode) {
        cmd->add_option("--config", opts.config, "JSON config file")->required();
        cmd->add_option("--out", opts.out, "output directory override");
        cmd->add_option("--seed", opts.seed, "base seed override");
        if (with_mode) {
            cmd->add_option("--mode", opts.mode, "graph mode: full, inner, or both")
                ->check(CLI::IsMember({"full", "inner", "both"}));
        }
    };

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic fixture");
    add_common(synth, false);
    CLI::App* run = app.add_subcommand("run", "run the full inference pipeline");
    add_common(run, true);
    CLI::App* graph = app.add_subcommand("graph", "dump the social graph and labels");
    add_common(graph, false);
    CLI::App* features = app.add_subcommand("features", "dump a feature matrix");
    add_common(features, false);
    features->add_option("--level", level_str, "feature level (ego1..ego3, cat1..cat3)");
    features->add_option("--nodes", node_set, "node set: truth, train, feature, or all")
        ->check(CLI::IsMember({"truth", "train", "feature", "all"}));

    try {
        app.parse(argc, argv);
        if (synth->parsed()) return cmd_synth(opts);
        if (run->parsed()) return cmd_run(opts);
        if (graph->parsed()) return cmd_graph(opts);
        if (features->parsed()) return cmd_features(opts, level_str, node_set);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
