#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "egonet/eval.hpp"
#include "egonet/features.hpp"
#include "egonet/models.hpp"
#include "egonet/synth.hpp"
#include "egonet/trained_model.hpp"
#include "egonet/truth.hpp"

namespace egonet {

// End-to-end run description. Input is either the three record files or a
// synth block that generates them first.
struct RunConfig {
    std::optional<std::filesystem::path> calls;
    std::optional<std::filesystem::path> sms;
    std::optional<std::filesystem::path> bank;
    std::optional<SynthConfig> synth;

    std::filesystem::path out_dir = "out";
    std::vector<LevelSpec> levels;   // default: all six
    std::vector<ModelKind> models;   // default: all five
    std::vector<GraphMode> modes;    // default: full + inner
    std::uint64_t partition_seed = 1;
    std::uint64_t model_seed = 2;
    std::uint64_t fold_seed = 3;
    HyperGrid grid;
    InnerNeighborSet inner_neighbor_set = InnerNeighborSet::FeatureSet;
    int cv_folds = 5;
};

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& config);

// Reads a config file; a run manifest is accepted too (its embedded config
// is used), so a recorded run can be replayed bit-for-bit.
RunConfig load_run_config(const std::filesystem::path& path);

struct RunResult {
    std::vector<EvalReport> reports; // one per configured mode
    std::vector<std::filesystem::path> report_paths;
    nlohmann::json manifest;
};

// ingest -> graph -> labels -> partition -> features -> grid-search fit ->
// evaluate -> reports + manifest. Writes report_<mode>.csv/.md and
// run_manifest.json under out_dir.
RunResult run_pipeline(const RunConfig& config, std::ostream* log = nullptr);

} // namespace egonet
