#pragma once

#include <cstdint>
#include <filesystem>

#include <json.hpp>

namespace egonet {

// Planted-partition generator: balanced Low/High classes, contact pairs
// same-class with probability `homophily`, communication volumes from
// Poisson/exponential draws, incomes from two lognormals. Deterministic
// per seed.
struct SynthConfig {
    std::uint64_t n_users = 2000;
    double homophily = 0.8;
    double mean_degree = 10.0;
    double calls_per_edge = 2.0;    // Poisson mean per contact pair
    double seconds_per_call = 90.0; // exponential mean
    double sms_per_edge = 1.0;      // Poisson mean per contact pair
    double bank_coverage = 0.3;     // fraction of users with bank records
    int months = 3;
    std::uint64_t seed = 1;
    double income_median_low = 2000.0;
    double income_median_high = 8000.0;
    double income_sigma = 0.5; // lognormal shape (log-scale stddev)
};

SynthConfig synth_config_from_json(const nlohmann::json& j);
nlohmann::json synth_config_to_json(const SynthConfig& config);

struct SynthOutputs {
    std::filesystem::path calls;
    std::filesystem::path sms;
    std::filesystem::path bank;
    std::filesystem::path truth; // planted classes, for verification only
};

// Writes calls.csv, sms.csv, bank.csv, truth.csv into out_dir. Byte-stable
// for a fixed config.
SynthOutputs generate(const SynthConfig& config, const std::filesystem::path& out_dir);

} // namespace egonet
