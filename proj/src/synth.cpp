#include "egonet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "egonet/errors.hpp"
#include "egonet/format.hpp"
#include "egonet/ingest.hpp"
#include "egonet/rng.hpp"
#include "egonet/truth.hpp"

namespace egonet {

namespace {

constexpr std::int64_t kWindowStart = 1500000000; // observation window epoch

void validate(const SynthConfig& c) {
    if (c.n_users < 10) throw ValidationError("synth: n_users must be >= 10");
    if (c.homophily < 0.0 || c.homophily > 1.0) {
        throw ValidationError("synth: homophily must be in [0, 1]");
    }
    if (c.mean_degree <= 0.0 || c.mean_degree >= static_cast<double>(c.n_users)) {
        throw ValidationError("synth: mean_degree must be in (0, n_users)");
    }
    if (c.bank_coverage <= 0.0 || c.bank_coverage > 1.0) {
        throw ValidationError("synth: bank_coverage must be in (0, 1]");
    }
    if (c.months < 1) throw ValidationError("synth: months must be >= 1");
    if (c.calls_per_edge < 0.0 || c.sms_per_edge < 0.0 || c.seconds_per_call < 0.0) {
        throw ValidationError("synth: event rates must be non-negative");
    }
    if (c.income_median_low <= 0.0 || c.income_median_high <= 0.0 || c.income_sigma < 0.0) {
        throw ValidationError("synth: income parameters must be positive");
    }
}

std::string user_name(std::uint64_t index, int width) {
    std::string digits = std::to_string(index);
    return "u" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) throw IoError("cannot write file: " + path.string());
    return out;
}

} // namespace

SynthConfig synth_config_from_json(const nlohmann::json& j) {
    SynthConfig c;
    const auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("n_users", c.n_users);
    get("homophily", c.homophily);
    get("mean_degree", c.mean_degree);
    get("calls_per_edge", c.calls_per_edge);
    get("seconds_per_call", c.seconds_per_call);
    get("sms_per_edge", c.sms_per_edge);
    get("bank_coverage", c.bank_coverage);
    get("months", c.months);
    get("seed", c.seed);
    get("income_median_low", c.income_median_low);
    get("income_median_high", c.income_median_high);
    get("income_sigma", c.income_sigma);
    return c;
}

nlohmann::json synth_config_to_json(const SynthConfig& c) {
    return {{"n_users", c.n_users},
            {"homophily", c.homophily},
            {"mean_degree", c.mean_degree},
            {"calls_per_edge", c.calls_per_edge},
            {"seconds_per_call", c.seconds_per_call},
            {"sms_per_edge", c.sms_per_edge},
            {"bank_coverage", c.bank_coverage},
            {"months", c.months},
            {"seed", c.seed},
            {"income_median_low", c.income_median_low},
            {"income_median_high", c.income_median_high},
            {"income_sigma", c.income_sigma}};
}

SynthOutputs generate(const SynthConfig& config, const std::filesystem::path& out_dir) {
    validate(config);
    std::filesystem::create_directories(out_dir);

    const std::uint64_t n = config.n_users;
    const int width = static_cast<int>(std::to_string(n - 1).size());
    Rng rng(config.seed);

    // Balanced planted classes (Low gets the odd element).
    std::vector<std::uint32_t> order(n);
    for (std::uint64_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
    rng.shuffle(order);
    std::vector<IncomeLabel> klass(n, IncomeLabel::Low);
    std::vector<std::uint32_t> lows, highs;
    const std::uint64_t low_count = (n + 1) / 2;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (i < low_count) {
            lows.push_back(order[i]);
        } else {
            klass[order[i]] = IncomeLabel::High;
            highs.push_back(order[i]);
        }
    }
    std::sort(lows.begin(), lows.end());
    std::sort(highs.begin(), highs.end());

    // Contact pairs: same-class with probability h, distinct, deduplicated.
    const std::uint64_t target_edges =
        static_cast<std::uint64_t>(std::llround(static_cast<double>(n) * config.mean_degree / 2.0));
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(target_edges * 2);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(target_edges);
    const std::uint64_t max_attempts = 200 * target_edges + 10000;
    std::uint64_t attempts = 0;
    while (pairs.size() < target_edges) {
        if (++attempts > max_attempts) {
            throw ValidationError("synth: could not reach the target edge count; "
                                  "lower mean_degree");
        }
        std::uint32_t a, b;
        if (rng.next_double() < config.homophily) {
            const auto& side = rng.coin() ? highs : lows;
            a = side[rng.below(side.size())];
            b = side[rng.below(side.size())];
        } else {
            a = lows[rng.below(lows.size())];
            b = highs[rng.below(highs.size())];
        }
        if (a == b) continue;
        const std::uint64_t key = a < b
                                      ? (static_cast<std::uint64_t>(a) << 32) | b
                                      : (static_cast<std::uint64_t>(b) << 32) | a;
        if (!seen.insert(key).second) continue;
        pairs.emplace_back(a, b);
    }

    SynthOutputs outputs;
    outputs.calls = out_dir / "calls.csv";
    outputs.sms = out_dir / "sms.csv";
    outputs.bank = out_dir / "bank.csv";
    outputs.truth = out_dir / "truth.csv";

    std::vector<std::string> names(n);
    for (std::uint64_t i = 0; i < n; ++i) names[i] = user_name(i, width);

    const std::int64_t window_s =
        static_cast<std::int64_t>(config.months) * 30 * 24 * 3600;

    {
        std::ofstream calls = open_out(outputs.calls);
        std::ofstream sms = open_out(outputs.sms);
        calls << kCallsHeader << '\n';
        sms << kSmsHeader << '\n';
        for (const auto& [a, b] : pairs) {
            const std::uint64_t n_calls = rng.poisson(config.calls_per_edge);
            for (std::uint64_t i = 0; i < n_calls; ++i) {
                const bool a_originates = rng.coin();
                const std::int64_t ts =
                    kWindowStart + static_cast<std::int64_t>(
                                       rng.below(static_cast<std::uint64_t>(window_s)));
                const auto duration = static_cast<std::uint64_t>(
                    std::llround(rng.exponential(config.seconds_per_call)));
                calls << names[a_originates ? a : b] << ',' << names[a_originates ? b : a]
                      << ',' << ts << ',' << duration << '\n';
            }
            const std::uint64_t n_sms = rng.poisson(config.sms_per_edge);
            for (std::uint64_t i = 0; i < n_sms; ++i) {
                const bool a_originates = rng.coin();
                const std::int64_t ts =
                    kWindowStart + static_cast<std::int64_t>(
                                       rng.below(static_cast<std::uint64_t>(window_s)));
                sms << names[a_originates ? a : b] << ',' << names[a_originates ? b : a]
                    << ',' << ts << '\n';
            }
        }
    }

    // Bank coverage: a uniform subset of users, three monthly draws each.
    std::vector<std::uint32_t> covered(order); // reuse a shuffled copy
    rng.shuffle(covered);
    const auto covered_count = static_cast<std::uint64_t>(
        std::floor(config.bank_coverage * static_cast<double>(n)));
    covered.resize(covered_count);
    std::sort(covered.begin(), covered.end());
    {
        std::ofstream bank = open_out(outputs.bank);
        bank << kBankHeader << '\n';
        for (const std::uint32_t u : covered) {
            const double median = klass[u] == IncomeLabel::High ? config.income_median_high
                                                                : config.income_median_low;
            for (int m = 0; m < config.months; ++m) {
                const double income =
                    median * std::exp(config.income_sigma * rng.normal());
                bank << names[u] << ',' << m << ',' << format_fixed(income, 2) << '\n';
            }
        }
    }

    {
        std::ofstream truth = open_out(outputs.truth);
        truth << "user,label\n";
        for (std::uint64_t i = 0; i < n; ++i) {
            truth << names[i] << ',' << to_string(klass[i]) << '\n';
        }
    }
    return outputs;
}

} // namespace egonet
