#include "egonet/truth.hpp"

#include <algorithm>
#include <fstream>

#include "egonet/errors.hpp"
#include "egonet/rng.hpp"

namespace egonet {

const char* to_string(IncomeLabel label) {
    return label == IncomeLabel::High ? "high" : "low";
}

IncomeLabel income_label_from_string(std::string_view s) {
    if (s == "high") return IncomeLabel::High;
    if (s == "low") return IncomeLabel::Low;
    throw ValidationError("unknown income label: " + std::string(s));
}

std::vector<UserId> GroundTruth::sorted_users() const {
    std::vector<UserId> users;
    users.reserve(labels.size());
    for (const auto& [user, label] : labels) users.push_back(user);
    std::sort(users.begin(), users.end());
    return users;
}

GroundTruth label_users(std::span<const BankRecord> bank, const SocialGraph& graph) {
    struct Acc {
        double sum = 0;
        std::uint64_t months = 0;
    };
    std::unordered_map<UserId, Acc> acc;
    for (const BankRecord& r : bank) {
        Acc& a = acc[r.user];
        a.sum += r.income;
        a.months += 1;
    }

    std::vector<std::pair<double, UserId>> incomes;
    incomes.reserve(acc.size());
    for (const auto& [user, a] : acc) {
        if (!graph.find(user)) continue;
        incomes.emplace_back(a.sum / static_cast<double>(a.months), user);
    }
    if (incomes.empty()) {
        throw ValidationError("empty ground truth: no bank user matches a graph node");
    }

    std::sort(incomes.begin(), incomes.end());
    const std::size_t n = incomes.size();
    const std::size_t low_count = (n + 1) / 2;
    GroundTruth truth;
    truth.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        truth.labels.emplace(incomes[i].second,
                             i < low_count ? IncomeLabel::Low : IncomeLabel::High);
    }
    return truth;
}

std::vector<UserId> TruthPartition::sorted_feature_set() const {
    std::vector<UserId> out(feature_set.begin(), feature_set.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<UserId> TruthPartition::sorted_train_set() const {
    std::vector<UserId> out(train_set.begin(), train_set.end());
    std::sort(out.begin(), out.end());
    return out;
}

TruthPartition partition_truth(const GroundTruth& truth, std::uint64_t seed) {
    const std::size_t m = truth.size();
    if (m < 4) throw ValidationError("ground truth too small to partition (need >= 4 users)");

    std::vector<UserId> low, high;
    for (const UserId& user : truth.sorted_users()) {
        (truth.labels.at(user) == IncomeLabel::Low ? low : high).push_back(user);
    }

    const std::size_t feature_total = (3 * m) / 4;
    // Low share of the feature set, rounded half-up, clamped so the High
    // side stays feasible.
    std::size_t feature_low = (2 * feature_total * low.size() + m) / (2 * m);
    feature_low = std::min(feature_low, low.size());
    feature_low = std::max(feature_low,
                           feature_total > high.size() ? feature_total - high.size() : 0);
    const std::size_t feature_high = feature_total - feature_low;

    Rng rng(seed);
    rng.shuffle(low);
    rng.shuffle(high);

    TruthPartition part;
    part.seed = seed;
    for (std::size_t i = 0; i < low.size(); ++i) {
        (i < feature_low ? part.feature_set : part.train_set).insert(low[i]);
    }
    for (std::size_t i = 0; i < high.size(); ++i) {
        (i < feature_high ? part.feature_set : part.train_set).insert(high[i]);
    }
    return part;
}

const char* to_string(GraphMode mode) {
    return mode == GraphMode::Full ? "full" : "inner";
}

GraphMode graph_mode_from_string(std::string_view s) {
    if (s == "full") return GraphMode::Full;
    if (s == "inner") return GraphMode::Inner;
    throw ValidationError("unknown graph mode: " + std::string(s));
}

std::vector<UserId> eval_nodes(const SocialGraph& graph, const TruthPartition& partition,
                               GraphMode mode, InnerNeighborSet neighbor_set) {
    std::vector<UserId> out = partition.sorted_train_set();
    if (mode == GraphMode::Full) return out;

    const auto& anchor = neighbor_set == InnerNeighborSet::FeatureSet
                             ? partition.feature_set
                             : partition.train_set;
    std::vector<UserId> inner;
    for (const UserId& user : out) {
        const auto id = graph.find(user);
        if (!id) continue;
        for (const NeighborRef& nb : graph.neighbors(*id)) {
            if (anchor.count(graph.name(nb.node)) != 0) {
                inner.push_back(user);
                break;
            }
        }
    }
    return inner;
}

LabelIndex::LabelIndex(const SocialGraph& graph, const TruthPartition& partition,
                       const GroundTruth& truth)
    : tags_(graph.node_count(), None) {
    for (const UserId& user : partition.feature_set) {
        const auto id = graph.find(user);
        if (!id) continue;
        const auto it = truth.labels.find(user);
        if (it == truth.labels.end()) continue;
        tags_[*id] = it->second == IncomeLabel::High ? HighTag : LowTag;
    }
}

NeighborLabelCounts labeled_neighbor_counts(const SocialGraph& graph, NodeId v,
                                            const LabelIndex& index) {
    NeighborLabelCounts counts;
    for (const NeighborRef& nb : graph.neighbors(v)) {
        switch (index.at(nb.node)) {
            case LabelIndex::HighTag: ++counts.high; break;
            case LabelIndex::LowTag: ++counts.low; break;
            default: break;
        }
    }
    return counts;
}

void write_labels_csv(const GroundTruth& truth, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) throw IoError("cannot write file: " + path.string());
    out << "user,label\n";
    for (const UserId& user : truth.sorted_users()) {
        out << user << ',' << to_string(truth.labels.at(user)) << '\n';
    }
}

} // namespace egonet
