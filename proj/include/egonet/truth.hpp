#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "egonet/graph.hpp"
#include "egonet/records.hpp"

namespace egonet {

enum class IncomeLabel : std::uint8_t { Low = 0, High = 1 };

const char* to_string(IncomeLabel label);
IncomeLabel income_label_from_string(std::string_view s);

// Binary income labels for the users present in both the bank data and the
// graph. |Low| - |High| is always 0 or 1.
struct GroundTruth {
    std::unordered_map<UserId, IncomeLabel> labels;

    std::size_t size() const { return labels.size(); }
    std::vector<UserId> sorted_users() const;
};

// Mean monthly income per user, median split after restricting to graph
// nodes. Ties and the odd element go to Low via the (income, user-id) sort.
GroundTruth label_users(std::span<const BankRecord> bank, const SocialGraph& graph);

// feature_set is the paper-style ~75% side used to compute features (G);
// train_set is the complement used to train and evaluate models (H).
struct TruthPartition {
    std::unordered_set<UserId> feature_set;
    std::unordered_set<UserId> train_set;
    std::uint64_t seed = 0;

    std::vector<UserId> sorted_feature_set() const;
    std::vector<UserId> sorted_train_set() const;
};

// Uniform stratified split: |feature_set| = floor(0.75 * |truth|) with each
// side preserving the global Low/High ratio within one user. Deterministic
// for a fixed seed.
TruthPartition partition_truth(const GroundTruth& truth, std::uint64_t seed);

enum class GraphMode { Full, Inner };

const char* to_string(GraphMode mode);
GraphMode graph_mode_from_string(std::string_view s);

// Which labeled set an Inner-mode node must touch. FeatureSet is the default;
// TrainSet is the literal reading of the source definition, kept selectable
// for comparison.
enum class InnerNeighborSet { FeatureSet, TrainSet };

// Full: all of train_set. Inner: train_set members with at least one
// undirected neighbor in the chosen labeled set. Sorted by user id.
std::vector<UserId> eval_nodes(const SocialGraph& graph, const TruthPartition& partition,
                               GraphMode mode,
                               InnerNeighborSet neighbor_set = InnerNeighborSet::FeatureSet);

// Per-NodeId view of feature-set labels; nodes outside the feature set (or
// unlabeled) read as None. This is the only label source the feature and
// neighbor-count paths consult, which keeps train labels out of them.
class LabelIndex {
public:
    enum Tag : std::uint8_t { None = 0, LowTag = 1, HighTag = 2 };

    LabelIndex(const SocialGraph& graph, const TruthPartition& partition,
               const GroundTruth& truth);

    Tag at(NodeId id) const { return static_cast<Tag>(tags_[id]); }

private:
    std::vector<std::uint8_t> tags_;
};

// Counts of feature-set High/Low users among the undirected ring-1
// neighbors of v.
struct NeighborLabelCounts {
    std::uint64_t high = 0;
    std::uint64_t low = 0;
};
NeighborLabelCounts labeled_neighbor_counts(const SocialGraph& graph, NodeId v,
                                            const LabelIndex& index);

// Debug dump: CSV `user,label` sorted by user.
void write_labels_csv(const GroundTruth& truth, const std::filesystem::path& path);

} // namespace egonet
