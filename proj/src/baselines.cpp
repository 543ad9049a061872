#include "egonet/baselines.hpp"

namespace egonet {

std::vector<Prediction> random_select(const std::vector<UserId>& nodes, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Prediction> out;
    out.reserve(nodes.size());
    for (const UserId& node : nodes) {
        const bool high = rng.coin();
        out.push_back({node, high ? 1.0 : 0.0,
                       high ? IncomeLabel::High : IncomeLabel::Low});
    }
    return out;
}

namespace {

Prediction vote_one(const SocialGraph& graph, const UserId& node, const LabelIndex& index,
                    Rng& coin) {
    const NodeId id = graph.require(node);
    const NeighborLabelCounts counts = labeled_neighbor_counts(graph, id, index);
    Prediction pred;
    pred.node = node;
    const std::uint64_t total = counts.high + counts.low;
    pred.score = total == 0 ? 0.5
                            : static_cast<double>(counts.high) / static_cast<double>(total);
    pred.label = label_from_score(pred.score, coin);
    return pred;
}

} // namespace

Prediction majority_vote(const SocialGraph& graph, const UserId& node,
                         const TruthPartition& partition, const GroundTruth& truth,
                         std::uint64_t seed) {
    const LabelIndex index(graph, partition, truth);
    Rng coin(seed);
    return vote_one(graph, node, index, coin);
}

std::vector<Prediction> majority_predict(const SocialGraph& graph,
                                         const std::vector<UserId>& nodes,
                                         const TruthPartition& partition,
                                         const GroundTruth& truth, std::uint64_t seed) {
    const LabelIndex index(graph, partition, truth);
    Rng coin(seed);
    std::vector<Prediction> out;
    out.reserve(nodes.size());
    for (const UserId& node : nodes) out.push_back(vote_one(graph, node, index, coin));
    return out;
}

} // namespace egonet
