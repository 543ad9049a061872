#include "egonet/bayes.hpp"

#include <algorithm>
#include <cmath>

namespace egonet {

namespace {

double clamp_unit(double v) {
    return std::clamp(v, kHomophilyEps, 1.0 - kHomophilyEps);
}

} // namespace

HomophilyParams bayes_fit(const SocialGraph& graph, const GroundTruth& truth,
                          const TruthPartition& partition) {
    const LabelIndex index(graph, partition, truth);

    std::uint64_t feature_high = 0;
    std::uint64_t feature_low = 0;
    // Unordered labeled pairs by label combination.
    std::uint64_t hh = 0, hl = 0, ll = 0;
    for (NodeId u = 0; u < graph.node_count(); ++u) {
        const auto tag_u = index.at(u);
        if (tag_u == LabelIndex::None) continue;
        (tag_u == LabelIndex::HighTag ? feature_high : feature_low) += 1;
        for (const NeighborRef& nb : graph.neighbors(u)) {
            if (nb.node <= u) continue; // count each unordered pair once
            const auto tag_v = index.at(nb.node);
            if (tag_v == LabelIndex::None) continue;
            if (tag_u == LabelIndex::HighTag && tag_v == LabelIndex::HighTag) {
                ++hh;
            } else if (tag_u == LabelIndex::LowTag && tag_v == LabelIndex::LowTag) {
                ++ll;
            } else {
                ++hl;
            }
        }
    }

    HomophilyParams params;
    const std::uint64_t labeled = feature_high + feature_low;
    params.prior_high = labeled == 0
                            ? 0.5
                            : static_cast<double>(feature_high) / static_cast<double>(labeled);

    const std::uint64_t from_high = hh + hl;
    const std::uint64_t from_low = hl + ll;
    params.beta_high = from_high == 0
                           ? params.prior_high
                           : static_cast<double>(hh) / static_cast<double>(from_high);
    params.beta_low = from_low == 0
                          ? params.prior_high
                          : static_cast<double>(hl) / static_cast<double>(from_low);

    params.prior_high = clamp_unit(params.prior_high);
    params.beta_high = clamp_unit(params.beta_high);
    params.beta_low = clamp_unit(params.beta_low);
    return params;
}

double bayes_posterior(const HomophilyParams& params, std::uint64_t n_high,
                       std::uint64_t n_low) {
    if (n_high == 0 && n_low == 0) return params.prior_high;
    const double nh = static_cast<double>(n_high);
    const double nl = static_cast<double>(n_low);
    const double log_high = std::log(params.prior_high) + nh * std::log(params.beta_high) +
                            nl * std::log1p(-params.beta_high);
    const double log_low = std::log1p(-params.prior_high) + nh * std::log(params.beta_low) +
                           nl * std::log1p(-params.beta_low);
    // score = exp(log_high) / (exp(log_high) + exp(log_low))
    return 1.0 / (1.0 + std::exp(log_low - log_high));
}

std::vector<Prediction> bayes_predict(const SocialGraph& graph,
                                      const std::vector<UserId>& nodes,
                                      const HomophilyParams& params,
                                      const TruthPartition& partition,
                                      const GroundTruth& truth, std::uint64_t seed) {
    const LabelIndex index(graph, partition, truth);
    Rng coin(seed);
    std::vector<Prediction> out;
    out.reserve(nodes.size());
    for (const UserId& node : nodes) {
        const NodeId id = graph.require(node);
        const NeighborLabelCounts counts = labeled_neighbor_counts(graph, id, index);
        Prediction pred;
        pred.node = node;
        pred.score = bayes_posterior(params, counts.high, counts.low);
        pred.label = label_from_score(pred.score, coin);
        out.push_back(std::move(pred));
    }
    return out;
}

} // namespace egonet
