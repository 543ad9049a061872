#pragma once

#include <cstdint>
#include <vector>

#include "egonet/graph.hpp"
#include "egonet/models.hpp"
#include "egonet/truth.hpp"

namespace egonet {

// Coin-flip baseline: each node independently scored 0 or 1 with
// probability 1/2, deterministic per seed.
std::vector<Prediction> random_select(const std::vector<UserId>& nodes, std::uint64_t seed);

// Most populated feature-set label among the undirected ring-1 neighbors;
// ties and unlabeled neighborhoods fall back to a seeded coin at score 0.5.
Prediction majority_vote(const SocialGraph& graph, const UserId& node,
                         const TruthPartition& partition, const GroundTruth& truth,
                         std::uint64_t seed);

// Batch form sharing one label index and one coin stream.
std::vector<Prediction> majority_predict(const SocialGraph& graph,
                                         const std::vector<UserId>& nodes,
                                         const TruthPartition& partition,
                                         const GroundTruth& truth, std::uint64_t seed);

} // namespace egonet
