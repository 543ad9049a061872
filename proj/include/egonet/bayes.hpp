#pragma once

#include <cstdint>
#include <vector>

#include "egonet/graph.hpp"
#include "egonet/models.hpp"
#include "egonet/truth.hpp"

namespace egonet {

// Homophily model over labeled ego-network counts: beta_high is the chance a
// labeled contact of a High user is High, beta_low the same for a Low user,
// prior_high the High fraction of the feature set. All clamped away from
// {0, 1} so the posterior stays finite.
struct HomophilyParams {
    double beta_high = 0.5;
    double beta_low = 0.5;
    double prior_high = 0.5;

    bool operator==(const HomophilyParams&) const = default;
};

inline constexpr double kHomophilyEps = 1e-6;

// Estimates the parameters from the undirected adjacencies between labeled
// feature-set users. A pair with both endpoints High feeds beta_high, a
// mixed pair feeds both betas, a Low pair feeds beta_low. Sides without any
// adjacency fall back to the prior.
HomophilyParams bayes_fit(const SocialGraph& graph, const GroundTruth& truth,
                          const TruthPartition& partition);

// P(High | n_high, n_low labeled neighbors) under conditional independence,
// computed in log space. Zero counts return the prior.
double bayes_posterior(const HomophilyParams& params, std::uint64_t n_high,
                       std::uint64_t n_low);

std::vector<Prediction> bayes_predict(const SocialGraph& graph,
                                      const std::vector<UserId>& nodes,
                                      const HomophilyParams& params,
                                      const TruthPartition& partition,
                                      const GroundTruth& truth, std::uint64_t seed);

} // namespace egonet
