#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "egonet/features.hpp"
#include "egonet/models.hpp"
#include "egonet/rng.hpp"

namespace egonet {

// feature < 0 marks a leaf carrying the High fraction of its training
// samples; interior nodes route row[feature] <= threshold to `left`.
struct TreeNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double high_fraction = 0.0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    double predict_row(std::span<const double> row) const;
};

struct CartConfig {
    int max_depth = 0;              // 0 = unbounded
    std::size_t feature_subset = 0; // candidate features per node; 0 = all
};

// Single CART tree: Gini splits, midpoint thresholds between consecutive
// distinct values, stop at max_depth, purity, or fewer than 2 samples.
// When feature_subset > 0 the candidate features are drawn per node in
// seeded shuffled order; constant features do not use up the quota.
DecisionTree cart_fit(const FeatureMatrix& matrix, const std::vector<IncomeLabel>& labels,
                      std::span<const std::uint32_t> rows, const CartConfig& config,
                      Rng& rng);

struct ForestModel {
    std::vector<std::string> columns;
    std::vector<DecisionTree> trees;
    int n_trees = 0;
    int max_depth = 0; // 0 = unbounded
    std::uint64_t seed = 0;
};

// Bagged CART forest: each tree trains on a bootstrap sample of the full
// row set with ceil(sqrt(d)) candidate features per node. Deterministic per
// seed regardless of thread count.
ForestModel rf_fit(const FeatureMatrix& matrix, const std::vector<IncomeLabel>& labels,
                   int n_trees, int max_depth, std::uint64_t seed);

// Score = mean leaf High fraction across trees.
std::vector<Prediction> rf_predict(const ForestModel& model, const FeatureMatrix& matrix,
                                   std::uint64_t seed);

} // namespace egonet
