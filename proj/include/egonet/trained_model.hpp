#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "egonet/bayes.hpp"
#include "egonet/features.hpp"
#include "egonet/forest.hpp"
#include "egonet/graph.hpp"
#include "egonet/logreg.hpp"
#include "egonet/models.hpp"
#include "egonet/truth.hpp"

namespace egonet {

struct HyperGrid {
    std::vector<double> lr_reg{0.01, 0.1, 1.0, 10.0};
    std::vector<int> rf_trees{50, 100, 200};
    std::vector<int> rf_depths{8, 16, 0}; // 0 = unbounded
    std::uint64_t seed = 0;               // fold-assignment seed
};

// One grid point and its mean validation accuracy across folds.
struct CvEntry {
    std::string params;
    double mean_accuracy = 0.0;
};

struct TrainedModel {
    ModelKind kind = ModelKind::Random;
    std::variant<std::monostate, HomophilyParams, LogisticModel, ForestModel> payload;
    double fit_time_s = 0.0;
    std::uint64_t predict_seed = 0;
    std::vector<CvEntry> cv_table; // empty unless grid-searched
};

// Seeded stratified fold assignment: per label, indices are shuffled and
// dealt round-robin, so fold sizes differ by at most one per class.
std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<IncomeLabel>& labels,
                                                       int k, std::uint64_t seed);

// Evaluates every grid point by mean validation accuracy over k stratified
// folds, picks the maximizer (ties: earliest declared), and refits on all
// rows. fit_time_s covers the whole search plus the refit.
TrainedModel grid_search_cv(const FeatureMatrix& matrix,
                            const std::vector<IncomeLabel>& labels, ModelKind kind,
                            const HyperGrid& grid, int k, std::uint64_t model_seed);

// Uniform fit entry point. matrix/labels are only consulted for LR/RF.
TrainedModel fit_model(ModelKind kind, const SocialGraph& graph, const GroundTruth& truth,
                       const TruthPartition& partition, const FeatureMatrix* matrix,
                       const std::vector<IncomeLabel>* labels, const HyperGrid& grid,
                       int k, std::uint64_t model_seed);

// Predictions for `nodes`; LR/RF require `matrix` with rows matching
// `nodes`. The seed drives the coin streams (random picks, ties).
std::vector<Prediction> predict_model(const TrainedModel& model, const SocialGraph& graph,
                                      const std::vector<UserId>& nodes,
                                      const TruthPartition& partition,
                                      const GroundTruth& truth, const FeatureMatrix* matrix,
                                      std::uint64_t seed);

// Versioned JSON serialization: kind, hyperparameters, parameters, and
// feature column names round-trip exactly.
nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

} // namespace egonet
