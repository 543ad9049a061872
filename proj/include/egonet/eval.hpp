#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "egonet/features.hpp"
#include "egonet/graph.hpp"
#include "egonet/models.hpp"
#include "egonet/trained_model.hpp"
#include "egonet/truth.hpp"

namespace egonet {

// High is the positive class.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
};

ConfusionCounts confusion(std::span<const IncomeLabel> y_true,
                          std::span<const IncomeLabel> y_pred);

double accuracy(const ConfusionCounts& c);
// 0 when nothing is predicted positive; keeps the metric total.
double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);

// (1 + beta^2) P R / (beta^2 P + R); 0 when the denominator vanishes.
double f_beta(double precision, double recall, double beta);

// Mann-Whitney statistic: fraction of (positive, negative) pairs where the
// positive outscores the negative, ties counted 1/2. Equals the trapezoidal
// area under the ROC curve. Throws unless both classes are present.
double roc_auc(std::span<const double> scores, std::span<const IncomeLabel> y_true);

struct EvalRow {
    ModelKind model = ModelKind::Random;
    std::string level = "-"; // "-" for the structural models
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double auc = 0.0;
    double f1 = 0.0;
    double f4 = 0.0;
    double fit_time_s = 0.0;
    double predict_time_s = 0.0;
};

struct EvalReport {
    GraphMode mode = GraphMode::Full;
    std::vector<EvalRow> rows;
};

// Scores the nodes, times the prediction phase, and computes the full
// metric row. AUC is computed from scores, so hard 0/1 predictors get
// (TPR + TNR) / 2. LR/RF require `matrix` with rows matching `nodes`.
EvalRow evaluate_model(const TrainedModel& model, const SocialGraph& graph,
                       const std::vector<UserId>& nodes, const TruthPartition& partition,
                       const GroundTruth& truth, const std::string& level_label,
                       const FeatureMatrix* matrix, std::uint64_t eval_seed);

inline constexpr const char* kReportHeader =
    "model,level,accuracy,precision,recall,auc,f1,f4,fit_time_s,predict_time_s";

// Full-precision CSV plus a 3-decimal markdown table next to it (.md).
void emit_report(const EvalReport& report, const std::filesystem::path& csv_path);

std::string report_markdown(const EvalReport& report);

// Parses a CSV produced by emit_report; values round-trip exactly.
std::vector<EvalRow> parse_report_csv(const std::filesystem::path& csv_path);

} // namespace egonet
