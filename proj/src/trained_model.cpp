#include "egonet/trained_model.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <fstream>

#include "egonet/baselines.hpp"
#include "egonet/errors.hpp"
#include "egonet/format.hpp"

namespace egonet {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

FeatureMatrix take_rows(const FeatureMatrix& matrix, const std::vector<std::size_t>& rows) {
    FeatureMatrix out;
    out.column_names = matrix.column_names;
    out.row_ids.reserve(rows.size());
    out.values.reserve(rows.size() * matrix.cols());
    for (const std::size_t r : rows) {
        out.row_ids.push_back(matrix.row_ids[r]);
        const auto row = matrix.row(r);
        out.values.insert(out.values.end(), row.begin(), row.end());
    }
    return out;
}

std::vector<IncomeLabel> take_labels(const std::vector<IncomeLabel>& labels,
                                     const std::vector<std::size_t>& rows) {
    std::vector<IncomeLabel> out;
    out.reserve(rows.size());
    for (const std::size_t r : rows) out.push_back(labels[r]);
    return out;
}

struct GridPoint {
    std::string params;
    double lr_reg = 0.0;
    int rf_trees = 0;
    int rf_depth = 0;
};

std::vector<GridPoint> enumerate_grid(ModelKind kind, const HyperGrid& grid) {
    std::vector<GridPoint> points;
    if (kind == ModelKind::LogisticRegression) {
        if (grid.lr_reg.empty()) throw ValidationError("empty LR hyperparameter grid");
        for (const double reg : grid.lr_reg) {
            points.push_back({"reg=" + format_double(reg), reg, 0, 0});
        }
    } else {
        if (grid.rf_trees.empty() || grid.rf_depths.empty()) {
            throw ValidationError("empty RF hyperparameter grid");
        }
        for (const int trees : grid.rf_trees) {
            for (const int depth : grid.rf_depths) {
                points.push_back({"trees=" + std::to_string(trees) + ",depth=" +
                                      (depth == 0 ? std::string("none")
                                                  : std::to_string(depth)),
                                  0.0, trees, depth});
            }
        }
    }
    return points;
}

} // namespace

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Random: return "random";
        case ModelKind::Majority: return "majority";
        case ModelKind::Bayes: return "bayes";
        case ModelKind::LogisticRegression: return "lr";
        case ModelKind::RandomForest: return "rf";
    }
    return "unknown";
}

ModelKind model_kind_from_string(std::string_view s) {
    if (s == "random") return ModelKind::Random;
    if (s == "majority") return ModelKind::Majority;
    if (s == "bayes") return ModelKind::Bayes;
    if (s == "lr") return ModelKind::LogisticRegression;
    if (s == "rf") return ModelKind::RandomForest;
    throw ValidationError("unknown model kind: " + std::string(s));
}

bool model_uses_features(ModelKind kind) {
    return kind == ModelKind::LogisticRegression || kind == ModelKind::RandomForest;
}

std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<IncomeLabel>& labels,
                                                       int k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("cross-validation needs k >= 2");
    std::vector<std::size_t> low, high;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] == IncomeLabel::Low ? low : high).push_back(i);
    }
    if (low.size() < static_cast<std::size_t>(k) || high.size() < static_cast<std::size_t>(k)) {
        throw ValidationError("too few rows per class for " + std::to_string(k) +
                              "-fold cross-validation");
    }

    Rng rng(seed);
    rng.shuffle(low);
    rng.shuffle(high);

    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < low.size(); ++i) folds[i % k].push_back(low[i]);
    for (std::size_t i = 0; i < high.size(); ++i) folds[i % k].push_back(high[i]);
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

TrainedModel grid_search_cv(const FeatureMatrix& matrix,
                            const std::vector<IncomeLabel>& labels, ModelKind kind,
                            const HyperGrid& grid, int k, std::uint64_t model_seed) {
    if (!model_uses_features(kind)) {
        throw ValidationError("grid search only applies to LR/RF models");
    }
    const auto start = Clock::now();
    const std::size_t n = matrix.rows();
    if (labels.size() != n) throw ValidationError("label count does not match matrix rows");

    const auto folds = stratified_folds(labels, k, grid.seed);
    std::vector<int> fold_of(n, -1);
    for (std::size_t f = 0; f < folds.size(); ++f) {
        for (const std::size_t r : folds[f]) {
            assert(fold_of[r] == -1); // folds must be disjoint
            fold_of[r] = static_cast<int>(f);
        }
    }
    assert(std::none_of(fold_of.begin(), fold_of.end(), [](int f) { return f < 0; }));

    const std::vector<GridPoint> points = enumerate_grid(kind, grid);

    TrainedModel model;
    model.kind = kind;
    model.predict_seed = model_seed;

    std::size_t best_index = 0;
    double best_accuracy = -1.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        double accuracy_sum = 0.0;
        for (int f = 0; f < k; ++f) {
            std::vector<std::size_t> train_rows;
            train_rows.reserve(n);
            for (std::size_t r = 0; r < n; ++r) {
                if (fold_of[r] != f) train_rows.push_back(r);
            }
            const FeatureMatrix train_m = take_rows(matrix, train_rows);
            const std::vector<IncomeLabel> train_y = take_labels(labels, train_rows);
            const FeatureMatrix val_m = take_rows(matrix, folds[static_cast<std::size_t>(f)]);
            const std::vector<IncomeLabel> val_y =
                take_labels(labels, folds[static_cast<std::size_t>(f)]);

            const std::uint64_t fit_seed =
                mix_seed(model_seed, p * static_cast<std::size_t>(k) + f);
            std::vector<Prediction> preds;
            if (kind == ModelKind::LogisticRegression) {
                const LogisticModel lm = lr_fit(train_m, train_y, points[p].lr_reg, fit_seed);
                preds = lr_predict(lm, val_m, mix_seed(fit_seed, 1));
            } else {
                const ForestModel fm =
                    rf_fit(train_m, train_y, points[p].rf_trees, points[p].rf_depth, fit_seed);
                preds = rf_predict(fm, val_m, mix_seed(fit_seed, 1));
            }
            std::size_t correct = 0;
            for (std::size_t i = 0; i < preds.size(); ++i) {
                correct += preds[i].label == val_y[i];
            }
            accuracy_sum += static_cast<double>(correct) / static_cast<double>(preds.size());
        }
        const double mean_accuracy = accuracy_sum / static_cast<double>(k);
        model.cv_table.push_back({points[p].params, mean_accuracy});
        if (mean_accuracy > best_accuracy) {
            best_accuracy = mean_accuracy;
            best_index = p;
        }
    }

    const std::uint64_t refit_seed = mix_seed(model_seed, 0xF17ULL);
    if (kind == ModelKind::LogisticRegression) {
        model.payload = lr_fit(matrix, labels, points[best_index].lr_reg, refit_seed);
    } else {
        model.payload = rf_fit(matrix, labels, points[best_index].rf_trees,
                               points[best_index].rf_depth, refit_seed);
    }
    model.fit_time_s = seconds_since(start);
    return model;
}

TrainedModel fit_model(ModelKind kind, const SocialGraph& graph, const GroundTruth& truth,
                       const TruthPartition& partition, const FeatureMatrix* matrix,
                       const std::vector<IncomeLabel>* labels, const HyperGrid& grid,
                       int k, std::uint64_t model_seed) {
    TrainedModel model;
    model.kind = kind;
    model.predict_seed = model_seed;
    switch (kind) {
        case ModelKind::Random:
        case ModelKind::Majority:
            break; // nothing to fit
        case ModelKind::Bayes: {
            const auto start = Clock::now();
            model.payload = bayes_fit(graph, truth, partition);
            model.fit_time_s = seconds_since(start);
            break;
        }
        case ModelKind::LogisticRegression:
        case ModelKind::RandomForest: {
            if (matrix == nullptr || labels == nullptr) {
                throw ValidationError("feature-based models need a training matrix");
            }
            model = grid_search_cv(*matrix, *labels, kind, grid, k, model_seed);
            break;
        }
    }
    return model;
}

std::vector<Prediction> predict_model(const TrainedModel& model, const SocialGraph& graph,
                                      const std::vector<UserId>& nodes,
                                      const TruthPartition& partition,
                                      const GroundTruth& truth, const FeatureMatrix* matrix,
                                      std::uint64_t seed) {
    switch (model.kind) {
        case ModelKind::Random:
            return random_select(nodes, seed);
        case ModelKind::Majority:
            return majority_predict(graph, nodes, partition, truth, seed);
        case ModelKind::Bayes:
            return bayes_predict(graph, nodes, std::get<HomophilyParams>(model.payload),
                                 partition, truth, seed);
        case ModelKind::LogisticRegression:
        case ModelKind::RandomForest: {
            if (matrix == nullptr) {
                throw ValidationError("feature-based models need a feature matrix");
            }
            if (matrix->row_ids != nodes) {
                throw ValidationError("feature matrix rows do not match the node set");
            }
            if (model.kind == ModelKind::LogisticRegression) {
                return lr_predict(std::get<LogisticModel>(model.payload), *matrix, seed);
            }
            return rf_predict(std::get<ForestModel>(model.payload), *matrix, seed);
        }
    }
    throw ValidationError("unknown model kind");
}

namespace {

constexpr const char* kModelFormat = "egonet-model";
constexpr int kModelVersion = 1;

nlohmann::json tree_to_json(const DecisionTree& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : tree.nodes) {
        nodes.push_back({n.feature, n.threshold, n.left, n.right, n.high_fraction});
    }
    return nodes;
}

DecisionTree tree_from_json(const nlohmann::json& j) {
    DecisionTree tree;
    for (const auto& n : j) {
        tree.nodes.push_back({n.at(0).get<std::int32_t>(), n.at(1).get<double>(),
                              n.at(2).get<std::int32_t>(), n.at(3).get<std::int32_t>(),
                              n.at(4).get<double>()});
    }
    return tree;
}

} // namespace

nlohmann::json model_to_json(const TrainedModel& model) {
    nlohmann::json j;
    j["format"] = kModelFormat;
    j["version"] = kModelVersion;
    j["kind"] = to_string(model.kind);
    j["predict_seed"] = model.predict_seed;
    nlohmann::json payload = nlohmann::json::object();
    switch (model.kind) {
        case ModelKind::Random:
        case ModelKind::Majority:
            break;
        case ModelKind::Bayes: {
            const auto& p = std::get<HomophilyParams>(model.payload);
            payload = {{"beta_high", p.beta_high},
                       {"beta_low", p.beta_low},
                       {"prior_high", p.prior_high}};
            break;
        }
        case ModelKind::LogisticRegression: {
            const auto& p = std::get<LogisticModel>(model.payload);
            payload = {{"columns", p.columns},       {"mean", p.scaler.mean},
                       {"scale", p.scaler.scale},    {"weights", p.weights},
                       {"intercept", p.intercept},   {"reg_strength", p.reg_strength},
                       {"seed", p.seed}};
            break;
        }
        case ModelKind::RandomForest: {
            const auto& p = std::get<ForestModel>(model.payload);
            nlohmann::json trees = nlohmann::json::array();
            for (const DecisionTree& t : p.trees) trees.push_back(tree_to_json(t));
            payload = {{"columns", p.columns},   {"n_trees", p.n_trees},
                       {"max_depth", p.max_depth}, {"seed", p.seed},
                       {"trees", std::move(trees)}};
            break;
        }
    }
    j["payload"] = std::move(payload);
    return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != kModelFormat) {
        throw ValidationError("not an egonet model file");
    }
    if (j.value("version", 0) != kModelVersion) {
        throw ValidationError("unsupported model version");
    }
    TrainedModel model;
    model.kind = model_kind_from_string(j.at("kind").get<std::string>());
    model.predict_seed = j.at("predict_seed").get<std::uint64_t>();
    const nlohmann::json& payload = j.at("payload");
    switch (model.kind) {
        case ModelKind::Random:
        case ModelKind::Majority:
            break;
        case ModelKind::Bayes: {
            HomophilyParams p;
            p.beta_high = payload.at("beta_high").get<double>();
            p.beta_low = payload.at("beta_low").get<double>();
            p.prior_high = payload.at("prior_high").get<double>();
            model.payload = p;
            break;
        }
        case ModelKind::LogisticRegression: {
            LogisticModel p;
            p.columns = payload.at("columns").get<std::vector<std::string>>();
            p.scaler.mean = payload.at("mean").get<std::vector<double>>();
            p.scaler.scale = payload.at("scale").get<std::vector<double>>();
            p.weights = payload.at("weights").get<std::vector<double>>();
            p.intercept = payload.at("intercept").get<double>();
            p.reg_strength = payload.at("reg_strength").get<double>();
            p.seed = payload.at("seed").get<std::uint64_t>();
            model.payload = std::move(p);
            break;
        }
        case ModelKind::RandomForest: {
            ForestModel p;
            p.columns = payload.at("columns").get<std::vector<std::string>>();
            p.n_trees = payload.at("n_trees").get<int>();
            p.max_depth = payload.at("max_depth").get<int>();
            p.seed = payload.at("seed").get<std::uint64_t>();
            for (const auto& t : payload.at("trees")) p.trees.push_back(tree_from_json(t));
            model.payload = std::move(p);
            break;
        }
    }
    return model;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) throw IoError("cannot write file: " + path.string());
    out << model_to_json(model).dump(2) << '\n';
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) throw IoError("cannot open file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("invalid model file " + path.string() + ": " + e.what());
    }
    return model_from_json(j);
}

} // namespace egonet
