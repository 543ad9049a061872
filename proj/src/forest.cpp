#include "egonet/forest.hpp"

#include <algorithm>
#include <cmath>

#include "egonet/errors.hpp"
#include "egonet/parallel.hpp"

namespace egonet {

double DecisionTree::predict_row(std::span<const double> row) const {
    std::int32_t at = 0;
    while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
        const TreeNode& node = nodes[static_cast<std::size_t>(at)];
        at = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                           : node.right;
    }
    return nodes[static_cast<std::size_t>(at)].high_fraction;
}

namespace {

struct SplitChoice {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double child_impurity = 0.0;
};

double gini(std::uint64_t pos, std::uint64_t total) {
    if (total == 0) return 0.0;
    const double p = static_cast<double>(pos) / static_cast<double>(total);
    return 2.0 * p * (1.0 - p);
}

class CartBuilder {
public:
    CartBuilder(const FeatureMatrix& matrix, const std::vector<IncomeLabel>& labels,
                const CartConfig& config, Rng& rng)
        : m_(matrix), y_(labels), cfg_(config), rng_(rng) {
        feature_order_.resize(m_.cols());
        for (std::size_t j = 0; j < m_.cols(); ++j) {
            feature_order_[j] = static_cast<std::uint32_t>(j);
        }
    }

    DecisionTree build(std::span<const std::uint32_t> rows) {
        work_.assign(rows.begin(), rows.end());
        DecisionTree tree;
        grow(tree, 0, work_.size(), 0);
        return tree;
    }

private:
    std::int32_t grow(DecisionTree& tree, std::size_t begin, std::size_t end, int depth) {
        const std::size_t size = end - begin;
        std::uint64_t pos = 0;
        for (std::size_t i = begin; i < end; ++i) {
            pos += y_[work_[i]] == IncomeLabel::High;
        }

        const bool at_depth_cap = cfg_.max_depth > 0 && depth >= cfg_.max_depth;
        SplitChoice split;
        if (size >= 2 && pos != 0 && pos != size && !at_depth_cap) {
            split = choose_split(begin, end, pos);
        }

        const std::int32_t id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        if (split.feature < 0) {
            tree.nodes[static_cast<std::size_t>(id)].high_fraction =
                static_cast<double>(pos) / static_cast<double>(size);
            return id;
        }

        const auto mid = std::stable_partition(
            work_.begin() + static_cast<std::ptrdiff_t>(begin),
            work_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::uint32_t r) {
                return value(r, split.feature) <= split.threshold;
            });
        const std::size_t cut = static_cast<std::size_t>(mid - work_.begin());

        tree.nodes[static_cast<std::size_t>(id)].feature = split.feature;
        tree.nodes[static_cast<std::size_t>(id)].threshold = split.threshold;
        const std::int32_t left = grow(tree, begin, cut, depth + 1);
        tree.nodes[static_cast<std::size_t>(id)].left = left;
        const std::int32_t right = grow(tree, cut, end, depth + 1);
        tree.nodes[static_cast<std::size_t>(id)].right = right;
        return id;
    }

    SplitChoice choose_split(std::size_t begin, std::size_t end, std::uint64_t pos_total) {
        const std::size_t d = m_.cols();
        const std::size_t quota = cfg_.feature_subset == 0 ? d : cfg_.feature_subset;
        if (cfg_.feature_subset > 0) rng_.shuffle(feature_order_);

        const std::size_t size = end - begin;
        sorted_.resize(size);

        SplitChoice best;
        bool have_best = false;
        std::size_t examined = 0;
        for (std::uint32_t f : feature_order_) {
            if (examined >= quota) break;
            for (std::size_t i = 0; i < size; ++i) {
                const std::uint32_t r = work_[begin + i];
                sorted_[i] = {value(r, static_cast<std::int32_t>(f)),
                              y_[r] == IncomeLabel::High};
            }
            std::sort(sorted_.begin(), sorted_.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (sorted_.front().first == sorted_.back().first) {
                continue; // constant in this node; does not consume the quota
            }
            ++examined;

            std::uint64_t pos_left = 0;
            for (std::size_t i = 0; i + 1 < size; ++i) {
                pos_left += sorted_[i].second;
                const double v1 = sorted_[i].first;
                const double v2 = sorted_[i + 1].first;
                if (v1 == v2) continue;
                const std::uint64_t n_left = i + 1;
                const std::uint64_t n_right = size - n_left;
                const double impurity =
                    (static_cast<double>(n_left) * gini(pos_left, n_left) +
                     static_cast<double>(n_right) * gini(pos_total - pos_left, n_right)) /
                    static_cast<double>(size);
                if (!have_best || impurity < best.child_impurity) {
                    double threshold = v1 + (v2 - v1) / 2.0;
                    if (threshold >= v2) threshold = v1;
                    best = {static_cast<std::int32_t>(f), threshold, impurity};
                    have_best = true;
                }
            }
        }
        return best;
    }

    double value(std::uint32_t row, std::int32_t feature) const {
        return m_.values[static_cast<std::size_t>(row) * m_.cols() +
                         static_cast<std::size_t>(feature)];
    }

    const FeatureMatrix& m_;
    const std::vector<IncomeLabel>& y_;
    const CartConfig& cfg_;
    Rng& rng_;
    std::vector<std::uint32_t> feature_order_;
    std::vector<std::uint32_t> work_;
    std::vector<std::pair<double, bool>> sorted_;
};

} // namespace

DecisionTree cart_fit(const FeatureMatrix& matrix, const std::vector<IncomeLabel>& labels,
                      std::span<const std::uint32_t> rows, const CartConfig& config,
                      Rng& rng) {
    if (rows.empty()) throw ValidationError("cannot fit a tree on zero rows");
    CartBuilder builder(matrix, labels, config, rng);
    return builder.build(rows);
}

ForestModel rf_fit(const FeatureMatrix& matrix, const std::vector<IncomeLabel>& labels,
                   int n_trees, int max_depth, std::uint64_t seed) {
    const std::size_t n = matrix.rows();
    if (n < 2) throw ValidationError("random forest needs at least 2 rows");
    if (labels.size() != n) throw ValidationError("label count does not match matrix rows");
    if (n_trees < 1) throw ValidationError("random forest needs at least 1 tree");
    std::size_t highs = 0;
    for (const IncomeLabel l : labels) highs += l == IncomeLabel::High;
    if (highs == 0 || highs == n) {
        throw ValidationError("random forest needs both labels present");
    }

    ForestModel model;
    model.columns = matrix.column_names;
    model.n_trees = n_trees;
    model.max_depth = max_depth;
    model.seed = seed;
    model.trees.resize(static_cast<std::size_t>(n_trees));

    std::vector<std::uint64_t> tree_seeds(static_cast<std::size_t>(n_trees));
    for (std::size_t t = 0; t < tree_seeds.size(); ++t) tree_seeds[t] = mix_seed(seed, t);

    CartConfig config;
    config.max_depth = max_depth;
    config.feature_subset = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(matrix.cols()))));

    parallel_for(model.trees.size(), [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint32_t> sample(n);
        for (std::size_t t = begin; t < end; ++t) {
            Rng rng(tree_seeds[t]);
            for (std::size_t i = 0; i < n; ++i) {
                sample[i] = static_cast<std::uint32_t>(rng.below(n));
            }
            model.trees[t] = cart_fit(matrix, labels, sample, config, rng);
        }
    });
    return model;
}

std::vector<Prediction> rf_predict(const ForestModel& model, const FeatureMatrix& matrix,
                                   std::uint64_t seed) {
    if (matrix.column_names != model.columns) {
        throw ValidationError("feature columns do not match the trained model");
    }
    Rng coin(seed);
    std::vector<Prediction> out;
    out.reserve(matrix.rows());
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        const auto row = matrix.row(i);
        double sum = 0.0;
        for (const DecisionTree& tree : model.trees) sum += tree.predict_row(row);
        Prediction pred;
        pred.node = matrix.row_ids[i];
        pred.score = sum / static_cast<double>(model.trees.size());
        pred.label = label_from_score(pred.score, coin);
        out.push_back(std::move(pred));
    }
    return out;
}

} // namespace egonet
