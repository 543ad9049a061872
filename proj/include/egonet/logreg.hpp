#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "egonet/features.hpp"
#include "egonet/models.hpp"

namespace egonet {

// Column-wise zero-mean/unit-variance transform fitted on training data;
// scale = 0 marks a constant column, which maps to exactly zero.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    double apply(std::size_t col, double v) const {
        return scale[col] == 0.0 ? 0.0 : (v - mean[col]) * scale[col];
    }
};

struct LogisticModel {
    std::vector<std::string> columns;
    Standardizer scaler;
    std::vector<double> weights; // one per column, on standardized inputs
    double intercept = 0.0;
    double reg_strength = 1.0;
    std::uint64_t seed = 0;
};

// Mean negative log-likelihood plus 0.5 * reg * ||w||^2 (intercept
// unpenalized). theta = [w_0..w_{d-1}, b]. Fills grad when non-null.
double lr_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01,
                    const Eigen::VectorXd& theta, double reg, Eigen::VectorXd* grad);

// Newton iterations with Armijo backtracking until the gradient 2-norm is
// <= 1e-6 (or 1e4 iterations). Throws ValidationError unless both labels
// are present and there are at least two rows.
LogisticModel lr_fit(const FeatureMatrix& matrix, const std::vector<IncomeLabel>& labels,
                     double reg_strength, std::uint64_t seed);

double lr_score(const LogisticModel& model, std::span<const double> raw_row);

// Throws ValidationError when the matrix columns differ from training.
std::vector<Prediction> lr_predict(const LogisticModel& model, const FeatureMatrix& matrix,
                                   std::uint64_t seed);

} // namespace egonet
