#include "egonet/logreg.hpp"

#include <cmath>

#include "egonet/errors.hpp"

namespace egonet {

namespace {

constexpr double kGradTol = 1e-6;
constexpr int kMaxIter = 10000;

double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

Eigen::MatrixXd standardized_matrix(const FeatureMatrix& matrix, const Standardizer& scaler) {
    const std::size_t n = matrix.rows();
    const std::size_t d = matrix.cols();
    Eigen::MatrixXd X(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = matrix.row(i);
        for (std::size_t j = 0; j < d; ++j) X(i, j) = scaler.apply(j, row[j]);
    }
    return X;
}

} // namespace

double lr_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y01,
                    const Eigen::VectorXd& theta, double reg, Eigen::VectorXd* grad) {
    const Eigen::Index n = X.rows();
    const Eigen::Index d = X.cols();
    const Eigen::VectorXd w = theta.head(d);
    const double b = theta(d);

    const Eigen::VectorXd z = (X * w).array() + b;
    double nll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) nll += softplus(z(i)) - y01(i) * z(i);
    nll /= static_cast<double>(n);
    const double objective = nll + 0.5 * reg * w.squaredNorm();

    if (grad != nullptr) {
        Eigen::VectorXd residual(n);
        for (Eigen::Index i = 0; i < n; ++i) residual(i) = sigmoid(z(i)) - y01(i);
        grad->resize(d + 1);
        grad->head(d) = X.transpose() * residual / static_cast<double>(n) + reg * w;
        (*grad)(d) = residual.mean();
    }
    return objective;
}

LogisticModel lr_fit(const FeatureMatrix& matrix, const std::vector<IncomeLabel>& labels,
                     double reg_strength, std::uint64_t seed) {
    const std::size_t n = matrix.rows();
    const std::size_t d = matrix.cols();
    if (n < 2) throw ValidationError("logistic regression needs at least 2 rows");
    if (labels.size() != n) throw ValidationError("label count does not match matrix rows");

    Eigen::VectorXd y(n);
    std::size_t highs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        y(i) = labels[i] == IncomeLabel::High ? 1.0 : 0.0;
        highs += labels[i] == IncomeLabel::High;
    }
    if (highs == 0 || highs == n) {
        throw ValidationError("logistic regression needs both labels present");
    }

    LogisticModel model;
    model.columns = matrix.column_names;
    model.reg_strength = reg_strength;
    model.seed = seed;
    model.scaler.mean.assign(d, 0.0);
    model.scaler.scale.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += matrix.values[i * d + j];
        const double mean = sum / static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = matrix.values[i * d + j] - mean;
            var += delta * delta;
        }
        var /= static_cast<double>(n);
        model.scaler.mean[j] = mean;
        model.scaler.scale[j] = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
    }

    const Eigen::MatrixXd X = standardized_matrix(matrix, model.scaler);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d) + 1);
    Eigen::VectorXd grad;
    double objective = lr_objective(X, y, theta, reg_strength, &grad);

    for (int iter = 0; iter < kMaxIter && grad.norm() > kGradTol; ++iter) {
        // Newton step on the augmented design [X 1].
        const Eigen::VectorXd z = (X * theta.head(d)).array() + theta(d);
        Eigen::VectorXd curv(z.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            const double p = sigmoid(z(i));
            curv(i) = std::max(p * (1.0 - p), 1e-12);
        }
        Eigen::MatrixXd A(X.rows(), X.cols() + 1);
        A.leftCols(X.cols()) = X;
        A.rightCols(1).setOnes();
        Eigen::MatrixXd hess =
            A.transpose() * curv.asDiagonal() * A / static_cast<double>(X.rows());
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j) {
            hess(j, j) += reg_strength;
        }
        hess.diagonal().array() += 1e-12;

        Eigen::VectorXd direction = hess.ldlt().solve(-grad);
        if (!direction.allFinite()) direction = -grad;

        // Armijo backtracking.
        const double slope = grad.dot(direction);
        double step = 1.0;
        bool moved = false;
        for (int half = 0; half < 60; ++half) {
            const Eigen::VectorXd candidate = theta + step * direction;
            const double cand_obj = lr_objective(X, y, candidate, reg_strength, nullptr);
            if (cand_obj <= objective + 1e-4 * step * slope) {
                theta = candidate;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
        objective = lr_objective(X, y, theta, reg_strength, &grad);
    }

    model.weights.assign(theta.data(), theta.data() + d);
    model.intercept = theta(static_cast<Eigen::Index>(d));
    return model;
}

double lr_score(const LogisticModel& model, std::span<const double> raw_row) {
    double z = model.intercept;
    for (std::size_t j = 0; j < model.weights.size(); ++j) {
        z += model.weights[j] * model.scaler.apply(j, raw_row[j]);
    }
    return sigmoid(z);
}

std::vector<Prediction> lr_predict(const LogisticModel& model, const FeatureMatrix& matrix,
                                   std::uint64_t seed) {
    if (matrix.column_names != model.columns) {
        throw ValidationError("feature columns do not match the trained model");
    }
    Rng coin(seed);
    std::vector<Prediction> out;
    out.reserve(matrix.rows());
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        Prediction pred;
        pred.node = matrix.row_ids[i];
        pred.score = lr_score(model, matrix.row(i));
        pred.label = label_from_score(pred.score, coin);
        out.push_back(std::move(pred));
    }
    return out;
}

} // namespace egonet
