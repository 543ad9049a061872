#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "egonet/records.hpp"
#include "egonet/rng.hpp"
#include "egonet/truth.hpp"

namespace egonet {

enum class ModelKind { Random, Majority, Bayes, LogisticRegression, RandomForest };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view s);

// True for the classifiers that consume a FeatureMatrix (LR, RF).
bool model_uses_features(ModelKind kind);

// score is P(High). The label is High iff score > 0.5; an exact 0.5 is
// broken by a seeded coin so predictions stay total and reproducible.
struct Prediction {
    UserId node;
    double score = 0.5;
    IncomeLabel label = IncomeLabel::Low;
};

inline IncomeLabel label_from_score(double score, Rng& tie_rng) {
    if (score > 0.5) return IncomeLabel::High;
    if (score < 0.5) return IncomeLabel::Low;
    return tie_rng.coin() ? IncomeLabel::High : IncomeLabel::Low;
}

} // namespace egonet
