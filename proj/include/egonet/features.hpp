#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "egonet/graph.hpp"
#include "egonet/truth.hpp"

namespace egonet {

enum class LevelFamily { Ego, Cat };

// A feature level: ego_1..ego_3 or cat_1..cat_3. Each level merges all
// lower levels, so max_level fully identifies the column set.
struct LevelSpec {
    LevelFamily family = LevelFamily::Ego;
    int max_level = 1;

    bool operator==(const LevelSpec&) const = default;
};

std::string to_string(LevelSpec spec);
LevelSpec level_spec_from_string(std::string_view s);

// Column count: 8 per level for ego, 24 per level for cat.
std::size_t feature_count(LevelSpec spec);

// Deterministic column names. Ego level n contributes
// l<n>_{in,out}_{calls,time,sms,contacts}; the categorical block appends
// l<n>_{in,out}_{calls,time,sms,contacts}_{low,high} for every level.
std::vector<std::string> feature_names(LevelSpec spec);

// Per-level directed aggregates over the border edges between ring n-1 and
// ring n. "out" covers edges whose inner endpoint is the origin, "in" those
// whose inner endpoint is the destination; contacts counts distinct outer
// endpoints reached in that direction. The categorical variants restrict to
// border edges whose outer endpoint lies in the feature partition, split by
// that endpoint's label.
std::vector<double> ego_features(const SocialGraph& graph, NodeId v, int max_level);
std::vector<double> ego_features(const SocialGraph& graph, const UserId& v, int max_level);
std::vector<double> cat_features(const SocialGraph& graph, NodeId v, int max_level,
                                 const TruthPartition& partition, const GroundTruth& truth);
std::vector<double> cat_features(const SocialGraph& graph, const UserId& v, int max_level,
                                 const TruthPartition& partition, const GroundTruth& truth);

struct FeatureMatrix {
    std::vector<std::string> column_names;
    std::vector<UserId> row_ids; // sorted ascending
    std::vector<double> values;  // row-major, rows() x cols()

    std::size_t rows() const { return row_ids.size(); }
    std::size_t cols() const { return column_names.size(); }

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * cols(), cols()};
    }

    // Row subset by user id; every id must be present.
    FeatureMatrix subset(const std::vector<UserId>& ids) const;
};

// One row per node (sorted by user id), columns per feature_names. Rows are
// computed independently and in parallel. partition/truth may be null for
// ego levels.
FeatureMatrix build_matrix(const SocialGraph& graph, std::vector<UserId> nodes,
                           LevelSpec spec, const TruthPartition* partition,
                           const GroundTruth* truth);

// CSV export: `user` column followed by the feature columns.
void write_matrix_csv(const FeatureMatrix& matrix, const std::filesystem::path& path);

} // namespace egonet
