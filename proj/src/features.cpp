#include "egonet/features.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "egonet/errors.hpp"
#include "egonet/format.hpp"
#include "egonet/parallel.hpp"

namespace egonet {

namespace {

constexpr const char* kQuantities[4] = {"calls", "time", "sms", "contacts"};
constexpr const char* kDirections[2] = {"in", "out"};
constexpr const char* kCats[2] = {"low", "high"};

// Walks the border edges of one node and accumulates a feature row.
// Reusable across rows; the epoch trick keeps the distinct-contact marks
// valid without clearing.
class FeatureWorker {
public:
    FeatureWorker(const SocialGraph& g, const LabelIndex* labels)
        : walker_(g),
          seen_{std::vector<std::uint32_t>(g.node_count(), 0),
                std::vector<std::uint32_t>(g.node_count(), 0)},
          labels_(labels) {}

    void compute(NodeId v, LevelSpec spec, std::span<double> row) {
        ++epoch_;
        std::fill(row.begin(), row.end(), 0.0);
        const bool categorical = spec.family == LevelFamily::Cat;
        const std::size_t cat_base = 8 * static_cast<std::size_t>(spec.max_level);

        walker_.for_each_level_edge(
            v, static_cast<unsigned>(spec.max_level),
            [&](unsigned n, const LevelEdge& e) {
                const std::size_t dir = e.inner_is_origin ? 1 : 0; // 0 in, 1 out
                const std::size_t ego_slot = (n - 1) * 8 + dir * 4;
                const EdgeAggregate& agg = *e.agg;
                row[ego_slot + 0] += static_cast<double>(agg.calls);
                row[ego_slot + 1] += static_cast<double>(agg.time_s);
                row[ego_slot + 2] += static_cast<double>(agg.sms);

                const NodeId outer = e.outer();
                const std::uint8_t tag =
                    categorical ? labels_->at(outer) : LabelIndex::None;
                const std::size_t cat_slot =
                    categorical ? cat_base + (n - 1) * 16 + dir * 8 : 0;

                std::vector<std::uint32_t>& seen = seen_[dir];
                if (seen[outer] != epoch_) {
                    seen[outer] = epoch_;
                    row[ego_slot + 3] += 1.0; // distinct contact
                    if (tag != LabelIndex::None) {
                        row[cat_slot + 3 * 2 + (tag == LabelIndex::HighTag)] += 1.0;
                    }
                }
                if (tag != LabelIndex::None) {
                    const std::size_t lbl = tag == LabelIndex::HighTag;
                    row[cat_slot + 0 * 2 + lbl] += static_cast<double>(agg.calls);
                    row[cat_slot + 1 * 2 + lbl] += static_cast<double>(agg.time_s);
                    row[cat_slot + 2 * 2 + lbl] += static_cast<double>(agg.sms);
                }
            });
    }

private:
    RingWalker walker_;
    std::vector<std::uint32_t> seen_[2];
    std::uint32_t epoch_ = 0;
    const LabelIndex* labels_;
};

void check_level(int max_level) {
    if (max_level < 1 || max_level > 3) {
        throw ValidationError("feature level must be in 1..3, got " +
                              std::to_string(max_level));
    }
}

} // namespace

std::string to_string(LevelSpec spec) {
    return (spec.family == LevelFamily::Ego ? "ego" : "cat") +
           std::to_string(spec.max_level);
}

LevelSpec level_spec_from_string(std::string_view s) {
    LevelSpec spec;
    if (s.starts_with("ego")) {
        spec.family = LevelFamily::Ego;
    } else if (s.starts_with("cat")) {
        spec.family = LevelFamily::Cat;
    } else {
        throw ValidationError("unknown feature level: " + std::string(s));
    }
    const std::string_view digits = s.substr(3);
    if (digits.size() != 1 || digits[0] < '1' || digits[0] > '3') {
        throw ValidationError("unknown feature level: " + std::string(s));
    }
    spec.max_level = digits[0] - '0';
    return spec;
}

std::size_t feature_count(LevelSpec spec) {
    check_level(spec.max_level);
    const std::size_t per_level = spec.family == LevelFamily::Ego ? 8 : 24;
    return per_level * static_cast<std::size_t>(spec.max_level);
}

std::vector<std::string> feature_names(LevelSpec spec) {
    check_level(spec.max_level);
    std::vector<std::string> names;
    names.reserve(feature_count(spec));
    for (int n = 1; n <= spec.max_level; ++n) {
        for (const char* dir : kDirections) {
            for (const char* q : kQuantities) {
                names.push_back("l" + std::to_string(n) + "_" + dir + "_" + q);
            }
        }
    }
    if (spec.family == LevelFamily::Cat) {
        for (int n = 1; n <= spec.max_level; ++n) {
            for (const char* dir : kDirections) {
                for (const char* q : kQuantities) {
                    for (const char* cat : kCats) {
                        names.push_back("l" + std::to_string(n) + "_" + dir + "_" + q +
                                        "_" + cat);
                    }
                }
            }
        }
    }
    return names;
}

std::vector<double> ego_features(const SocialGraph& graph, NodeId v, int max_level) {
    check_level(max_level);
    const LevelSpec spec{LevelFamily::Ego, max_level};
    std::vector<double> row(feature_count(spec));
    FeatureWorker worker(graph, nullptr);
    worker.compute(v, spec, row);
    return row;
}

std::vector<double> ego_features(const SocialGraph& graph, const UserId& v, int max_level) {
    return ego_features(graph, graph.require(v), max_level);
}

std::vector<double> cat_features(const SocialGraph& graph, NodeId v, int max_level,
                                 const TruthPartition& partition, const GroundTruth& truth) {
    check_level(max_level);
    const LevelSpec spec{LevelFamily::Cat, max_level};
    std::vector<double> row(feature_count(spec));
    const LabelIndex labels(graph, partition, truth);
    FeatureWorker worker(graph, &labels);
    worker.compute(v, spec, row);
    return row;
}

std::vector<double> cat_features(const SocialGraph& graph, const UserId& v, int max_level,
                                 const TruthPartition& partition, const GroundTruth& truth) {
    return cat_features(graph, graph.require(v), max_level, partition, truth);
}

FeatureMatrix FeatureMatrix::subset(const std::vector<UserId>& ids) const {
    std::unordered_map<std::string_view, std::size_t> index;
    index.reserve(row_ids.size());
    for (std::size_t i = 0; i < row_ids.size(); ++i) index.emplace(row_ids[i], i);

    FeatureMatrix out;
    out.column_names = column_names;
    out.row_ids = ids;
    out.values.reserve(ids.size() * cols());
    for (const UserId& id : ids) {
        const auto it = index.find(id);
        if (it == index.end()) {
            throw ValidationError("subset row not present in matrix: " + id);
        }
        const auto r = row(it->second);
        out.values.insert(out.values.end(), r.begin(), r.end());
    }
    return out;
}

FeatureMatrix build_matrix(const SocialGraph& graph, std::vector<UserId> nodes,
                           LevelSpec spec, const TruthPartition* partition,
                           const GroundTruth* truth) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    const bool categorical = spec.family == LevelFamily::Cat;
    if (categorical && (partition == nullptr || truth == nullptr)) {
        throw ValidationError("categorical features require a truth partition");
    }

    FeatureMatrix matrix;
    matrix.column_names = feature_names(spec);
    std::vector<NodeId> ids;
    ids.reserve(nodes.size());
    for (const UserId& user : nodes) ids.push_back(graph.require(user));
    matrix.row_ids = std::move(nodes);

    const std::size_t cols = matrix.cols();
    matrix.values.assign(matrix.rows() * cols, 0.0);

    const LabelIndex labels = categorical ? LabelIndex(graph, *partition, *truth)
                                          : LabelIndex(graph, TruthPartition{}, GroundTruth{});
    double* const values = matrix.values.data();
    parallel_for(ids.size(), [&](std::size_t begin, std::size_t end) {
        FeatureWorker worker(graph, categorical ? &labels : nullptr);
        for (std::size_t i = begin; i < end; ++i) {
            worker.compute(ids[i], spec, {values + i * cols, cols});
        }
    });
    return matrix;
}

void write_matrix_csv(const FeatureMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) throw IoError("cannot write file: " + path.string());
    out << "user";
    for (const std::string& name : matrix.column_names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        out << matrix.row_ids[i];
        for (double v : matrix.row(i)) out << ',' << format_double(v);
        out << '\n';
    }
}

} // namespace egonet
