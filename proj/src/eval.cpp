#include "egonet/eval.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <numeric>
#include <sstream>

#include "egonet/errors.hpp"
#include "egonet/format.hpp"

namespace egonet {

ConfusionCounts confusion(std::span<const IncomeLabel> y_true,
                          std::span<const IncomeLabel> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw ValidationError("confusion: length mismatch");
    }
    if (y_true.empty()) throw ValidationError("confusion: empty input");
    ConfusionCounts c;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool actual = y_true[i] == IncomeLabel::High;
        const bool predicted = y_pred[i] == IncomeLabel::High;
        if (actual && predicted) ++c.tp;
        else if (!actual && predicted) ++c.fp;
        else if (actual && !predicted) ++c.fn;
        else ++c.tn;
    }
    return c;
}

double accuracy(const ConfusionCounts& c) {
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

double precision(const ConfusionCounts& c) {
    const std::uint64_t predicted_pos = c.tp + c.fp;
    if (predicted_pos == 0) return 0.0;
    return static_cast<double>(c.tp) / static_cast<double>(predicted_pos);
}

double recall(const ConfusionCounts& c) {
    const std::uint64_t actual_pos = c.tp + c.fn;
    if (actual_pos == 0) return 0.0;
    return static_cast<double>(c.tp) / static_cast<double>(actual_pos);
}

double f_beta(double precision, double recall, double beta) {
    const double b2 = beta * beta;
    const double denom = b2 * precision + recall;
    if (denom == 0.0) return 0.0;
    return (1.0 + b2) * precision * recall / denom;
}

double roc_auc(std::span<const double> scores, std::span<const IncomeLabel> y_true) {
    if (scores.size() != y_true.size()) throw ValidationError("roc_auc: length mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (const IncomeLabel l : y_true) n_pos += l == IncomeLabel::High;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw ValidationError("roc_auc requires both classes present");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Rank-sum with midranks for ties.
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) {
            if (y_true[order[t]] == IncomeLabel::High) pos_rank_sum += midrank;
        }
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

EvalRow evaluate_model(const TrainedModel& model, const SocialGraph& graph,
                       const std::vector<UserId>& nodes, const TruthPartition& partition,
                       const GroundTruth& truth, const std::string& level_label,
                       const FeatureMatrix* matrix, std::uint64_t eval_seed) {
    if (nodes.empty()) throw ValidationError("evaluate_model: empty node set");
    std::vector<IncomeLabel> y_true;
    y_true.reserve(nodes.size());
    for (const UserId& node : nodes) {
        const auto it = truth.labels.find(node);
        if (it == truth.labels.end()) {
            throw ValidationError("evaluate_model: node has no ground-truth label: " + node);
        }
        y_true.push_back(it->second);
    }

    const auto start = std::chrono::steady_clock::now();
    const std::vector<Prediction> preds =
        predict_model(model, graph, nodes, partition, truth, matrix, eval_seed);
    const double predict_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::vector<double> scores(preds.size());
    std::vector<IncomeLabel> y_pred(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        scores[i] = preds[i].score;
        y_pred[i] = preds[i].label;
    }

    const ConfusionCounts c = confusion(y_true, y_pred);
    EvalRow row;
    row.model = model.kind;
    row.level = level_label;
    row.accuracy = accuracy(c);
    row.precision = precision(c);
    row.recall = recall(c);
    row.auc = roc_auc(scores, y_true);
    row.f1 = f_beta(row.precision, row.recall, 1.0);
    row.f4 = f_beta(row.precision, row.recall, 4.0);
    row.fit_time_s = model.fit_time_s;
    row.predict_time_s = predict_time;
    return row;
}

void emit_report(const EvalReport& report, const std::filesystem::path& csv_path) {
    if (report.rows.empty()) throw ValidationError("emit_report: empty report");
    std::ofstream out(csv_path, std::ios::binary);
    if (!out.is_open()) throw IoError("cannot write file: " + csv_path.string());
    out << kReportHeader << '\n';
    for (const EvalRow& r : report.rows) {
        out << to_string(r.model) << ',' << r.level << ',' << format_double(r.accuracy)
            << ',' << format_double(r.precision) << ',' << format_double(r.recall) << ','
            << format_double(r.auc) << ',' << format_double(r.f1) << ','
            << format_double(r.f4) << ',' << format_double(r.fit_time_s) << ','
            << format_double(r.predict_time_s) << '\n';
    }
    out.close();

    std::filesystem::path md_path = csv_path;
    md_path.replace_extension(".md");
    std::ofstream md(md_path, std::ios::binary);
    if (!md.is_open()) throw IoError("cannot write file: " + md_path.string());
    md << report_markdown(report);
}

std::string report_markdown(const EvalReport& report) {
    std::ostringstream md;
    md << "## " << (report.mode == GraphMode::Full ? "Full Graph" : "Inner Graph") << "\n\n";
    md << "| Model | Level | Accuracy | Precision | Recall | AUC | F1 | F4 "
          "| Fit Time | Predict Time |\n";
    md << "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const EvalRow& r : report.rows) {
        md << "| " << to_string(r.model) << " | " << r.level << " | "
           << format_fixed(r.accuracy, 3) << " | " << format_fixed(r.precision, 3) << " | "
           << format_fixed(r.recall, 3) << " | " << format_fixed(r.auc, 3) << " | "
           << format_fixed(r.f1, 3) << " | " << format_fixed(r.f4, 3) << " | "
           << format_fixed(r.fit_time_s, 3) << " s | " << format_fixed(r.predict_time_s, 3)
           << " s |\n";
    }
    return md.str();
}

std::vector<EvalRow> parse_report_csv(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in.is_open()) throw IoError("cannot open file: " + csv_path.string());
    std::string line;
    if (!std::getline(in, line) || line != kReportHeader) {
        throw SchemaError("bad report header in " + csv_path.string());
    }
    std::vector<EvalRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        if (fields.size() != 10) {
            throw SchemaError("bad report row in " + csv_path.string());
        }
        const auto num = [&](const std::string& s) {
            double v = 0.0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
                throw SchemaError("bad numeric field in " + csv_path.string());
            }
            return v;
        };
        EvalRow r;
        r.model = model_kind_from_string(fields[0]);
        r.level = fields[1];
        r.accuracy = num(fields[2]);
        r.precision = num(fields[3]);
        r.recall = num(fields[4]);
        r.auc = num(fields[5]);
        r.f1 = num(fields[6]);
        r.f4 = num(fields[7]);
        r.fit_time_s = num(fields[8]);
        r.predict_time_s = num(fields[9]);
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace egonet
