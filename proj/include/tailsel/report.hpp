#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "benchmark.hpp"
#include "learners/serialize.hpp"

namespace tailsel {

inline constexpr int kReportSchemaVersion = 1;

namespace detail {

inline std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

inline std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

}  // namespace detail

inline nlohmann::json estimator_name(EstimatorMethod method) {
    return method == EstimatorMethod::pseudo_mle ? "mle" : "tau";
}

inline nlohmann::json ranking_to_json(const FeatureRanking& ranking) {
    nlohmann::json entries = nlohmann::json::array();
    for (const RankedFeature& e : ranking.entries) {
        nlohmann::json row{{"feature", e.name},
                           {"theta", e.theta_hat},
                           {"lambda_u", e.lambda_u},
                           {"tau", e.tau_hat},
                           {"clamped", e.clamped},
                           {"failed", e.failed}};
        if (e.failed) row["note"] = e.note;
        entries.push_back(std::move(row));
    }
    return entries;
}

inline nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["command"] = "benchmark";
    j["config"] = {{"seed", report.options.seed},
                   {"k", report.options.k},
                   {"estimator", estimator_name(report.options.estimator)},
                   {"select_on", report.options.select_on_full ? "full" : "train"},
                   {"test_fraction", report.options.test_fraction},
                   {"importance_repeats", report.options.importance_repeats}};
    j["dataset"] = {{"target", report.target_name},
                    {"rows", report.n_rows},
                    {"features", report.n_features},
                    {"train_rows", report.n_train},
                    {"test_rows", report.n_test}};

    auto selection_names = [&](const std::vector<std::size_t>& subset) {
        nlohmann::json names = nlohmann::json::array();
        for (const std::size_t f : subset) {
            for (const RankedFeature& e : report.ranking.entries)
                if (e.feature == f) {
                    names.push_back(e.name);
                    break;
                }
        }
        return names;
    };
    j["selections"] = {{"A2", selection_names(report.selection_a2)},
                       {"MI", selection_names(report.selection_mi)},
                       {"GA", selection_names(report.selection_ga)}};
    j["ranking"] = ranking_to_json(report.ranking);

    nlohmann::json cells = nlohmann::json::array();
    for (const EvalCell& cell : report.cells) {
        nlohmann::json row{{"feature_set", cell.block.feature_set},
                           {"model", cell.block.model},
                           {"features", cell.features_used},
                           {"failed", cell.failed}};
        if (cell.failed) {
            row["note"] = cell.note;
        } else {
            row["accuracy"] = cell.block.accuracy;
            row["precision_weighted"] = cell.block.precision_weighted;
            row["recall_weighted"] = cell.block.recall_weighted;
            row["f1_weighted"] = cell.block.f1_weighted;
            row["auc"] = cell.block.auc;
        }
        cells.push_back(std::move(row));
    }
    j["cells"] = std::move(cells);

    nlohmann::json importances = nlohmann::json::array();
    for (const ImportanceRecord& rec : report.importances)
        importances.push_back({{"feature", rec.feature_name},
                               {"mean_drop", rec.mean_drop},
                               {"std_drop", rec.std_drop},
                               {"repeats", rec.repeats}});
    j["importances"] = std::move(importances);

    nlohmann::json configs = nlohmann::json::array();
    for (const LearnerConfig& cfg : report.learner_configs) configs.push_back(config_to_json(cfg));
    j["learner_configs"] = std::move(configs);
    j["xgb_is_standin"] = true;
    return j;
}

inline std::string report_to_text(const EvalReport& report) {
    std::string out;
    out += "benchmark report\n";
    out += "target: " + report.target_name + "  rows: " + std::to_string(report.n_rows) +
           "  features: " + std::to_string(report.n_features) +
           "  train: " + std::to_string(report.n_train) +
           "  test: " + std::to_string(report.n_test) + "\n";
    out += "seed: " + std::to_string(report.options.seed) +
           "  k: " + std::to_string(report.options.k) + "  estimator: " +
           std::string(estimator_name(report.options.estimator)) + "  select-on: " +
           (report.options.select_on_full ? "full" : "train") + "\n\n";

    out += detail::pad("feature set", 13) + detail::pad("model", 19) +
           detail::pad("accuracy", 10) + detail::pad("precision", 11) + detail::pad("recall", 10) +
           detail::pad("f1", 10) + "auc\n";
    for (const EvalCell& cell : report.cells) {
        out += detail::pad(cell.block.feature_set, 13) + detail::pad(cell.block.model, 19);
        if (cell.failed) {
            out += "failed: " + cell.note + "\n";
            continue;
        }
        out += detail::pad(detail::fmt("%.4f", cell.block.accuracy), 10) +
               detail::pad(detail::fmt("%.4f", cell.block.precision_weighted), 11) +
               detail::pad(detail::fmt("%.4f", cell.block.recall_weighted), 10) +
               detail::pad(detail::fmt("%.4f", cell.block.f1_weighted), 10) +
               detail::fmt("%.4f", cell.block.auc) + "\n";
    }
    out += "(xgb = gradient boosting with second-order l2 leaf weights, an approximate stand-in)\n";

    auto selection_line = [&](const char* label, const std::vector<std::size_t>& subset) {
        std::string line = "  ";
        line += label;
        line += ": ";
        bool first = true;
        for (const std::size_t f : subset)
            for (const RankedFeature& e : report.ranking.entries)
                if (e.feature == f) {
                    if (!first) line += ", ";
                    line += e.name;
                    first = false;
                    break;
                }
        return line + "\n";
    };
    out += "\nselections:\n";
    out += selection_line("A2", report.selection_a2);
    out += selection_line("MI", report.selection_mi);
    out += selection_line("GA", report.selection_ga);

    if (!report.importances.empty()) {
        out += "\npermutation importance (random_forest on the A2 features):\n";
        out += "  " + detail::pad("feature", 24) + detail::pad("mean_drop", 12) + "std_drop\n";
        for (const ImportanceRecord& rec : report.importances)
            out += "  " + detail::pad(rec.feature_name, 24) +
                   detail::pad(detail::fmt("%.6f", rec.mean_drop), 12) +
                   detail::fmt("%.6f", rec.std_drop) + "\n";
    }
    return out;
}

inline std::string importance_to_csv(const std::vector<ImportanceRecord>& records) {
    std::string out = "feature,mean_drop\n";
    for (const ImportanceRecord& rec : records)
        out += rec.feature_name + "," + detail::fmt("%.17g", rec.mean_drop) + "\n";
    return out;
}

}  // namespace tailsel
