#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "common.hpp"
#include "dataset.hpp"
#include "fit.hpp"
#include "genetic.hpp"
#include "learners/predict.hpp"
#include "metrics.hpp"
#include "mutual_information.hpp"
#include "permutation.hpp"
#include "pseudo.hpp"
#include "ranking.hpp"
#include "split.hpp"

namespace tailsel {

struct BenchmarkOptions {
    std::size_t k = 5;
    std::uint64_t seed = 42;
    EstimatorMethod estimator = EstimatorMethod::tau_inversion;
    bool select_on_full = false;  // default: selectors see training rows only
    double test_fraction = 0.2;
    std::size_t importance_repeats = 20;
    unsigned threads = 0;
};

struct EvalCell {
    MetricsBlock block;
    std::vector<std::string> features_used;
    bool failed = false;
    std::string note;
};

struct EvalReport {
    std::vector<EvalCell> cells;  // feature sets x models, fixed order
    std::vector<ImportanceRecord> importances;  // random forest on the tail-ranked subset
    FeatureRanking ranking;                     // full tail-dependence ranking
    std::vector<std::size_t> selection_a2;
    std::vector<std::size_t> selection_mi;
    std::vector<std::size_t> selection_ga;
    std::vector<LearnerConfig> learner_configs;  // one per model slot
    BenchmarkOptions options;
    std::string target_name;
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
};

inline const std::vector<std::string>& feature_set_labels() {
    static const std::vector<std::string> labels{"A2", "MI", "GA", "All"};
    return labels;
}

// the last slot is the second-order boosting stand-in, reported as "xgb"
inline const std::vector<std::string>& model_labels() {
    static const std::vector<std::string> labels{"logistic", "random_forest",
                                                 "gradient_boosting", "xgb"};
    return labels;
}

inline const std::vector<LearnerKind>& model_kinds() {
    static const std::vector<LearnerKind> kinds{
        LearnerKind::logistic, LearnerKind::random_forest, LearnerKind::gradient_boosting,
        LearnerKind::gradient_boosting_l2};
    return kinds;
}

namespace detail {

inline std::vector<std::vector<double>> gather_columns(
    const std::vector<std::vector<double>>& columns, const std::vector<std::size_t>& subset,
    const std::vector<std::size_t>& rows) {
    std::vector<std::vector<double>> out;
    out.reserve(subset.size());
    for (const std::size_t j : subset) out.push_back(gather(columns[j], rows));
    return out;
}

inline std::vector<int> gather_labels(const std::vector<int>& target,
                                      const std::vector<std::size_t>& rows) {
    std::vector<int> out;
    out.reserve(rows.size());
    for (const std::size_t r : rows) out.push_back(target[r]);
    return out;
}

}  // namespace detail

inline EvalReport run_benchmark(const BinaryDataset& data, const BenchmarkOptions& opt) {
    const std::size_t d = data.columns.size();
    if (opt.k > d) throw DomainError("k exceeds the number of features");

    EvalReport report;
    report.options = opt;
    report.target_name = data.target_name;
    report.n_rows = data.n;
    report.n_features = d;

    const SplitIndices split =
        stratified_split(data.target, opt.test_fraction, derive_seed(opt.seed, 1));
    report.n_train = split.train.size();
    report.n_test = split.test.size();

    std::vector<std::size_t> all_rows(data.n);
    std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
    const std::vector<std::size_t>& selection_rows = opt.select_on_full ? all_rows : split.train;
    const std::vector<int> selection_labels = detail::gather_labels(data.target, selection_rows);

    // tail-dependence ranking needs pseudo-observations over the selection rows
    const PseudoMatrix pseudo = build_pseudo_matrix(data.columns, selection_rows);
    std::vector<double> target_for_pseudo;
    target_for_pseudo.reserve(selection_labels.size());
    for (const int t : selection_labels) target_for_pseudo.push_back(static_cast<double>(t));
    const std::vector<double> target_pseudo = pseudo_observations(target_for_pseudo);

    report.ranking = rank_a2(pseudo, target_pseudo, data.feature_names, opt.k, opt.estimator,
                             opt.threads);
    report.selection_a2 = report.ranking.top;

    std::vector<std::vector<double>> selection_columns;
    selection_columns.reserve(d);
    for (const auto& col : data.columns) selection_columns.push_back(gather(col, selection_rows));
    report.selection_mi =
        select_mi(selection_columns, selection_labels, opt.k, 5, derive_seed(opt.seed, 2));
    report.selection_ga = ga_select(selection_columns, selection_labels, opt.k, 10, 5,
                                    derive_seed(opt.seed, 3), opt.threads)
                              .selected;

    std::vector<std::size_t> full_set(d);
    std::iota(full_set.begin(), full_set.end(), std::size_t{0});
    const std::vector<std::vector<std::size_t>> feature_sets{
        report.selection_a2, report.selection_mi, report.selection_ga, full_set};

    const std::vector<int> y_train = detail::gather_labels(data.target, split.train);
    const std::vector<int> y_test = detail::gather_labels(data.target, split.test);

    TrainedModel rf_on_a2;
    std::vector<std::vector<double>> x_test_a2;
    bool have_rf_on_a2 = false;

    report.cells.reserve(feature_sets.size() * model_kinds().size());
    for (std::size_t s = 0; s < feature_sets.size(); ++s) {
        const std::vector<std::size_t>& subset = feature_sets[s];
        std::vector<std::string> names;
        names.reserve(subset.size());
        for (const std::size_t j : subset) names.push_back(data.feature_names[j]);

        const auto x_train_raw = detail::gather_columns(data.columns, subset, split.train);
        const auto x_test_raw = detail::gather_columns(data.columns, subset, split.test);

        for (std::size_t m = 0; m < model_kinds().size(); ++m) {
            EvalCell cell;
            cell.block.feature_set = feature_set_labels()[s];
            cell.block.model = model_labels()[m];
            cell.features_used = names;
            const std::size_t cell_index = s * model_kinds().size() + m;
            LearnerConfig cfg =
                default_config(model_kinds()[m], derive_seed(opt.seed, 100 + cell_index));
            cfg.threads = opt.threads;
            if (s == 0) report.learner_configs.push_back(cfg);
            try {
                TrainedModel model;
                std::vector<double> proba;
                if (cfg.kind == LearnerKind::logistic) {
                    const Standardizer st = fit_standardizer(x_train_raw);
                    const auto x_train = standardize(x_train_raw, st);
                    const auto x_test = standardize(x_test_raw, st);
                    model = train_logistic(x_train, y_train, names, cfg);
                    proba = predict_proba(model, x_test, names);
                } else {
                    model = train_model(x_train_raw, y_train, names, cfg);
                    proba = predict_proba(model, x_test_raw, names);
                }
                const MetricsBlock computed = metrics(y_test, threshold_predict(proba));
                cell.block.accuracy = computed.accuracy;
                cell.block.precision_weighted = computed.precision_weighted;
                cell.block.recall_weighted = computed.recall_weighted;
                cell.block.f1_weighted = computed.f1_weighted;
                cell.block.auc = roc_auc(y_test, proba);
                if (s == 0 && cfg.kind == LearnerKind::random_forest) {
                    rf_on_a2 = model;
                    x_test_a2 = x_test_raw;
                    have_rf_on_a2 = true;
                }
            } catch (const Error& e) {
                cell.failed = true;
                cell.note = e.what();
            }
            report.cells.push_back(std::move(cell));
        }
    }

    if (have_rf_on_a2)
        report.importances =
            permutation_importance(rf_on_a2, x_test_a2, y_test, opt.importance_repeats,
                                   derive_seed(opt.seed, 4), opt.threads);
    return report;
}

}  // namespace tailsel
