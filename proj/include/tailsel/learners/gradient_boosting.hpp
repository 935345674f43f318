#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "../common.hpp"
#include "../rng.hpp"
#include "common.hpp"
#include "tree.hpp"

namespace tailsel {

// stagewise shallow regression trees on the logistic-loss negative gradient;
// the l2 variant scores splits and leaves with second-order statistics
inline TrainedModel train_gradient_boosting(const std::vector<std::vector<double>>& columns,
                                            const std::vector<int>& y,
                                            const std::vector<std::string>& names,
                                            const LearnerConfig& cfg) {
    cfg.validate();
    if (cfg.kind != LearnerKind::gradient_boosting &&
        cfg.kind != LearnerKind::gradient_boosting_l2)
        throw ConfigError("train_gradient_boosting: wrong learner kind");
    const std::size_t n = y.size();
    const std::size_t d = columns.size();
    if (d == 0) throw DataError("train_gradient_boosting: no features");
    for (const auto& col : columns)
        if (col.size() != n) throw DataError("train_gradient_boosting: column length mismatch");
    if (names.size() != d) throw DataError("train_gradient_boosting: name count mismatch");

    const BinnedMatrix bins = bin_columns(columns);

    double base_rate = 0.0;
    for (const int label : y) base_rate += static_cast<double>(label);
    base_rate /= static_cast<double>(n);
    base_rate = std::clamp(base_rate, 1e-12, 1.0 - 1e-12);
    const double base_score = std::log(base_rate / (1.0 - base_rate));

    TreeBuildConfig tc;
    tc.criterion = cfg.kind == LearnerKind::gradient_boosting_l2 ? SplitCriterion::second_order
                                                                 : SplitCriterion::variance;
    tc.max_depth = cfg.depth;
    tc.min_leaf = cfg.min_leaf;
    tc.mtry = 0;  // boosting trees see every feature
    tc.l2_leaf = cfg.l2_leaf;

    TrainedModel model;
    model.kind = cfg.kind;
    model.config = cfg;
    model.feature_names = names;
    model.base_score = base_score;
    model.trees.reserve(cfg.trees);

    std::vector<double> scores(n, base_score);
    std::vector<double> grad(n);
    std::vector<double> hess(n);
    model.train_loss_per_stage.reserve(cfg.trees + 1);
    model.train_loss_per_stage.push_back(mean_logistic_loss(scores, y));

    std::vector<std::size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});

    for (std::size_t m = 0; m < cfg.trees; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(scores[i]);
            grad[i] = static_cast<double>(y[i]) - p;
            hess[i] = p * (1.0 - p);
        }

        Rng rng(derive_seed(cfg.seed, m));
        std::vector<std::size_t> rows;
        if (cfg.subsample < 1.0) {
            const std::size_t take = std::max<std::size_t>(
                1, static_cast<std::size_t>(cfg.subsample * static_cast<double>(n)));
            rows = sample_indices(rng, n, take);
        } else {
            rows = all_rows;
        }

        Tree tree = build_tree(bins, std::move(rows), grad, &hess, tc, rng);
        for (std::size_t i = 0; i < n; ++i)
            scores[i] += cfg.learning_rate * tree.evaluate(columns, i);
        model.trees.push_back(std::move(tree));
        model.train_loss_per_stage.push_back(mean_logistic_loss(scores, y));
    }
    model.iterations = cfg.trees;
    return model;
}

}  // namespace tailsel
