#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "../common.hpp"
#include "../parallel.hpp"
#include "../rng.hpp"
#include "common.hpp"
#include "tree.hpp"

namespace tailsel {

// bagged Gini trees on bootstrap samples; each tree draws its own seed so
// results do not depend on how trees are scheduled across threads
inline TrainedModel train_random_forest(const std::vector<std::vector<double>>& columns,
                                        const std::vector<int>& y,
                                        const std::vector<std::string>& names,
                                        const LearnerConfig& cfg) {
    cfg.validate();
    const std::size_t n = y.size();
    const std::size_t d = columns.size();
    if (d == 0) throw DataError("train_random_forest: no features");
    for (const auto& col : columns)
        if (col.size() != n) throw DataError("train_random_forest: column length mismatch");
    if (names.size() != d) throw DataError("train_random_forest: name count mismatch");
    if (cfg.trees == 0) throw ConfigError("train_random_forest: need at least one tree");

    const BinnedMatrix bins = bin_columns(columns);
    std::vector<double> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<double>(y[i]);

    TreeBuildConfig tc;
    tc.criterion = SplitCriterion::gini;
    tc.max_depth = cfg.depth;
    tc.min_leaf = cfg.min_leaf;
    tc.mtry = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));

    TrainedModel model;
    model.kind = LearnerKind::random_forest;
    model.config = cfg;
    model.feature_names = names;
    model.trees.resize(cfg.trees);

    std::vector<std::vector<char>> in_bag(cfg.trees, std::vector<char>(n, 0));
    parallel_for(cfg.trees, resolve_threads(cfg.threads), [&](std::size_t t) {
        Rng rng(derive_seed(cfg.seed, t));
        std::vector<std::size_t> rows(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r = static_cast<std::size_t>(rng.next_below(n));
            rows[i] = r;
            in_bag[t][r] = 1;
        }
        model.trees[t] = build_tree(bins, std::move(rows), labels, nullptr, tc, rng);
    });

    // out-of-bag vote accuracy, recorded as training metadata
    std::vector<std::size_t> votes1(n, 0);
    std::vector<std::size_t> votes(n, 0);
    for (std::size_t t = 0; t < cfg.trees; ++t)
        for (std::size_t i = 0; i < n; ++i)
            if (!in_bag[t][i]) {
                ++votes[i];
                if (model.trees[t].evaluate(columns, i) >= 0.5) ++votes1[i];
            }
    std::size_t scored = 0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (votes[i] == 0) continue;
        ++scored;
        const int pred = 2 * votes1[i] >= votes[i] ? 1 : 0;
        if (pred == y[i]) ++correct;
    }
    if (scored > 0)
        model.oob_accuracy = static_cast<double>(correct) / static_cast<double>(scored);
    model.iterations = cfg.trees;
    return model;
}

}  // namespace tailsel
