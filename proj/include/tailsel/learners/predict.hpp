#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "../common.hpp"
#include "common.hpp"
#include "gradient_boosting.hpp"
#include "logistic.hpp"
#include "random_forest.hpp"

namespace tailsel {

inline std::vector<double> predict_proba(const TrainedModel& model,
                                         const std::vector<std::vector<double>>& columns) {
    detail::check_predict_shape(model, columns);
    const std::size_t n = columns.empty() ? 0 : columns.front().size();
    std::vector<double> proba(n);

    switch (model.kind) {
        case LearnerKind::logistic: {
            const std::size_t d = columns.size();
            for (std::size_t i = 0; i < n; ++i) {
                double s = model.weights[d];
                for (std::size_t j = 0; j < d; ++j) s += model.weights[j] * columns[j][i];
                proba[i] = sigmoid(s);
            }
            break;
        }
        case LearnerKind::random_forest: {
            const double inv_trees = 1.0 / static_cast<double>(model.trees.size());
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t votes1 = 0;
                for (const Tree& tree : model.trees)
                    if (tree.evaluate(columns, i) >= 0.5) ++votes1;
                proba[i] = static_cast<double>(votes1) * inv_trees;
            }
            break;
        }
        case LearnerKind::gradient_boosting:
        case LearnerKind::gradient_boosting_l2: {
            for (std::size_t i = 0; i < n; ++i) {
                double s = model.base_score;
                for (const Tree& tree : model.trees)
                    s += model.config.learning_rate * tree.evaluate(columns, i);
                proba[i] = sigmoid(s);
            }
            break;
        }
    }
    return proba;
}

// column names are checked when the caller can supply them
inline std::vector<double> predict_proba(const TrainedModel& model,
                                         const std::vector<std::vector<double>>& columns,
                                         const std::vector<std::string>& names) {
    if (names != model.feature_names)
        throw DataError("predict_proba: feature names do not match the trained model");
    return predict_proba(model, columns);
}

inline TrainedModel train_model(const std::vector<std::vector<double>>& columns,
                                const std::vector<int>& y,
                                const std::vector<std::string>& names,
                                const LearnerConfig& cfg) {
    switch (cfg.kind) {
        case LearnerKind::logistic: return train_logistic(columns, y, names, cfg);
        case LearnerKind::random_forest: return train_random_forest(columns, y, names, cfg);
        case LearnerKind::gradient_boosting:
        case LearnerKind::gradient_boosting_l2:
            return train_gradient_boosting(columns, y, names, cfg);
    }
    throw ConfigError("train_model: unknown learner kind");
}

}  // namespace tailsel
