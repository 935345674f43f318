#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "../common.hpp"

namespace tailsel {

enum class LearnerKind { logistic, random_forest, gradient_boosting, gradient_boosting_l2 };

inline std::string learner_kind_name(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::logistic: return "logistic";
        case LearnerKind::random_forest: return "random_forest";
        case LearnerKind::gradient_boosting: return "gradient_boosting";
        case LearnerKind::gradient_boosting_l2: return "gradient_boosting_l2";
    }
    throw ConfigError("unknown learner kind");
}

inline constexpr std::size_t kUnlimitedDepth = std::numeric_limits<std::size_t>::max();

struct LearnerConfig {
    LearnerKind kind = LearnerKind::logistic;
    std::size_t trees = 100;
    std::size_t depth = 3;
    double learning_rate = 0.1;
    double l2_leaf = 1.0;
    std::size_t min_leaf = 1;
    std::size_t max_iterations = 1000;
    double tolerance = 1e-6;
    double l2_strength = 1.0;
    double subsample = 1.0;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    void validate() const {
        if (depth < 1) throw ConfigError("depth must be at least 1");
        if (min_leaf < 1) throw ConfigError("min_leaf must be at least 1");
        if (!(learning_rate > 0.0) || learning_rate > 1.0)
            throw ConfigError("learning_rate must lie in (0,1]");
        if (!(subsample > 0.0) || subsample > 1.0)
            throw ConfigError("subsample must lie in (0,1]");
        if (l2_leaf < 0.0) throw ConfigError("l2_leaf must be nonnegative");
        if (l2_strength < 0.0) throw ConfigError("l2_strength must be nonnegative");
        if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    }
};

inline LearnerConfig default_config(LearnerKind kind, std::uint64_t seed) {
    LearnerConfig cfg;
    cfg.kind = kind;
    cfg.seed = seed;
    switch (kind) {
        case LearnerKind::logistic:
            break;
        case LearnerKind::random_forest:
            cfg.depth = kUnlimitedDepth;
            cfg.min_leaf = 5;
            break;
        case LearnerKind::gradient_boosting:
        case LearnerKind::gradient_boosting_l2:
            cfg.depth = 3;
            cfg.min_leaf = 1;
            break;
    }
    return cfg;
}

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left when x <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;  // leaf payload: class-1 fraction (forest) or additive score (boosting)
};

struct Tree {
    std::vector<TreeNode> nodes;

    double evaluate(const std::vector<std::vector<double>>& columns, std::size_t row) const {
        std::int32_t at = 0;
        for (;;) {
            const TreeNode& node = nodes[static_cast<std::size_t>(at)];
            if (node.feature < 0) return node.value;
            at = columns[static_cast<std::size_t>(node.feature)][row] <= node.threshold
                     ? node.left
                     : node.right;
        }
    }
};

struct TrainedModel {
    LearnerKind kind = LearnerKind::logistic;
    LearnerConfig config;
    std::vector<std::string> feature_names;
    std::vector<double> weights;  // logistic: one per feature, intercept last
    std::vector<Tree> trees;
    double base_score = 0.0;  // boosting initial log-odds
    std::size_t iterations = 0;
    bool converged = true;
    double oob_accuracy = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> train_loss_per_stage;  // boosting: mean loss after each stage
};

inline double sigmoid(double s) {
    if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
    const double e = std::exp(s);
    return e / (1.0 + e);
}

// mean logistic loss of raw scores: softplus(s) - s*y, evaluated stably
inline double mean_logistic_loss(const std::vector<double>& scores, const std::vector<int>& y) {
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double s = scores[i];
        const double softplus = std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s)));
        total += softplus - s * static_cast<double>(y[i]);
    }
    return total / static_cast<double>(scores.size());
}

namespace detail {

inline void check_predict_shape(const TrainedModel& model,
                                const std::vector<std::vector<double>>& columns) {
    if (columns.size() != model.feature_names.size())
        throw DataError("predict_proba: expected " + std::to_string(model.feature_names.size()) +
                        " feature columns, got " + std::to_string(columns.size()));
}

}  // namespace detail

}  // namespace tailsel
