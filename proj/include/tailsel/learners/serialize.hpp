#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "../common.hpp"
#include "common.hpp"

namespace tailsel {

inline constexpr int kModelSchemaVersion = 1;

inline nlohmann::json config_to_json(const LearnerConfig& cfg) {
    return nlohmann::json{{"kind", learner_kind_name(cfg.kind)},
                          {"trees", cfg.trees},
                          {"depth", cfg.depth == kUnlimitedDepth ? 0 : cfg.depth},
                          {"learning_rate", cfg.learning_rate},
                          {"l2_leaf", cfg.l2_leaf},
                          {"min_leaf", cfg.min_leaf},
                          {"max_iterations", cfg.max_iterations},
                          {"tolerance", cfg.tolerance},
                          {"l2_strength", cfg.l2_strength},
                          {"subsample", cfg.subsample},
                          {"seed", cfg.seed}};
}

inline LearnerKind learner_kind_from_name(const std::string& name) {
    if (name == "logistic") return LearnerKind::logistic;
    if (name == "random_forest") return LearnerKind::random_forest;
    if (name == "gradient_boosting") return LearnerKind::gradient_boosting;
    if (name == "gradient_boosting_l2") return LearnerKind::gradient_boosting_l2;
    throw ConfigError("unknown learner kind '" + name + "'");
}

inline LearnerConfig config_from_json(const nlohmann::json& j) {
    LearnerConfig cfg;
    cfg.kind = learner_kind_from_name(j.at("kind").get<std::string>());
    cfg.trees = j.at("trees").get<std::size_t>();
    const auto depth = j.at("depth").get<std::size_t>();
    cfg.depth = depth == 0 ? kUnlimitedDepth : depth;
    cfg.learning_rate = j.at("learning_rate").get<double>();
    cfg.l2_leaf = j.at("l2_leaf").get<double>();
    cfg.min_leaf = j.at("min_leaf").get<std::size_t>();
    cfg.max_iterations = j.at("max_iterations").get<std::size_t>();
    cfg.tolerance = j.at("tolerance").get<double>();
    cfg.l2_strength = j.at("l2_strength").get<double>();
    cfg.subsample = j.at("subsample").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

inline nlohmann::json model_to_json(const TrainedModel& model) {
    nlohmann::json j;
    j["schema_version"] = kModelSchemaVersion;
    j["kind"] = learner_kind_name(model.kind);
    j["config"] = config_to_json(model.config);
    j["feature_names"] = model.feature_names;
    j["iterations"] = model.iterations;
    j["converged"] = model.converged;
    j["base_score"] = model.base_score;
    if (model.kind == LearnerKind::logistic) {
        j["weights"] = model.weights;
    } else {
        nlohmann::json trees = nlohmann::json::array();
        for (const Tree& tree : model.trees) {
            nlohmann::json nodes = nlohmann::json::array();
            for (const TreeNode& node : tree.nodes)
                nodes.push_back({{"feature", node.feature},
                                 {"threshold", node.threshold},
                                 {"left", node.left},
                                 {"right", node.right},
                                 {"value", node.value}});
            trees.push_back(std::move(nodes));
        }
        j["trees"] = std::move(trees);
    }
    return j;
}

inline TrainedModel model_from_json(const nlohmann::json& j) {
    if (j.at("schema_version").get<int>() != kModelSchemaVersion)
        throw ConfigError("unsupported model schema version");
    TrainedModel model;
    model.kind = learner_kind_from_name(j.at("kind").get<std::string>());
    model.config = config_from_json(j.at("config"));
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    model.iterations = j.at("iterations").get<std::size_t>();
    model.converged = j.at("converged").get<bool>();
    model.base_score = j.at("base_score").get<double>();
    if (model.kind == LearnerKind::logistic) {
        model.weights = j.at("weights").get<std::vector<double>>();
    } else {
        for (const auto& tree_json : j.at("trees")) {
            Tree tree;
            for (const auto& node_json : tree_json) {
                TreeNode node;
                node.feature = node_json.at("feature").get<std::int32_t>();
                node.threshold = node_json.at("threshold").get<double>();
                node.left = node_json.at("left").get<std::int32_t>();
                node.right = node_json.at("right").get<std::int32_t>();
                node.value = node_json.at("value").get<double>();
                tree.nodes.push_back(node);
            }
            model.trees.push_back(std::move(tree));
        }
    }
    return model;
}

}  // namespace tailsel
