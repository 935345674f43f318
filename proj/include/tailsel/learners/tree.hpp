#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "../common.hpp"
#include "../rng.hpp"
#include "common.hpp"

namespace tailsel {

inline constexpr std::size_t kMaxBins = 1024;

// per-feature discretization: codes index the gaps between candidate
// thresholds, so split search reduces to a histogram scan per node
struct BinnedMatrix {
    std::vector<std::vector<std::uint16_t>> codes;
    std::vector<std::vector<double>> thresholds;  // ascending; left branch takes x <= threshold
    std::size_t n = 0;
};

inline BinnedMatrix bin_columns(const std::vector<std::vector<double>>& columns,
                                std::size_t max_bins = kMaxBins) {
    BinnedMatrix out;
    out.n = columns.empty() ? 0 : columns.front().size();
    out.codes.resize(columns.size());
    out.thresholds.resize(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        std::vector<double> uniques = columns[j];
        std::sort(uniques.begin(), uniques.end());
        uniques.erase(std::unique(uniques.begin(), uniques.end()), uniques.end());

        std::vector<double>& th = out.thresholds[j];
        if (uniques.size() <= max_bins) {
            th.reserve(uniques.size() > 0 ? uniques.size() - 1 : 0);
            for (std::size_t i = 1; i < uniques.size(); ++i)
                th.push_back(0.5 * (uniques[i - 1] + uniques[i]));
        } else {
            // evenly spaced rank cuts through the distinct values
            th.reserve(max_bins - 1);
            for (std::size_t b = 1; b < max_bins; ++b) {
                const std::size_t i = b * uniques.size() / max_bins;
                const double t = 0.5 * (uniques[i - 1] + uniques[i]);
                if (th.empty() || t > th.back()) th.push_back(t);
            }
        }

        std::vector<std::uint16_t>& code = out.codes[j];
        code.reserve(out.n);
        for (const double x : columns[j]) {
            const std::size_t c = static_cast<std::size_t>(
                std::lower_bound(th.begin(), th.end(), x) - th.begin());
            code.push_back(static_cast<std::uint16_t>(c));
        }
    }
    return out;
}

enum class SplitCriterion { gini, variance, second_order };

struct TreeBuildConfig {
    SplitCriterion criterion = SplitCriterion::gini;
    std::size_t max_depth = kUnlimitedDepth;
    std::size_t min_leaf = 1;
    std::size_t mtry = 0;  // 0 or >= d means consider every feature
    double l2_leaf = 1.0;
};

namespace detail {

struct NodeStats {
    double count = 0.0;
    double sum_g = 0.0;
    double sum_h = 0.0;
};

inline double leaf_value(const NodeStats& s, SplitCriterion criterion, double l2_leaf) {
    switch (criterion) {
        case SplitCriterion::gini: return s.count > 0.0 ? s.sum_g / s.count : 0.0;
        case SplitCriterion::variance: return s.sum_g / (s.sum_h + 1e-12);
        case SplitCriterion::second_order: return s.sum_g / (s.sum_h + l2_leaf);
    }
    return 0.0;
}

// larger is better; the caller splits only on a strictly positive score
inline double split_score(const NodeStats& parent, const NodeStats& left, const NodeStats& right,
                          SplitCriterion criterion, double l2_leaf) {
    switch (criterion) {
        case SplitCriterion::gini: {
            auto gini = [](const NodeStats& s) {
                const double p = s.sum_g / s.count;
                return 2.0 * p * (1.0 - p);
            };
            return gini(parent) -
                   (left.count * gini(left) + right.count * gini(right)) / parent.count;
        }
        case SplitCriterion::variance:
            return left.sum_g * left.sum_g / left.count +
                   right.sum_g * right.sum_g / right.count -
                   parent.sum_g * parent.sum_g / parent.count;
        case SplitCriterion::second_order:
            return 0.5 * (left.sum_g * left.sum_g / (left.sum_h + l2_leaf) +
                          right.sum_g * right.sum_g / (right.sum_h + l2_leaf) -
                          parent.sum_g * parent.sum_g / (parent.sum_h + l2_leaf));
    }
    return 0.0;
}

}  // namespace detail

// grows one tree over the given rows (duplicates allowed, e.g. bootstrap
// draws); g holds per-row targets (labels or gradients), h optional hessians
inline Tree build_tree(const BinnedMatrix& bins, std::vector<std::size_t> rows,
                       const std::vector<double>& g, const std::vector<double>* h,
                       const TreeBuildConfig& tc, Rng& rng) {
    const std::size_t d = bins.codes.size();
    if (d == 0) throw DataError("build_tree: no features");
    if (rows.empty()) throw DataError("build_tree: no rows");
    const bool sample_features = tc.mtry > 0 && tc.mtry < d;

    Tree tree;
    struct Pending {
        std::int32_t node;
        std::size_t begin;
        std::size_t end;
        std::size_t depth;
    };
    std::vector<Pending> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, 0, rows.size(), 0});

    // per-bin accumulators, reused across nodes and features
    std::vector<double> bin_count(kMaxBins + 1);
    std::vector<double> bin_g(kMaxBins + 1);
    std::vector<double> bin_h(kMaxBins + 1);
    std::vector<std::size_t> candidates;

    while (!stack.empty()) {
        const Pending task = stack.back();
        stack.pop_back();
        const std::size_t n_node = task.end - task.begin;

        detail::NodeStats parent;
        for (std::size_t i = task.begin; i < task.end; ++i) {
            const std::size_t r = rows[i];
            parent.count += 1.0;
            parent.sum_g += g[r];
            if (h) parent.sum_h += (*h)[r];
        }

        TreeNode& node = tree.nodes[static_cast<std::size_t>(task.node)];
        node.value = detail::leaf_value(parent, tc.criterion, tc.l2_leaf);

        const bool pure = tc.criterion == SplitCriterion::gini &&
                          (parent.sum_g == 0.0 || parent.sum_g == parent.count);
        if (task.depth >= tc.max_depth || n_node < 2 * tc.min_leaf || pure) continue;

        if (sample_features) {
            candidates = sample_indices(rng, d, tc.mtry);
            std::sort(candidates.begin(), candidates.end());
        } else {
            candidates.resize(d);
            for (std::size_t j = 0; j < d; ++j) candidates[j] = j;
        }

        double best_score = 1e-12;
        std::size_t best_feature = d;
        std::size_t best_bin = 0;
        for (const std::size_t j : candidates) {
            const std::size_t nth = bins.thresholds[j].size();
            if (nth == 0) continue;
            std::fill_n(bin_count.begin(), nth + 1, 0.0);
            std::fill_n(bin_g.begin(), nth + 1, 0.0);
            if (h) std::fill_n(bin_h.begin(), nth + 1, 0.0);
            const std::vector<std::uint16_t>& code = bins.codes[j];
            for (std::size_t i = task.begin; i < task.end; ++i) {
                const std::size_t r = rows[i];
                const std::size_t c = code[r];
                bin_count[c] += 1.0;
                bin_g[c] += g[r];
                if (h) bin_h[c] += (*h)[r];
            }
            detail::NodeStats left;
            for (std::size_t t = 0; t < nth; ++t) {
                left.count += bin_count[t];
                left.sum_g += bin_g[t];
                if (h) left.sum_h += bin_h[t];
                if (left.count < static_cast<double>(tc.min_leaf)) continue;
                const double right_count = parent.count - left.count;
                if (right_count < static_cast<double>(tc.min_leaf)) break;
                detail::NodeStats right{right_count, parent.sum_g - left.sum_g,
                                        parent.sum_h - left.sum_h};
                const double score =
                    detail::split_score(parent, left, right, tc.criterion, tc.l2_leaf);
                if (score > best_score) {
                    best_score = score;
                    best_feature = j;
                    best_bin = t;
                }
            }
        }
        if (best_feature == d) continue;  // nothing beats the leaf

        const std::vector<std::uint16_t>& code = bins.codes[best_feature];
        const auto mid_it = std::partition(
            rows.begin() + static_cast<std::ptrdiff_t>(task.begin),
            rows.begin() + static_cast<std::ptrdiff_t>(task.end),
            [&code, best_bin](std::size_t r) { return code[r] <= best_bin; });
        const std::size_t mid = static_cast<std::size_t>(mid_it - rows.begin());

        const std::int32_t left_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        TreeNode& parent_node = tree.nodes[static_cast<std::size_t>(task.node)];
        parent_node.feature = static_cast<std::int32_t>(best_feature);
        parent_node.threshold = bins.thresholds[best_feature][best_bin];
        parent_node.left = left_id;
        parent_node.right = left_id + 1;
        stack.push_back({left_id, task.begin, mid, task.depth + 1});
        stack.push_back({left_id + 1, mid, task.end, task.depth + 1});
    }
    return tree;
}

}  // namespace tailsel
