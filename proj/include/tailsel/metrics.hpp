#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "common.hpp"

namespace tailsel {

struct MetricsBlock {
    std::string feature_set;
    std::string model;
    double accuracy = 0.0;
    double precision_weighted = 0.0;
    double recall_weighted = 0.0;
    double f1_weighted = 0.0;
    double auc = 0.0;
};

// confusion-table metrics with prevalence-weighted averaging; a class with a
// zero denominator contributes 0 for that metric
inline MetricsBlock metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) throw DataError("metrics: length mismatch");
    const std::size_t n = y_true.size();
    if (n == 0) throw DataError("metrics: empty input");

    // tp[c] = rows of true class c predicted c; pp[c] = rows predicted c
    std::size_t tp[2] = {0, 0};
    std::size_t actual[2] = {0, 0};
    std::size_t predicted[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if ((t != 0 && t != 1) || (p != 0 && p != 1))
            throw DataError("metrics: labels must be 0 or 1");
        ++actual[t];
        ++predicted[p];
        if (t == p) ++tp[t];
    }

    MetricsBlock out;
    // weighted recall telescopes: sum_c (n_c/n)(tp_c/n_c) = (tp_0 + tp_1)/n,
    // the same expression as accuracy, so the two are bit-identical
    out.accuracy = static_cast<double>(tp[0] + tp[1]) / static_cast<double>(n);
    out.recall_weighted = static_cast<double>(tp[0] + tp[1]) / static_cast<double>(n);

    double precision_w = 0.0;
    double f1_w = 0.0;
    for (int c = 0; c < 2; ++c) {
        const double weight = static_cast<double>(actual[c]) / static_cast<double>(n);
        const double prec = predicted[c] > 0
                                ? static_cast<double>(tp[c]) / static_cast<double>(predicted[c])
                                : 0.0;
        const double rec = actual[c] > 0
                               ? static_cast<double>(tp[c]) / static_cast<double>(actual[c])
                               : 0.0;
        const double f1 = (prec + rec) > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
        precision_w += weight * prec;
        f1_w += weight * f1;
    }
    out.precision_weighted = precision_w;
    out.f1_weighted = f1_w;
    return out;
}

// Mann-Whitney AUC with midrank tie handling; equals trapezoidal ROC area
inline double roc_auc(const std::vector<int>& y_true, const std::vector<double>& scores) {
    if (y_true.size() != scores.size()) throw DataError("roc_auc: length mismatch");
    const std::size_t n = y_true.size();
    std::size_t n1 = 0;
    for (const int t : y_true) {
        if (t != 0 && t != 1) throw DataError("roc_auc: labels must be 0 or 1");
        n1 += static_cast<std::size_t>(t);
    }
    const std::size_t n0 = n - n1;
    if (n0 == 0 || n1 == 0) throw StatError("roc_auc: both classes must be present");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // rank sum of the positive class, ties sharing their midrank
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[idx[j + 1]] == scores[idx[i]]) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k)
            if (y_true[idx[k]] == 1) rank_sum_pos += midrank;
        i = j + 1;
    }

    const double u_stat =
        rank_sum_pos - 0.5 * static_cast<double>(n1) * static_cast<double>(n1 + 1);
    return u_stat / (static_cast<double>(n1) * static_cast<double>(n0));
}

inline std::vector<int> threshold_predict(const std::vector<double>& proba) {
    std::vector<int> out;
    out.reserve(proba.size());
    for (const double p : proba) out.push_back(p >= 0.5 ? 1 : 0);
    return out;
}

}  // namespace tailsel
