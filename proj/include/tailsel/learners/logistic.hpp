#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "../common.hpp"
#include "common.hpp"

namespace tailsel {

namespace detail {

// solve H x = b in place via Cholesky; H must be symmetric positive definite
inline std::vector<double> cholesky_solve(std::vector<double> h, std::vector<double> b,
                                          std::size_t m) {
    for (std::size_t j = 0; j < m; ++j) {
        double diag = h[j * m + j];
        for (std::size_t k = 0; k < j; ++k) diag -= h[j * m + k] * h[j * m + k];
        if (!(diag > 0.0)) throw NumericError("logistic solve: Hessian not positive definite");
        const double root = std::sqrt(diag);
        h[j * m + j] = root;
        for (std::size_t i = j + 1; i < m; ++i) {
            double off = h[i * m + j];
            for (std::size_t k = 0; k < j; ++k) off -= h[i * m + k] * h[j * m + k];
            h[i * m + j] = off / root;
        }
    }
    // forward solve L z = b, then back solve L^T x = z
    for (std::size_t i = 0; i < m; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) v -= h[i * m + k] * b[k];
        b[i] = v / h[i * m + i];
    }
    for (std::size_t ii = m; ii > 0; --ii) {
        const std::size_t i = ii - 1;
        double v = b[i];
        for (std::size_t k = i + 1; k < m; ++k) v -= h[k * m + i] * b[k];
        b[i] = v / h[i * m + i];
    }
    return b;
}

}  // namespace detail

// penalized objective used by training: mean logistic loss plus
// 0.5 * (l2/n) * ||w||^2 over the non-intercept weights
inline double logistic_objective(const std::vector<std::vector<double>>& columns,
                                 const std::vector<int>& y, const std::vector<double>& weights,
                                 double l2_strength) {
    const std::size_t n = y.size();
    const std::size_t d = columns.size();
    std::vector<double> scores(n, weights[d]);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < n; ++i) scores[i] += weights[j] * columns[j][i];
    double penalty = 0.0;
    for (std::size_t j = 0; j < d; ++j) penalty += weights[j] * weights[j];
    return mean_logistic_loss(scores, y) +
           0.5 * (l2_strength / static_cast<double>(n)) * penalty;
}

inline std::vector<double> logistic_gradient(const std::vector<std::vector<double>>& columns,
                                             const std::vector<int>& y,
                                             const std::vector<double>& weights,
                                             double l2_strength) {
    const std::size_t n = y.size();
    const std::size_t d = columns.size();
    std::vector<double> scores(n, weights[d]);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < n; ++i) scores[i] += weights[j] * columns[j][i];
    std::vector<double> grad(d + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = sigmoid(scores[i]) - static_cast<double>(y[i]);
        for (std::size_t j = 0; j < d; ++j) grad[j] += resid * columns[j][i];
        grad[d] += resid;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j <= d; ++j) grad[j] *= inv_n;
    for (std::size_t j = 0; j < d; ++j) grad[j] += (l2_strength * inv_n) * weights[j];
    return grad;
}

// Newton iteration with step halving; the intercept is never penalized
inline TrainedModel train_logistic(const std::vector<std::vector<double>>& columns,
                                   const std::vector<int>& y,
                                   const std::vector<std::string>& names,
                                   const LearnerConfig& cfg) {
    cfg.validate();
    const std::size_t n = y.size();
    const std::size_t d = columns.size();
    if (d == 0) throw DataError("train_logistic: no features");
    for (const auto& col : columns)
        if (col.size() != n) throw DataError("train_logistic: column length mismatch");
    if (names.size() != d) throw DataError("train_logistic: name count mismatch");

    const std::size_t m = d + 1;
    std::vector<double> w(m, 0.0);
    double objective = logistic_objective(columns, y, w, cfg.l2_strength);
    bool converged = false;
    std::size_t iter = 0;

    std::vector<double> scores(n);
    std::vector<double> hessian(m * m);
    const double inv_n = 1.0 / static_cast<double>(n);

    for (; iter < cfg.max_iterations; ++iter) {
        const std::vector<double> grad = logistic_gradient(columns, y, w, cfg.l2_strength);
        double grad_norm = 0.0;
        for (const double g : grad) grad_norm = std::max(grad_norm, std::abs(g));
        if (grad_norm < cfg.tolerance) {
            converged = true;
            break;
        }

        std::fill(scores.begin(), scores.end(), w[d]);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < n; ++i) scores[i] += w[j] * columns[j][i];

        std::fill(hessian.begin(), hessian.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(scores[i]);
            const double hw = std::max(p * (1.0 - p), 1e-10);
            for (std::size_t a = 0; a < m; ++a) {
                const double xa = a < d ? columns[a][i] : 1.0;
                for (std::size_t b = 0; b <= a; ++b) {
                    const double xb = b < d ? columns[b][i] : 1.0;
                    hessian[a * m + b] += hw * xa * xb;
                }
            }
        }
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b <= a; ++b) {
                hessian[a * m + b] *= inv_n;
                hessian[b * m + a] = hessian[a * m + b];
            }
        for (std::size_t j = 0; j < d; ++j) hessian[j * m + j] += cfg.l2_strength * inv_n;

        const std::vector<double> step = detail::cholesky_solve(hessian, grad, m);
        double scale = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 30; ++halving) {
            std::vector<double> trial(m);
            for (std::size_t j = 0; j < m; ++j) trial[j] = w[j] - scale * step[j];
            const double trial_obj = logistic_objective(columns, y, trial, cfg.l2_strength);
            if (trial_obj <= objective) {
                w = std::move(trial);
                objective = trial_obj;
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!improved) break;  // no descent direction left at double precision
    }

    TrainedModel model;
    model.kind = LearnerKind::logistic;
    model.config = cfg;
    model.feature_names = names;
    model.weights = std::move(w);
    model.iterations = iter;
    model.converged = converged;
    return model;
}

}  // namespace tailsel
