#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "common.hpp"
#include "copula.hpp"
#include "kendall.hpp"

namespace tailsel {

enum class EstimatorMethod { tau_inversion, pseudo_mle };

struct ThetaEstimate {
    Theta theta;
    EstimatorMethod method = EstimatorMethod::tau_inversion;
    double tau_hat = 0.0;
    std::optional<double> log_likelihood;  // pseudo_mle only
    bool clamped = false;                  // hit a bound of [1, theta_max]
};

namespace detail {

inline void check_fit_sample(const PseudoSample& s) {
    if (s.u.size() != s.v.size()) throw DataError("pseudo sample margins differ in length");
    if (s.size() < 10) throw DataError("fitting requires at least 10 pairs");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s.u[i] > 0.0 && s.u[i] < 1.0 && s.v[i] > 0.0 && s.v[i] < 1.0))
            throw DataError("pseudo observations must lie strictly inside (0, 1)");
    }
}

}  // namespace detail

// invert the model tau curve at tau_hat by bisection on [1, theta_max]; the
// curve is strictly increasing, so values outside its range clamp to a bound
inline ThetaEstimate fit_theta_tau_from(double tau_hat) {
    double lo = 1.0;
    double hi = kThetaMax;
    if (tau_hat <= kendall_tau_model(lo))
        return {Theta(lo), EstimatorMethod::tau_inversion, tau_hat, std::nullopt, true};
    if (tau_hat >= kendall_tau_model(hi))
        return {Theta(hi), EstimatorMethod::tau_inversion, tau_hat, std::nullopt, true};
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (kendall_tau_model(mid) < tau_hat)
            lo = mid;
        else
            hi = mid;
    }
    return {Theta(0.5 * (lo + hi)), EstimatorMethod::tau_inversion, tau_hat, std::nullopt, false};
}

inline ThetaEstimate fit_theta_tau(const PseudoSample& sample) {
    detail::check_fit_sample(sample);
    return fit_theta_tau_from(kendall_tau_empirical(sample));
}

// maximize the pseudo-log-likelihood over [1, theta_max] with Brent's
// bounded derivative-free search, started from the given initial point
inline ThetaEstimate fit_theta_mle(const PseudoSample& sample, Theta init) {
    detail::check_fit_sample(sample);
    const double tau_hat = kendall_tau_empirical(sample);

    bool any_finite = false;
    auto objective = [&](double theta) {  // negative log-likelihood
        double sum = 0.0;
        for (std::size_t i = 0; i < sample.size(); ++i)
            sum += log_copula_density(sample.u[i], sample.v[i], theta);
        if (!std::isfinite(sum)) return std::numeric_limits<double>::infinity();
        any_finite = true;
        return -sum;
    };

    const double a0 = 1.0;
    const double b0 = kThetaMax;
    const double golden = 0.3819660112501051;  // 2 - golden ratio
    double a = a0, b = b0;
    double x = std::clamp(init.value, a0, b0);
    double w = x, v = x;
    double fx = objective(x);
    double fw = fx, fv = fx;
    double d = 0.0, e = 0.0;

    for (int iter = 0; iter < 200; ++iter) {
        const double m = 0.5 * (a + b);
        const double tol = 1e-6 * std::abs(x) + 1e-10;
        if (std::abs(x - m) <= 2.0 * tol - 0.5 * (b - a)) break;
        double trial = 0.0;
        bool use_golden = true;
        if (std::abs(e) > tol) {
            // parabolic interpolation through (w, fw), (x, fx), (v, fv)
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                trial = x + d;
                if (trial - a < 2.0 * tol || b - trial < 2.0 * tol)
                    d = (x < m) ? tol : -tol;
                use_golden = false;
            }
        }
        if (use_golden) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }
        trial = (std::abs(d) >= tol) ? x + d : x + ((d > 0.0) ? tol : -tol);
        const double ft = objective(trial);
        if (ft <= fx) {
            if (trial < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = trial; fx = ft;
        } else {
            if (trial < x) a = trial; else b = trial;
            if (ft <= fw || w == x) {
                v = w; fv = fw;
                w = trial; fw = ft;
            } else if (ft <= fv || v == x || v == w) {
                v = trial; fv = ft;
            }
        }
    }

    if (!any_finite || !std::isfinite(fx))
        throw NumericError("pseudo-likelihood non-finite at every probe point");

    const bool clamped = (x - a0 < 1e-4) || (b0 - x < 1e-3);
    ThetaEstimate est{Theta(x), EstimatorMethod::pseudo_mle, tau_hat, -fx, clamped};
    return est;
}

inline ThetaEstimate fit_theta_mle(const PseudoSample& sample) {
    return fit_theta_mle(sample, fit_theta_tau(sample).theta);
}

}  // namespace tailsel
