#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "common.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace tailsel {

// estimation ceiling for the dependence parameter; bounds every search so
// near-comonotone degenerate inputs cannot send the optimizer to infinity
inline constexpr double kThetaMax = 50.0;

// dependence parameter of the family; only defined for theta >= 1
struct Theta {
    double value;
    explicit Theta(double v) : value(v) {
        if (!std::isfinite(v) || v < 1.0)
            throw DomainError("theta must be finite and >= 1, got " + std::to_string(v));
    }
};

struct TailCoefficient {
    double lambda_u;
};

// paired rank-transformed observations, every value strictly inside (0, 1)
struct PseudoSample {
    std::vector<double> u;
    std::vector<double> v;
    std::size_t size() const { return u.size(); }
};

namespace detail {

inline void check_theta(double theta) {
    if (!std::isfinite(theta) || theta < 1.0)
        throw DomainError("theta must be finite and >= 1, got " + std::to_string(theta));
}

// log(1 - t^(1/theta)) without cancellation; the generator and both of its
// derivatives factor through s = t^(1/theta) and (1 - s)
inline double log1m_pow(double t, double theta) {
    return std::log(-std::expm1(std::log(t) / theta));
}

// log phi(t); phi(t) = (t^(-1/th) + t^(1/th) - 2)^th = (1-s)^(2 th) / t,
// the closed form that avoids the cancellation of the two powers near t = 1
inline double log_generator(double t, double theta) {
    return 2.0 * theta * log1m_pow(t, theta) - std::log(t);
}

// log(-phi'(t));  -phi'(t) = (1+s) (1-s)^(2 th - 1) / t^2
inline double log_neg_dgen(double t, double theta) {
    const double s = std::pow(t, 1.0 / theta);
    return std::log1p(s) + (2.0 * theta - 1.0) * log1m_pow(t, theta) - 2.0 * std::log(t);
}

// log phi''(t);  phi''(t) = 2 (1-s)^(2 th - 2) (1 + s (th-1)/th) / t^3
inline double log_d2gen(double t, double theta) {
    const double s = std::pow(t, 1.0 / theta);
    return std::log(2.0) + (2.0 * theta - 2.0) * log1m_pow(t, theta) +
           std::log1p(s * (theta - 1.0) / theta) - 3.0 * std::log(t);
}

inline double logaddexp(double a, double b) {
    const double m = std::max(a, b);
    if (m == -std::numeric_limits<double>::infinity()) return m;
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// inverse generator applied to exp(log_y); the textbook form
// (a + 2 - sqrt((a+2)^2 - 4)) / 2 cancels badly for small a, so it is
// rewritten as 2 / ((a+2) + sqrt(a (a+4))) with an exact discriminant
inline double gen_inverse_from_log(double log_y, double theta) {
    if (log_y == -std::numeric_limits<double>::infinity()) return 1.0;
    const double a = std::exp(log_y / theta);
    if (!std::isfinite(a)) return 0.0;
    const double s = 2.0 / ((a + 2.0) + std::sqrt(a * (a + 4.0)));
    return std::pow(s, theta);
}

inline constexpr double kUnitClip = 1e-12;

}  // namespace detail

inline double generator(double t, double theta) {
    detail::check_theta(theta);
    if (!(t > 0.0) || t > 1.0) throw DomainError("generator requires t in (0, 1]");
    if (t == 1.0) return 0.0;
    return std::exp(detail::log_generator(t, theta));
}
inline double generator(double t, Theta theta) { return generator(t, theta.value); }

inline double generator_inverse(double y, double theta) {
    detail::check_theta(theta);
    if (!(y >= 0.0)) throw DomainError("generator_inverse requires y >= 0");
    if (y == 0.0) return 1.0;
    return detail::gen_inverse_from_log(std::log(y), theta);
}
inline double generator_inverse(double y, Theta theta) { return generator_inverse(y, theta.value); }

inline double copula_cdf(double u, double v, double theta) {
    detail::check_theta(theta);
    if (!(u >= 0.0) || u > 1.0 || !(v >= 0.0) || v > 1.0)
        throw DomainError("copula_cdf requires (u, v) in the unit square");
    if (u == 0.0 || v == 0.0) return 0.0;
    if (u == 1.0) return v;
    if (v == 1.0) return u;
    const double lsum =
        detail::logaddexp(detail::log_generator(u, theta), detail::log_generator(v, theta));
    return detail::gen_inverse_from_log(lsum, theta);
}
inline double copula_cdf(double u, double v, Theta theta) { return copula_cdf(u, v, theta.value); }

inline double log_copula_density(double u, double v, double theta) {
    detail::check_theta(theta);
    if (!(u > 0.0) || u >= 1.0 || !(v > 0.0) || v >= 1.0)
        throw DomainError("copula_density requires (u, v) strictly inside the unit square");
    const double lo = detail::kUnitClip;
    const double hi = 1.0 - detail::kUnitClip;
    u = std::clamp(u, lo, hi);
    v = std::clamp(v, lo, hi);
    const double lsum =
        detail::logaddexp(detail::log_generator(u, theta), detail::log_generator(v, theta));
    double t0 = detail::gen_inverse_from_log(lsum, theta);
    t0 = std::clamp(t0, lo, hi);
    return detail::log_d2gen(t0, theta) + detail::log_neg_dgen(u, theta) +
           detail::log_neg_dgen(v, theta) - 3.0 * detail::log_neg_dgen(t0, theta);
}

inline double copula_density(double u, double v, double theta) {
    // cap keeps exp() finite; only reachable inside the clipped corner region
    return std::exp(std::min(log_copula_density(u, v, theta), 709.0));
}
inline double copula_density(double u, double v, Theta theta) {
    return copula_density(u, v, theta.value);
}

inline TailCoefficient upper_tail_coefficient(double theta) {
    detail::check_theta(theta);
    return {2.0 - std::exp2(1.0 / (2.0 * theta))};
}
inline TailCoefficient upper_tail_coefficient(Theta theta) {
    return upper_tail_coefficient(theta.value);
}

// model-implied Kendall tau: 1 + 4 * integral of phi/phi' over (0, 1), with
// phi/phi' rewritten as -t (1-s)/(1+s) so the integrand is smooth at both ends
inline double kendall_tau_model(double theta) {
    detail::check_theta(theta);
    if (theta > kThetaMax) throw DomainError("kendall_tau_model supports theta in [1, theta_max]");
    auto integrand = [theta](double t) {
        if (t <= 0.0) return 0.0;
        const double one_minus_s = -std::expm1(std::log(t) / theta);
        return t * one_minus_s / (2.0 - one_minus_s);
    };
    return 1.0 - 4.0 * integrate(integrand, 0.0, 1.0, 1e-8);
}
inline double kendall_tau_model(Theta theta) { return kendall_tau_model(theta.value); }

// draws (u, v) pairs by inverting the conditional law of V given U = u: with
// A(t) = -phi'(t), P(V <= v | U = u) = A(u) / A(C(u, v)), decreasing A makes
// the conditional monotone in v, so plain bisection inverts it
inline PseudoSample sample_conditional(double theta, std::size_t n, std::uint64_t seed) {
    detail::check_theta(theta);
    if (n < 1) throw DomainError("sample_conditional requires n >= 1");
    const double lo = detail::kUnitClip;
    const double hi = 1.0 - detail::kUnitClip;
    PseudoSample out;
    out.u.reserve(n);
    out.v.reserve(n);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = std::clamp(rng.uniform_open(), lo, hi);
        const double p = rng.uniform_open();
        const double log_gen_u = detail::log_generator(u, theta);
        // F(v|u) = p  <=>  log A(C(u,v)) = log A(u) - log p
        const double log_target = detail::log_neg_dgen(u, theta) - std::log(p);
        double a = lo;
        double b = hi;
        for (int it = 0; it < 200 && (b - a) > 1e-9; ++it) {
            const double mid = 0.5 * (a + b);
            const double lsum =
                detail::logaddexp(log_gen_u, detail::log_generator(mid, theta));
            double t0 = detail::gen_inverse_from_log(lsum, theta);
            t0 = std::clamp(t0, lo, hi);
            // F(mid|u) < p  <=>  log A(t0) > log_target
            if (detail::log_neg_dgen(t0, theta) > log_target)
                a = mid;
            else
                b = mid;
        }
        out.u.push_back(u);
        out.v.push_back(0.5 * (a + b));
    }
    return out;
}
inline PseudoSample sample_conditional(Theta theta, std::size_t n, std::uint64_t seed) {
    return sample_conditional(theta.value, n, seed);
}

}  // namespace tailsel
