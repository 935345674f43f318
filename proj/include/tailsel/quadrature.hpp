#pragma once

#include <cmath>

#include "common.hpp"

namespace tailsel {

namespace detail {

// 15-point Kronrod extension of 7-point Gauss, nodes on [-1, 1]
inline constexpr double kGkNode[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
// Gauss weights for the embedded rule (nodes at odd kGkNode indices plus 0)
inline constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class F>
void gk15(const F& f, double a, double b, double& value, double& error) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kron = 0.0;
    double gauss = 0.0;
    for (int i = 0; i < 7; ++i) {
        const double f1 = f(c - h * kGkNode[i]);
        const double f2 = f(c + h * kGkNode[i]);
        kron += kKronrodW[i] * (f1 + f2);
        if (i % 2 == 1) gauss += kGaussW[i / 2] * (f1 + f2);
    }
    const double fc = f(c);
    kron += kKronrodW[7] * fc;
    gauss += kGaussW[3] * fc;
    value = kron * h;
    error = std::abs((kron - gauss) * h);
}

template <class F>
double integrate_rec(const F& f, double a, double b, double tol, int depth, int max_depth) {
    double value = 0.0;
    double error = 0.0;
    gk15(f, a, b, value, error);
    if (!std::isfinite(value)) throw NumericError("quadrature produced a non-finite value");
    if (error <= tol) return value;
    if (depth >= max_depth) throw NumericError("quadrature failed to converge");
    const double m = 0.5 * (a + b);
    return integrate_rec(f, a, m, 0.5 * tol, depth + 1, max_depth) +
           integrate_rec(f, m, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

// adaptive Gauss–Kronrod integration of f over [a, b] to an absolute tolerance
template <class F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-8, int max_depth = 48) {
    if (!(b > a)) return 0.0;
    return detail::integrate_rec(f, a, b, abs_tol, 0, max_depth);
}

}  // namespace tailsel
