#pragma once

// Adaptive Gauss-Kronrod (G7/K15) quadrature for real- and complex-valued
// integrands of one real variable.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace reso::quad {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }

template <class T>
struct Panel {
    T kronrod{};
    T gauss{};
    double abs_kronrod = 0.0;  // K15 estimate of the integral of |f|
    double error() const { return magnitude(kronrod - gauss); }
};

/// Evaluates the 15-point Kronrod and embedded 7-point Gauss rules on [a, b].
template <class T, class F>
Panel<T> gk15(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Panel<T> p;
    const T fc = f(center);
    p.kronrod = kKronrodWeights[7] * fc;
    p.gauss = kGaussWeights[3] * fc;
    p.abs_kronrod = kKronrodWeights[7] * magnitude(fc);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const T f1 = f(center - dx);
        const T f2 = f(center + dx);
        p.kronrod += kKronrodWeights[j] * (f1 + f2);
        p.abs_kronrod += kKronrodWeights[j] * (magnitude(f1) + magnitude(f2));
        if (j % 2 == 1) p.gauss += kGaussWeights[j / 2] * (f1 + f2);
    }
    p.kronrod *= half;
    p.gauss *= half;
    p.abs_kronrod *= std::abs(half);
    return p;
}

struct Options {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    int max_depth = 50;
};

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    bool converged = true;
    std::size_t panels = 0;
};

namespace detail {
template <class T, class F>
void refine(const F& f, double a, double b, const Panel<T>& p, double tol_density,
            int depth, const Options& opt, Result<T>& out) {
    const double local_tol = tol_density * std::abs(b - a);
    if (p.error() <= local_tol || depth >= opt.max_depth) {
        if (p.error() > local_tol) out.converged = false;
        out.value += p.kronrod;
        out.error += p.error();
        ++out.panels;
        return;
    }
    const double mid = 0.5 * (a + b);
    const auto left = gk15<T>(f, a, mid);
    const auto right = gk15<T>(f, mid, b);
    refine(f, a, mid, left, tol_density, depth + 1, opt, out);
    refine(f, mid, b, right, tol_density, depth + 1, opt, out);
}
}  // namespace detail

/// Integrates f over [a, b] by recursive bisection. The error budget is
/// max(abs_tol, rel_tol * integral of |f|), distributed by panel width.
/// Panels are summed left to right, so results are bit-reproducible.
template <class T, class F>
Result<T> integrate(const F& f, double a, double b, const Options& opt = {}) {
    Result<T> out;
    if (a == b) return out;
    const auto whole = gk15<T>(f, a, b);
    const double budget = std::max(opt.abs_tol, opt.rel_tol * whole.abs_kronrod);
    detail::refine(f, a, b, whole, budget / std::abs(b - a), 0, opt, out);
    return out;
}

}  // namespace reso::quad
