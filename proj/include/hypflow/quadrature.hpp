#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

// Quadrature defaults used throughout: composite Simpson with a fixed node
// spacing, truncation horizon chosen from the exponential tail bound.

namespace hypflow {

struct QuadratureSpec {
    double step = 0.01;        // node spacing of the composite 4th-order rule
    double tailTolerance = 1e-10;
    double maxTime = 40.0;     // hard cap on truncation horizons

    // Truncation horizon for an integrand bounded by scale * e^{-t}.
    double horizon(double scale) const {
        if (scale <= 0.0) return 1.0;
        double T = std::log(scale / tailTolerance);
        return std::clamp(T, 1.0, maxTime);
    }
};

// Composite Simpson over [a,b]; the node count is rounded to an even number
// derived from `step`.
template <typename F>
double integrateSimpson(F&& f, double a, double b, double step) {
    if (a == b) return 0.0;
    double len = std::abs(b - a);
    int n = static_cast<int>(std::ceil(len / step));
    n += n % 2;
    n = std::max(n, 2);
    double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Least-squares slope of log(y) against log(x); used for empirical order fits.
template <typename XS, typename YS>
double logLogSlope(const XS& xs, const YS& ys) {
    int n = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    auto yi = std::begin(ys);
    for (auto x : xs) {
        double y = *yi++;
        if (x <= 0.0 || y <= 0.0) throw std::domain_error("logLogSlope: nonpositive data");
        double lx = std::log(x), ly = std::log(y);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw std::domain_error("logLogSlope: need at least two points");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace hypflow
