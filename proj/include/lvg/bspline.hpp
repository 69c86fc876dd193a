#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "lvg/error.hpp"
#include "lvg/kernel.hpp"

namespace lvg::bspline {

constexpr std::size_t kDegree = 2;

/// Span k with t[k] <= x < t[k+1], clamped to the valid range [degree, n_coeff - 1];
/// x equal to the last knot maps to the last non-empty span.
inline std::size_t find_span(std::span<const double> t, std::size_t n_coeff, double x, std::size_t degree = kDegree) {
    const std::size_t lo = degree;
    const std::size_t hi = n_coeff - 1;
    if (x >= t[hi + 1]) {
        std::size_t k = hi;
        while (k > lo && t[k] == t[k + 1]) --k;
        return k;
    }
    if (x <= t[lo]) {
        std::size_t k = lo;
        while (k < hi && t[k] == t[k + 1]) ++k;
        return k;
    }
    auto it = std::upper_bound(t.begin() + static_cast<std::ptrdiff_t>(lo), t.begin() + static_cast<std::ptrdiff_t>(hi + 1), x);
    return static_cast<std::size_t>(it - t.begin()) - 1;
}

/// de Boor evaluation of sum_i c_i B_{i,degree}(x) restricted to span k.
inline double de_boor(std::span<const double> t, std::span<const double> c, double x, std::size_t k,
                      std::size_t degree = kDegree) {
    std::vector<double> d(degree + 1);
    for (std::size_t j = 0; j <= degree; ++j) d[j] = c[j + k - degree];
    for (std::size_t r = 1; r <= degree; ++r) {
        for (std::size_t j = degree; j >= r; --j) {
            const double left = t[j + k - degree];
            const double right = t[j + 1 + k - r];
            const double w = (x - left) / (right - left);
            d[j] = (1.0 - w) * d[j - 1] + w * d[j];
        }
    }
    return d[degree];
}

inline double evaluate(std::span<const double> t, std::span<const double> c, double x, std::size_t degree = kDegree) {
    return de_boor(t, c, x, find_span(t, c.size(), x, degree), degree);
}

/// Sorted distinct values of the knot vector.
inline std::vector<double> distinct_knots(std::span<const double> t) {
    std::vector<double> out(t.begin(), t.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Power-basis coefficients of a quadratic spline on each non-empty knot span. The span
/// polynomial is sampled at its two ends and midpoint (all evaluated on the same span) and
/// expanded about x = 0.
inline std::vector<QuadraticPiece> to_power_basis(std::span<const double> t, std::span<const double> c) {
    if (c.size() + kDegree + 1 != t.size()) {
        throw Error(ErrorCode::InvalidParams, "quadratic spline needs len(t) = len(lambda) + 3");
    }
    std::vector<QuadraticPiece> pieces;
    for (std::size_t k = kDegree; k < c.size(); ++k) {
        const double xl = t[k];
        const double xr = t[k + 1];
        if (!(xr > xl)) continue;
        const double h = xr - xl;
        const double fl = de_boor(t, c, xl, k);
        const double fm = de_boor(t, c, 0.5 * (xl + xr), k);
        const double fr = de_boor(t, c, xr, k);
        // a = c0 + c1 d + c2 d^2 with d = x - xl
        const double c1 = (4.0 * fm - 3.0 * fl - fr) / h;
        const double c2 = 2.0 * (fl - 2.0 * fm + fr) / (h * h);
        QuadraticPiece p;
        p.alpha = c2;
        p.beta = c1 - 2.0 * c2 * xl;
        p.gamma = fl - c1 * xl + c2 * xl * xl;
        p.x_left = xl;
        p.x_right = xr;
        pieces.push_back(p);
    }
    return pieces;
}

} // namespace lvg::bspline
