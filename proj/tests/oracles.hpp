#pragma once

// Reference computations the library is checked against. None of them call into the code
// under test beyond the plain data types.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "lvg/kernel.hpp"
#include "lvg/parameterization.hpp"
#include "lvg/pdde.hpp"

namespace oracle {

/// V on [xl, x] for a(x) = alpha x^2 + beta x + gamma (alpha != 0) from the closed form in
/// complex arithmetic, for the solution with V(xl) = v0 and V'(xl) = d0.
///   V = chi(x)/chi(xl) [A cosh(w (z(x) - z(xl))) + B sinh(w (z(x) - z(xl)))]
///   z = ln((x - r1) / (x - r2)), chi = sqrt((x - r1)(x - r2)), w = sqrt(1 + 8 / (delta T)) / 2.
/// The logarithm is continued along the segment in small steps so that no branch cut is
/// crossed. Runs in extended precision: delta = beta^2 - 4 alpha gamma cancels badly when the
/// roots nearly coincide, and the growth over the piece amplifies that.
inline double complex_value(double alpha_d, double beta_d, double gamma_d, double T_d, double xl_d, double x_d, double v0,
                            double d0) {
    using R = long double;
    using C = std::complex<R>;
    const R alpha = alpha_d, beta = beta_d, gamma = gamma_d, T = T_d, xl = xl_d, x = x_d;
    const R delta = beta * beta - 4 * alpha * gamma;
    const C sq = std::sqrt(C(delta, 0));
    const C r1 = (-beta + sq) / (2 * alpha);
    const C r2 = (-beta - sq) / (2 * alpha);
    const C w = R(0.5) * std::sqrt(C(1 + 8 / (delta * T), 0));
    const auto ratio = [&](R y) { return (C(y) - r1) / (C(y) - r2); };

    constexpr int steps = 400;
    C dz = 0;
    C prev = ratio(xl);
    for (int k = 1; k <= steps; ++k) {
        const R y = xl + (x - xl) * k / steps;
        const C cur = ratio(y);
        dz += std::log(cur / prev);
        prev = cur;
    }
    const C chi_ratio = std::sqrt((C(x) - r1) * (C(x) - r2) / ((C(xl) - r1) * (C(xl) - r2)));
    const C zp = R(1) / (C(xl) - r1) - R(1) / (C(xl) - r2);
    const C log_chi_p = R(0.5) * (R(1) / (C(xl) - r1) + R(1) / (C(xl) - r2));
    // V(xl) = A, V'(xl) = A chi'/chi + B w z'
    const C A = R(v0);
    const C B = (R(d0) - A * log_chi_p) / (w * zp);
    const C v = chi_ratio * (A * std::cosh(w * dz) + B * std::sinh(w * dz));
    return static_cast<double>(v.real());
}

/// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        }
        std::swap(a[c], a[p]);
        std::swap(b[c], b[p]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

/// Cox-de Boor recursion for B_{j,k} on knot vector t (right-continuous, last span closed).
inline double cox_de_boor(const std::vector<double>& t, std::size_t j, std::size_t k, double x) {
    if (k == 0) {
        if (t[j] <= x && x < t[j + 1]) return 1.0;
        // close the last nonempty span
        return (x == t.back() && t[j + 1] == t.back() && t[j] < t[j + 1]) ? 1.0 : 0.0;
    }
    double out = 0.0;
    const double d1 = t[j + k] - t[j];
    const double d2 = t[j + k + 1] - t[j + 1];
    if (d1 > 0.0) out += (x - t[j]) / d1 * cox_de_boor(t, j, k - 1, x);
    if (d2 > 0.0) out += (t[j + k + 1] - x) / d2 * cox_de_boor(t, j + 1, k - 1, x);
    return out;
}

inline double spline_value(const std::vector<double>& t, const std::vector<double>& c, double x) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * cox_de_boor(t, j, 2, x);
    return s;
}

/// Second-order finite differences for 2/(a^2 T) V - V'' = delta_F with V(L) = V(U) = 0 on
/// a grid that is uniform on [L, F] and on [F, U], solved with the Thomas algorithm (the
/// matrix is diagonally dominant). Returns nodes and values.
struct FdSolution {
    std::vector<double> x;
    std::vector<double> v;

    double at(double y) const {
        std::size_t lo = 0, hi = x.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (x[mid] <= y ? lo : hi) = mid;
        }
        const double w = (y - x[lo]) / (x[hi] - x[lo]);
        return (1.0 - w) * v[lo] + w * v[hi];
    }
};

inline FdSolution fd_bvp(const lvg::LocalVarianceFunction& lv, std::size_t nodes = 20000) {
    const double L = lv.lower(), U = lv.upper(), F = lv.forward, T = lv.maturity;
    const auto n_left = static_cast<std::size_t>(std::max(2.0, std::round(nodes * (F - L) / (U - L))));
    const std::size_t n_right = std::max<std::size_t>(2, nodes - n_left);
    FdSolution s;
    for (std::size_t i = 0; i < n_left; ++i) s.x.push_back(L + (F - L) * static_cast<double>(i) / n_left);
    for (std::size_t i = 0; i <= n_right; ++i) s.x.push_back(F + (U - F) * static_cast<double>(i) / n_right);
    s.x.back() = U;
    const std::size_t n = s.x.size();
    std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h1 = s.x[i] - s.x[i - 1], h2 = s.x[i + 1] - s.x[i];
        const double a = lv.a(s.x[i]);
        const double q = 2.0 / (a * a * T);
        const double m = 2.0 / (h1 + h2);
        lo[i] = -m / h1;
        up[i] = -m / h2;
        di[i] = q + m / h1 + m / h2;
        if (s.x[i] == F) rhs[i] = m;
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double f = lo[i] / di[i - 1];
        di[i] -= f * up[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    s.v.assign(n, 0.0);
    s.v[n - 1] = rhs[n - 1] / di[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) s.v[i] = (rhs[i] - up[i] * s.v[i + 1]) / di[i];
    return s;
}

/// Random quadratic B-spline local volatility on a scale around `forward`, with the forward
/// as a double knot.
inline lvg::LocalVarianceFunction random_bspline_localvar(std::mt19937_64& rng, double forward = 100.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double L = forward * (0.3 + 0.4 * u(rng));
    const double U = forward * (1.5 + 1.5 * u(rng));
    const int left = 1 + static_cast<int>(u(rng) * 4), right = 1 + static_cast<int>(u(rng) * 4);
    std::vector<double> t = {L, L, L};
    for (int i = 1; i <= left; ++i) t.push_back(L + (forward - L) * (i - 0.3 * u(rng)) / (left + 1));
    t.push_back(forward);
    t.push_back(forward);
    for (int i = 1; i <= right; ++i) t.push_back(forward + (U - forward) * (i - 0.3 * u(rng)) / (right + 1));
    t.insert(t.end(), {U, U, U});
    std::vector<double> lambda(t.size() - 3);
    const double level = forward * (0.1 + 0.3 * u(rng));
    for (auto& l : lambda) l = level * (0.5 + u(rng));
    const double T = 0.05 + 1.5 * u(rng);
    return lvg::build_bspline_localvar({t, lambda}, forward, T);
}

/// Random linear Bachelier or Black local volatility.
inline lvg::LocalVarianceFunction random_linear_localvar(std::mt19937_64& rng, bool black, double forward = 100.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double L = forward * (0.3 + 0.4 * u(rng));
    const double U = forward * (1.5 + 1.5 * u(rng));
    std::vector<double> x = {L};
    const int left = 1 + static_cast<int>(u(rng) * 4), right = 1 + static_cast<int>(u(rng) * 4);
    for (int i = 1; i <= left; ++i) x.push_back(L + (forward - L) * (i - 0.3 * u(rng)) / (left + 1));
    x.push_back(forward);
    for (int i = 1; i <= right; ++i) x.push_back(forward + (U - forward) * (i - 0.3 * u(rng)) / (right + 1));
    x.push_back(U);
    lvg::LinearKnotParams p;
    p.kind = black ? lvg::LinearKind::Black : lvg::LinearKind::Bachelier;
    const double level = black ? 0.1 + 0.3 * u(rng) : forward * (0.1 + 0.3 * u(rng));
    for (std::size_t i = 0; i < x.size(); ++i) p.sigma.push_back(level * (0.5 + u(rng)));
    const double T = 0.05 + 1.5 * u(rng);
    return lvg::build_linear_localvar(p, x, forward, T);
}

/// Closed-form lognormal density of the forward at x.
inline double lognormal_density(double x, double forward, double vol, double T) {
    const double s = vol * std::sqrt(T);
    const double d = (std::log(x / forward) + 0.5 * s * s) / s;
    return std::exp(-0.5 * d * d) / (x * s * std::sqrt(2.0 * M_PI));
}

/// Undiscounted Black call from the textbook formula.
inline double black_call(double F, double K, double T, double vol) {
    const double s = vol * std::sqrt(T);
    const double d1 = (std::log(F / K) + 0.5 * s * s) / s;
    const auto N = [](double y) { return 0.5 * std::erfc(-y / std::sqrt(2.0)); };
    return F * N(d1) - K * N(d1 - s);
}

} // namespace oracle
