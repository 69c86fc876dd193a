#pragma once

// Closed-form building blocks of V = 1/2 a(x)^2 T V''(x) on one interval where
// a(x) = alpha x^2 + beta x + gamma. Everything is evaluated in real arithmetic.
//
// On [x_l, x_r) the solution is written
//
//   V(x) = r(x) * ( theta_c * C(p) + theta_s * S(p) ),   p = omega * (zeta(x) - zeta(x_l))
//
// with r(x) = sqrt(a(x) / a(x_l)) and (C, S) = (cosh p, sinh p / omega) on hyperbolic
// pieces or (cos p, sin p / omega) on trigonometric pieces. The 1/omega scaling keeps the
// basis continuous through omega = 0, where C = 1 and S = zeta(x) - zeta(x_l).

#include <algorithm>
#include <cmath>
#include <limits>

#include "lvg/error.hpp"

namespace lvg {

struct QuadraticPiece {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double x_left = 0.0;
    double x_right = 0.0;

    double value(double x) const noexcept { return (alpha * x + beta) * x + gamma; }
    double derivative(double x) const noexcept { return 2.0 * alpha * x + beta; }
};

enum class Branch {
    RealRoots,                  // delta > 0, alpha != 0
    ComplexRootsHyperbolic,     // delta < 0, delta T + 8 > 0: imaginary omega times imaginary z
    ComplexRootsTrigonometric,  // delta < 0, delta T + 8 < 0: real omega times imaginary z
    DoubleRoot,                 // delta == 0, alpha != 0
    LinearRoot,                 // alpha == 0, beta != 0
    Constant,                   // alpha == 0, beta == 0
};

constexpr const char* to_string(Branch b) noexcept {
    switch (b) {
    case Branch::RealRoots: return "RealRoots";
    case Branch::ComplexRootsHyperbolic: return "ComplexRootsHyperbolic";
    case Branch::ComplexRootsTrigonometric: return "ComplexRootsTrigonometric";
    case Branch::DoubleRoot: return "DoubleRoot";
    case Branch::LinearRoot: return "LinearRoot";
    case Branch::Constant: return "Constant";
    }
    return "?";
}

/// Values of the (C, S) basis and of their derivatives with respect to zeta.
struct BasisValues {
    double c = 1.0;
    double s = 0.0;
    double dc = 0.0;
    double ds = 1.0;
};

struct PieceKernel {
    Branch branch = Branch::Constant;

    // Effective coefficients; alpha (or beta) is zeroed when negligible.
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double x_left = 0.0;
    double x_right = 0.0;
    double maturity = 0.0;

    double delta = 0.0;
    // RealRoots: the two roots. Complex roots: (u, v) with roots u +/- i v.
    // DoubleRoot and LinearRoot: root1 only.
    double root1 = 0.0;
    double root2 = 0.0;
    double center = 0.0;     // -beta / (2 alpha) for quadratic branches
    double half_width = 0.0; // sqrt(delta) / (2 alpha) (signed) for RealRoots, v for complex roots

    double omega = 0.0;   // |omega|, zero when 1 + 8/(delta T) vanishes
    bool trigonometric = false;

    double a_left = 0.0;
    double a_right = 0.0;

    // Interval-spanning values at x_right.
    double span_dzeta = 0.0;
    double span_cosh = 1.0;     // cosh or cos of omega * span_dzeta
    double span_sinh = 0.0;     // sinh or sin of omega * span_dzeta
    BasisValues span_basis;

    double a(double x) const noexcept { return (alpha * x + beta) * x + gamma; }
    double a_prime(double x) const noexcept { return 2.0 * alpha * x + beta; }
};

namespace detail {

// beta^2 - 4 alpha gamma with error-free products, so a small discriminant keeps its digits
inline double discriminant(double alpha, double beta, double gamma) {
    const double p = beta * beta;
    const double dp = std::fma(beta, beta, -p);
    const double q = 4.0 * alpha * gamma;
    const double dq = std::fma(4.0 * alpha, gamma, -q);
    return (p - q) + (dp - dq);
}

inline void check_singular(double x, double root) {
    if (std::abs(x - root) < 1e-13 * std::max(1.0, std::abs(x))) {
        throw Error(ErrorCode::SingularPoint, "evaluation point coincides with a root of a(x)");
    }
}

// zeta(x) - zeta(x_left) evaluated without forming zeta at either end.
inline double delta_zeta(const PieceKernel& k, double x) {
    const double xl = k.x_left;
    switch (k.branch) {
    case Branch::Constant:
        return x - xl;
    case Branch::LinearRoot:
        check_singular(x, k.root1);
        return std::log1p((x - xl) / (xl - k.root1));
    case Branch::DoubleRoot: {
        const double y = x - k.center;
        const double yl = xl - k.center;
        check_singular(x, k.center);
        return (yl - y) / (y * yl);
    }
    case Branch::RealRoots: {
        const double y = x - k.center;
        const double yl = xl - k.center;
        const double e = k.half_width;
        check_singular(x, k.root1);
        check_singular(x, k.root2);
        if (k.alpha > 0.0) {
            return -2.0 * (std::atanh(e / y) - std::atanh(e / yl));
        }
        return -2.0 * (std::atanh(y / e) - std::atanh(yl / e));
    }
    case Branch::ComplexRootsHyperbolic:
    case Branch::ComplexRootsTrigonometric: {
        const double y = x - k.center;
        const double yl = xl - k.center;
        const double v = k.half_width;
        // atan2(v, y) - atan2(v, yl), both angles in (0, pi)
        return -2.0 * std::atan2(v * (yl - y), y * yl + v * v);
    }
    }
    return 0.0;
}

inline BasisValues basis(double omega, bool trig, double dz) {
    BasisValues b;
    if (omega == 0.0) {
        b.c = 1.0;
        b.s = dz;
        b.dc = 0.0;
        b.ds = 1.0;
        return b;
    }
    const double p = omega * dz;
    if (trig) {
        const double sp = std::sin(p);
        const double cp = std::cos(p);
        b.c = cp;
        b.s = std::abs(p) < 1e-5 ? dz * (1.0 - p * p / 6.0) : sp / omega;
        b.dc = -omega * sp;
        b.ds = cp;
    } else {
        const double sp = std::sinh(p);
        const double cp = std::cosh(p);
        b.c = cp;
        b.s = std::abs(p) < 1e-5 ? dz * (1.0 + p * p / 6.0) : sp / omega;
        b.dc = omega * sp;
        b.ds = cp;
    }
    return b;
}

inline void check_positive(const QuadraticPiece& piece) {
    const double al = piece.value(piece.x_left);
    const double ar = piece.value(piece.x_right);
    bool ok = al > 0.0 && ar > 0.0 && std::isfinite(al) && std::isfinite(ar);
    if (ok && piece.alpha != 0.0) {
        const double vertex = -piece.beta / (2.0 * piece.alpha);
        if (vertex > piece.x_left && vertex < piece.x_right) {
            ok = piece.value(vertex) > 0.0;
        }
    }
    if (!ok) {
        throw Error(ErrorCode::NonPositiveVariance,
                    "a(x) must be positive on [" + std::to_string(piece.x_left) + ", " +
                        std::to_string(piece.x_right) + "]");
    }
}

} // namespace detail

/// Classifies a piece into its evaluation branch and precomputes roots, omega and the
/// interval-spanning basis values.
inline PieceKernel classify_piece(const QuadraticPiece& piece, double maturity) {
    if (!(piece.x_right > piece.x_left)) {
        throw Error(ErrorCode::DegenerateInterval, "interval must have x_right > x_left");
    }
    if (!(maturity > 0.0) || !std::isfinite(maturity)) {
        throw Error(ErrorCode::InvalidParams, "maturity must be positive");
    }
    detail::check_positive(piece);

    PieceKernel k;
    k.x_left = piece.x_left;
    k.x_right = piece.x_right;
    k.maturity = maturity;
    k.alpha = piece.alpha;
    k.beta = piece.beta;
    k.gamma = piece.gamma;

    const double scale = std::max(std::abs(piece.x_left), std::abs(piece.x_right));
    if (std::abs(k.alpha) * scale * scale <= 1e-12 * (std::abs(k.beta) * scale + std::abs(k.gamma))) {
        k.alpha = 0.0;
    }
    if (k.alpha == 0.0 && std::abs(k.beta) * scale <= 1e-12 * std::abs(k.gamma)) {
        k.beta = 0.0;
    }

    const double T = maturity;
    if (k.alpha == 0.0 && k.beta == 0.0) {
        k.branch = Branch::Constant;
        k.omega = std::sqrt(2.0 / T) / k.gamma;
    } else if (k.alpha == 0.0) {
        k.branch = Branch::LinearRoot;
        k.delta = k.beta * k.beta;
        k.root1 = -k.gamma / k.beta;
        k.omega = 0.5 * std::sqrt(1.0 + 8.0 / (k.delta * T));
    } else {
        k.delta = detail::discriminant(k.alpha, k.beta, k.gamma);
        k.center = -k.beta / (2.0 * k.alpha);
        const double dscale = std::max(k.beta * k.beta, std::abs(4.0 * k.alpha * k.gamma));
        if (std::abs(k.delta) <= 1e-28 * dscale) {
            k.branch = Branch::DoubleRoot;
            k.delta = 0.0;
            k.root1 = k.root2 = k.center;
            k.omega = std::sqrt(2.0 / T) / std::abs(k.alpha);
        } else if (k.delta > 0.0) {
            k.branch = Branch::RealRoots;
            k.half_width = std::sqrt(k.delta) / (2.0 * k.alpha);
            k.root1 = k.center + k.half_width;
            k.root2 = k.center - k.half_width;
            k.omega = 0.5 * std::sqrt(1.0 + 8.0 / (k.delta * T));
        } else {
            k.half_width = std::sqrt(-k.delta) / (2.0 * k.alpha);
            k.root1 = k.center;
            k.root2 = k.half_width;
            const double q = 1.0 + 8.0 / (k.delta * T);
            k.omega = std::abs(q) < 1e-12 ? 0.0 : 0.5 * std::sqrt(std::abs(q));
            if (q < 0.0) {
                k.branch = Branch::ComplexRootsHyperbolic;
            } else {
                k.branch = Branch::ComplexRootsTrigonometric;
                k.trigonometric = true;
            }
        }
    }

    k.a_left = k.a(k.x_left);
    k.a_right = k.a(k.x_right);
    k.span_dzeta = detail::delta_zeta(k, k.x_right);
    const double p = k.omega * k.span_dzeta;
    if (!std::isfinite(p) || std::abs(p) > 700.0) {
        throw Error(ErrorCode::NumericalOverflow, "interval spans too many e-folds of the solution");
    }
    k.span_basis = detail::basis(k.omega, k.trigonometric, k.span_dzeta);
    k.span_cosh = k.trigonometric ? std::cos(p) : std::cosh(p);
    k.span_sinh = k.trigonometric ? std::sin(p) : std::sinh(p);
    return k;
}

/// Real driving variable of the basis: Re z for real roots, Im z for complex roots,
/// ln|x - root| for linear pieces, 1/(x - root) for a double root and x for constant pieces.
inline double eval_z(const PieceKernel& k, double x) {
    switch (k.branch) {
    case Branch::Constant:
        return x;
    case Branch::LinearRoot:
        detail::check_singular(x, k.root1);
        return std::log(std::abs(x - k.root1));
    case Branch::DoubleRoot:
        detail::check_singular(x, k.center);
        return 1.0 / (x - k.center);
    case Branch::RealRoots: {
        detail::check_singular(x, k.root1);
        detail::check_singular(x, k.root2);
        const double y = x - k.center;
        return k.alpha > 0.0 ? -2.0 * std::atanh(k.half_width / y) : -2.0 * std::atanh(y / k.half_width);
    }
    case Branch::ComplexRootsHyperbolic:
    case Branch::ComplexRootsTrigonometric:
        return -2.0 * std::atan2(k.half_width, x - k.center);
    }
    return 0.0;
}

/// d eval_z / dx.
inline double eval_z_prime(const PieceKernel& k, double x) {
    switch (k.branch) {
    case Branch::Constant:
        return 1.0;
    case Branch::LinearRoot:
        detail::check_singular(x, k.root1);
        return 1.0 / (x - k.root1);
    case Branch::DoubleRoot: {
        detail::check_singular(x, k.center);
        const double y = x - k.center;
        return -1.0 / (y * y);
    }
    case Branch::RealRoots: {
        detail::check_singular(x, k.root1);
        detail::check_singular(x, k.root2);
        const double y = x - k.center;
        const double e = k.half_width;
        return 2.0 * e / ((y - e) * (y + e));
    }
    case Branch::ComplexRootsHyperbolic:
    case Branch::ComplexRootsTrigonometric: {
        const double y = x - k.center;
        const double v = k.half_width;
        return 2.0 * v / (y * y + v * v);
    }
    }
    return 0.0;
}

/// chi = sqrt(a / |alpha|), sqrt|x - root| on linear pieces and 1 on constant pieces.
inline double eval_chi(const PieceKernel& k, double x) {
    const double ax = k.a(x);
    if (!(ax > 0.0)) {
        throw Error(ErrorCode::NonPositiveVariance, "a(x) <= 0 at evaluation point");
    }
    switch (k.branch) {
    case Branch::Constant:
        return 1.0;
    case Branch::LinearRoot:
        return std::sqrt(std::abs(x - k.root1));
    default:
        return std::sqrt(ax / std::abs(k.alpha));
    }
}

/// kappa = a'(x) / (2 a(x) z'(x)): the coefficient pairing V' with z'.
inline double eval_kappa(const PieceKernel& k, double x) {
    switch (k.branch) {
    case Branch::Constant:
        return 0.0;
    case Branch::LinearRoot:
        detail::check_singular(x, k.root1);
        return 0.5;
    default:
        return k.a_prime(x) / (2.0 * k.a(x) * eval_z_prime(k, x));
    }
}

/// Basis values at x, relative to the left end of the piece.
inline BasisValues eval_basis(const PieceKernel& k, double x) {
    return detail::basis(k.omega, k.trigonometric, detail::delta_zeta(k, x));
}

/// r(x) = chi(x) / chi(x_left) = sqrt(a(x) / a(x_left)).
inline double eval_ratio(const PieceKernel& k, double x) { return std::sqrt(k.a(x) / k.a_left); }

/// a'(x) / (2 a(x)), the logarithmic derivative of r.
inline double eval_log_slope(const PieceKernel& k, double x) { return 0.5 * k.a_prime(x) / k.a(x); }

} // namespace lvg
