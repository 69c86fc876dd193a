#pragma once

// Closed-form solution of the single-step forward equation
//
//   V(x) = 1/2 a(x)^2 T [ V''(x) + delta(x - F) ],   V(L) = V(U) = 0,
//
// for a piecewise-quadratic, continuous local variance a(x). V is the out-of-the-money
// option price; the Dirac mass becomes the unit jump V'(F-) - V'(F+) = 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lvg/error.hpp"
#include "lvg/kernel.hpp"
#include "lvg/tridiagonal.hpp"

namespace lvg {

enum class OptionKind { Call, Put };
enum class Side { Left, Right };

struct LocalVarianceFunction {
    std::vector<double> knots;           // x_0 = L < x_1 < ... < x_{m+1} = U
    std::vector<QuadraticPiece> pieces;  // pieces[i] lives on [x_i, x_{i+1})
    std::size_t forward_index = 0;       // knots[forward_index] == forward
    double forward = 0.0;
    double maturity = 0.0;

    double lower() const { return knots.front(); }
    double upper() const { return knots.back(); }
    std::size_t interior_count() const { return knots.size() - 2; }

    /// Index of the piece containing x. A knot belongs to the piece on its right, except U.
    std::size_t piece_index(double x, Side side = Side::Right) const {
        if (!(x >= lower() && x <= upper())) {
            throw Error(ErrorCode::OutOfDomain, "x=" + std::to_string(x) + " outside [L, U]");
        }
        auto it = std::upper_bound(knots.begin(), knots.end(), x);
        std::size_t i = static_cast<std::size_t>(it - knots.begin());
        i = i == 0 ? 0 : i - 1;
        if (side == Side::Left && i > 0 && x == knots[i]) --i;
        return std::min(i, pieces.size() - 1);
    }

    double a(double x) const { return pieces[piece_index(x)].value(x); }
    double a_prime(double x, Side side = Side::Right) const { return pieces[piece_index(x, side)].derivative(x); }

    void validate() const {
        const auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidLocalVariance, msg); };
        if (knots.size() < 3) fail("need at least one interior knot");
        if (pieces.size() + 1 != knots.size()) fail("pieces/knots size mismatch");
        if (!(maturity > 0.0)) fail("maturity must be positive");
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            if (!(knots[i + 1] > knots[i])) fail("knots must be strictly increasing");
        }
        if (forward_index < 1 || forward_index > knots.size() - 2) fail("forward must be an interior knot");
        if (knots[forward_index] != forward) fail("knots[forward_index] must equal the forward");
        for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
            const double x = knots[i + 1];
            const double left = pieces[i].value(x);
            const double right = pieces[i + 1].value(x);
            // Evaluating the power basis far from the origin cancels; allow for its rounding.
            const auto terms = [x](const QuadraticPiece& p) {
                return std::abs(p.alpha) * x * x + std::abs(p.beta * x) + std::abs(p.gamma);
            };
            const double noise = 8.0 * std::numeric_limits<double>::epsilon() * std::max(terms(pieces[i]), terms(pieces[i + 1]));
            if (std::abs(left - right) > 1e-12 * std::max(std::abs(left), std::abs(right)) + noise) {
                fail("a(x) is discontinuous at knot " + std::to_string(i + 1));
            }
        }
    }
};

/// Builds a local variance function from knots and per-interval coefficients (alpha, beta, gamma).
inline LocalVarianceFunction make_local_variance(std::vector<double> knots, std::span<const QuadraticPiece> coefficients,
                                                 double forward, double maturity) {
    LocalVarianceFunction lv;
    lv.knots = std::move(knots);
    lv.forward = forward;
    lv.maturity = maturity;
    auto it = std::find(lv.knots.begin(), lv.knots.end(), forward);
    lv.forward_index = it == lv.knots.end() ? 0 : static_cast<std::size_t>(it - lv.knots.begin());
    lv.pieces.assign(coefficients.begin(), coefficients.end());
    if (lv.pieces.size() + 1 == lv.knots.size()) {
        for (std::size_t i = 0; i < lv.pieces.size(); ++i) {
            lv.pieces[i].x_left = lv.knots[i];
            lv.pieces[i].x_right = lv.knots[i + 1];
        }
    }
    lv.validate();
    return lv;
}

inline std::vector<PieceKernel> classify_pieces(const LocalVarianceFunction& lv) {
    std::vector<PieceKernel> kernels;
    kernels.reserve(lv.pieces.size());
    for (const auto& p : lv.pieces) kernels.push_back(classify_piece(p, lv.maturity));
    return kernels;
}

/// Unknowns are ordered (theta_0^s, theta_0^c, ..., theta_m^s, theta_m^c). For each interior
/// knot, row 2i+1 is the derivative-continuity equation with theta_{i+1}^c eliminated and
/// row 2i+2 the same equation with theta_i^s eliminated; both carry the unit jump at the forward.
inline TridiagonalSystem assemble_system(std::span<const PieceKernel> kernels, std::size_t forward_index) {
    const std::size_t m = kernels.size() - 1;
    TridiagonalSystem sys(2 * m + 2);
    sys.diag[0] = 0.0;
    sys.super[0] = 1.0;

    for (std::size_t i = 0; i < m; ++i) {
        const PieceKernel& kl = kernels[i];
        const PieceKernel& kr = kernels[i + 1];
        const double x = kl.x_right;
        const double r = std::sqrt(kl.a_right / kl.a_left);
        const BasisValues& b = kl.span_basis;
        const double gl = eval_log_slope(kl, x);
        const double zl = eval_z_prime(kl, x);
        const double gr = eval_log_slope(kr, x);
        const double zr = eval_z_prime(kr, x);
        const double jump = (i + 1 == forward_index) ? 1.0 : 0.0;

        const std::size_t row1 = 2 * i + 1;
        sys.sub[row1] = r * ((gl - gr) * b.s + zl * b.ds);
        sys.diag[row1] = r * ((gl - gr) * b.c + zl * b.dc);
        sys.super[row1] = -zr;
        sys.rhs[row1] = jump;

        const std::size_t row2 = 2 * i + 2;
        sys.sub[row2] = -r * zl / b.s;
        sys.diag[row2] = -zr;
        sys.super[row2] = gl - gr + zl * b.c / b.s;
        sys.rhs[row2] = jump;
    }

    const BasisValues& last = kernels[m].span_basis;
    sys.sub[2 * m + 1] = last.s;
    sys.diag[2 * m + 1] = last.c;
    sys.rhs[2 * m + 1] = 0.0;
    return sys;
}

inline TridiagonalSystem assemble_system(const LocalVarianceFunction& lv) {
    lv.validate();
    const auto kernels = classify_pieces(lv);
    return assemble_system(kernels, lv.forward_index);
}

struct ThetaCoefficients {
    std::vector<double> theta_s;
    std::vector<double> theta_c;
};

inline ThetaCoefficients solve_theta(const TridiagonalSystem& sys) {
    if (sys.size() < 4 || sys.size() % 2 != 0) {
        throw Error(ErrorCode::SingularSystem, "system size must be 2m+2 with m >= 1");
    }
    const auto x = solve_tridiagonal(sys);
    for (double v : x) {
        if (!std::isfinite(v)) throw Error(ErrorCode::NumericalOverflow, "theta coefficients are not finite");
    }
    ThetaCoefficients out;
    const std::size_t pieces = sys.size() / 2;
    out.theta_s.resize(pieces);
    out.theta_c.resize(pieces);
    for (std::size_t i = 0; i < pieces; ++i) {
        out.theta_s[i] = x[2 * i];
        out.theta_c[i] = x[2 * i + 1];
    }
    return out;
}

/// The solved model. theta_s multiplies the 1/omega-scaled basis S (see kernel.hpp).
class LVGSolution {
public:
    LVGSolution() = default;

    static LVGSolution solve(LocalVarianceFunction lv) {
        lv.validate();
        LVGSolution sol;
        sol.kernels_ = classify_pieces(lv);
        sol.system_ = assemble_system(sol.kernels_, lv.forward_index);
        auto theta = solve_theta(sol.system_);
        sol.theta_c_ = std::move(theta.theta_c);
        sol.theta_s_ = std::move(theta.theta_s);
        sol.localvar_ = std::move(lv);
        return sol;
    }

    /// Rebuilds a solution from stored coefficients without re-solving.
    static LVGSolution from_parts(LocalVarianceFunction lv, std::vector<double> theta_c, std::vector<double> theta_s) {
        lv.validate();
        if (theta_c.size() != lv.pieces.size() || theta_s.size() != lv.pieces.size()) {
            throw Error(ErrorCode::InvalidParams, "theta arrays must have one entry per piece");
        }
        LVGSolution sol;
        sol.kernels_ = classify_pieces(lv);
        sol.system_ = assemble_system(sol.kernels_, lv.forward_index);
        sol.theta_c_ = std::move(theta_c);
        sol.theta_s_ = std::move(theta_s);
        sol.localvar_ = std::move(lv);
        return sol;
    }

    const LocalVarianceFunction& localvar() const noexcept { return localvar_; }
    const std::vector<PieceKernel>& kernels() const noexcept { return kernels_; }
    const std::vector<double>& theta_c() const noexcept { return theta_c_; }
    const std::vector<double>& theta_s() const noexcept { return theta_s_; }
    const TridiagonalSystem& system() const noexcept { return system_; }
    double forward() const noexcept { return localvar_.forward; }
    double maturity() const noexcept { return localvar_.maturity; }
    double lower() const { return localvar_.lower(); }
    double upper() const { return localvar_.upper(); }
    /// V(F), the at-the-money option value.
    double theta_at_forward() const { return theta_c_[localvar_.forward_index]; }

    /// Out-of-the-money option value; V(L) = V(U) = 0.
    double value(double x) const {
        const std::size_t i = localvar_.piece_index(x);
        if (x == localvar_.lower()) return 0.0;
        return std::max(0.0, raw_value(i, x));
    }

    /// V'(x); at a knot the side selects the one-sided limit.
    double derivative(double x, Side side = Side::Right) const {
        const std::size_t i = localvar_.piece_index(x, side);
        const PieceKernel& k = kernels_[i];
        if (two_sided(k)) {
            const double d = detail::delta_zeta(k, x), D = k.span_dzeta;
            const double vl = theta_c_[i], vr = right_value(i) / std::sqrt(k.a_right / k.a_left);
            double mix, slope;
            if (k.omega == 0.0) {
                mix = vl * (D - d) / D + vr * d / D;
                slope = (vr - vl) / D;
            } else {
                const double w = k.omega;
                mix = vl * sinh_ratio(w * (D - d), w * D) + vr * sinh_ratio(w * d, w * D);
                slope = w * (vr * cosh_sinh_ratio(w * d, w * D) - vl * cosh_sinh_ratio(w * (D - d), w * D));
            }
            return eval_ratio(k, x) * (eval_log_slope(k, x) * mix + eval_z_prime(k, x) * slope);
        }
        const BasisValues b = eval_basis(k, x);
        const double r = eval_ratio(k, x);
        const double g = eval_log_slope(k, x);
        const double zp = eval_z_prime(k, x);
        const double tc = theta_c_[i];
        const double ts = theta_s_[i];
        return r * (g * (tc * b.c + ts * b.s) + zp * (tc * b.dc + ts * b.ds));
    }

    /// Undiscounted price; call - put = F - K by construction.
    double price(double strike, OptionKind kind) const {
        const double v = value(strike);
        const double f = forward();
        return kind == OptionKind::Call ? v + std::max(f - strike, 0.0) : v + std::max(strike - f, 0.0);
    }

    /// Implied probability density g = 2 V / (a^2 T).
    double density(double x) const {
        const std::size_t i = localvar_.piece_index(x);
        const double ax = kernels_[i].a(x);
        return 2.0 * value(x) / (ax * ax * maturity());
    }

    /// V'(F-) - V'(F+), which the model fixes at one.
    double jump_at_forward() const {
        const double f = forward();
        return derivative(f, Side::Left) - derivative(f, Side::Right);
    }

    /// Residual of the C3 condition 1 - 2 V(F) (a'(F-) - a'(F+)) / a(F); zero when (V/a^2)'
    /// is continuous at the forward.
    double c3_residual() const {
        const double f = forward();
        const double theta = theta_at_forward();
        const double da = localvar_.a_prime(f, Side::Left) - localvar_.a_prime(f, Side::Right);
        return 1.0 - 2.0 * theta * da / localvar_.a(f);
    }

private:
    // Hyperbolic and zero-omega pieces are evaluated from both knot values. The left-anchored
    // form subtracts terms of size cosh(omega D) and loses the small tail values near U.
    static bool two_sided(const PieceKernel& k) { return !k.trigonometric && k.span_dzeta != 0.0; }

    double right_value(std::size_t i) const { return i + 1 < theta_c_.size() ? theta_c_[i + 1] : 0.0; }

    // sinh(a) / sinh(b) and cosh(a) / sinh(b) for |a| <= |b|, a and b of one sign
    static double sinh_ratio(double a, double b) {
        if (std::abs(b) < 20.0) return std::sinh(a) / std::sinh(b);
        const double s = (a < 0.0) == (b < 0.0) ? 1.0 : -1.0;
        return s * std::exp(std::abs(a) - std::abs(b)) * std::expm1(-2.0 * std::abs(a)) / std::expm1(-2.0 * std::abs(b));
    }
    static double cosh_sinh_ratio(double a, double b) {
        if (std::abs(b) < 20.0) return std::cosh(a) / std::sinh(b);
        const double s = b < 0.0 ? -1.0 : 1.0;
        return -s * std::exp(std::abs(a) - std::abs(b)) * (1.0 + std::exp(-2.0 * std::abs(a))) / std::expm1(-2.0 * std::abs(b));
    }

    double raw_value(std::size_t i, double x) const {
        const PieceKernel& k = kernels_[i];
        if (two_sided(k)) {
            const double d = detail::delta_zeta(k, x), D = k.span_dzeta;
            const double vl = theta_c_[i], vr = right_value(i) / std::sqrt(k.a_right / k.a_left);
            if (k.omega == 0.0) return eval_ratio(k, x) * (vl * (D - d) / D + vr * d / D);
            const double w = k.omega;
            return eval_ratio(k, x) * (vl * sinh_ratio(w * (D - d), w * D) + vr * sinh_ratio(w * d, w * D));
        }
        const BasisValues b = eval_basis(k, x);
        return eval_ratio(k, x) * (theta_c_[i] * b.c + theta_s_[i] * b.s);
    }

    LocalVarianceFunction localvar_;
    std::vector<PieceKernel> kernels_;
    TridiagonalSystem system_;
    std::vector<double> theta_c_;
    std::vector<double> theta_s_;
};

inline double eval_V(const LVGSolution& sol, double x) { return sol.value(x); }
inline double eval_V_prime(const LVGSolution& sol, double x, Side side = Side::Right) { return sol.derivative(x, side); }
inline double price(const LVGSolution& sol, double strike, OptionKind kind) { return sol.price(strike, kind); }
inline double density(const LVGSolution& sol, double x) { return sol.density(x); }

} // namespace lvg
