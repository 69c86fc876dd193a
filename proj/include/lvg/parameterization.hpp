#pragma once

// Local variance families (piecewise-linear Bachelier, piecewise-linear Black, positive
// quadratic B-spline), B-spline knot placement, parameter tying and the fixed-point
// iteration that enforces the C3 condition at the forward.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lvg/bspline.hpp"
#include "lvg/error.hpp"
#include "lvg/pdde.hpp"

namespace lvg {

enum class Model { Bachelier, Black, Quadratic };
enum class KnotStrategyKind { Strikes, MidStrikes, MidX, MidXX, Uniform };

constexpr std::string_view to_string(Model m) noexcept {
    switch (m) {
    case Model::Bachelier: return "bachelier";
    case Model::Black: return "black";
    case Model::Quadratic: return "quadratic";
    }
    return "?";
}

constexpr std::string_view to_string(KnotStrategyKind k) noexcept {
    switch (k) {
    case KnotStrategyKind::Strikes: return "strikes";
    case KnotStrategyKind::MidStrikes: return "mid-strikes";
    case KnotStrategyKind::MidX: return "mid-x";
    case KnotStrategyKind::MidXX: return "mid-xx";
    case KnotStrategyKind::Uniform: return "uniform";
    }
    return "?";
}

inline std::optional<Model> parse_model(std::string_view s) {
    if (s == "bachelier") return Model::Bachelier;
    if (s == "black") return Model::Black;
    if (s == "quadratic") return Model::Quadratic;
    return std::nullopt;
}

inline std::optional<KnotStrategyKind> parse_knot_strategy(std::string_view s) {
    if (s == "strikes") return KnotStrategyKind::Strikes;
    if (s == "mid-strikes") return KnotStrategyKind::MidStrikes;
    if (s == "mid-x") return KnotStrategyKind::MidX;
    if (s == "mid-xx") return KnotStrategyKind::MidXX;
    if (s == "uniform") return KnotStrategyKind::Uniform;
    return std::nullopt;
}

// ---------------------------------------------------------------------------------------
// Linear families

enum class LinearKind { Bachelier, Black };

struct LinearKnotParams {
    std::vector<double> sigma;  // one value per knot x_0 .. x_{m+1}
    LinearKind kind = LinearKind::Bachelier;
};

/// a(x) = interpolated sigma (Bachelier) or interpolated sigma times x (Black).
inline LocalVarianceFunction build_linear_localvar(const LinearKnotParams& params, std::span<const double> knots,
                                                   double forward, double maturity) {
    if (params.sigma.size() != knots.size()) {
        throw Error(ErrorCode::InvalidParams, "need one sigma per knot");
    }
    for (double s : params.sigma) {
        if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorCode::InvalidParams, "sigma must be positive");
    }
    std::vector<QuadraticPiece> pieces(knots.size() - 1);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double xl = knots[i];
        const double slope = (params.sigma[i + 1] - params.sigma[i]) / (knots[i + 1] - xl);
        const double intercept = params.sigma[i] - slope * xl;
        if (params.kind == LinearKind::Bachelier) {
            pieces[i] = {0.0, slope, intercept};
        } else {
            pieces[i] = {slope, intercept, 0.0};
        }
    }
    return make_local_variance({knots.begin(), knots.end()}, pieces, forward, maturity);
}

// ---------------------------------------------------------------------------------------
// Quadratic B-spline family

struct BSplineParams {
    std::vector<double> knots;   // t: triple end knots, forward as a double knot
    std::vector<double> lambda;  // positive coefficients, len(t) - 3
};

inline void validate_bspline_knots(std::span<const double> t, double forward, bool double_forward = true) {
    const auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidParams, m); };
    if (t.size() < 7) fail("knot vector too short");
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (t[i + 1] < t[i]) fail("knot vector must be nondecreasing");
    }
    const double lo = t.front();
    const double hi = t.back();
    if (!(t[1] == lo && t[2] == lo && t[3] > lo)) fail("lower end knot must have multiplicity 3");
    const std::size_t n = t.size();
    if (!(t[n - 2] == hi && t[n - 3] == hi && t[n - 4] < hi)) fail("upper end knot must have multiplicity 3");
    const auto mult = std::count(t.begin(), t.end(), forward);
    if (double_forward ? mult != 2 : mult != 1) {
        fail(double_forward ? "forward must be a double knot" : "forward must be a simple knot");
    }
    for (std::size_t i = 3; i + 3 < n; ++i) {
        if (t[i] != forward && std::count(t.begin(), t.end(), t[i]) > 1) fail("interior knots other than the forward must be simple");
    }
}

/// Converts a positive quadratic spline into per-interval power-basis pieces.
inline LocalVarianceFunction build_bspline_localvar(const BSplineParams& params, double forward, double maturity,
                                                    bool double_forward = true) {
    validate_bspline_knots(params.knots, forward, double_forward);
    if (params.lambda.size() + 3 != params.knots.size()) {
        throw Error(ErrorCode::InvalidParams, "need len(lambda) = len(t) - 3");
    }
    for (double l : params.lambda) {
        if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorCode::InvalidParams, "lambda must be positive");
    }
    auto pieces = bspline::to_power_basis(params.knots, params.lambda);
    return make_local_variance(bspline::distinct_knots(params.knots), pieces, forward, maturity);
}

// ---------------------------------------------------------------------------------------
// Parameter tying

/// Maps free optimizer parameters onto parameter slots (sigma per knot, or lambda per basis
/// function). Several slots can share one free parameter; the C3 slot is filled by the
/// fixed-point iteration.
struct ParameterLayout {
    static constexpr int kDetermined = -1;
    std::vector<int> source;
    std::optional<std::size_t> c3_slot;
    std::size_t free_count = 0;

    std::size_t slot_count() const noexcept { return source.size(); }

    std::vector<double> expand(std::span<const double> free, double c3_value) const {
        std::vector<double> slots(source.size());
        for (std::size_t i = 0; i < source.size(); ++i) {
            slots[i] = source[i] == kDetermined ? c3_value : free[static_cast<std::size_t>(source[i])];
        }
        return slots;
    }
};

/// Ties the first `front` + 1 slots and the last `back` + 1 slots together, leaves `c3` (if
/// any) determined and gives every other slot its own free parameter.
inline ParameterLayout make_tied_layout(std::size_t slots, std::size_t front, std::size_t back,
                                        std::optional<std::size_t> c3) {
    if (front + back + 1 >= slots || (c3 && (*c3 <= front || *c3 + back + 1 >= slots))) {
        throw Error(ErrorCode::InvalidStrategy, "too few knots for the tying rule");
    }
    ParameterLayout layout;
    layout.c3_slot = c3;
    layout.source.resize(slots);
    int next = 0;
    for (std::size_t i = 0; i < slots; ++i) {
        if (c3 && i == *c3) {
            layout.source[i] = ParameterLayout::kDetermined;
        } else if (i > 0 && i <= front) {
            layout.source[i] = layout.source[i - 1];
        } else if (i + back >= slots) {
            layout.source[i] = layout.source[i - 1];
        } else {
            layout.source[i] = next++;
        }
    }
    layout.free_count = static_cast<std::size_t>(next);
    return layout;
}

// ---------------------------------------------------------------------------------------
// Knot placement

/// Index i with strikes[i] <= forward < strikes[i+1] (0-based).
inline std::size_t forward_bracket(std::span<const double> strikes, double forward) {
    if (strikes.size() < 2) throw Error(ErrorCode::InvalidStrategy, "need at least two strikes");
    if (forward < strikes.front() || forward > strikes.back()) {
        throw Error(ErrorCode::InvalidStrategy, "forward outside [K_1, K_n]");
    }
    auto it = std::upper_bound(strikes.begin(), strikes.end(), forward);
    return static_cast<std::size_t>(it - strikes.begin()) - 1;
}

struct KnotStrategy {
    KnotStrategyKind kind = KnotStrategyKind::MidXX;
    std::vector<double> strikes;
    double forward = 0.0;
};

struct BSplineKnots {
    std::vector<double> knots;  // full knot vector t
    ParameterLayout layout;
    std::size_t c3_slot = 0;    // basis index whose coefficient equals a(F) (valid with double knot)
};

/// Interior knots (excluding L and U) for the chosen strategy, with F as a double knot.
inline std::vector<double> interior_knots(const KnotStrategy& s) {
    const auto& k = s.strikes;
    const double f = s.forward;
    const std::size_t n = k.size();
    const std::size_t i_f = forward_bracket(k, f);
    const auto mid = [&](std::size_t j) { return 0.5 * (k[j] + k[j + 1]); };
    std::vector<double> out;

    switch (s.kind) {
    case KnotStrategyKind::Strikes:
        for (std::size_t j = 0; j <= i_f; ++j) out.push_back(k[j]);
        if (k[i_f] != f) out.push_back(f);
        out.push_back(f);
        for (std::size_t j = i_f + 1; j < n; ++j) out.push_back(k[j]);
        break;
    case KnotStrategyKind::MidStrikes: {
        const bool has_mid = i_f + 1 < n;
        const double mf = has_mid ? mid(i_f) : f;
        for (std::size_t j = 0; j < i_f; ++j) out.push_back(mid(j));
        if (has_mid && f > mf) out.push_back(mf);
        out.push_back(f);
        out.push_back(f);
        if (has_mid && f < mf) out.push_back(mf);
        for (std::size_t j = i_f + 1; j + 1 < n; ++j) out.push_back(mid(j));
        break;
    }
    case KnotStrategyKind::MidX:
    case KnotStrategyKind::MidXX:
        if (s.kind == KnotStrategyKind::MidXX) out.push_back(0.5 * (3.0 * k[0] - k[1]));
        for (std::size_t j = 0; j < i_f; ++j) out.push_back(mid(j));
        out.push_back(f);
        out.push_back(f);
        for (std::size_t j = i_f + 1; j + 1 < n; ++j) out.push_back(mid(j));
        if (s.kind == KnotStrategyKind::MidXX) out.push_back(0.5 * (3.0 * k[n - 1] - k[n - 2]));
        break;
    case KnotStrategyKind::Uniform: {
        // n + 1 equidistant points on [K_1, K_n], shifted so that the node nearest to F lands on F.
        const double h = (k[n - 1] - k[0]) / static_cast<double>(n);
        const auto nearest = static_cast<std::size_t>(std::clamp(std::round((f - k[0]) / h), 0.0, static_cast<double>(n)));
        const double shift = f - (k[0] + static_cast<double>(nearest) * h);
        for (std::size_t j = 0; j <= n; ++j) {
            const double x = j == nearest ? f : k[0] + static_cast<double>(j) * h + shift;
            out.push_back(x);
            if (j == nearest) out.push_back(f);
        }
        break;
    }
    }
    return out;
}

/// Full knot vector (L, L, L, interior..., U, U, U) plus the tying rule that leaves one free
/// parameter per strike. With `c3` false the forward is kept as a simple knot and no slot is
/// determined by the C3 condition.
inline BSplineKnots make_knot_vector(const KnotStrategy& strategy, double lower, double upper, bool c3 = true) {
    auto interior = interior_knots(strategy);
    if (!c3) {
        auto it = std::find(interior.begin(), interior.end(), strategy.forward);
        interior.erase(it);
    }
    for (double x : interior) {
        if (!(x > lower && x < upper)) {
            throw Error(ErrorCode::InvalidStrategy, "knot " + std::to_string(x) + " outside (L, U)");
        }
    }
    BSplineKnots out;
    out.knots = {lower, lower, lower};
    out.knots.insert(out.knots.end(), interior.begin(), interior.end());
    out.knots.insert(out.knots.end(), {upper, upper, upper});

    const std::size_t n = strategy.strikes.size();
    const std::size_t n_lambda = out.knots.size() - 3;
    std::optional<std::size_t> c3_slot;
    if (c3) {
        const auto first = std::find(out.knots.begin(), out.knots.end(), strategy.forward);
        c3_slot = static_cast<std::size_t>(first - out.knots.begin()) - 1;
        out.c3_slot = *c3_slot;
    }
    const std::size_t used = n + (c3 ? 1 : 0);
    if (n_lambda < used) throw Error(ErrorCode::InvalidStrategy, "knot vector has fewer coefficients than strikes");
    const std::size_t ties = n_lambda - used;
    const std::size_t front = (ties + 1) / 2;
    const std::size_t back = ties / 2;
    out.layout = make_tied_layout(n_lambda, front, back, c3_slot);
    return out;
}

/// Equidistributed subset {K_1, K_{1+j}, K_{1+2j}, ..., K_n} with j = max(1, round(n/m)).
inline std::vector<double> subsample_strikes(std::span<const double> strikes, std::size_t m) {
    const std::size_t n = strikes.size();
    if (m < 2 || m > n) throw Error(ErrorCode::InvalidCount, "need 2 <= m <= n");
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(n) / static_cast<double>(m))));
    std::vector<double> out;
    for (std::size_t i = 0; i < n; i += stride) out.push_back(strikes[i]);
    if (out.back() != strikes[n - 1]) out.push_back(strikes[n - 1]);
    return out;
}

// ---------------------------------------------------------------------------------------
// C3 fixed point

/// The determined slot p solves p = c V(F) (p_l / h_l + p_r / h_r) / (c V(F) (1/h_l + 1/h_r) - 1)
/// with c = 2 for the linear families and c = 4 for the quadratic B-spline.
struct C3Stencil {
    std::size_t slot = 0;
    std::size_t left_slot = 0;
    std::size_t right_slot = 0;
    double h_left = 1.0;
    double h_right = 1.0;
    double factor = 2.0;

    double update(std::span<const double> slots, double theta) const {
        const double ct = factor * theta;
        const double den = ct * (1.0 / h_left + 1.0 / h_right) - 1.0;
        if (std::abs(den) < 1e-12) {
            throw Error(ErrorCode::DenominatorNearZero, "C3 fixed-point denominator vanishes");
        }
        return ct * (slots[left_slot] / h_left + slots[right_slot] / h_right) / den;
    }
};

inline C3Stencil linear_c3_stencil(std::span<const double> knots, std::size_t forward_index) {
    C3Stencil st;
    st.slot = forward_index;
    st.left_slot = forward_index - 1;
    st.right_slot = forward_index + 1;
    st.h_left = knots[forward_index] - knots[forward_index - 1];
    st.h_right = knots[forward_index + 1] - knots[forward_index];
    st.factor = 2.0;
    return st;
}

inline C3Stencil bspline_c3_stencil(std::span<const double> t, std::size_t c3_slot) {
    C3Stencil st;
    st.slot = c3_slot;
    st.left_slot = c3_slot - 1;
    st.right_slot = c3_slot + 1;
    st.h_left = t[c3_slot + 2] - t[c3_slot];
    st.h_right = t[c3_slot + 3] - t[c3_slot + 1];
    st.factor = 4.0;
    return st;
}

struct FixedPointOptions {
    int iterations = 3;       // always performed
    int max_iterations = 10;  // extension while the residual exceeds the tolerance
    double tolerance = 1e-10;
    double floor = 1e-8;      // clamp value for a non-positive update
};

struct FixedPointResult {
    LVGSolution solution;
    std::vector<double> slots;
    double residual = 0.0;
    int iterations = 0;
    bool clamped = false;
    std::vector<double> residual_history;  // [0] after the initial solve, [k] after iteration k
};

namespace detail {

/// d V(F) / d slot for the solution `sol` of `lv`, where `lv_h` is the same function with
/// the slot moved by h. V is the Green's function at F of 2 / (a^2 T) - d^2/dx^2, so a
/// change da of the local volatility moves V(F) by the integral of 4 V^2 da / (a^3 T).
inline double forward_value_sensitivity(const LVGSolution& sol, const LocalVarianceFunction& lv,
                                        const LocalVarianceFunction& lv_h, double h) {
    constexpr int n = 64;  // Simpson intervals per piece
    double total = 0.0;
    for (std::size_t i = 0; i < lv.pieces.size(); ++i) {
        const auto& p = lv.pieces[i];
        const auto& q = lv_h.pieces[i];
        const double da = (q.alpha - p.alpha) / h, db = (q.beta - p.beta) / h, dc = (q.gamma - p.gamma) / h;
        if (da == 0.0 && db == 0.0 && dc == 0.0) continue;
        const double x0 = lv.knots[i], x1 = lv.knots[i + 1], step = (x1 - x0) / n;
        double sum = 0.0;
        for (int k = 0; k <= n; ++k) {
            // keep the nodes inside the piece so that value() picks piece i
            const double x = k == n ? std::nextafter(x1, x0) : x0 + k * step;
            const double a = p.value(x);
            const double v = sol.value(x);
            const double f = v * v * ((da * x + db) * x + dc) / (a * a * a);
            sum += (k == 0 || k == n ? 1.0 : (k % 2 ? 4.0 : 2.0)) * f;
        }
        total += sum * step / 3.0;
    }
    return 4.0 * total / lv.maturity;
}

} // namespace detail

/// Alternates the C3 update of the determined slot with a re-solve of the tridiagonal
/// system. `build` maps a full slot vector to a LocalVarianceFunction. The first solve uses
/// the slot implied by `theta_guess`; each of the following iterations updates the slot and
/// re-solves, so n iterations cost n + 1 solves. The value of V(F)
/// fed to the update is advanced by a Newton step on theta -> V(F; slot(theta)) - theta,
/// with the derivative of V(F) taken from the solution itself, so each iteration still
/// costs one solve. A secant step stands in when the derivative is unusable.
template <class Build>
FixedPointResult c3_fixed_point(Build&& build, std::vector<double> slots, const C3Stencil& stencil, double theta_guess,
                                const FixedPointOptions& options = {}) {
    FixedPointResult out;
    double theta_in = theta_guess;
    double prev_in = 0.0;
    double prev_gap = 0.0;
    bool have_prev = false;
    for (int it = 0; it <= options.max_iterations; ++it) {
        double value = stencil.update(slots, theta_in);
        bool clamped = false;
        if (!(value > 0.0)) {
            value = options.floor;
            clamped = true;
            out.clamped = true;
        }
        slots[stencil.slot] = value;
        auto lv = build(slots);
        out.solution = LVGSolution::solve(lv);
        const double theta_out = out.solution.theta_at_forward();
        out.residual = out.solution.c3_residual();
        out.residual_history.push_back(out.residual);
        out.iterations = it;
        if (it >= options.iterations && std::abs(out.residual) <= options.tolerance) break;
        if (it == options.max_iterations) break;

        const double gap = theta_out - theta_in;
        double next = theta_out;
        bool newton = false;
        if (!clamped) {
            try {
                const double h = 1e-6 * value;
                auto bumped = slots;
                bumped[stencil.slot] = value + h;
                const double dv = detail::forward_value_sensitivity(out.solution, lv, build(bumped), h);
                const double dt = 1e-6 * theta_in;
                const double ds = (stencil.update(slots, theta_in + dt) - value) / dt;
                const double step = gap / (1.0 - dv * ds);
                if (std::isfinite(step) && theta_in + step > 0.0) {
                    next = theta_in + step;
                    newton = true;
                }
            } catch (const Error&) {
            }
        }
        if (!newton && have_prev && !clamped && gap != prev_gap) {
            const double secant = theta_in - gap * (theta_in - prev_in) / (gap - prev_gap);
            if (std::isfinite(secant) && secant > 0.0) next = secant;
        }
        prev_in = theta_in;
        prev_gap = gap;
        have_prev = !clamped;
        theta_in = next;
    }
    out.slots = std::move(slots);
    return out;
}

} // namespace lvg
