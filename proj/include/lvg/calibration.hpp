#pragma once

// Calibration of the linear Bachelier, linear Black and quadratic B-spline local variance
// families to a QuoteSet: capped inverse-Vega weighted price residuals, positivity through
// p = u^2 + eps, C3 fixed point inside every residual evaluation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "lvg/black.hpp"
#include "lvg/error.hpp"
#include "lvg/levenberg_marquardt.hpp"
#include "lvg/parameterization.hpp"
#include "lvg/pdde.hpp"
#include "lvg/quotes.hpp"

namespace lvg {

// Price: weighted price residuals, reached through a vol-residual warm start.
// Vol: vol residuals only.
enum class Objective { Price, Vol };

struct CalibrationConfig {
    Model model = Model::Quadratic;
    KnotStrategyKind knots = KnotStrategyKind::MidXX;
    std::size_t points = 0;  // number of strikes carrying a parameter; 0 means all quotes
    std::optional<double> lower;  // default K_1 / 2
    std::optional<double> upper;  // default 2 K_n
    bool c3 = true;
    double epsilon = 1e-8;
    double cap_multiple = 1000.0;  // parameters capped at this multiple of the largest market level
    Objective objective = Objective::Price;
    LMOptions lm;
    FixedPointOptions fixed_point;
};

/// w = min(1 / vega, 1e6 / F) mu.
inline double vega_weight(double vega, double mu, double forward) {
    if (mu == 0.0) return 0.0;
    const double cap = 1e6 / forward;
    return (vega > 0.0 ? std::min(1.0 / vega, cap) : cap) * mu;
}

/// Weights for every quote, with vega from the market vols.
inline std::vector<double> vega_weights(const QuoteSet& q) {
    std::vector<double> w(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double mu = q.weight(i);
        w[i] = mu == 0.0 ? 0.0 : vega_weight(black_vega(q.forward, q.strikes[i], q.maturity, q.vols[i]), mu, q.forward);
    }
    return w;
}

class CalibrationProblem {
public:
    struct Evaluation {
        LVGSolution solution;
        std::vector<double> slots;
        double c3_residual = 0.0;
        int c3_iterations = 0;
        bool c3_clamped = false;
    };

    struct Residuals {
        std::vector<double> values;
        bool penalized = false;  // construction failed; values hold a flat penalty
    };

    static constexpr double kPenalty = 1e10;

    CalibrationProblem(QuoteSet quotes, CalibrationConfig config) : quotes_(std::move(quotes)), config_(std::move(config)) {
        quotes_.validate();
        quotes_.complete();
        const auto& k = quotes_.strikes;
        if (k.size() < 2) throw Error(ErrorCode::InvalidQuotes, "calibration needs at least two quotes");
        lower_ = config_.lower.value_or(0.5 * k.front());
        upper_ = config_.upper.value_or(2.0 * k.back());
        if (!(lower_ > 0.0 && lower_ < k.front() && upper_ > k.back())) {
            throw Error(ErrorCode::InvalidParams, "need 0 < L < K_1 and U > K_n");
        }
        const std::size_t m = config_.points == 0 ? k.size() : config_.points;
        used_ = m >= k.size() ? k : subsample_strikes(k, m);
        weights_ = vega_weights(quotes_);

        double level = 0.0;
        for (std::size_t i = 0; i < k.size(); ++i) {
            level = std::max(level, config_.model == Model::Black ? quotes_.vols[i] : quotes_.vols[i] * k[i]);
        }
        const double atm = quotes_.vol_at(quotes_.forward);
        initial_level_ = config_.model == Model::Black ? atm : atm * quotes_.forward;
        transform_.epsilon = config_.epsilon;
        transform_.upper = config_.cap_multiple * std::max(level, initial_level_);
        atm_value_ = black_otm_price(quotes_.forward, quotes_.forward, quotes_.maturity, atm);

        if (config_.model == Model::Quadratic) {
            setup_bspline();
        } else {
            setup_linear();
        }
    }

    const QuoteSet& quotes() const noexcept { return quotes_; }
    const CalibrationConfig& config() const noexcept { return config_; }
    const std::vector<double>& knots() const noexcept { return knots_; }
    const ParameterLayout& layout() const noexcept { return layout_; }
    const std::optional<C3Stencil>& stencil() const noexcept { return stencil_; }
    const std::vector<double>& strikes_used() const noexcept { return used_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    const PositiveTransform& transform() const noexcept { return transform_; }
    std::size_t free_count() const noexcept { return layout_.free_count; }
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    /// Market value of the at-the-money option, the starting guess for V(F) in the fixed point.
    double market_atm_value() const noexcept { return atm_value_; }

    /// Flat start at the at-the-money level.
    std::vector<double> flat_params() const { return std::vector<double>(free_count(), initial_level_); }

    /// Each free parameter starts at the market level (sigma K, or sigma for Black) at the
    /// location of its first slot: the knot itself for the linear families, the Greville
    /// abscissa for the B-spline.
    std::vector<double> initial_params() const {
        std::vector<double> out(free_count(), 0.0);
        std::vector<bool> seen(free_count(), false);
        for (std::size_t j = 0; j < layout_.slot_count(); ++j) {
            const int src = layout_.source[j];
            if (src < 0 || seen[static_cast<std::size_t>(src)]) continue;
            const double x = config_.model == Model::Quadratic ? 0.5 * (knots_[j + 1] + knots_[j + 2]) : knots_[j];
            const double v = quotes_.vol_at(x);
            out[static_cast<std::size_t>(src)] = std::min(config_.model == Model::Black ? v : v * x, 0.5 * transform_.upper);
            seen[static_cast<std::size_t>(src)] = true;
        }
        return out;
    }

    LocalVarianceFunction build(const std::vector<double>& slots) const {
        if (config_.model == Model::Quadratic) {
            return build_bspline_localvar({knots_, slots}, quotes_.forward, quotes_.maturity, config_.c3);
        }
        const auto kind = config_.model == Model::Bachelier ? LinearKind::Bachelier : LinearKind::Black;
        return build_linear_localvar({slots, kind}, knots_, quotes_.forward, quotes_.maturity);
    }

    Evaluation evaluate(const std::vector<double>& params, const FixedPointOptions& options) const {
        Evaluation ev;
        if (!stencil_) {
            ev.slots = layout_.expand(params, 0.0);
            ev.solution = LVGSolution::solve(build(ev.slots));
            return ev;
        }
        auto slots = layout_.expand(params, initial_level_);
        auto fp = c3_fixed_point([this](const std::vector<double>& s) { return build(s); }, std::move(slots), *stencil_,
                                 atm_value_, options);
        ev.solution = std::move(fp.solution);
        ev.slots = std::move(fp.slots);
        ev.c3_residual = fp.residual;
        ev.c3_iterations = fp.iterations;
        ev.c3_clamped = fp.clamped;
        return ev;
    }

    Evaluation evaluate(const std::vector<double>& params) const { return evaluate(params, config_.fixed_point); }

    std::vector<double> model_prices(const LVGSolution& sol) const {
        std::vector<double> out(quotes_.size());
        for (std::size_t i = 0; i < quotes_.size(); ++i) out[i] = sol.value(quotes_.strikes[i]);
        return out;
    }

    /// Black vols of the model prices; zero where the model price carries no time value.
    std::vector<double> model_vols(const LVGSolution& sol) const {
        std::vector<double> out(quotes_.size());
        for (std::size_t i = 0; i < quotes_.size(); ++i) {
            const double k = quotes_.strikes[i];
            const double v = sol.value(k);
            const auto kind = k >= quotes_.forward ? OptionKind::Call : OptionKind::Put;
            try {
                out[i] = implied_vol(v, quotes_.forward, k, quotes_.maturity, kind);
            } catch (const Error&) {
                out[i] = 0.0;
            }
        }
        return out;
    }

    /// w_i (model OTM price - market OTM price).
    Residuals residuals_price(const std::vector<double>& params) const {
        Residuals out;
        try {
            const auto ev = evaluate(params);
            const auto p = model_prices(ev.solution);
            out.values.resize(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) out.values[i] = weights_[i] * (p[i] - quotes_.prices[i]);
        } catch (const Error&) {
            out.values.assign(quotes_.size(), kPenalty);
            out.penalized = true;
        }
        return out;
    }

    /// mu_i (model vol - market vol).
    Residuals residuals_vol(const std::vector<double>& params) const {
        Residuals out;
        try {
            const auto ev = evaluate(params);
            const auto v = model_vols(ev.solution);
            out.values.resize(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) out.values[i] = quotes_.weight(i) * (v[i] - quotes_.vols[i]);
        } catch (const Error&) {
            out.values.assign(quotes_.size(), kPenalty);
            out.penalized = true;
        }
        return out;
    }

private:
    void setup_bspline() {
        KnotStrategy strategy{config_.knots, used_, quotes_.forward};
        auto kv = make_knot_vector(strategy, lower_, upper_, config_.c3);
        knots_ = std::move(kv.knots);
        layout_ = std::move(kv.layout);
        if (config_.c3) stencil_ = bspline_c3_stencil(knots_, kv.c3_slot);
    }

    // Knots L, strikes (plus the forward when it is not quoted), U; sigma_0 = sigma_1 and
    // sigma_{m+1} = sigma_m. The C3 condition fixes sigma at the forward only when the forward
    // was inserted, otherwise the fit would have one parameter less than quotes.
    void setup_linear() {
        const double f = quotes_.forward;
        if (f < used_.front() || f > used_.back()) throw Error(ErrorCode::InvalidStrategy, "forward outside [K_1, K_n]");
        knots_.clear();
        knots_.push_back(lower_);
        knots_.insert(knots_.end(), used_.begin(), used_.end());
        const bool inserted = std::find(used_.begin(), used_.end(), f) == used_.end();
        if (inserted) knots_.insert(std::upper_bound(knots_.begin(), knots_.end(), f), f);
        knots_.push_back(upper_);
        const auto s = static_cast<std::size_t>(std::find(knots_.begin(), knots_.end(), f) - knots_.begin());
        std::optional<std::size_t> c3_slot;
        if (config_.c3 && inserted) c3_slot = s;
        layout_ = make_tied_layout(knots_.size(), 1, 1, c3_slot);
        if (c3_slot) stencil_ = linear_c3_stencil(knots_, s);
    }

    QuoteSet quotes_;
    CalibrationConfig config_;
    double lower_ = 0.0;
    double upper_ = 0.0;
    double initial_level_ = 0.0;
    double atm_value_ = 0.0;
    std::vector<double> used_;
    std::vector<double> weights_;
    std::vector<double> knots_;
    ParameterLayout layout_;
    std::optional<C3Stencil> stencil_;
    PositiveTransform transform_;
};

struct CalibrationResult {
    Model model = Model::Quadratic;
    KnotStrategyKind strategy = KnotStrategyKind::MidXX;
    bool c3 = true;
    std::vector<double> knots;   // B-spline knot vector, or the linear interpolation knots
    std::vector<double> params;  // free parameters
    std::vector<double> slots;   // lambda or sigma per slot, including the C3-determined one
    LVGSolution solution;
    std::vector<double> model_prices;
    std::vector<double> model_vols;
    double rmse_vol = 0.0;
    double rmse_price = 0.0;
    int iterations = 0;
    int evaluations = 0;
    LMStatus status = LMStatus::MaxIterations;
    std::vector<double> objective_trace;  // sum of squared weighted residuals
    double c3_residual = 0.0;
    int c3_iterations = 0;
    bool c3_clamped = false;
    bool cap_active = false;  // some parameter ends within 1% of its upper bound
    double seconds = 0.0;

    bool converged() const noexcept { return status == LMStatus::Converged; }
    const LocalVarianceFunction& localvar() const noexcept { return solution.localvar(); }
};

/// Root mean square over quotes with positive weight.
inline double rmse(const std::vector<double>& model, const std::vector<double>& market, const QuoteSet& q) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (q.weight(i) <= 0.0) continue;
        const double d = model[i] - market[i];
        sum += d * d;
        ++count;
    }
    return count == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(count));
}

inline CalibrationResult calibrate(const CalibrationProblem& problem) {
    const auto start = std::chrono::steady_clock::now();
    const auto& tr = problem.transform();

    const auto residual_fn = [&](bool by_price) -> ResidualFunction {
        return [&problem, &tr, by_price](const std::vector<double>& u, std::vector<double>& r) {
            if (!tr.admissible(u)) return false;
            const auto p = tr.to_params(u);
            auto res = by_price ? problem.residuals_price(p) : problem.residuals_vol(p);
            r = std::move(res.values);
            return !res.penalized;
        };
    };
    // Vol residuals first: far out of the money the capped inverse-Vega weights make the
    // price objective strongly nonlinear in the parameters, and Gauss-Newton steps from a
    // distant start stall there.
    const bool by_price = problem.config().objective == Objective::Price;
    auto lm = levenberg_marquardt(residual_fn(false), tr.to_free(problem.initial_params()), problem.config().lm);
    if (by_price) {
        auto polish = levenberg_marquardt(residual_fn(true), lm.x, problem.config().lm);
        polish.iterations += lm.iterations;
        polish.evaluations += lm.evaluations;
        lm = std::move(polish);
    }
    // A second start from the flat at-the-money level. Clustered knots can send the local
    // start into a rough minimum that the flat start avoids.
    int spent = lm.evaluations;
    try {
        auto alt = levenberg_marquardt(residual_fn(by_price), tr.to_free(problem.flat_params()), problem.config().lm);
        spent += alt.evaluations;
        if (alt.objective < lm.objective) lm = std::move(alt);
    } catch (const Error&) {
    }
    lm.evaluations = spent;

    CalibrationResult out;
    out.model = problem.config().model;
    out.strategy = problem.config().knots;
    out.c3 = problem.stencil().has_value();
    out.knots = problem.knots();
    out.params = tr.to_params(lm.x);
    for (double u : lm.x) out.cap_active = out.cap_active || tr.near_upper(u);
    auto ev = problem.evaluate(out.params);
    out.slots = std::move(ev.slots);
    out.c3_residual = ev.c3_residual;
    out.c3_iterations = ev.c3_iterations;
    out.c3_clamped = ev.c3_clamped;
    out.solution = std::move(ev.solution);
    out.model_prices = problem.model_prices(out.solution);
    out.model_vols = problem.model_vols(out.solution);
    out.rmse_vol = rmse(out.model_vols, problem.quotes().vols, problem.quotes());
    out.rmse_price = rmse(out.model_prices, problem.quotes().prices, problem.quotes());
    out.iterations = lm.iterations;
    out.evaluations = lm.evaluations;
    out.status = lm.status;
    out.objective_trace.reserve(lm.trace.size());
    for (double f : lm.trace) out.objective_trace.push_back(2.0 * f);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

inline CalibrationResult calibrate(const QuoteSet& quotes, const CalibrationConfig& config) {
    return calibrate(CalibrationProblem(quotes, config));
}

} // namespace lvg
