#pragma once

// Undiscounted Black formula, Vega, and an implied-volatility inversion working on the
// normalized out-of-the-money price b(x, s) = price / sqrt(F K), x = -|ln(F/K)|, s = sigma sqrt(T).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lvg/error.hpp"
#include "lvg/pdde.hpp"

namespace lvg {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

namespace detail {

// erfc(u) exp(u^2), accurate for large u where both factors leave the double range.
inline double erfcx(double u) {
    if (u < 25.0) return std::exp(u * u) * std::erfc(u);
    const double inv = 1.0 / (2.0 * u * u);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 8; ++k) {
        term *= -(2.0 * k - 1.0) * inv;
        sum += term;
    }
    return sum / (u * std::sqrt(std::numbers::pi));
}

// Normalized OTM price for x <= 0. Written with erfcx so that neither term underflows
// before their common Gaussian factor is applied.
inline double normalized_otm(double x, double s) {
    if (s <= 0.0) return 0.0;
    const double d1 = x / s + 0.5 * s;
    const double d2 = d1 - s;
    if (d1 > -1.0) {
        return std::exp(0.5 * x) * norm_cdf(d1) - std::exp(-0.5 * x) * norm_cdf(d2);
    }
    const double gauss = std::exp(-0.5 * (x * x / (s * s) + 0.25 * s * s));
    return 0.5 * gauss * (erfcx(-d1 / std::numbers::sqrt2) - erfcx(-d2 / std::numbers::sqrt2));
}

// d b / d s
inline double normalized_vega(double x, double s) {
    return std::exp(-0.5 * (x * x / (s * s) + 0.25 * s * s)) / std::sqrt(2.0 * std::numbers::pi);
}

} // namespace detail

inline double black_price(double forward, double strike, double maturity, double vol, OptionKind kind) {
    const double s = vol * std::sqrt(maturity);
    const double x = -std::abs(std::log(forward / strike));
    const double otm = std::sqrt(forward * strike) * detail::normalized_otm(x, s);
    const bool call_otm = strike >= forward;
    const double intrinsic = kind == OptionKind::Call ? std::max(forward - strike, 0.0) : std::max(strike - forward, 0.0);
    if ((kind == OptionKind::Call) == call_otm) return otm;
    return otm + intrinsic;
}

/// Out-of-the-money (put below the forward, call above) undiscounted price.
inline double black_otm_price(double forward, double strike, double maturity, double vol) {
    return black_price(forward, strike, maturity, vol, strike >= forward ? OptionKind::Call : OptionKind::Put);
}

/// dPrice/dSigma, identical for calls and puts.
inline double black_vega(double forward, double strike, double maturity, double vol) {
    const double sqrt_t = std::sqrt(maturity);
    const double s = vol * sqrt_t;
    const double x = std::log(forward / strike);
    return std::sqrt(forward * strike) * detail::normalized_vega(x, s) * sqrt_t;
}

/// Black implied volatility of an undiscounted price. Newton on ln b(s) safeguarded by
/// bisection on a bracket; converges to a few ulps in s.
inline double implied_vol(double price, double forward, double strike, double maturity, OptionKind kind) {
    if (!(forward > 0.0 && strike > 0.0 && maturity > 0.0)) {
        throw Error(ErrorCode::InvalidParams, "forward, strike and maturity must be positive");
    }
    const double intrinsic = kind == OptionKind::Call ? std::max(forward - strike, 0.0) : std::max(strike - forward, 0.0);
    const double upper = kind == OptionKind::Call ? forward : strike;
    if (!(price < upper) || !std::isfinite(price)) {
        throw Error(ErrorCode::PriceOutOfBounds, "price at or above the no-arbitrage upper bound");
    }
    if (!(price > intrinsic)) {
        throw Error(ErrorCode::ArbitrageViolation, "price at or below intrinsic value");
    }
    const double otm = price - intrinsic;
    const double x = -std::abs(std::log(forward / strike));
    const double beta = otm / std::sqrt(forward * strike);
    const double beta_max = std::exp(0.5 * x);
    if (!(beta < beta_max)) {
        throw Error(ErrorCode::PriceOutOfBounds, "normalized price above its supremum");
    }
    const double target = std::log(beta);

    // Bracket s in [lo, hi] with b(lo) < beta < b(hi).
    double lo = 0.0;
    double hi = 1.0;
    while (detail::normalized_otm(x, hi) < beta) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e3) throw Error(ErrorCode::PriceOutOfBounds, "no volatility reproduces the price");
    }
    // Initial guess from the ATM approximation, clamped into the bracket.
    double s = std::clamp(std::sqrt(2.0 * std::numbers::pi) * beta + std::sqrt(2.0 * std::abs(x)), lo, hi);
    if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);

    for (int it = 0; it < 200; ++it) {
        const double b = detail::normalized_otm(x, s);
        if (b > beta) {
            hi = s;
        } else {
            lo = s;
        }
        double next;
        if (b > 0.0) {
            const double f = std::log(b) - target;
            const double df = detail::normalized_vega(x, s) / b;
            next = s - f / df;
        } else {
            next = 0.5 * (lo + hi);
        }
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 4.0 * std::numeric_limits<double>::epsilon() * s) {
            s = next;
            break;
        }
        s = next;
    }
    return s / std::sqrt(maturity);
}

} // namespace lvg
