#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lvg/black.hpp"
#include "lvg/error.hpp"

namespace lvg {

/// Market quotes for one maturity. Prices are undiscounted out-of-the-money prices.
struct QuoteSet {
    std::string name;
    std::vector<double> strikes;
    std::vector<double> vols;
    std::vector<double> prices;   // filled from vols by complete() when empty
    std::vector<double> weights;  // mu_i; defaults to one
    std::vector<double> bids;     // optional bid vols
    std::vector<double> asks;     // optional ask vols
    double forward = 0.0;
    double maturity = 0.0;
    std::optional<double> discount;
    std::optional<double> spot;

    std::size_t size() const noexcept { return strikes.size(); }

    void validate() const {
        const auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidQuotes, m); };
        if (strikes.empty()) fail("no quotes");
        if (vols.size() != strikes.size()) fail("one vol per strike required");
        if (!weights.empty() && weights.size() != strikes.size()) fail("one weight per strike required");
        if (!prices.empty() && prices.size() != strikes.size()) fail("one price per strike required");
        if (bids.size() != asks.size() || (!bids.empty() && bids.size() != strikes.size())) fail("bid/ask columns incomplete");
        if (!(forward > 0.0) || !std::isfinite(forward)) fail("forward must be positive");
        if (!(maturity > 0.0) || !std::isfinite(maturity)) fail("maturity must be positive");
        if (discount && !(*discount > 0.0)) fail("discount factor must be positive");
        for (std::size_t i = 0; i < strikes.size(); ++i) {
            if (!(strikes[i] > 0.0) || !std::isfinite(strikes[i])) fail("strikes must be positive");
            if (i > 0 && !(strikes[i] > strikes[i - 1])) fail("strikes must be strictly increasing");
            if (!(vols[i] > 0.0) || !std::isfinite(vols[i])) fail("vols must be positive");
        }
        if (!weights.empty()) {
            bool any = false;
            for (double w : weights) {
                if (!(w >= 0.0) || !std::isfinite(w)) fail("weights must be nonnegative");
                any = any || w > 0.0;
            }
            if (!any) fail("all weights are zero");
        }
    }

    double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }

    /// Fills missing weights with one and missing prices from the vols.
    void complete() {
        if (weights.empty()) weights.assign(strikes.size(), 1.0);
        if (prices.empty()) {
            prices.resize(strikes.size());
            for (std::size_t i = 0; i < strikes.size(); ++i) {
                prices[i] = black_otm_price(forward, strikes[i], maturity, vols[i]);
            }
        }
    }

    /// Market vol at x, linear in strike between quotes and flat outside.
    double vol_at(double x) const {
        if (x <= strikes.front()) return vols.front();
        if (x >= strikes.back()) return vols.back();
        const auto it = std::upper_bound(strikes.begin(), strikes.end(), x);
        const auto j = static_cast<std::size_t>(it - strikes.begin());
        const double w = (x - strikes[j - 1]) / (strikes[j] - strikes[j - 1]);
        return (1.0 - w) * vols[j - 1] + w * vols[j];
    }
};

} // namespace lvg
