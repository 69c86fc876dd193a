#pragma once

// The two reference RMSE grids: strike sets A-D against the five knot strategies, and the
// two Jaeckel cases against the three models.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "lvg/calibration.hpp"
#include "lvg/marketdata.hpp"

namespace lvg {

struct GridCell {
    std::string row;
    std::string column;
    std::string fixture;
    double rmse_vol = 0.0;
    double seconds = 0.0;
    double reference = 0.0;          // reference value, in the table's own unit
    std::optional<double> tolerance;  // on rmse_vol; none means reported only
    double time_limit = 0.0;          // 0 means no limit
    bool converged = false;
    std::string error;

    bool pass() const {
        if (!error.empty()) return false;
        if (tolerance && !(rmse_vol < *tolerance)) return false;
        if (time_limit > 0.0 && seconds >= time_limit) return false;
        return true;
    }
    std::string name() const { return row + "/" + column; }
};

struct Grid {
    std::string title;
    std::vector<std::string> rows;
    std::vector<std::string> columns;
    bool percent = false;  // reference values are in percent
    std::vector<GridCell> cells;

    std::vector<const GridCell*> failures() const {
        std::vector<const GridCell*> out;
        for (const auto& c : cells) {
            if (!c.pass()) out.push_back(&c);
        }
        return out;
    }
};

namespace detail {

inline void run_cell(GridCell& cell, const CalibrationConfig& config) {
    try {
        const auto r = calibrate(fixture(cell.fixture), config);
        cell.rmse_vol = r.rmse_vol;
        cell.seconds = r.seconds;
        cell.converged = r.converged();
    } catch (const Error& e) {
        cell.error = e.what();
    }
}

inline std::string sci(double v, int digits = 2) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*e", digits, v);
    return buf;
}

} // namespace detail

/// Flat 20% vols on sets A-D, quadratic model, every strike a parameter.
inline Grid lognormal_grid() {
    static constexpr double expected[4][5] = {{9.4e-8, 6.0e-3, 5.2e-3, 4.1e-8, 4.8e-9},
                                               {9.9e-9, 2.8e-3, 5.8e-1, 2.9e-6, 9.9e-3},
                                               {1.0e-6, 1.9e-3, 1.0e-2, 1.1e-8, 1.4e-3},
                                               {4.1e-4, 8.1e-2, 4.1e-2, 2.6e-5, 5.0e-7}};
    static constexpr KnotStrategyKind strategies[5] = {KnotStrategyKind::Strikes, KnotStrategyKind::MidStrikes,
                                                       KnotStrategyKind::MidX, KnotStrategyKind::MidXX,
                                                       KnotStrategyKind::Uniform};
    Grid g;
    g.title = "RMSE in implied volatility (%), quadratic model, flat 20% vols";
    g.rows = {"A", "B", "C", "D"};
    g.columns = {"strikes", "mid-strikes", "mid-x", "mid-xx", "uniform"};
    g.percent = true;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            GridCell cell;
            cell.row = g.rows[i];
            cell.column = g.columns[j];
            cell.fixture = "lognormal_" + g.rows[i];
            cell.reference = expected[i][j];
            cell.time_limit = 5.0;
            if (strategies[j] == KnotStrategyKind::Strikes || strategies[j] == KnotStrategyKind::MidXX) cell.tolerance = 1e-4;
            CalibrationConfig config;
            config.model = Model::Quadratic;
            config.knots = strategies[j];
            detail::run_cell(cell, config);
            g.cells.push_back(std::move(cell));
        }
    }
    return g;
}

/// Both Jaeckel cases with L = K_1 / 2 and U = 2 K_n.
inline Grid jackel_grid() {
    static constexpr double expected[3][2] = {{5.00e-13, 4.54e-6}, {3.64e-12, 8.04e-8}, {2.25e-12, 4.02e-4}};
    static constexpr Model models[3] = {Model::Bachelier, Model::Black, Model::Quadratic};
    static const std::optional<double> case2_tol[3] = {std::nullopt, 1e-5, 1e-3};
    Grid g;
    g.title = "RMSE in implied volatility, Jaeckel cases";
    g.rows = {"bachelier", "black", "quadratic"};
    g.columns = {"case I", "case II"};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            GridCell cell;
            cell.row = g.rows[i];
            cell.column = g.columns[j];
            cell.fixture = j == 0 ? "jackel_case1" : "jackel_case2";
            cell.reference = expected[i][j];
            cell.tolerance = j == 0 ? std::optional<double>(1e-6) : case2_tol[i];
            CalibrationConfig config;
            config.model = models[i];
            detail::run_cell(cell, config);
            g.cells.push_back(std::move(cell));
        }
    }
    return g;
}

/// Markdown table: one row per grid row, each cell "value (reference) status".
inline std::string grid_markdown(const Grid& g) {
    const double scale = g.percent ? 100.0 : 1.0;
    std::string out = "### " + g.title + "\n\n| |";
    for (const auto& c : g.columns) out += " " + c + " | reference |";
    out += " status |\n|---|";
    for (std::size_t j = 0; j < g.columns.size(); ++j) out += "---:|---:|";
    out += "---|\n";
    for (const auto& row : g.rows) {
        out += "| " + row + " |";
        std::string status;
        for (const auto& c : g.cells) {
            if (c.row != row) continue;
            out += " " + (c.error.empty() ? detail::sci(c.rmse_vol * scale) : std::string("error")) + " | " +
                   detail::sci(c.reference) + " |";
            if (!c.pass()) status += (status.empty() ? "FAIL " : ", ") + c.column;
        }
        out += " " + (status.empty() ? std::string("pass") : status) + " |\n";
    }
    return out;
}

} // namespace lvg
