#pragma once

// Command-line front end: calibrate, reproduce, eval, fixtures. run_cli returns the exit
// code; main() in tools/lvg.cpp only forwards argv.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lvg/calibration.hpp"
#include "lvg/marketdata.hpp"
#include "lvg/params_io.hpp"
#include "lvg/reproduce.hpp"

namespace lvg {

namespace cli {

inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kMaxIterations = 2;
inline constexpr int kReproductionFailed = 3;

struct GridSpec {
    double a = 0.0;
    double b = 0.0;
    std::size_t n = 0;
};

inline GridSpec parse_grid(const std::string& s) {
    const auto p1 = s.find(':');
    const auto p2 = p1 == std::string::npos ? std::string::npos : s.find(':', p1 + 1);
    if (p2 == std::string::npos) throw Error(ErrorCode::ParseError, "grid must be a:b:n, got '" + s + "'");
    const auto a = detail::to_double(std::string_view(s).substr(0, p1));
    const auto b = detail::to_double(std::string_view(s).substr(p1 + 1, p2 - p1 - 1));
    const auto n = detail::to_double(std::string_view(s).substr(p2 + 1));
    if (!a || !b || !n || *n < 2 || *n != static_cast<double>(static_cast<std::size_t>(*n))) {
        throw Error(ErrorCode::ParseError, "grid must be a:b:n, got '" + s + "'");
    }
    return {*a, *b, static_cast<std::size_t>(*n)};
}

inline std::optional<double> parse_bound(const std::string& s, const char* flag) {
    if (s.empty() || s == "auto") return std::nullopt;
    const auto v = detail::to_double(s);
    if (!v) throw Error(ErrorCode::ParseError, std::string(flag) + " must be a number or 'auto'");
    return *v;
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << text;
}

struct CalibrateArgs {
    std::string input;
    std::string fixture;
    std::string model = "quadratic";
    std::string knots = "mid-xx";
    std::size_t points = 0;
    std::string lower = "auto";
    std::string upper = "auto";
    std::string out;
    std::string objective = "price";
    std::string grid;
    std::size_t refine = 0;
    bool quote_grid = false;
    bool no_c3 = false;
};

inline int calibrate_command(const CalibrateArgs& a, std::ostream& out, std::ostream& err) {
    const auto model = parse_model(a.model);
    const auto knots = parse_knot_strategy(a.knots);
    if (!model) throw Error(ErrorCode::InvalidParams, "unknown model '" + a.model + "'");
    if (!knots) throw Error(ErrorCode::InvalidStrategy, "unknown knot strategy '" + a.knots + "'");
    if (a.objective != "price" && a.objective != "vol") throw Error(ErrorCode::InvalidParams, "objective must be price or vol");

    ParseReport report;
    QuoteSet quotes = a.fixture.empty() ? load_quote_csv(a.input, &report) : fixture(a.fixture);
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';

    CalibrationConfig config;
    config.model = *model;
    config.knots = *knots;
    config.points = a.points;
    config.lower = parse_bound(a.lower, "--lower");
    config.upper = parse_bound(a.upper, "--upper");
    config.c3 = !a.no_c3;
    config.objective = a.objective == "vol" ? Objective::Vol : Objective::Price;

    const auto r = calibrate(quotes, config);
    std::string prefix = a.out;
    if (prefix.empty()) {
        prefix = a.fixture.empty() ? std::filesystem::path(a.input).stem().string() : a.fixture;
    }

    std::vector<double> grid;
    if (a.quote_grid) {
        grid = quote_grid(quotes.strikes, a.refine);
    } else if (!a.grid.empty()) {
        const auto g = parse_grid(a.grid);
        grid = uniform_grid(g.a, g.b, g.n);
    } else {
        grid = uniform_grid(r.solution.lower(), r.solution.upper(), 2001);
    }
    const auto curve = emit_curve_csv(r.solution, grid, quotes.discount);
    write_file(prefix + ".params.json", emit_params_json(r, quotes.discount));
    write_file(prefix + ".curve.csv", curve);

    out << "quotes " << (quotes.name.empty() ? a.input : quotes.name) << " (" << quotes.size() << ")\n";
    out << "model " << to_string(r.model) << ", knots " << to_string(r.strategy) << ", parameters " << r.params.size()
        << (r.c3 ? ", C3 at forward" : "") << '\n';
    out << "rmse_vol " << fmt(r.rmse_vol) << '\n';
    out << "rmse_price " << fmt(r.rmse_price) << '\n';
    out << "iterations " << r.iterations << '\n';
    out << "status " << (r.converged() ? "converged" : "max_iterations") << '\n';
    if (r.c3) out << "c3_residual " << fmt(r.c3_residual) << '\n';
    if (r.cap_active) out << "note: a parameter sits at its upper bound\n";
    out << "wrote " << prefix << ".params.json, " << prefix << ".curve.csv\n";
    return r.converged() ? kOk : kMaxIterations;
}

inline int reproduce_command(const std::string& table, std::ostream& out, std::ostream& err) {
    Grid g;
    if (table == "lognormal") {
        g = lognormal_grid();
    } else if (table == "jackel") {
        g = jackel_grid();
    } else {
        throw Error(ErrorCode::InvalidParams, "table must be lognormal or jackel");
    }
    out << grid_markdown(g);
    const auto failed = g.failures();
    if (table == "lognormal") {
        int below = 0;
        for (const auto& row : g.rows) {
            bool ok = true;
            for (const auto& c : g.cells) {
                if (c.row == row && c.tolerance && !(c.rmse_vol < 1e-6)) ok = false;
            }
            below += ok;
        }
        out << "\nsets with strikes and mid-xx below 1e-6: " << below << " of 4\n";
    }
    for (const auto* c : failed) {
        err << "cell " << c->name() << " failed: ";
        if (!c->error.empty()) {
            err << c->error;
        } else {
            err << "rmse_vol " << fmt(c->rmse_vol);
            if (c->tolerance) err << " (tolerance " << fmt(*c->tolerance) << ")";
            err << ", " << c->seconds << " s";
        }
        err << '\n';
    }
    return failed.empty() ? kOk : kReproductionFailed;
}

inline int eval_command(const std::string& params, const std::vector<double>& strikes, bool density,
                        const std::string& grid, std::ostream& out) {
    const auto file = load_params_json(params);
    if (!grid.empty()) {
        const auto g = parse_grid(grid);
        out << emit_curve_csv(file.solution, uniform_grid(g.a, g.b, g.n), file.discount);
        return kOk;
    }
    if (strikes.empty()) throw Error(ErrorCode::InvalidParams, "give --strike or --grid");
    auto rows = evaluate_curve(file.solution, strikes);
    out << "strike,otm_price,call_price,implied_vol" << (density ? ",density" : "") << '\n';
    for (const auto& r : rows) {
        out << detail::format_double(r.strike) << ',' << detail::format_double(r.otm_price) << ','
            << detail::format_double(r.call_price) << ',' << detail::format_double(r.implied_vol);
        if (density) out << ',' << detail::format_double(r.density);
        out << '\n';
    }
    return kOk;
}

inline int fixtures_command(const std::string& dir, std::ostream& out) {
    if (dir.empty()) {
        for (const auto& n : fixture_names()) {
            const auto q = fixture(n);
            out << n << "  n=" << q.size() << " F=" << detail::format_double(q.forward)
                << " T=" << detail::format_double(q.maturity) << '\n';
        }
        return kOk;
    }
    std::filesystem::create_directories(dir);
    for (const auto& n : fixture_names()) {
        const auto path = (std::filesystem::path(dir) / (n + ".csv")).string();
        write_file(path, std::string(*fixture_text(n)));
        out << "wrote " << path << '\n';
    }
    return kOk;
}

} // namespace cli

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quadratic local variance gamma smile calibration", "lvg"};
    app.require_subcommand(1);

    cli::CalibrateArgs ca;
    auto* cal = app.add_subcommand("calibrate", "Fit a model to quotes and write <prefix>.params.json and <prefix>.curve.csv");
    auto* in_opt = cal->add_option("--input", ca.input, "Quote CSV file");
    auto* fx_opt = cal->add_option("--fixture", ca.fixture, "Built-in quote set");
    in_opt->excludes(fx_opt);
    cal->add_option("--model", ca.model, "bachelier | black | quadratic")->capture_default_str();
    cal->add_option("--knots", ca.knots, "strikes | mid-strikes | mid-x | mid-xx | uniform")->capture_default_str();
    cal->add_option("--points", ca.points, "Strikes carrying a parameter (0 = all)")->capture_default_str();
    cal->add_option("--lower", ca.lower, "Lower boundary L or auto (K_1 / 2)")->capture_default_str();
    cal->add_option("--upper", ca.upper, "Upper boundary U or auto (2 K_n)")->capture_default_str();
    cal->add_option("--out", ca.out, "Output prefix (default: fixture name or input stem)");
    cal->add_option("--objective", ca.objective, "price | vol")->capture_default_str();
    cal->add_option("--grid", ca.grid, "Curve grid a:b:n (default L:U:2001)");
    cal->add_flag("--quote-grid", ca.quote_grid, "Curve at the quoted strikes");
    cal->add_option("--refine", ca.refine, "Points inserted between quoted strikes with --quote-grid");
    cal->add_flag("--no-c3", ca.no_c3, "Leave the parameter at the forward free");

    std::string table;
    auto* rep = app.add_subcommand("reproduce", "Run a reference RMSE grid and print it as markdown");
    rep->add_option("--table", table, "lognormal | jackel")->required();

    std::string params, grid;
    std::vector<double> strikes;
    bool density = false;
    auto* ev = app.add_subcommand("eval", "Evaluate a saved model");
    ev->add_option("--params", params, "params.json written by calibrate")->required();
    ev->add_option("--strike", strikes, "Strike (repeatable)");
    ev->add_flag("--density", density, "Add the density column");
    ev->add_option("--grid", grid, "Emit a curve CSV on a:b:n");

    std::string export_dir;
    auto* fx = app.add_subcommand("fixtures", "List the built-in quote sets or export them");
    fx->add_option("--export", export_dir, "Directory to write the CSV files to");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
        if (cal->parsed() && ca.input.empty() && ca.fixture.empty()) {
            throw CLI::RequiredError("--input or --fixture");
        }
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return cli::kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return cli::kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return cli::kInputError;
    }

    try {
        if (cal->parsed()) return cli::calibrate_command(ca, out, err);
        if (rep->parsed()) return cli::reproduce_command(table, out, err);
        if (ev->parsed()) return cli::eval_command(params, strikes, density, grid, out);
        if (fx->parsed()) return cli::fixtures_command(export_dir, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return cli::kInputError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return cli::kInputError;
    }
    return cli::kInputError;
}

} // namespace lvg
