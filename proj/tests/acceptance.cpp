// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lvg/calibration.hpp"
#include "lvg/marketdata.hpp"
#include "lvg/reproduce.hpp"
#include "oracles.hpp"
#include "sampling.hpp"

using namespace lvg;

namespace {

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

bool market(const std::string& name) { return name == "spx_1w" || name == "spx_1m" || name == "tsla_1m"; }

CalibrationConfig config_for(const std::string& name) {
    CalibrationConfig c;
    if (market(name)) c.points = 10;
    return c;
}

const std::map<std::string, CalibrationResult>& fits() {
    static const auto all = [] {
        std::map<std::string, CalibrationResult> out;
        for (const auto& n : fixture_names()) out.emplace(n, calibrate(fixture(n), config_for(n)));
        return out;
    }();
    return all;
}

void lognormal_grid_criterion() {
    const auto g = lognormal_grid();
    bool ok = true;
    double worst = 0.0, slowest = 0.0;
    int below = 0;
    for (const auto& row : g.rows) {
        bool tight = true;
        for (const auto& c : g.cells) {
            if (c.row != row) continue;
            slowest = std::max(slowest, c.seconds);
            ok = ok && c.error.empty() && c.seconds < 5.0;
            if (!c.tolerance) continue;
            worst = std::max(worst, c.rmse_vol);
            ok = ok && c.rmse_vol < 1e-4;
            tight = tight && c.rmse_vol < 1e-6;
        }
        below += tight;
    }
    ok = ok && below >= 3;
    report("lognormal-grid", ok,
           "worst strikes/mid-xx rmse_vol " + sci(worst) + ", sets below 1e-6: " + std::to_string(below) +
               " of 4, slowest cell " + sci(slowest) + " s");
}

void jackel_criterion() {
    const auto g = jackel_grid();
    std::map<std::string, double> v;
    bool errors = false;
    for (const auto& c : g.cells) {
        v[c.name()] = c.rmse_vol;
        errors = errors || !c.error.empty();
    }
    const bool case1 = v["bachelier/case I"] < 1e-6 && v["black/case I"] < 1e-6 && v["quadratic/case I"] < 1e-6;
    const bool case2 = v["quadratic/case II"] <= 1e-3 && v["black/case II"] <= 1e-5;
    report("jackel-case-I", case1 && !errors,
           "bachelier " + sci(v["bachelier/case I"]) + ", black " + sci(v["black/case I"]) + ", quadratic " +
               sci(v["quadratic/case I"]));
    report("jackel-case-II", case2 && !errors,
           "quadratic " + sci(v["quadratic/case II"]) + ", black " + sci(v["black/case II"]) + " (bachelier " +
               sci(v["bachelier/case II"]) + ")");
}

void jump_criterion() {
    double worst = 0.0;
    std::string at;
    for (const auto& [name, r] : fits()) {
        const double e = std::abs(r.solution.jump_at_forward() - 1.0);
        if (!(e <= worst)) {
            worst = e;
            at = name;
        }
    }
    report("jump-condition", worst <= 1e-8, "max |jump - 1| " + sci(worst) + " (" + at + ")");
}

void ode_criterion() {
    std::mt19937_64 rng(31);
    double residual = 0.0, fd = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto lv = sample::random_localvar(rng, i);
        const auto sol = LVGSolution::solve(lv);
        residual = std::max(residual, sample::ode_residual(sol, rng, 500));
        const auto ref = oracle::fd_bvp(lv, 20000);
        double vmax = 0.0, err = 0.0;
        for (std::size_t j = 0; j < ref.x.size(); ++j) {
            const double v = sol.value(ref.x[j]);
            vmax = std::max(vmax, v);
            err = std::max(err, std::abs(v - ref.v[j]));
        }
        fd = std::max(fd, err / vmax);
    }
    report("ode-residual", residual <= 1e-6, "max |V - a^2 T V''/2| / (1 + V) " + sci(residual) + " over 20 x 500 points");
    report("fd-oracle", fd <= 1e-5, "max sup-norm relative gap " + sci(fd) + " over 20 functions");
}

void complex_criterion() {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int tested[4] = {0, 0, 0, 0};
    double worst = 0.0;
    for (int c = 0; c < 4; ++c) {
        int attempts = 0;
        while (tested[c] < 2600 && attempts++ < 20000) {
            QuadraticPiece p;
            double T;
            if (!sample::random_piece(rng, static_cast<sample::Case>(c), p, T)) continue;
            PieceKernel k;
            try {
                k = classify_piece(p, T);
            } catch (const Error&) {
                continue;
            }
            const double v0 = u(rng), d0 = 2.0 * u(rng) - 1.0;
            double vals[5], refs[5], scale = 0.0;
            for (int j = 0; j < 5; ++j) {
                const double x = p.x_left + (p.x_right - p.x_left) * (j + 1) / 5.0;
                vals[j] = sample::kernel_value(k, x, v0, d0);
                refs[j] = oracle::complex_value(p.alpha, p.beta, p.gamma, T, p.x_left, x, v0, d0);
                scale = std::max(scale, std::abs(refs[j]));
            }
            for (int j = 0; j < 5; ++j) worst = std::max(worst, std::abs(vals[j] - refs[j]) / scale);
            ++tested[c];
        }
    }
    const int total = tested[0] + tested[1] + tested[2] + tested[3];
    const bool all_cases = tested[0] > 0 && tested[1] > 0 && tested[2] > 0 && tested[3] > 0;
    report("complex-equivalence", worst <= 1e-12 && total >= 10000 && all_cases,
           std::to_string(total) + " pieces (" + std::to_string(tested[0]) + "/" + std::to_string(tested[1]) + "/" +
               std::to_string(tested[2]) + "/" + std::to_string(tested[3]) + "), max relative gap " + sci(worst));
}

// Boundaries are wide when a lognormal at the wing vols leaves less than 1e-3 beyond them.
bool wide_boundaries(const QuoteSet& q, const LVGSolution& s) {
    const auto N = [](double y) { return 0.5 * std::erfc(-y / std::sqrt(2.0)); };
    const auto d2 = [&](double K, double vol) {
        const double sd = vol * std::sqrt(q.maturity);
        return (std::log(q.forward / K) - 0.5 * sd * sd) / sd;
    };
    return N(-d2(s.lower(), q.vols.front())) < 1e-3 && N(d2(s.upper(), q.vols.back())) < 1e-3;
}

void arbitrage_criterion() {
    double worst_d2 = 0.0, worst_slope = -1e300, worst_density = 0.0, mass_lo = 1e300, mass_hi = -1e300, mean_gap = 0.0;
    std::string at_mass, at_mean, narrow;
    for (const auto& [name, r] : fits()) {
        const auto& s = r.solution;
        const double F = s.forward();
        const auto x = uniform_grid(s.lower(), s.upper(), 2001);
        std::vector<double> call(x.size()), g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            call[i] = s.price(x[i], OptionKind::Call);
            g[i] = s.density(x[i]);
            worst_density = std::min(worst_density, g[i]);
        }
        for (std::size_t i = 1; i < x.size(); ++i) {
            worst_slope = std::max(worst_slope, call[i] - call[i - 1]);
            if (i + 1 < x.size()) worst_d2 = std::min(worst_d2, call[i + 1] - 2.0 * call[i] + call[i - 1]);
        }
        if (!wide_boundaries(fixture(name), s)) {
            narrow += (narrow.empty() ? "" : ", ") + name;
            continue;
        }
        // Simpson on the 2000 intervals
        const double h = x[1] - x[0];
        double mass = 0.0, first = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double w = (i == 0 || i + 1 == x.size()) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            mass += w * g[i];
            first += w * g[i] * x[i];
        }
        mass *= h / 3.0;
        first *= h / 3.0;
        if (mass < mass_lo) mass_lo = mass, at_mass = name;
        mass_hi = std::max(mass_hi, mass);
        const double gap = std::abs(first - F) / F;
        if (gap > mean_gap) mean_gap = gap, at_mean = name;
    }
    report("no-arbitrage-convex", worst_d2 >= -1e-10 && worst_slope <= 1e-10,
           "min second difference " + sci(worst_d2) + ", max call increment " + sci(worst_slope));
    report("no-arbitrage-density", worst_density >= 0.0, "min density " + sci(worst_density));
    report("no-arbitrage-mass", mass_lo >= 0.99 && mass_hi <= 1.0,
           "integral of density in [" + sci(mass_lo) + ", " + sci(mass_hi) + "] (lowest " + at_mass +
               "; not wide: " + narrow + ")");
    report("no-arbitrage-mean", mean_gap <= 1e-2, "max |mean - F| / F " + sci(mean_gap) + " (" + at_mean + ")");
}

double max_density(const LVGSolution& s, const std::vector<double>& grid) {
    double m = 0.0;
    for (double y : grid) m = std::max(m, s.density(y));
    return m;
}

void c3_efficacy_criterion() {
    const auto q = fixture("lognormal_flat");
    CalibrationConfig with;
    with.knots = KnotStrategyKind::Strikes;
    const auto a = calibrate(q, with);
    const auto grid = uniform_grid(a.solution.lower(), a.solution.upper(), 20001);
    double ref = 0.0;
    for (double y : grid) ref = std::max(ref, oracle::lognormal_density(y, q.forward, 0.2, q.maturity));
    const double ga = max_density(a.solution, grid) / ref;

    // the largest spike over the knot strategies
    double gb = 0.0;
    std::string at;
    for (auto k : {KnotStrategyKind::Strikes, KnotStrategyKind::MidStrikes, KnotStrategyKind::MidX, KnotStrategyKind::MidXX,
                   KnotStrategyKind::Uniform}) {
        CalibrationConfig without;
        without.knots = k;
        without.c3 = false;
        const double g = max_density(calibrate(q, without).solution, grid) / ref;
        if (g > gb) gb = g, at = std::string(to_string(k));
    }
    report("c3-efficacy", ga <= 1.25 && gb > 2.0,
           "max density / lognormal max: with " + sci(ga) + " (strikes), without " + sci(gb) + " (" + at + ")");
}

void fixed_point_criterion() {
    double worst = 0.0;
    std::string at;
    int covered = 0;
    for (const auto& [name, r] : fits()) {
        const CalibrationProblem problem(fixture(name), config_for(name));
        if (!problem.stencil()) continue;
        FixedPointOptions opt;
        opt.iterations = opt.max_iterations = 3;
        opt.tolerance = 0.0;
        const auto ev = problem.evaluate(r.params, opt);
        const double e = std::abs(ev.solution.c3_residual());
        ++covered;
        if (!(e <= worst)) worst = e, at = name;
    }
    report("c3-fixed-point", worst <= 1e-8 && covered > 0,
           "max |C3 residual| after 3 iterations " + sci(worst) + " (" + at + ", " + std::to_string(covered) + " fixtures)");
}

void market_criterion() {
    const double spx = fits().at("spx_1m").rmse_vol, tsla = fits().at("tsla_1m").rmse_vol;
    report("market-fit", spx < 5e-3 && tsla < 5e-3, "spx_1m " + sci(spx) + ", tsla_1m " + sci(tsla) + " with 10 knots");
}

} // namespace

int main() {
    lognormal_grid_criterion();
    jackel_criterion();
    jump_criterion();
    ode_criterion();
    complex_criterion();
    arbitrage_criterion();
    c3_efficacy_criterion();
    fixed_point_criterion();
    market_criterion();
    std::printf("%d failed\n", failures);
    return failures == 0 ? 0 : 1;
}
