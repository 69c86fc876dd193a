#pragma once

// Levenberg-Marquardt for small dense least-squares problems with a forward-difference
// Jacobian. Positivity of the model parameters is handled outside, through
// PositiveTransform (p = u^2 + eps, optionally capped).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "lvg/error.hpp"

namespace lvg {

struct LMOptions {
    int max_iterations = 200;
    double gradient_tol = 1e-10;
    double step_tol = 1e-12;
    double objective_tol = 1e-30;  // stop once 0.5 |r|^2 falls below this
    double fd_step = 1e-7;
    double initial_damping = 1e-3;
};

enum class LMStatus { Converged, MaxIterations };

struct LMResult {
    std::vector<double> x;
    std::vector<double> residuals;
    double objective = 0.0;  // 0.5 |r|^2
    int iterations = 0;
    int evaluations = 0;
    LMStatus status = LMStatus::MaxIterations;
    std::vector<double> trace;  // objective after start and after every accepted step
};

/// Residual callback: fills r for parameters x and returns false when x cannot be evaluated.
using ResidualFunction = std::function<bool(const std::vector<double>& x, std::vector<double>& r)>;

namespace detail {

inline bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

inline double half_norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double a : v) s += a * a;
    return 0.5 * s;
}

} // namespace detail

inline LMResult levenberg_marquardt(const ResidualFunction& fn, std::vector<double> x0, const LMOptions& opt = {}) {
    LMResult out;
    const auto n = static_cast<Eigen::Index>(x0.size());
    std::vector<double> r;
    ++out.evaluations;
    if (!fn(x0, r) || !detail::all_finite(r)) {
        throw Error(ErrorCode::NonFiniteResidual, "residuals not finite at the starting point");
    }
    const auto m = static_cast<Eigen::Index>(r.size());
    std::vector<double> x = std::move(x0);
    double f = detail::half_norm2(r);
    out.trace.push_back(f);

    Eigen::MatrixXd jac(m, n);
    std::vector<double> xp(x.size()), rp;
    const auto jacobian = [&]() {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            double h = opt.fd_step * (1.0 + std::abs(x[ju]));
            xp = x;
            xp[ju] = x[ju] + h;
            ++out.evaluations;
            bool ok = fn(xp, rp) && detail::all_finite(rp);
            if (!ok) {
                h = -h;
                xp[ju] = x[ju] + h;
                ++out.evaluations;
                ok = fn(xp, rp) && detail::all_finite(rp);
            }
            for (Eigen::Index i = 0; i < m; ++i) {
                jac(i, j) = ok ? (rp[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(i)]) / h : 0.0;
            }
        }
    };

    const auto to_eigen = [](const std::vector<double>& v) {
        return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    };

    jacobian();
    Eigen::MatrixXd a = jac.transpose() * jac;
    Eigen::VectorXd g = jac.transpose() * to_eigen(r);
    double mu = opt.initial_damping * std::max(a.diagonal().maxCoeff(), 1e-300);
    double nu = 2.0;
    std::vector<double> xn(x.size()), rn;

    while (true) {
        if (f <= opt.objective_tol || g.lpNorm<Eigen::Infinity>() <= opt.gradient_tol) {
            out.status = LMStatus::Converged;
            break;
        }
        if (out.iterations >= opt.max_iterations) {
            out.status = LMStatus::MaxIterations;
            break;
        }
        ++out.iterations;

        // Marquardt scaling with a floor so that flat directions still get damped.
        Eigen::VectorXd d = a.diagonal();
        const double dfloor = 1e-12 * std::max(d.maxCoeff(), 1e-300);
        for (Eigen::Index i = 0; i < n; ++i) d(i) = std::max(d(i), dfloor);
        Eigen::MatrixXd lhs = a;
        lhs.diagonal() += mu * d;
        const Eigen::VectorXd h = lhs.ldlt().solve(-g);

        const double xnorm = to_eigen(x).norm();
        if (!h.allFinite() || h.norm() <= opt.step_tol * (xnorm + opt.step_tol)) {
            out.status = LMStatus::Converged;
            break;
        }
        for (Eigen::Index i = 0; i < n; ++i) xn[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + h(i);
        ++out.evaluations;
        const bool ok = fn(xn, rn) && detail::all_finite(rn);
        const double fn_new = ok ? detail::half_norm2(rn) : std::numeric_limits<double>::infinity();
        const double predicted = 0.5 * h.dot(mu * d.cwiseProduct(h) - g);
        const double rho = predicted > 0.0 ? (f - fn_new) / predicted : -1.0;

        if (ok && rho > 0.0 && fn_new <= f) {
            x = xn;
            r = rn;
            f = fn_new;
            out.trace.push_back(f);
            jacobian();
            a = jac.transpose() * jac;
            g = jac.transpose() * to_eigen(r);
            mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
            nu = 2.0;
        } else {
            mu *= nu;
            nu *= 2.0;
            if (!std::isfinite(mu)) {
                out.status = LMStatus::Converged;
                break;
            }
        }
    }
    out.x = std::move(x);
    out.residuals = std::move(r);
    out.objective = f;
    return out;
}

/// p = eps + u^2 with an upper bound. Points beyond the bound are not clamped (a clamp
/// would flatten the Jacobian and trap the parameter); callers reject them instead, which
/// makes the optimizer shorten the step.
struct PositiveTransform {
    double epsilon = 1e-8;
    double upper = std::numeric_limits<double>::infinity();

    double to_param(double u) const { return epsilon + u * u; }
    double to_free(double p) const { return std::sqrt(std::max(std::min(p, upper) - epsilon, 0.0)); }
    bool admissible(double u) const { return epsilon + u * u <= upper; }
    bool admissible(const std::vector<double>& u) const {
        return std::all_of(u.begin(), u.end(), [this](double v) { return admissible(v); });
    }
    /// Within 1% of the upper bound.
    bool near_upper(double u) const { return epsilon + u * u >= 0.99 * upper; }

    std::vector<double> to_params(const std::vector<double>& u) const {
        std::vector<double> p(u.size());
        std::transform(u.begin(), u.end(), p.begin(), [this](double v) { return to_param(v); });
        return p;
    }
    std::vector<double> to_free(const std::vector<double>& p) const {
        std::vector<double> u(p.size());
        std::transform(p.begin(), p.end(), u.begin(), [this](double v) { return to_free(v); });
        return u;
    }
};

} // namespace lvg
