#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "lvg/error.hpp"

namespace lvg {

/// Row i reads sub[i] x[i-1] + diag[i] x[i] + super[i] x[i+1] = rhs[i].
/// sub[0] and super[n-1] are unused.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> rhs;

    explicit TridiagonalSystem(std::size_t n = 0) : sub(n, 0.0), diag(n, 0.0), super(n, 0.0), rhs(n, 0.0) {}

    std::size_t size() const noexcept { return diag.size(); }

    double row_scale(std::size_t i) const noexcept {
        const double lo = i > 0 ? std::abs(sub[i]) : 0.0;
        const double hi = i + 1 < size() ? std::abs(super[i]) : 0.0;
        return std::max({lo, std::abs(diag[i]), hi});
    }

    /// Max absolute row residual of x.
    double residual(const std::vector<double>& x) const {
        const std::size_t n = size();
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = diag[i] * x[i] - rhs[i];
            if (i > 0) r += sub[i] * x[i - 1];
            if (i + 1 < n) r += super[i] * x[i + 1];
            worst = std::max(worst, std::abs(r));
        }
        return worst;
    }
};

/// Gaussian elimination with partial pivoting restricted to the band (the dgtsv scheme:
/// a row swap fills one extra super-diagonal). Rows are equilibrated first because the
/// coefficients of steep pieces can be many orders of magnitude larger than the others.
inline std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    if (n == 0 || sys.sub.size() != n || sys.super.size() != n || sys.rhs.size() != n) {
        throw Error(ErrorCode::SingularSystem, "malformed tridiagonal system");
    }
    std::vector<double> d(n), du(n, 0.0), dl(n, 0.0), du2(n, 0.0), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double scale = sys.row_scale(i);
        if (!(scale > 0.0) || !std::isfinite(scale)) {
            throw Error(ErrorCode::SingularSystem, "zero or non-finite row " + std::to_string(i));
        }
        d[i] = sys.diag[i] / scale;
        b[i] = sys.rhs[i] / scale;
        if (i + 1 < n) du[i] = sys.super[i] / scale;
        if (i > 0) dl[i - 1] = sys.sub[i] / scale;
    }

    constexpr double tiny = 1e-14;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (std::abs(d[i]) < tiny) {
                throw Error(ErrorCode::SingularSystem, "pivot underflow at row " + std::to_string(i));
            }
            const double fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            du2[i] = 0.0;
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            const double temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            const double tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }
    if (std::abs(d[n - 1]) < tiny) {
        throw Error(ErrorCode::SingularSystem, "pivot underflow at last row");
    }

    std::vector<double> x(n);
    x[n - 1] = b[n - 1] / d[n - 1];
    if (n > 1) x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (std::size_t j = n - 2; j-- > 0;) {
        x[j] = (b[j] - du[j] * x[j + 1] - du2[j] * x[j + 2]) / d[j];
    }
    return x;
}

} // namespace lvg
