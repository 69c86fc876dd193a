#include <gtest/gtest.h>

#include <random>

#include "lvg/bspline.hpp"
#include "lvg/parameterization.hpp"
#include "oracles.hpp"

using namespace lvg;

TEST(BSpline, PartitionOfUnity) {
    const std::vector<double> t = {1, 1, 1, 2, 3, 3, 4, 5, 5, 5};
    const std::vector<double> c(t.size() - 3, 0.7);
    for (double x = 1.0; x <= 5.0; x += 0.01) EXPECT_NEAR(bspline::evaluate(t, c, x), 0.7, 1e-14);
    const auto lv = build_bspline_localvar({t, c}, 3.0, 1.0);
    for (const auto& p : lv.pieces) {
        EXPECT_NEAR(p.value(0.5 * (p.x_left + p.x_right)), 0.7, 1e-13);
    }
}

TEST(BSpline, BezierSpan) {
    // single span with triple end knots: a quadratic Bezier curve
    const std::vector<double> t = {0, 0, 0, 1, 1, 1};
    const std::vector<double> c = {1, 2, 1};
    EXPECT_NEAR(bspline::evaluate(t, c, 0.5), 0.25 * 1 + 0.5 * 2 + 0.25 * 1, 1e-15);
    EXPECT_NEAR(oracle::spline_value(t, c, 0.5), 1.5, 1e-15);
}

TEST(BSpline, MatchesCoxDeBoor) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> t = {0, 0, 0};
        double x = 0.0;
        for (int i = 0; i < 6; ++i) {
            x += 0.1 + u(rng);
            t.push_back(x);
            if (i == 2) t.push_back(x);  // one double knot
        }
        x += 0.1 + u(rng);
        t.insert(t.end(), {x, x, x});
        std::vector<double> c(t.size() - 3);
        for (auto& v : c) v = 0.1 + u(rng);
        const auto pieces = bspline::to_power_basis(t, c);
        const auto knots = bspline::distinct_knots(t);
        ASSERT_EQ(pieces.size() + 1, knots.size());
        for (double y = 0.0; y <= x; y += x / 397) {
            const double ref = oracle::spline_value(t, c, y);
            EXPECT_NEAR(bspline::evaluate(t, c, y), ref, 1e-13);
            std::size_t i = 0;
            while (i + 1 < pieces.size() && y >= knots[i + 1]) ++i;
            EXPECT_NEAR(pieces[i].value(y), ref, 1e-12);
        }
    }
}

TEST(BSpline, DerivativeJumpAtDoubleKnot) {
    // a'(F-) - a'(F+) from the derivative identity
    const std::vector<double> t = {0, 0, 0, 0.7, 1.0, 1.0, 1.6, 2.5, 2.5, 2.5};
    const std::vector<double> c = {0.3, 0.5, 0.4, 0.8, 0.6, 0.5, 0.45};
    const std::size_t s = 2;  // t[s+2] = t[s+3] = F
    const auto lv = build_bspline_localvar({t, c}, 1.0, 1.0);
    const double left = lv.a_prime(1.0, Side::Left), right = lv.a_prime(1.0, Side::Right);
    const double expected_right = 2 * (c[s + 2] - c[s + 1]) / (t[s + 4] - t[s + 2]);
    const double expected_left = 2 * (c[s + 1] - c[s]) / (t[s + 3] - t[s + 1]);
    EXPECT_NEAR(right, expected_right, 1e-12);
    EXPECT_NEAR(left, expected_left, 1e-12);
    // the coefficient of the C3 slot is a(F)
    EXPECT_NEAR(lv.a(1.0), c[s + 1], 1e-14);
}
