#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "lvg/kernel.hpp"
#include "oracles.hpp"
#include "sampling.hpp"

using namespace lvg;
using namespace sample;

TEST(Kernel, ConstantBranch) {
    const auto k = classify_piece(piece(0.0, 0.0, 0.2, 1.0, 1.5), 0.25);
    EXPECT_EQ(k.branch, Branch::Constant);
    EXPECT_NEAR(k.omega, std::sqrt(8.0) / 0.2, 1e-12);
    EXPECT_DOUBLE_EQ(eval_z(k, 1.3), 1.3);
    EXPECT_DOUBLE_EQ(eval_chi(k, 1.3), 1.0);
    EXPECT_DOUBLE_EQ(eval_kappa(k, 1.3), 0.0);
}

TEST(Kernel, LinearRootBranch) {
    const auto k = classify_piece(piece(0.0, 0.1, 0.05, 0.2, 1.0), 0.25);
    EXPECT_EQ(k.branch, Branch::LinearRoot);
    EXPECT_DOUBLE_EQ(k.delta, 0.01);
    EXPECT_DOUBLE_EQ(k.root1, -0.5);
    EXPECT_NEAR(eval_z(k, 0.5), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(eval_kappa(k, 0.7), 0.5);
    EXPECT_NEAR(eval_chi(k, 0.5), 1.0, 1e-15);
}

TEST(Kernel, ChiSquaredTimesAlphaIsA) {
    // alpha = 1 with a(x) = 4 at x = 3: (x - 1)^2 + 0 -> a(3) = 4
    const auto k = classify_piece(piece(1.0, -2.0, 1.0 + 1e-3, 2.0, 4.0), 1.0);
    EXPECT_NEAR(eval_chi(k, 3.0), std::sqrt(4.0 + 1e-3), 1e-14);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        QuadraticPiece p;
        double T;
        if (!random_piece(rng, static_cast<Case>(i % 4), p, T)) continue;
        const auto kk = classify_piece(p, T);
        const double x = 0.5 * (p.x_left + p.x_right);
        const double chi = eval_chi(kk, x);
        EXPECT_NEAR(chi * chi * std::abs(kk.alpha) / p.value(x), 1.0, 1e-14);
    }
}

TEST(Kernel, KappaPairsWithZPrime) {
    // kappa z' is the logarithmic derivative of chi: a'/(2a), checked by central differences
    const auto k = classify_piece(piece(1.0, -1.0, 0.1, 1.0, 2.0), 1.0);
    ASSERT_EQ(k.branch, Branch::RealRoots);
    const double x = 1.4, h = 1e-6;
    const double fd = (std::log(eval_chi(k, x + h)) - std::log(eval_chi(k, x - h))) / (2.0 * h);
    EXPECT_NEAR(eval_kappa(k, x) * eval_z_prime(k, x), fd, 1e-8);
}

TEST(Kernel, ComplexRootAngle) {
    // |(x - r1) / (x - r2)| = 1: the stored value is the (unwrapped) argument of the ratio
    const QuadraticPiece p = piece(1.0, -2.0, 1.25, 0.5, 2.0);  // roots 1 +/- 0.5 i
    const auto k = classify_piece(p, 1.0);
    ASSERT_TRUE(k.branch == Branch::ComplexRootsHyperbolic || k.branch == Branch::ComplexRootsTrigonometric);
    for (double x : {0.6, 1.0, 1.7}) {
        const std::complex<double> r1(1.0, 0.5), r2(1.0, -0.5);
        const auto ratio = (x - r1) / (x - r2);
        EXPECT_NEAR(std::abs(ratio), 1.0, 1e-15);
        const double z = eval_z(k, x);
        EXPECT_NEAR(std::cos(z), std::cos(std::arg(ratio)), 1e-14);
        EXPECT_NEAR(std::abs(std::sin(z)), std::abs(std::sin(std::arg(ratio))), 1e-14);
    }
}

TEST(Kernel, MatchesComplexOracle) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int tested[4] = {0, 0, 0, 0};
    double worst = 0.0;
    for (int c = 0; c < 4; ++c) {
        int attempts = 0;
        while (tested[c] < 2600 && attempts++ < 20000) {
            QuadraticPiece p;
            double T;
            if (!random_piece(rng, static_cast<Case>(c), p, T)) continue;
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
                vals[j] = kernel_value(k, x, v0, d0);
                refs[j] = oracle::complex_value(p.alpha, p.beta, p.gamma, T, p.x_left, x, v0, d0);
                scale = std::max(scale, std::abs(refs[j]));
            }
            for (int j = 0; j < 5; ++j) worst = std::max(worst, std::abs(vals[j] - refs[j]) / scale);
            ++tested[c];
        }
    }
    for (int c = 0; c < 4; ++c) EXPECT_GE(tested[c], 2500) << "case " << c;
    EXPECT_LE(worst, 1e-12);
}

TEST(Kernel, BranchSelection) {
    EXPECT_EQ(classify_piece(piece(1.0, -1.0, 0.1, 1.0, 2.0), 1.0).branch, Branch::RealRoots);
    // delta = -1, delta T + 8 > 0 for T = 1
    EXPECT_EQ(classify_piece(piece(1.0, -2.0, 1.25, 0.5, 2.0), 1.0).branch, Branch::ComplexRootsHyperbolic);
    EXPECT_EQ(classify_piece(piece(1.0, -2.0, 1.25, 0.5, 2.0), 10.0).branch, Branch::ComplexRootsTrigonometric);
    EXPECT_EQ(classify_piece(piece(1.0, -2.0, 1.0, 1.5, 2.0), 1.0).branch, Branch::DoubleRoot);
}

TEST(Kernel, RejectsNonPositiveVariance) {
    EXPECT_THROW(classify_piece(piece(0.0, 1.0, -1.5, 1.0, 2.0), 1.0), Error);
    EXPECT_THROW(classify_piece(piece(1.0, -3.0, 2.0, 0.5, 2.5), 1.0), Error);  // negative between its roots
    EXPECT_THROW(classify_piece(piece(0.0, 0.0, 0.2, 1.0, 1.0), 1.0), Error);
}
