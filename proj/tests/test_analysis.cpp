#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cvrp_itp/analysis.hpp"
#include "support/oracles.hpp"

using namespace cvrp;
using namespace cvrp::analysis;

TEST(Erf, ZeroAndOdd) {
    EXPECT_EQ(analysis::erf(0.0), 0.0);
    for (double z = 0.05; z < 6.0; z += 0.37) EXPECT_EQ(analysis::erf(-z), -analysis::erf(z));
}

TEST(Erf, AgreesWithQuadrature) {
    EXPECT_NEAR(analysis::erf(1.0), oracle::erf_by_quadrature(1.0), 1e-12);
    EXPECT_NEAR(analysis::erf(1.0), 0.842700792949715, 1e-12);
    for (double z = -6.0; z <= 6.0; z += 0.125) EXPECT_NEAR(analysis::erf(z), oracle::erf_by_quadrature(z), 1e-12) << z;
}

TEST(Erf, SaturatesAtSix) {
    EXPECT_GE(analysis::erf(6.0), 1.0 - 1e-12);
    EXPECT_LE(analysis::erf(6.0), 1.0);
    EXPECT_GE(analysis::erf(40.0), 1.0 - 1e-12);
}

TEST(Xi, Endpoints) {
    EXPECT_EQ(xi(0.0), 0.0);
    EXPECT_NEAR(xi(1.0 - 1e-12), 0.5, 1e-5);
}

TEST(Xi, ValueAtLambdaStar) {
    EXPECT_NEAR(xi(0.62468), 0.078674 / (1.0 - 0.62468), 2e-4);
}

TEST(Xi, ClosedFormMatchesIntegral) {
    for (int i = 1; i <= 19; ++i) {
        const double lambda = 0.05 * i;
        EXPECT_NEAR(xi(lambda), oracle::xi_by_quadrature(lambda), 1e-9) << lambda;
    }
}

TEST(Xi, IncreasingAndNonNegative) {
    double prev = xi(0.0);
    for (int i = 1; i < 1000; ++i) {
        const double v = xi(i / 1000.0);
        EXPECT_GE(v, 0.0);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(Xi, RejectsLambdaOne) {
    EXPECT_THROW(xi(1.0), PreconditionError);
    EXPECT_THROW(xi(-0.1), PreconditionError);
}

TEST(H, Maximum) {
    EXPECT_EQ(h(0.0), 0.0);
    EXPECT_NEAR(h(1.0 - 1e-12), 0.0, 1e-11);
    const Maximum m = maximize_h();
    EXPECT_GT(m.h_max, 0.078674);
    EXPECT_NEAR(m.lambda_star, 0.62468, 1e-3);
    EXPECT_NEAR(m.h_max, oracle::h_direct(m.lambda_star), 1e-12);
}

TEST(H, UnimodalOnDenseGrid) {
    constexpr int N = 10000;
    int sign_changes = 0;
    int last = 0;
    for (int i = 0; i < N - 1; ++i) {
        const double a = h(kLambdaSearchUpper * i / (N - 1));
        const double b = h(kLambdaSearchUpper * (i + 1) / (N - 1));
        const int s = b > a ? 1 : (b < a ? -1 : 0);
        if (s != 0 && last != 0 && s != last) ++sign_changes;
        if (s != 0) last = s;
    }
    EXPECT_EQ(sign_changes, 1);
}

TEST(H, StableUnderTighterSearch) {
    const Maximum a = maximize_h(1e-8), b = maximize_h(5e-9);
    EXPECT_NEAR(a.lambda_star, b.lambda_star, 1e-6);
    EXPECT_NEAR(a.h_max, b.h_max, 1e-6);
}

TEST(C1, KnownValue) { EXPECT_NEAR(c1_constant(kBeta0), 0.000068, 5e-6); }

TEST(C1, IncreasingOnBetaRange) {
    double prev = c1_constant(kBeta0);
    for (int i = 1; i <= 1000; ++i) {
        const double v = c1_constant(kBeta0 + (kBeta1 - kBeta0) * i / 1000.0);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(C1, ZeroAtNumeratorRoot) {
    // 0.9 b^2 - 0.5 b - 0.02 = 0
    const double root = (0.5 + std::sqrt(0.25 + 4 * 0.9 * 0.02)) / (2 * 0.9);
    EXPECT_NEAR(c1_constant(root), 0.0, 1e-15);
}

TEST(Ratio, FinalConstant) {
    const double r = ratio_constant(1.0, kBeta1);
    EXPECT_LE(r, 1.915);
    EXPECT_NEAR(r, 1.9146, 1e-4);
    EXPECT_LT(constants().ratio_constant, 0.915);
}

TEST(Ratio, DecreasingInHmax) {
    EXPECT_GT(ratio_constant(1.0, kBeta1, 0.07), ratio_constant(1.0, kBeta1, 0.08));
}

TEST(Ratio, HypotheticalBetaZero) {
    const double hm = maximize_h().h_max;
    EXPECT_NEAR(ratio_constant(1.0, 0.62866, hm), 2.0 - hm / 0.62866 + 0.00001, 1e-15);
}

TEST(Ratio, Preconditions) {
    EXPECT_THROW(ratio_constant(0.5, kBeta1, 0.08), PreconditionError);
    EXPECT_THROW(ratio_constant(1.0, 0.95, 0.08), PreconditionError);
    EXPECT_THROW(ratio_constant(1.0, 0.0, 0.08), PreconditionError);
}

TEST(Radius, InverseOfG) {
    EXPECT_EQ(g_of_r(0.0), 0.0);
    for (int i = 1; i <= 9; ++i) EXPECT_NEAR(g_of_r(r0_of_lambda(i / 10.0)), i / 10.0, 1e-12);
    EXPECT_NEAR(r0_of_lambda(1.0 - std::exp(-std::numbers::pi)), 1.0, 1e-12);
    EXPECT_THROW(r0_of_lambda(1.0), PreconditionError);
    EXPECT_THROW(g_of_r(-1.0), PreconditionError);
}

TEST(Constants, Bundle) {
    const AnalysisConstants c = constants();
    EXPECT_LT(c.beta0, c.beta1);
    EXPECT_GT(c.h_max, 0.078674);
    EXPECT_NEAR(c.xi_at_lambda_star * (1.0 - c.lambda_star), c.h_max, 1e-15);
}
