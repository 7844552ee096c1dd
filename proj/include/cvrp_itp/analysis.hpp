#pragma once

// Closed-form constants behind the 0.915 + alpha ratio: the truncated
// nearest-neighbor expectation xi(lambda), its weighted maximum h, the
// mixed-tour gain c1 and the final additive ratio constant.

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "cvrp_itp/errors.hpp"

namespace cvrp::analysis {

// Bounds on the Beardwood-Halton-Hammersley constant.
inline constexpr double kBeta0 = 0.62866;
inline constexpr double kBeta1 = 0.92117;

inline constexpr double kDefaultLambda = 0.62468;
inline constexpr double kDefaultEpsilon = 0.01;

inline double erf(double z) { return std::erf(z); }

// Probability that a unit-intensity Poisson process has a point within r of
// the origin.
inline double g_of_r(double r) {
    require(r >= 0.0, "g_of_r needs r >= 0");
    return -std::expm1(-std::numbers::pi * r * r);
}

// Radius at which g reaches lambda: sqrt(ln(1/(1-lambda)) / pi).
inline double r0_of_lambda(double lambda) {
    require(lambda >= 0.0 && lambda < 1.0, "r0_of_lambda needs 0 <= lambda < 1");
    return std::sqrt(-std::log1p(-lambda) / std::numbers::pi);
}

// xi = erf(sqrt(L))/2 - (1-lambda) sqrt(L/pi) with L = ln(1/(1-lambda)).
inline double xi(double lambda) {
    require(lambda >= 0.0 && lambda < 1.0, "xi needs 0 <= lambda < 1");
    const double L = -std::log1p(-lambda);
    return 0.5 * erf(std::sqrt(L)) - (1.0 - lambda) * std::sqrt(L / std::numbers::pi);
}

inline double h(double lambda) { return (1.0 - lambda) * xi(lambda); }

struct Maximum {
    double lambda_star = 0.0;
    double h_max = 0.0;
};

inline constexpr double kLambdaSearchUpper = 1.0 - 1e-9;

// Coarse grid to bracket the peak, then golden-section search down to an
// interval of width `tolerance`. Assumes h is unimodal on [0, 1).
inline Maximum maximize_h(double tolerance = 1e-8) {
    constexpr int kGrid = 64;
    const double lo = 0.0, hi = kLambdaSearchUpper;
    int best = 0;
    double best_val = h(lo);
    for (int i = 1; i <= kGrid; ++i) {
        const double v = h(lo + (hi - lo) * i / kGrid);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double a = lo + (hi - lo) * std::max(0, best - 1) / kGrid;
    double b = lo + (hi - lo) * std::min(kGrid, best + 1) / kGrid;

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double hc = h(c), hd = h(d);
    while (b - a > tolerance) {
        if (hc > hd) {
            b = d;
            d = c;
            hd = hc;
            c = b - inv_phi * (b - a);
            hc = h(c);
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + inv_phi * (b - a);
            hd = h(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, h(x)};
}

// c1 = ((9 beta/10 - 1/2) beta - 1/50) / (8 (40 - beta)).
inline double c1_constant(double beta = kBeta0) {
    return ((0.9 * beta - 0.5) * beta - 0.02) / (8.0 * (40.0 - beta));
}

// 1 + alpha - h_max / beta + 0.00001.
inline double ratio_constant(double alpha, double beta_upper, double h_max) {
    require(alpha >= 1.0, "ratio_constant needs alpha >= 1");
    require(beta_upper > 0.0 && beta_upper <= kBeta1, "ratio_constant needs beta in (0, beta1]");
    return 1.0 + alpha - h_max / beta_upper + 0.00001;
}

inline double ratio_constant(double alpha = 1.0, double beta_upper = kBeta1) {
    return ratio_constant(alpha, beta_upper, maximize_h().h_max);
}

struct AnalysisConstants {
    double beta0 = kBeta0;
    double beta1 = kBeta1;
    double lambda_star = 0.0;
    double h_max = 0.0;
    double xi_at_lambda_star = 0.0;
    double c1 = 0.0;
    double ratio_constant = 0.0;  // additive constant next to alpha, i.e. ratio(alpha=1) - 1
};

inline AnalysisConstants constants() {
    AnalysisConstants out;
    const Maximum m = maximize_h();
    out.lambda_star = m.lambda_star;
    out.h_max = m.h_max;
    out.xi_at_lambda_star = xi(m.lambda_star);
    out.c1 = c1_constant(kBeta0);
    out.ratio_constant = ratio_constant(1.0, kBeta1, m.h_max) - 1.0;
    return out;
}

}  // namespace cvrp::analysis
