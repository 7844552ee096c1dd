#pragma once

// Iterated tour partitioning main phase.
//
// For a tour T = (O, x_1, ..., x_n, O) and shift i in [1, k], solution S_i cuts
// the sequence into (x_1..x_i), (x_{i+1}..x_{i+k}), ... and closes every
// segment through the depot. Cutting between x_p and x_{p+1} adds the
// splitting weight w = l(x_p) + l(x_{p+1}) - d(x_p, x_{p+1}) to cost(T), and
// the cut positions of shift i are exactly p in [1, n-1] with p = i (mod k),
// so all k shift costs come out of one O(n) pass.

#include <algorithm>
#include <cmath>
#include <vector>

#include "cvrp_itp/core.hpp"

namespace cvrp {

struct ItpResult {
    std::size_t best_shift = 1;  // i* in [1, k]
    RoutePlan plan;
    double cost = 0.0;
    std::vector<double> per_shift_costs;  // index i-1 holds the cost of S_i
    double splitting_weight_total = 0.0;  // w-hat of the best shift
    double tsp_cost = 0.0;                // cost(T)
};

inline double splitting_weight(std::size_t u, std::size_t v, const Instance& inst) {
    require(inst.single_depot(), "splitting_weight is defined for a single depot");
    return ell(u, inst) + ell(v, inst) - euclid(inst.customer(u), inst.customer(v));
}

// Customer segments of shift i (1-based), in tour order.
inline std::vector<std::vector<std::size_t>> shift_segments(const TspTour& tour, std::size_t k,
                                                            std::size_t shift) {
    const std::size_t n = tour.order.size();
    std::vector<std::vector<std::size_t>> segments;
    std::size_t begin = 0;
    std::size_t end = std::min(shift, n);
    while (begin < n) {
        segments.emplace_back(tour.order.begin() + static_cast<std::ptrdiff_t>(begin),
                              tour.order.begin() + static_cast<std::ptrdiff_t>(end));
        begin = end;
        end = std::min(n, end + k);
    }
    return segments;
}

inline RoutePlan shift_plan(const TspTour& tour, const Instance& inst, std::size_t shift) {
    std::vector<Tour> tours;
    for (auto& seg : shift_segments(tour, inst.capacity(), shift))
        tours.push_back(Tour{0, std::move(seg)});
    return make_plan(std::move(tours), inst);
}

inline ItpResult itp(const TspTour& tour, const Instance& inst) {
    require(inst.single_depot(), "itp needs a single-depot instance; use multi_itp for several depots");
    validate_tsp_tour(tour, inst);
    const std::size_t n = inst.size();
    const std::size_t k = inst.capacity();
    const auto& x = tour.order;

    ItpResult result;
    result.tsp_cost = tsp_tour_cost(tour, inst);
    std::vector<double> what(k, 0.0);  // what[r] for residue r = p mod k
    double lp = ell(x[0], inst);
    for (std::size_t p = 1; p < n; ++p) {  // pair (x_p, x_{p+1}) in 1-based terms
        const double lq = ell(x[p], inst);
        what[p % k] += lp + lq - euclid(inst.customer(x[p - 1]), inst.customer(x[p]));
        lp = lq;
    }
    result.per_shift_costs.resize(k);
    for (std::size_t i = 1; i <= k; ++i) result.per_shift_costs[i - 1] = result.tsp_cost + what[i % k];

    std::size_t best = 1;
    for (std::size_t i = 2; i <= k; ++i)
        if (result.per_shift_costs[i - 1] < result.per_shift_costs[best - 1]) best = i;
    result.best_shift = best;
    result.cost = result.per_shift_costs[best - 1];
    result.splitting_weight_total = what[best % k];
    result.plan = shift_plan(tour, inst, best);
    return result;
}

struct ItpIdentityReport {
    std::vector<double> route_costs;     // direct per-route summation of S_i
    std::vector<double> identity_costs;  // cost(T) + sum of splitting-pair weights of S_i
    double max_deviation = 0.0;
};

// Checks ITP(T) = cost(T) + w-hat for every shift by enumerating the routes of
// each S_i and, separately, its splitting pairs. O(nk); meant as a check.
inline ItpIdentityReport itp_identity_check(const TspTour& tour, const Instance& inst) {
    require(inst.single_depot(), "itp_identity_check needs a single-depot instance");
    validate_tsp_tour(tour, inst);
    const double base = tsp_tour_cost(tour, inst);
    const std::size_t k = inst.capacity();
    ItpIdentityReport report;
    for (std::size_t i = 1; i <= k; ++i) {
        const auto segments = shift_segments(tour, k, i);
        double routes = 0.0;
        double weights = 0.0;
        for (std::size_t s = 0; s < segments.size(); ++s) {
            routes += tour_cost(Tour{0, segments[s]}, inst);
            if (s + 1 < segments.size())
                weights += splitting_weight(segments[s].back(), segments[s + 1].front(), inst);
        }
        report.route_costs.push_back(routes);
        report.identity_costs.push_back(base + weights);
        report.max_deviation = std::max(report.max_deviation, std::abs(routes - (base + weights)));
    }
    return report;
}

// rad + (1 - 1/k) cost(T) - ITP(T); non-negative up to rounding.
inline double ag_inequality_check(const TspTour& tour, const Instance& inst) {
    const ItpResult r = itp(tour, inst);
    const double k = static_cast<double>(inst.capacity());
    return radial_cost(inst) + (1.0 - 1.0 / k) * r.tsp_cost - r.cost;
}

}  // namespace cvrp
