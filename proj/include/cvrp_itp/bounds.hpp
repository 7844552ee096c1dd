#pragma once

// Lower-bound machinery for CVRP plans: per-tour radial statistics and the
// near-set inequality, the aggregate rad + (1-lambda-eps) * sum_U d(x, U\x)
// bound, an exact subset-DP CVRP oracle for tiny instances, and
// nearest-neighbor statistics of the customer set.
//
// The per-tour and aggregate routines are templates over a CustomerMetric so
// that non-Euclidean metrics can be plugged in; Instance overloads use the
// Euclidean plane.

#include <algorithm>
#include <bit>
#include <concepts>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "cvrp_itp/analysis.hpp"
#include "cvrp_itp/core.hpp"
#include "cvrp_itp/nearest_neighbor.hpp"
#include "cvrp_itp/tsp.hpp"

namespace cvrp {

template <class M>
concept CustomerMetric = requires(const M& m, std::size_t a, std::size_t b) {
    { m.customer_count() } -> std::convertible_to<std::size_t>;
    { m.distance(a, b) } -> std::convertible_to<double>;        // customer to customer
    { m.depot_distance(a, b) } -> std::convertible_to<double>;  // depot a to customer b
    { m.ell(a) } -> std::convertible_to<double>;                // nearest-depot distance
};

class EuclideanMetric {
public:
    explicit EuclideanMetric(const Instance& inst) : inst_(&inst), ell_(depot_distances(inst)) {}

    std::size_t customer_count() const { return inst_->size(); }
    double distance(std::size_t a, std::size_t b) const {
        return euclid(inst_->customer(a), inst_->customer(b));
    }
    double depot_distance(std::size_t depot, std::size_t c) const {
        return euclid(inst_->depot(depot), inst_->customer(c));
    }
    double ell(std::size_t c) const { return ell_[c]; }
    const Point& point(std::size_t c) const { return inst_->customer(c); }

private:
    const Instance* inst_;
    std::vector<double> ell_;
};

template <CustomerMetric M>
double metric_tour_cost(const M& metric, const Tour& tour) {
    const auto& o = tour.visit_order;
    if (o.empty()) return 0.0;
    double cost = metric.depot_distance(tour.depot_index, o.front());
    for (std::size_t j = 1; j < o.size(); ++j) cost += metric.distance(o[j - 1], o[j]);
    return cost + metric.depot_distance(tour.depot_index, o.back());
}

// sum over x in S of d(x, S \ {x}); zero when |S| <= 1.
template <CustomerMetric M>
double subset_nearest_sum(const M& metric, const std::vector<std::size_t>& subset) {
    if (subset.size() <= 1) return 0.0;
    if constexpr (requires { metric.point(std::size_t{0}); }) {
        std::vector<Point> pts;
        pts.reserve(subset.size());
        for (std::size_t c : subset) pts.push_back(metric.point(c));
        const auto nn = nearest_neighbor_distances(pts);
        return std::accumulate(nn.begin(), nn.end(), 0.0);
    } else {
        double sum = 0.0;
        for (std::size_t a : subset) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t b : subset)
                if (b != a) best = std::min(best, metric.distance(a, b));
            sum += best;
        }
        return sum;
    }
}

struct TourRadialStats {
    std::size_t customer_count = 0;      // m
    double mean_distance = 0.0;          // L
    double spread = 0.0;                 // Delta = max l - L
    double threshold = 0.0;              // L - (lambda+eps)/(1-lambda-eps) * Delta
    std::vector<std::size_t> near_set;   // W, in traversal order
};

namespace detail {

inline void check_lambda_eps(double lambda, double eps) {
    require(lambda > 0.0 && eps > 0.0 && lambda + eps < 1.0,
            "need lambda > 0, eps > 0 and lambda + eps < 1");
}

}  // namespace detail

// W = customers with l(x) >= threshold, minus the last such customer in
// traversal order. The comparison allows 1e-12 relative slack so that exactly
// equidistant customers are not lost to rounding in the mean.
template <CustomerMetric M>
TourRadialStats tour_radial_stats(const M& metric, const Tour& tour, double lambda, double eps) {
    detail::check_lambda_eps(lambda, eps);
    require(!tour.empty(), "tour_radial_stats needs a non-empty tour");
    TourRadialStats s;
    s.customer_count = tour.size();
    double sum = 0.0, top = -std::numeric_limits<double>::infinity();
    for (std::size_t c : tour.visit_order) {
        const double l = metric.ell(c);
        sum += l;
        top = std::max(top, l);
    }
    s.mean_distance = sum / static_cast<double>(s.customer_count);
    s.spread = std::max(0.0, top - s.mean_distance);
    const double ratio = (lambda + eps) / (1.0 - lambda - eps);
    s.threshold = s.mean_distance - ratio * s.spread;
    const double slack = 1e-12 * (1.0 + std::abs(s.mean_distance));
    for (std::size_t c : tour.visit_order)
        if (metric.ell(c) >= s.threshold - slack) s.near_set.push_back(c);
    if (!s.near_set.empty()) s.near_set.pop_back();
    return s;
}

inline TourRadialStats tour_radial_stats(const Tour& tour, const Instance& inst, double lambda,
                                         double eps) {
    return tour_radial_stats(EuclideanMetric(inst), tour, lambda, eps);
}

// cost(T) - [2 * threshold + sum_{x in W} d(x, W \ {x})].
template <CustomerMetric M>
double lemma41_check(const M& metric, const Tour& tour, double lambda, double eps) {
    const TourRadialStats s = tour_radial_stats(metric, tour, lambda, eps);
    const double rhs = 2.0 * s.threshold + subset_nearest_sum(metric, s.near_set);
    return metric_tour_cost(metric, tour) - rhs;
}

inline double lemma41_check(const Tour& tour, const Instance& inst, double lambda, double eps) {
    return lemma41_check(EuclideanMetric(inst), tour, lambda, eps);
}

// Repeatedly concatenates the two smallest tours of the same depot while at
// least two of them hold <= k/2 customers; afterwards each depot has at most
// one such tour. The two merged tours always fit within k.
inline std::vector<Tour> merge_small_tours(std::vector<Tour> tours, std::size_t k) {
    std::erase_if(tours, [](const Tour& t) { return t.empty(); });
    auto small = [k](const Tour& t) { return 2 * t.size() <= k; };
    std::vector<Tour> out;
    std::size_t max_depot = 0;
    for (const Tour& t : tours) max_depot = std::max(max_depot, t.depot_index);
    for (std::size_t d = 0; d <= max_depot; ++d) {
        std::vector<Tour> big, little;
        for (Tour& t : tours)
            if (t.depot_index == d) (small(t) ? little : big).push_back(std::move(t));
        // stable by size keeps the original order among equal sizes
        std::stable_sort(little.begin(), little.end(),
                         [](const Tour& a, const Tour& b) { return a.size() < b.size(); });
        while (little.size() >= 2) {
            Tour merged = std::move(little[0]);
            merged.visit_order.insert(merged.visit_order.end(), little[1].visit_order.begin(),
                                      little[1].visit_order.end());
            little.erase(little.begin(), little.begin() + 2);
            if (small(merged)) {
                auto pos = std::upper_bound(
                    little.begin(), little.end(), merged,
                    [](const Tour& a, const Tour& b) { return a.size() < b.size(); });
                little.insert(pos, std::move(merged));
            } else {
                big.push_back(std::move(merged));
            }
        }
        for (Tour& t : big) out.push_back(std::move(t));
        for (Tour& t : little) out.push_back(std::move(t));
    }
    return out;
}

struct BoundReport {
    double rad = 0.0;
    double classic_lb = 0.0;                 // max(rad, optimal TSP) when known, else rad
    std::optional<double> tsp_optimum;       // exact TSP over {depot} and V, if computed
    double thm42_lb = 0.0;
    std::vector<std::size_t> witness_U;      // sorted customer ids
    double witness_nearest_sum = 0.0;        // sum_{x in U} d(x, U \ {x})
    double lambda = analysis::kDefaultLambda;
    double epsilon = analysis::kDefaultEpsilon;
    std::size_t merged_tour_count = 0;
    bool witness_size_ok = false;            // |U| > (lambda + eps/2) n
    double plan_cost = 0.0;
};

// Aggregate lower bound computed from a feasible plan. It never exceeds the
// plan's own cost; it bounds OPT only when the plan is optimal.
template <CustomerMetric M>
BoundReport theorem42_bound(const M& metric, const RoutePlan& plan, std::size_t capacity,
                            double lambda, double eps) {
    detail::check_lambda_eps(lambda, eps);
    const std::size_t n = metric.customer_count();
    BoundReport r;
    r.lambda = lambda;
    r.epsilon = eps;
    double ell_sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) ell_sum += metric.ell(c);
    r.rad = 2.0 * ell_sum / static_cast<double>(capacity);
    r.classic_lb = r.rad;
    for (const Tour& t : plan.tours) r.plan_cost += metric_tour_cost(metric, t);

    const auto merged = merge_small_tours(plan.tours, capacity);
    r.merged_tour_count = merged.size();
    for (const Tour& t : merged) {
        auto s = tour_radial_stats(metric, t, lambda, eps);
        r.witness_U.insert(r.witness_U.end(), s.near_set.begin(), s.near_set.end());
    }
    std::sort(r.witness_U.begin(), r.witness_U.end());
    r.witness_nearest_sum = subset_nearest_sum(metric, r.witness_U);
    r.thm42_lb = r.rad + (1.0 - lambda - eps) * r.witness_nearest_sum;
    r.witness_size_ok =
        static_cast<double>(r.witness_U.size()) > (lambda + eps / 2.0) * static_cast<double>(n);
    return r;
}

inline BoundReport theorem42_bound(const RoutePlan& plan, const Instance& inst,
                                   double lambda = analysis::kDefaultLambda,
                                   double eps = analysis::kDefaultEpsilon) {
    validate_plan(plan, inst);
    return theorem42_bound(EuclideanMetric(inst), plan, inst.capacity(), lambda, eps);
}

// max(rad, optimal TSP over {depot} and V); the TSP term needs n + 1 <= 16.
inline void attach_classic_bound(BoundReport& report, const Instance& inst) {
    if (inst.single_depot() && inst.size() + 1 <= kHeldKarpMaxPoints) {
        const auto pts = depot_and_customers(inst);
        report.tsp_optimum = cycle_cost(pts, held_karp(pts));
        report.classic_lb = std::max(report.rad, *report.tsp_optimum);
    }
}

// ---------------------------------------------------------------------------

inline constexpr std::size_t kExactCvrpMaxCustomers = 12;

// Exact CVRP optimum by subset DP: shortest depot-anchored cycle for every
// customer subset of size <= k, then a min-cost set-partition DP.
inline RoutePlan exact_cvrp(const Instance& inst) {
    require(inst.single_depot(), "exact_cvrp needs a single-depot instance");
    const std::size_t n = inst.size();
    require(n <= kExactCvrpMaxCustomers, "exact_cvrp is limited to " +
                                             std::to_string(kExactCvrpMaxCustomers) +
                                             " customers, got " + std::to_string(n));
    const std::size_t k = inst.capacity();
    const std::size_t subsets = std::size_t{1} << n;
    constexpr double inf = std::numeric_limits<double>::infinity();

    // path[mask * n + j]: shortest depot -> ... -> j path through mask.
    std::vector<double> path(subsets * n, inf);
    std::vector<std::int8_t> prev(subsets * n, -1);
    std::vector<double> dist(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) dist[a * n + b] = euclid(inst.customer(a), inst.customer(b));
    const auto l = depot_distances(inst);
    for (std::size_t j = 0; j < n; ++j) path[(std::size_t{1} << j) * n + j] = l[j];
    std::vector<double> group(subsets, inf);
    std::vector<std::int8_t> group_last(subsets, -1);
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        if (size > k) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (!(mask >> j & 1)) continue;
            const double here = path[mask * n + j];
            if (here == inf) continue;
            if (here + l[j] < group[mask]) {
                group[mask] = here + l[j];
                group_last[mask] = static_cast<std::int8_t>(j);
            }
            if (size == k) continue;
            for (std::size_t t = 0; t < n; ++t) {
                if (mask >> t & 1) continue;
                const std::size_t next = mask | (std::size_t{1} << t);
                const double cand = here + dist[j * n + t];
                if (cand < path[next * n + t]) {
                    path[next * n + t] = cand;
                    prev[next * n + t] = static_cast<std::int8_t>(j);
                }
            }
        }
    }

    // cover[mask]: cheapest partition of mask; the part holding the lowest
    // set bit is enumerated among submasks.
    std::vector<double> cover(subsets, inf);
    std::vector<std::size_t> choice(subsets, 0);
    cover[0] = 0.0;
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        const std::size_t low = mask & (~mask + 1);
        const std::size_t rest = mask & ~low;
        for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
            const std::size_t part = sub | low;
            if (group[part] < inf) {
                const double cand = group[part] + cover[mask & ~part];
                if (cand < cover[mask]) {
                    cover[mask] = cand;
                    choice[mask] = part;
                }
            }
            if (sub == 0) break;
        }
    }

    std::vector<Tour> tours;
    for (std::size_t mask = subsets - 1; mask != 0;) {
        const std::size_t part = choice[mask];
        std::vector<std::size_t> rev;
        std::size_t m = part;
        auto j = static_cast<std::size_t>(group_last[part]);
        while (true) {
            rev.push_back(j);
            const std::int8_t p = prev[m * n + j];
            m &= ~(std::size_t{1} << j);
            if (p < 0) break;
            j = static_cast<std::size_t>(p);
        }
        tours.push_back(Tour{0, {rev.rbegin(), rev.rend()}});
        mask &= ~part;
    }
    return make_plan(std::move(tours), inst);
}

// ---------------------------------------------------------------------------

struct NnStats {
    double r0 = 0.0;
    std::vector<std::size_t> z_set;  // customers with d(x, V\x) <= r0 / sqrt(n)
    double nn_sum_z = 0.0;
};

inline NnStats nn_stats(const Instance& inst, double lambda) {
    require(inst.size() >= 2, "nn_stats needs at least 2 customers");
    NnStats s;
    s.r0 = analysis::r0_of_lambda(lambda);
    const double radius = s.r0 / std::sqrt(static_cast<double>(inst.size()));
    const auto nn = nearest_neighbor_distances(inst.customers());
    for (std::size_t i = 0; i < nn.size(); ++i) {
        if (nn[i] <= radius) {
            s.z_set.push_back(i);
            s.nn_sum_z += nn[i];
        }
    }
    return s;
}

}  // namespace cvrp
