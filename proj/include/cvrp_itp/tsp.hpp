#pragma once

// Traveling-salesman tour builders: exact Held-Karp for small point sets,
// nearest neighbor + 2-opt, and a Karp-style grid partition tour.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cvrp_itp/core.hpp"

namespace cvrp {

// A Hamiltonian cycle over a point list, as a sequence of point indices.
using Cycle = std::vector<std::size_t>;

inline constexpr std::size_t kHeldKarpMaxPoints = 16;
inline constexpr std::size_t kSquareExactMaxPoints = 14;
inline constexpr std::size_t kDefaultTwoOptCapFactor = 50;

inline double cycle_cost(std::span<const Point> points, const Cycle& cycle) {
    if (cycle.size() < 2) return 0.0;
    double cost = 0.0;
    for (std::size_t i = 0; i < cycle.size(); ++i)
        cost += euclid(points[cycle[i]], points[cycle[(i + 1) % cycle.size()]]);
    return cost;
}

// Exact minimum-cost Hamiltonian cycle (bitmask DP anchored at point 0).
inline Cycle held_karp(std::span<const Point> points) {
    const std::size_t n = points.size();
    require(n >= 2, "held_karp needs at least 2 points");
    require(n <= kHeldKarpMaxPoints, "held_karp is limited to " +
                                         std::to_string(kHeldKarpMaxPoints) + " points, got " +
                                         std::to_string(n));
    if (n == 2) return {0, 1};

    // dp[mask][j]: shortest path from 0 through the nodes of `mask` (over nodes
    // 1..n-1, bit j-1 for node j) ending at node j.
    const std::size_t m = n - 1;
    const std::size_t full = (std::size_t{1} << m) - 1;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp((full + 1) * m, inf);
    std::vector<std::uint8_t> parent((full + 1) * m, 0);
    std::vector<double> dist(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) dist[a * n + b] = euclid(points[a], points[b]);

    for (std::size_t j = 0; j < m; ++j) dp[(std::size_t{1} << j) * m + j] = dist[j + 1];
    for (std::size_t mask = 1; mask <= full; ++mask) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            const double here = dp[mask * m + j];
            if (here == inf) continue;
            for (std::size_t t = 0; t < m; ++t) {
                if (mask & (std::size_t{1} << t)) continue;
                const std::size_t next = mask | (std::size_t{1} << t);
                const double cand = here + dist[(j + 1) * n + (t + 1)];
                if (cand < dp[next * m + t]) {
                    dp[next * m + t] = cand;
                    parent[next * m + t] = static_cast<std::uint8_t>(j);
                }
            }
        }
    }
    std::size_t last = 0;
    double best = inf;
    for (std::size_t j = 0; j < m; ++j) {
        const double cand = dp[full * m + j] + dist[(j + 1) * n];
        if (cand < best) {
            best = cand;
            last = j;
        }
    }
    Cycle reversed;
    std::size_t mask = full;
    std::size_t cur = last;
    while (true) {
        reversed.push_back(cur + 1);
        const std::size_t prev_mask = mask & ~(std::size_t{1} << cur);
        if (prev_mask == 0) break;
        cur = parent[mask * m + cur];
        mask = prev_mask;
    }
    Cycle cycle{0};
    cycle.insert(cycle.end(), reversed.rbegin(), reversed.rend());
    return cycle;
}

// Nearest-neighbor construction from `start`, then first-improvement 2-opt
// until locally optimal or cap_factor * n^2 move examinations. The seed only
// rotates where the 2-opt scan begins; output is deterministic given
// (points, start, seed). The returned cycle begins at `start`.
inline Cycle nn_2opt(std::span<const Point> points, std::size_t start, std::uint64_t seed = 0,
                     std::size_t cap_factor = kDefaultTwoOptCapFactor) {
    const std::size_t n = points.size();
    require(n >= 2, "nn_2opt needs at least 2 points");
    require(start < n, "nn_2opt start index out of range");

    Cycle tour;
    tour.reserve(n);
    std::vector<char> used(n, 0);
    std::size_t cur = start;
    used[cur] = 1;
    tour.push_back(cur);
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t best = n;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < n; ++c) {
            if (used[c]) continue;
            const double d = euclid(points[cur], points[c]);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        used[best] = 1;
        tour.push_back(best);
        cur = best;
    }
    if (n < 4) return tour;

    std::rotate(tour.begin(), tour.begin() + static_cast<std::ptrdiff_t>(seed % n), tour.end());
    const std::size_t cap = cap_factor * n * n;
    std::size_t examined = 0;
    auto d = [&](std::size_t a, std::size_t b) { return euclid(points[a], points[b]); };
    bool improved = true;
    while (improved && examined < cap) {
        improved = false;
        for (std::size_t i = 0; i + 2 < n && examined < cap; ++i) {
            for (std::size_t j = i + 2; j < n && examined < cap; ++j) {
                if (i == 0 && j == n - 1) continue;  // edges share a node
                ++examined;
                const std::size_t a = tour[i], b = tour[i + 1], c = tour[j], e = tour[(j + 1) % n];
                const double delta = d(a, c) + d(b, e) - d(a, b) - d(c, e);
                if (delta < -1e-12) {
                    std::reverse(tour.begin() + static_cast<std::ptrdiff_t>(i + 1),
                                 tour.begin() + static_cast<std::ptrdiff_t>(j + 1));
                    improved = true;
                }
            }
        }
    }
    auto it = std::find(tour.begin(), tour.end(), start);
    std::rotate(tour.begin(), it, tour.end());
    return tour;
}

// Converts a cycle over [depot, customers...] (point 0 is the depot) into the
// customer sequence of a TspTour.
inline TspTour tsp_tour_from_cycle(const Cycle& cycle) {
    auto it = std::find(cycle.begin(), cycle.end(), std::size_t{0});
    require(it != cycle.end(), "cycle does not contain the depot (point 0)");
    TspTour tour;
    tour.order.reserve(cycle.size() - 1);
    for (auto p = it + 1; p != cycle.end(); ++p) tour.order.push_back(*p - 1);
    for (auto p = cycle.begin(); p != it; ++p) tour.order.push_back(*p - 1);
    return tour;
}

inline std::vector<Point> depot_and_customers(const Instance& inst) {
    std::vector<Point> pts;
    pts.reserve(inst.size() + 1);
    pts.push_back(inst.depot());
    pts.insert(pts.end(), inst.customers().begin(), inst.customers().end());
    return pts;
}

// ---------------------------------------------------------------------------
// Karp-style grid tour.

struct GridCell {
    std::size_t col = 0;
    std::size_t row = 0;
    friend bool operator==(const GridCell&, const GridCell&) = default;
};

// Squares per side: max(1, round(n^{1/4} / sqrt(1 + eps2))).
inline std::size_t karp_grid_side(std::size_t n, double eps2) {
    const double g = std::round(std::pow(static_cast<double>(n), 0.25) / std::sqrt(1.0 + eps2));
    return std::max<std::size_t>(1, static_cast<std::size_t>(g));
}

// Boustrophedon order: row 0 left to right, row 1 right to left, ...
// Consecutive cells always share an edge.
inline std::vector<GridCell> serpentine_cells(std::size_t g) {
    std::vector<GridCell> cells;
    cells.reserve(g * g);
    for (std::size_t row = 0; row < g; ++row)
        for (std::size_t c = 0; c < g; ++c) cells.push_back({row % 2 == 0 ? c : g - 1 - c, row});
    return cells;
}

inline double path_cost(std::span<const Point> points, std::span<const std::size_t> path) {
    double cost = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) cost += euclid(points[path[i - 1]], points[path[i]]);
    return cost;
}

// Opens a cycle by dropping its longest edge.
inline std::vector<std::size_t> open_at_longest_edge(std::span<const Point> points,
                                                     const Cycle& cycle) {
    const std::size_t n = cycle.size();
    if (n <= 1) return {cycle.begin(), cycle.end()};
    std::size_t cut = 0;  // edge (cycle[cut], cycle[cut+1])
    double longest = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = euclid(points[cycle[i]], points[cycle[(i + 1) % n]]);
        if (d > longest) {
            longest = d;
            cut = i;
        }
    }
    std::vector<std::size_t> path;
    path.reserve(n);
    for (std::size_t s = 1; s <= n; ++s) path.push_back(cycle[(cut + s) % n]);
    return path;
}

struct KarpGridTour {
    TspTour tour;
    std::size_t grid_side = 0;
    std::vector<GridCell> occupied_cells;  // in stitching order
};

// Splits [0,1]^2 into g x g squares, solves each occupied square (Held-Karp
// up to 14 points, otherwise NN + 2-opt), opens each sub-cycle at its longest
// edge and stitches the resulting paths in serpentine order; each path is
// oriented so that it starts at the end nearer to the previous endpoint.
inline KarpGridTour karp_grid_tour_detailed(const Instance& inst, double eps2) {
    require(inst.single_depot(), "karp_grid_tour requires a single depot");
    require(inst.size() >= 16, "karp_grid_tour requires n >= 16, got n=" +
                                   std::to_string(inst.size()));
    require(eps2 > 0.0 && eps2 <= 1.0, "karp_grid_tour requires 0 < eps2 <= 1");

    const std::size_t g = karp_grid_side(inst.size(), eps2);
    const auto& pts = inst.customers();
    auto cell_of = [g](double v) {
        const double f = std::floor(v * static_cast<double>(g));
        if (!(f > 0.0)) return std::size_t{0};
        return std::min(g - 1, static_cast<std::size_t>(f));
    };
    std::vector<std::vector<std::size_t>> buckets(g * g);
    for (std::size_t i = 0; i < pts.size(); ++i)
        buckets[cell_of(pts[i].y) * g + cell_of(pts[i].x)].push_back(i);

    KarpGridTour result;
    result.grid_side = g;
    result.tour.order.reserve(pts.size());
    Point anchor = inst.depot();
    std::vector<Point> local;
    for (const GridCell& cell : serpentine_cells(g)) {
        const auto& members = buckets[cell.row * g + cell.col];
        if (members.empty()) continue;
        result.occupied_cells.push_back(cell);
        local.clear();
        for (std::size_t c : members) local.push_back(pts[c]);
        std::vector<std::size_t> path;
        if (local.size() == 1) {
            path = {0};
        } else {
            const Cycle cyc =
                local.size() <= kSquareExactMaxPoints ? held_karp(local) : nn_2opt(local, 0, 0);
            path = open_at_longest_edge(local, cyc);
        }
        if (euclid(anchor, local[path.back()]) < euclid(anchor, local[path.front()]))
            std::reverse(path.begin(), path.end());
        for (std::size_t p : path) result.tour.order.push_back(members[p]);
        anchor = local[path.back()];
    }
    return result;
}

inline TspTour karp_grid_tour(const Instance& inst, double eps2) {
    return karp_grid_tour_detailed(inst, eps2).tour;
}

// ---------------------------------------------------------------------------

struct TspMethod {
    enum class Variant { exact_dp, nn_2opt, karp_grid };

    Variant variant = Variant::nn_2opt;
    std::size_t two_opt_cap_factor = kDefaultTwoOptCapFactor;
    double eps2 = 0.1;
    std::uint64_t seed = 0;

    static TspMethod exact() { return {Variant::exact_dp}; }
    static TspMethod nn2opt(std::uint64_t seed = 0) { return {Variant::nn_2opt, kDefaultTwoOptCapFactor, 0.1, seed}; }
    static TspMethod karp(double eps2 = 0.1) { return {Variant::karp_grid, kDefaultTwoOptCapFactor, eps2}; }
};

inline std::string to_string(TspMethod::Variant v) {
    switch (v) {
        case TspMethod::Variant::exact_dp: return "exact";
        case TspMethod::Variant::nn_2opt: return "nn2opt";
        case TspMethod::Variant::karp_grid: return "karp";
    }
    return "unknown";
}

inline TspMethod::Variant parse_tsp_variant(const std::string& name) {
    if (name == "exact") return TspMethod::Variant::exact_dp;
    if (name == "nn2opt") return TspMethod::Variant::nn_2opt;
    if (name == "karp") return TspMethod::Variant::karp_grid;
    throw PreconditionError("unknown TSP method '" + name + "' (expected exact|nn2opt|karp)");
}

// Builds a tour over {depot} and all customers of a single-depot instance.
inline TspTour build_tsp_tour(const Instance& inst, const TspMethod& method) {
    require(inst.single_depot(), "TSP tour construction needs a single-depot instance");
    switch (method.variant) {
        case TspMethod::Variant::exact_dp: {
            require(inst.size() + 1 <= kHeldKarpMaxPoints,
                    "exact TSP is limited to " + std::to_string(kHeldKarpMaxPoints) +
                        " points including the depot");
            return tsp_tour_from_cycle(held_karp(depot_and_customers(inst)));
        }
        case TspMethod::Variant::nn_2opt: {
            const auto pts = depot_and_customers(inst);
            return tsp_tour_from_cycle(nn_2opt(pts, 0, method.seed, method.two_opt_cap_factor));
        }
        case TspMethod::Variant::karp_grid: return karp_grid_tour(inst, method.eps2);
    }
    throw PreconditionError("unknown TSP method");
}

}  // namespace cvrp
