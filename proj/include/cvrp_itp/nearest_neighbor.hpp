#pragma once

// Exact nearest-neighbor distances d(x, P \ {x}) for planar point sets.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "cvrp_itp/core.hpp"

namespace cvrp {

inline constexpr std::size_t kNearestNeighborBruteForceBelow = 32;

// O(n^2) scan. A single point gets +inf.
inline std::vector<double> nearest_neighbor_distances_brute(std::span<const Point> pts) {
    const std::size_t n = pts.size();
    std::vector<double> out(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = euclid(pts[i], pts[j]);
            out[i] = std::min(out[i], d);
            out[j] = std::min(out[j], d);
        }
    return out;
}

// Grid-bucketed exact search; about two points per cell. Rings of cells are
// scanned outward until the ring distance exceeds the best candidate.
inline std::vector<double> nearest_neighbor_distances(std::span<const Point> pts) {
    const std::size_t n = pts.size();
    if (n < kNearestNeighborBruteForceBelow) return nearest_neighbor_distances_brute(pts);

    double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
    for (const Point& p : pts) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const double extent = std::max(x1 - x0, y1 - y0);
    if (!(extent > 0.0)) return std::vector<double>(n, 0.0);  // all coincident

    const auto side = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(n / 2.0)));
    const double cell = extent / static_cast<double>(side);
    auto index = [&](double v, double lo) {
        const double f = std::floor((v - lo) / cell);
        if (!(f > 0.0)) return std::size_t{0};
        return std::min(side - 1, static_cast<std::size_t>(f));
    };

    // Counting sort of point ids by cell.
    std::vector<std::size_t> cell_of(n);
    std::vector<std::size_t> start(side * side + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        cell_of[i] = index(pts[i].y, y0) * side + index(pts[i].x, x0);
        ++start[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < side * side; ++c) start[c + 1] += start[c];
    std::vector<std::size_t> ids(n);
    {
        std::vector<std::size_t> fill(start.begin(), start.end() - 1);
        for (std::size_t i = 0; i < n; ++i) ids[fill[cell_of[i]]++] = i;
    }

    std::vector<double> out(n, std::numeric_limits<double>::infinity());
    const auto iside = static_cast<long long>(side);
    for (std::size_t i = 0; i < n; ++i) {
        const auto cx = static_cast<long long>(cell_of[i] % side);
        const auto cy = static_cast<long long>(cell_of[i] / side);
        double best = std::numeric_limits<double>::infinity();
        for (long long r = 0; r <= iside; ++r) {
            // After ring r-1 every unseen point is at least (r-1) cells away.
            if (r > 0 && best <= static_cast<double>(r - 1) * cell) break;
            for (long long gy = cy - r; gy <= cy + r; ++gy) {
                if (gy < 0 || gy >= iside) continue;
                const bool edge_row = (gy == cy - r || gy == cy + r);
                for (long long gx = cx - r; gx <= cx + r; gx += (edge_row || r == 0) ? 1 : 2 * r) {
                    if (gx < 0 || gx >= iside) continue;
                    const auto c = static_cast<std::size_t>(gy * iside + gx);
                    for (std::size_t s = start[c]; s < start[c + 1]; ++s) {
                        const std::size_t j = ids[s];
                        if (j != i) best = std::min(best, euclid(pts[i], pts[j]));
                    }
                }
            }
        }
        out[i] = best;
    }
    return out;
}

}  // namespace cvrp
