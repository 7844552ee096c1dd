#pragma once

// Constructive CVRP solution built from mixed tours.
//
// The unit square is split into a lower type-III slab [0,1] x [0, (3+e2)/4]
// and boxes of width D = n^{-1/4} above it. The upper half of each box holds
// m type-I rectangles of height H stacked from the top; the lower-left part
// holds 2m type-II slices of width W. A group (one type-I rectangle, two
// type-II slices) is served by one mixed tour that sweeps each slice
// bottom-to-top on the way to and from the type-I rectangle. Everything else
// is type III and is served by ITP over a grid tour.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cvrp_itp/analysis.hpp"
#include "cvrp_itp/core.hpp"
#include "cvrp_itp/itp.hpp"
#include "cvrp_itp/tsp.hpp"

namespace cvrp {

inline constexpr std::size_t kMixedMinCustomers = 10000;

enum class RectType { type1, type2, type3 };

inline std::string to_string(RectType t) {
    switch (t) {
        case RectType::type1: return "I";
        case RectType::type2: return "II";
        case RectType::type3: return "III";
    }
    return "?";
}

struct Rect {
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    RectType type = RectType::type3;

    double measure() const { return (x1 - x0) * (y1 - y0); }
    // Half-open, except that the unit square's right and top edges are closed.
    bool contains(const Point& p) const {
        const bool in_x = p.x >= x0 && (p.x < x1 || (x1 >= 1.0 && p.x <= x1));
        const bool in_y = p.y >= y0 && (p.y < y1 || (y1 >= 1.0 && p.y <= y1));
        return in_x && in_y;
    }
    Point bottom_left() const { return {x0, y0}; }
    Point top_left() const { return {x0, y1}; }
};

struct Group {
    std::size_t box = 0;
    std::size_t type1 = 0;                // rect index
    std::array<std::size_t, 2> type2{};  // rect indices
};

struct BoxLayout {
    std::vector<std::size_t> type1;
    std::vector<std::size_t> type2;
    std::optional<std::size_t> top_strip;  // upper-half remainder below the type-I stack
    std::size_t remainder = 0;             // lower-half remainder right of the slices
};

struct Decomposition {
    std::size_t n = 0;
    double eps1 = 0, eps2 = 0, beta = 0;
    double D = 0;           // box width
    double m_nominal = 0;   // 5/(40-beta) n^{1/4}
    std::size_t m = 0;      // floor(m_nominal) type-I rectangles per box
    double H = 0;           // (1-e2) / (8 m_nominal)
    double W = 0;           // beta/10 n^{-1/2}
    double y_low = 0;       // (3+e2)/4
    double y_mid = 0;       // (7+e2)/8
    std::size_t box_count = 0;
    std::vector<Rect> rects;
    std::vector<BoxLayout> boxes;
    std::vector<std::size_t> type1, type2, type3;
    std::vector<Group> groups;
    std::optional<std::size_t> right_slice;  // leftover width past the last box

    double group_measure() const { return D * H + 2.0 * W * (1.0 - eps2) / 8.0; }
    double box_x0(std::size_t b) const { return static_cast<double>(b) * D; }

    // Index of the rectangle containing p; nullopt outside [0,1]^2.
    std::optional<std::size_t> locate(const Point& p) const {
        if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) return std::nullopt;
        std::size_t guess = 0;
        if (p.y >= y_low) {
            const auto b = static_cast<std::size_t>(std::floor(p.x / D));
            if (b >= box_count) {
                guess = right_slice.value_or(0);
            } else {
                const BoxLayout& box = boxes[b];
                if (p.y >= y_mid) {
                    const auto j = static_cast<std::size_t>(std::floor((1.0 - p.y) / H));
                    guess = j < m ? box.type1[j] : box.top_strip.value_or(box.type1.back());
                } else {
                    const auto s = static_cast<std::size_t>(std::floor((p.x - box_x0(b)) / W));
                    guess = s < 2 * m ? box.type2[s] : box.remainder;
                }
            }
        }
        if (rects[guess].contains(p)) return guess;
        for (std::size_t r = 0; r < rects.size(); ++r)  // boundary rounding
            if (rects[r].contains(p)) return r;
        return std::nullopt;
    }
};

inline Decomposition decompose(std::size_t n, double eps1, double beta = analysis::kBeta0) {
    require(n >= kMixedMinCustomers, "decompose needs n >= " + std::to_string(kMixedMinCustomers) +
                                         ", got n=" + std::to_string(n));
    require(eps1 > 0.0 && eps1 <= 1.0, "decompose needs 0 < eps1 <= 1");
    require(beta >= analysis::kBeta0 && beta <= analysis::kBeta1,
            "decompose needs beta in [beta0, beta1]");
    Decomposition d;
    d.n = n;
    d.eps1 = eps1;
    d.eps2 = eps1 / 10.0;
    d.beta = beta;
    const double root4 = std::pow(static_cast<double>(n), 0.25);
    d.D = 1.0 / root4;
    d.box_count = static_cast<std::size_t>(std::floor(root4 + 1e-9));
    d.m_nominal = 5.0 / (40.0 - beta) * root4;
    d.m = static_cast<std::size_t>(std::floor(d.m_nominal));
    d.H = (1.0 - d.eps2) / (8.0 * d.m_nominal);
    d.W = beta / 10.0 / std::sqrt(static_cast<double>(n));
    d.y_low = (3.0 + d.eps2) / 4.0;
    d.y_mid = (7.0 + d.eps2) / 8.0;

    auto add = [&d](Rect r) {
        d.rects.push_back(r);
        const std::size_t idx = d.rects.size() - 1;
        (r.type == RectType::type1 ? d.type1 : r.type == RectType::type2 ? d.type2 : d.type3)
            .push_back(idx);
        return idx;
    };
    add({0.0, 1.0, 0.0, d.y_low, RectType::type3});

    const double eps_edge = 1e-12;
    for (std::size_t b = 0; b < d.box_count; ++b) {
        const double x0 = d.box_x0(b);
        double x1 = d.box_x0(b + 1);
        if (b + 1 == d.box_count && x1 > 1.0 - eps_edge) x1 = 1.0;
        BoxLayout box;
        for (std::size_t j = 0; j < d.m; ++j) {
            const double top = 1.0 - static_cast<double>(j) * d.H;
            const double bottom = 1.0 - static_cast<double>(j + 1) * d.H;
            box.type1.push_back(add({x0, x1, bottom, top, RectType::type1}));
        }
        const double stack_bottom = 1.0 - static_cast<double>(d.m) * d.H;
        if (stack_bottom > d.y_mid + eps_edge)
            box.top_strip = add({x0, x1, d.y_mid, stack_bottom, RectType::type3});
        else
            d.rects[box.type1.back()].y0 = d.y_mid;
        for (std::size_t s = 0; s < 2 * d.m; ++s) {
            const double sx0 = x0 + static_cast<double>(s) * d.W;
            box.type2.push_back(add({sx0, sx0 + d.W, d.y_low, d.y_mid, RectType::type2}));
        }
        box.remainder = add({x0 + 2.0 * static_cast<double>(d.m) * d.W, x1, d.y_low, d.y_mid,
                             RectType::type3});
        for (std::size_t j = 0; j < d.m; ++j)
            d.groups.push_back({b, box.type1[j], {box.type2[2 * j], box.type2[2 * j + 1]}});
        d.boxes.push_back(std::move(box));
    }
    const double covered = d.rects.back().x1;
    if (covered < 1.0)
        d.right_slice = add({covered, 1.0, d.y_low, 1.0, RectType::type3});
    return d;
}

// Customers of each rectangle (index order); customers outside [0,1]^2 are
// returned separately.
struct RectMembers {
    std::vector<std::vector<std::size_t>> by_rect;
    std::vector<std::size_t> outside;
};

inline RectMembers bucket_customers(const Decomposition& dec, const Instance& inst) {
    RectMembers out;
    out.by_rect.resize(dec.rects.size());
    for (std::size_t c = 0; c < inst.size(); ++c) {
        if (auto r = dec.locate(inst.customer(c)))
            out.by_rect[*r].push_back(c);
        else
            out.outside.push_back(c);
    }
    return out;
}

struct CapacityReport {
    std::size_t k = 0;
    std::vector<std::size_t> rect_counts;
    std::vector<char> rect_in_band;  // (1-e2) M n < n_R < (1+e2) M n
    std::size_t band_violations = 0;
    std::vector<std::size_t> group_counts;
    std::vector<char> group_fits;  // count <= k
    std::size_t groups_over_capacity = 0;
    double fraction_groups_fit = 1.0;
};

inline CapacityReport capacity_check(const Decomposition& dec, const Instance& inst) {
    require(inst.size() == dec.n, "capacity_check: decomposition was built for another n");
    CapacityReport rep;
    rep.k = inst.capacity();
    const RectMembers members = bucket_customers(dec, inst);
    const double n = static_cast<double>(inst.size());
    for (std::size_t r = 0; r < dec.rects.size(); ++r) {
        const auto count = members.by_rect[r].size();
        const double expected = dec.rects[r].measure() * n;
        const auto c = static_cast<double>(count);
        const bool ok = (1.0 - dec.eps2) * expected < c && c < (1.0 + dec.eps2) * expected;
        rep.rect_counts.push_back(count);
        rep.rect_in_band.push_back(ok);
        if (!ok) ++rep.band_violations;
    }
    for (const Group& g : dec.groups) {
        const std::size_t count = members.by_rect[g.type1].size() +
                                  members.by_rect[g.type2[0]].size() +
                                  members.by_rect[g.type2[1]].size();
        rep.group_counts.push_back(count);
        rep.group_fits.push_back(count <= rep.k);
        if (count > rep.k) ++rep.groups_over_capacity;
    }
    if (!dec.groups.empty())
        rep.fraction_groups_fit =
            1.0 - static_cast<double>(rep.groups_over_capacity) / static_cast<double>(dec.groups.size());
    return rep;
}

// ---------------------------------------------------------------------------

struct Waypoint {
    Point at;
    std::optional<std::size_t> customer;
};

// Neumaier-compensated, so that parts and whole agree to the last bits.
inline double waypoint_path_cost(const std::vector<Waypoint>& path) {
    double sum = 0.0, carry = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const double v = euclid(path[i - 1].at, path[i].at);
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return sum + carry;
}

struct MixedTour {
    std::size_t group = 0;
    Point p1;                              // bottom-left corner of the type-I rectangle
    std::vector<Waypoint> t0;              // closed: P1, type-I customers, P1
    std::array<std::vector<Waypoint>, 2> legs;  // O, Q_i, slice customers by y, S_i, P1
    std::array<std::size_t, 2> leg_customers{};  // n_i
    double cost_t0 = 0.0;
    std::array<double, 2> cost_legs{};

    double cost() const { return cost_t0 + cost_legs[0] + cost_legs[1]; }

    // O -> slice 1 upward -> type-I cycle -> slice 2 downward -> O, with the
    // corner waypoints shortcut away.
    std::vector<std::size_t> customers() const {
        std::vector<std::size_t> out;
        for (const Waypoint& w : legs[0])
            if (w.customer) out.push_back(*w.customer);
        for (const Waypoint& w : t0)
            if (w.customer) out.push_back(*w.customer);
        for (auto it = legs[1].rbegin(); it != legs[1].rend(); ++it)
            if (it->customer) out.push_back(*it->customer);
        return out;
    }
    Tour as_tour(std::size_t depot_index = 0) const { return Tour{depot_index, customers()}; }
    bool empty() const { return leg_customers[0] + leg_customers[1] + t0.size() <= 2; }
};

// Upper bound on a sweep leg: d(O,P1) + 1/4000 + n_i W + (W + 2D).
inline double leg_cost_bound(const MixedTour& t, std::size_t leg, const Point& depot,
                             const Decomposition& dec) {
    return euclid(depot, t.p1) + 1.0 / 4000.0 +
           static_cast<double>(t.leg_customers[leg]) * dec.W + (dec.W + 2.0 * dec.D);
}

namespace detail {

inline MixedTour build_mixed_tour(const Decomposition& dec, std::size_t group_index,
                                  const RectMembers& members, const Instance& inst,
                                  const Point& depot) {
    const Group& g = dec.groups.at(group_index);
    const Rect& a = dec.rects[g.type1];
    MixedTour t;
    t.group = group_index;
    t.p1 = a.bottom_left();

    const auto& type1_ids = members.by_rect[g.type1];
    std::vector<Point> local{t.p1};
    for (std::size_t c : type1_ids) local.push_back(inst.customer(c));
    t.t0.push_back({t.p1, std::nullopt});
    if (local.size() >= 2) {
        const Cycle cyc =
            local.size() <= kSquareExactMaxPoints ? held_karp(local) : nn_2opt(local, 0, 0);
        for (std::size_t i = 1; i < cyc.size(); ++i)
            t.t0.push_back({local[cyc[i]], type1_ids[cyc[i] - 1]});
        t.t0.push_back({t.p1, std::nullopt});
    }
    t.cost_t0 = waypoint_path_cost(t.t0);

    for (std::size_t leg = 0; leg < 2; ++leg) {
        const Rect& b = dec.rects[g.type2[leg]];
        std::vector<std::size_t> ids = members.by_rect[g.type2[leg]];
        // non-decreasing y; equal y keeps index order
        std::stable_sort(ids.begin(), ids.end(), [&](std::size_t u, std::size_t v) {
            return inst.customer(u).y < inst.customer(v).y;
        });
        auto& path = t.legs[leg];
        path.push_back({depot, std::nullopt});
        path.push_back({b.bottom_left(), std::nullopt});
        for (std::size_t c : ids) path.push_back({inst.customer(c), c});
        path.push_back({b.top_left(), std::nullopt});
        path.push_back({t.p1, std::nullopt});
        t.leg_customers[leg] = ids.size();
        t.cost_legs[leg] = waypoint_path_cost(path);
    }
    return t;
}

}  // namespace detail

inline MixedTour build_mixed_tour(const Decomposition& dec, std::size_t group_index,
                                  const Instance& inst) {
    require(inst.single_depot(), "build_mixed_tour needs a single depot");
    return detail::build_mixed_tour(dec, group_index, bucket_customers(dec, inst), inst,
                                    inst.depot());
}

// ---------------------------------------------------------------------------

struct MixedBreakdown {
    double rad = 0.0;
    std::size_t mixed_tours = 0;
    double mixed_cost = 0.0;           // plan cost of the mixed tours (corners shortcut)
    double mixed_waypoint_cost = 0.0;  // sum of cost(T0) + cost(T1) + cost(T2)
    std::size_t fallback_groups = 0;   // groups over capacity, split by y
    std::size_t fallback_tours = 0;
    double fallback_cost = 0.0;
    std::size_t type3_customers = 0;
    double type3_tsp_cost = 0.0;
    double type3_splitting_weight = 0.0;
    double type3_cost = 0.0;
    double total = 0.0;
};

struct MixedSolution {
    Decomposition decomposition;
    std::vector<MixedTour> mixed_tours;
    RoutePlan plan;
    MixedBreakdown breakdown;
};

inline std::size_t sqrt_capacity(std::size_t n) {
    return static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
}

// All mixed tours, y-ordered chunks for groups over capacity, and ITP over a
// grid tour (exact TSP below 16 customers) for the type-III customers.
inline MixedSolution build_solution(const Instance& inst, double eps1,
                                    double beta = analysis::kBeta0) {
    require(inst.single_depot(), "build_solution needs a single depot");
    require(inst.depot().y < 0.0, "build_solution needs the depot below the unit square");
    const std::size_t k = inst.capacity();
    require(k == sqrt_capacity(inst.size()),
            "build_solution needs k = round(sqrt(n)) = " + std::to_string(sqrt_capacity(inst.size())));

    MixedSolution sol;
    sol.decomposition = decompose(inst.size(), eps1, beta);
    const Decomposition& dec = sol.decomposition;
    const RectMembers members = bucket_customers(dec, inst);
    MixedBreakdown& br = sol.breakdown;
    br.rad = radial_cost(inst);

    std::vector<Tour> tours;
    for (std::size_t gi = 0; gi < dec.groups.size(); ++gi) {
        const Group& g = dec.groups[gi];
        std::vector<std::size_t> ids = members.by_rect[g.type1];
        for (std::size_t r : g.type2)
            ids.insert(ids.end(), members.by_rect[r].begin(), members.by_rect[r].end());
        if (ids.empty()) continue;
        if (ids.size() <= k) {
            MixedTour mt = detail::build_mixed_tour(dec, gi, members, inst, inst.depot());
            Tour t = mt.as_tour();
            br.mixed_cost += tour_cost(t, inst);
            br.mixed_waypoint_cost += mt.cost();
            tours.push_back(std::move(t));
            sol.mixed_tours.push_back(std::move(mt));
            continue;
        }
        ++br.fallback_groups;
        std::stable_sort(ids.begin(), ids.end(), [&](std::size_t u, std::size_t v) {
            return inst.customer(u).y < inst.customer(v).y;
        });
        for (std::size_t s = 0; s < ids.size(); s += k) {
            Tour t{0, {ids.begin() + static_cast<std::ptrdiff_t>(s),
                       ids.begin() + static_cast<std::ptrdiff_t>(std::min(ids.size(), s + k))}};
            br.fallback_cost += tour_cost(t, inst);
            ++br.fallback_tours;
            tours.push_back(std::move(t));
        }
    }
    br.mixed_tours = sol.mixed_tours.size();

    std::vector<std::size_t> rest = members.outside;
    for (std::size_t r : dec.type3)
        rest.insert(rest.end(), members.by_rect[r].begin(), members.by_rect[r].end());
    std::sort(rest.begin(), rest.end());
    br.type3_customers = rest.size();
    if (!rest.empty()) {
        std::vector<Point> pts;
        for (std::size_t c : rest) pts.push_back(inst.customer(c));
        const Instance sub(std::move(pts), {inst.depot()}, std::min(k, rest.size()));
        const TspTour tsp = sub.size() >= 16 ? karp_grid_tour(sub, dec.eps2)
                                             : build_tsp_tour(sub, TspMethod::exact());
        const ItpResult r = itp(tsp, sub);
        br.type3_tsp_cost = r.tsp_cost;
        br.type3_splitting_weight = r.splitting_weight_total;
        br.type3_cost = r.cost;
        for (const Tour& t : r.plan.tours) {
            Tour mapped{0, {}};
            for (std::size_t c : t.visit_order) mapped.visit_order.push_back(rest[c]);
            tours.push_back(std::move(mapped));
        }
    }
    sol.plan = make_plan(std::move(tours), inst);
    br.total = sol.plan.total_cost;
    return sol;
}

}  // namespace cvrp
