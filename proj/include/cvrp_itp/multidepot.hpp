#pragma once

// Several depots: send every customer to its closest depot and run ITP on
// each depot's customers independently.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "cvrp_itp/core.hpp"
#include "cvrp_itp/itp.hpp"
#include "cvrp_itp/parallel.hpp"
#include "cvrp_itp/tsp.hpp"

namespace cvrp {

struct DepotAssignment {
    std::vector<std::size_t> depot_of;                // per customer
    std::vector<std::vector<std::size_t>> customers;  // per depot, ascending index
};

// Ties go to the lowest depot index.
inline DepotAssignment assign_nearest(const Instance& inst) {
    DepotAssignment a;
    a.depot_of.resize(inst.size());
    a.customers.resize(inst.depot_count());
    for (std::size_t c = 0; c < inst.size(); ++c) {
        std::size_t best = 0;
        double best_d = euclid(inst.customer(c), inst.depot(0));
        for (std::size_t d = 1; d < inst.depot_count(); ++d) {
            const double dd = euclid(inst.customer(c), inst.depot(d));
            if (dd < best_d) {
                best_d = dd;
                best = d;
            }
        }
        a.depot_of[c] = best;
        a.customers[best].push_back(c);
    }
    return a;
}

// Single-depot instance over one depot's customers; capacity is clamped to
// the subproblem size.
inline Instance depot_subproblem(const Instance& inst, const DepotAssignment& a, std::size_t d) {
    std::vector<Point> pts;
    pts.reserve(a.customers.at(d).size());
    for (std::size_t c : a.customers[d]) pts.push_back(inst.customer(c));
    const std::size_t k = std::min(inst.capacity(), pts.size());
    return Instance(std::move(pts), {inst.depot(d)}, k, inst.seed());
}

struct MultiItpResult {
    DepotAssignment assignment;
    std::vector<std::optional<ItpResult>> per_depot;  // empty subproblems hold nullopt
    RoutePlan plan;   // customer and depot indices of the original instance
    double cost = 0.0;
    double rad = 0.0;
};

inline MultiItpResult multi_itp(const Instance& inst, const TspMethod& method,
                                std::size_t threads = 1) {
    MultiItpResult out;
    out.assignment = assign_nearest(inst);
    const std::size_t s = inst.depot_count();
    out.per_depot.resize(s);
    parallel_for(s, threads, [&](std::size_t d) {
        if (out.assignment.customers[d].empty()) return;
        const Instance sub = depot_subproblem(inst, out.assignment, d);
        out.per_depot[d] = itp(build_tsp_tour(sub, method), sub);
    });
    std::vector<Tour> tours;
    for (std::size_t d = 0; d < s; ++d) {
        if (!out.per_depot[d]) continue;
        out.cost += out.per_depot[d]->cost;
        const auto& ids = out.assignment.customers[d];
        for (const Tour& t : out.per_depot[d]->plan.tours) {
            Tour mapped{d, {}};
            for (std::size_t c : t.visit_order) mapped.visit_order.push_back(ids[c]);
            tours.push_back(std::move(mapped));
        }
    }
    out.plan = make_plan(std::move(tours), inst);
    out.rad = radial_cost(inst);
    return out;
}

}  // namespace cvrp
