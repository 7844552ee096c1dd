#pragma once

// Geometric primitives, CVRP instances, tours and route plans.
//
// Customers are identified by their index in Instance::customers(); two
// customers may share coordinates. All costs are Euclidean lengths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cvrp_itp/errors.hpp"

namespace cvrp {

inline constexpr double kCostTolerance = 1e-9;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline double euclid(const Point& p, const Point& q) {
    return std::hypot(p.x - q.x, p.y - q.y);
}

class Instance {
public:
    Instance(std::vector<Point> customers, std::vector<Point> depots, std::size_t capacity,
             std::optional<std::uint64_t> seed = std::nullopt)
        : customers_(std::move(customers)),
          depots_(std::move(depots)),
          capacity_(capacity),
          seed_(seed) {
        require(!customers_.empty(), "instance needs at least one customer");
        require(!depots_.empty(), "instance needs at least one depot");
        require(capacity_ >= 1 && capacity_ <= customers_.size(),
                "capacity k must lie in [1, n], got k=" + std::to_string(capacity_) +
                    " for n=" + std::to_string(customers_.size()));
        auto finite = [](const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); };
        require(std::all_of(customers_.begin(), customers_.end(), finite),
                "customer coordinates must be finite");
        require(std::all_of(depots_.begin(), depots_.end(), finite),
                "depot coordinates must be finite");
    }

    const std::vector<Point>& customers() const noexcept { return customers_; }
    const std::vector<Point>& depots() const noexcept { return depots_; }
    const Point& customer(std::size_t i) const { return customers_.at(i); }
    const Point& depot(std::size_t d = 0) const { return depots_.at(d); }
    std::size_t size() const noexcept { return customers_.size(); }
    std::size_t depot_count() const noexcept { return depots_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    std::optional<std::uint64_t> seed() const noexcept { return seed_; }
    bool single_depot() const noexcept { return depots_.size() == 1; }

    // Same customers and depots with another capacity.
    Instance with_capacity(std::size_t k) const { return Instance(customers_, depots_, k, seed_); }

private:
    std::vector<Point> customers_;
    std::vector<Point> depots_;
    std::size_t capacity_;
    std::optional<std::uint64_t> seed_;
};

// Depot distance of a customer: distance to the nearest depot.
inline double ell(std::size_t x, const Instance& inst) {
    const Point& p = inst.customer(x);
    double best = std::numeric_limits<double>::infinity();
    for (const Point& d : inst.depots()) best = std::min(best, euclid(d, p));
    return best;
}

inline std::vector<double> depot_distances(const Instance& inst) {
    std::vector<double> out(inst.size());
    for (std::size_t i = 0; i < inst.size(); ++i) out[i] = ell(i, inst);
    return out;
}

// rad = (2/k) * sum of depot distances.
inline double radial_cost(const Instance& inst) {
    double sum = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) sum += ell(i, inst);
    return 2.0 * sum / static_cast<double>(inst.capacity());
}

struct Tour {
    std::size_t depot_index = 0;
    std::vector<std::size_t> visit_order;

    bool empty() const noexcept { return visit_order.empty(); }
    std::size_t size() const noexcept { return visit_order.size(); }
    friend bool operator==(const Tour&, const Tour&) = default;
};

struct RoutePlan {
    std::vector<Tour> tours;
    double total_cost = 0.0;
};

// Closed-loop length depot -> visit_order... -> depot. Empty tours cost 0.
inline double tour_cost(const Tour& tour, const Instance& inst) {
    if (tour.visit_order.empty()) return 0.0;
    require(tour.depot_index < inst.depot_count(),
            "tour references depot " + std::to_string(tour.depot_index) + " which does not exist");
    for (std::size_t c : tour.visit_order)
        require(c < inst.size(), "tour references invalid customer index " + std::to_string(c));
    const Point& depot = inst.depot(tour.depot_index);
    const auto& order = tour.visit_order;
    double cost = euclid(depot, inst.customer(order.front()));
    for (std::size_t j = 1; j < order.size(); ++j)
        cost += euclid(inst.customer(order[j - 1]), inst.customer(order[j]));
    cost += euclid(inst.customer(order.back()), depot);
    return cost;
}

inline double plan_cost(const RoutePlan& plan, const Instance& inst) {
    double total = 0.0;
    for (const Tour& t : plan.tours) total += tour_cost(t, inst);
    return total;
}

// Drops empty tours and refreshes the cached cost.
inline RoutePlan make_plan(std::vector<Tour> tours, const Instance& inst) {
    std::erase_if(tours, [](const Tour& t) { return t.empty(); });
    RoutePlan plan{std::move(tours), 0.0};
    plan.total_cost = plan_cost(plan, inst);
    return plan;
}

// Throws PreconditionError unless every customer appears in exactly one tour
// and no tour exceeds the capacity.
inline void validate_plan(const RoutePlan& plan, const Instance& inst) {
    std::vector<char> seen(inst.size(), 0);
    for (const Tour& t : plan.tours) {
        require(t.depot_index < inst.depot_count(),
                "plan references missing depot " + std::to_string(t.depot_index));
        require(t.size() <= inst.capacity(),
                "tour with " + std::to_string(t.size()) + " customers exceeds capacity " +
                    std::to_string(inst.capacity()));
        for (std::size_t c : t.visit_order) {
            require(c < inst.size(), "plan references invalid customer index " + std::to_string(c));
            require(!seen[c], "customer " + std::to_string(c) + " is visited more than once");
            seen[c] = 1;
        }
    }
    for (std::size_t c = 0; c < inst.size(); ++c)
        require(seen[c], "customer " + std::to_string(c) + " is not visited");
}

inline bool is_feasible(const RoutePlan& plan, const Instance& inst) {
    try {
        validate_plan(plan, inst);
        return true;
    } catch (const PreconditionError&) {
        return false;
    }
}

// A traveling salesman tour over {depot} and all customers of a single-depot
// instance, stored as the customer sequence x_1..x_n of (O, x_1, ..., x_n, O).
struct TspTour {
    std::vector<std::size_t> order;

    friend bool operator==(const TspTour&, const TspTour&) = default;
};

inline bool is_permutation_tour(const TspTour& tour, std::size_t n) {
    if (tour.order.size() != n) return false;
    std::vector<char> seen(n, 0);
    for (std::size_t c : tour.order) {
        if (c >= n || seen[c]) return false;
        seen[c] = 1;
    }
    return true;
}

inline void validate_tsp_tour(const TspTour& tour, const Instance& inst) {
    require(is_permutation_tour(tour, inst.size()),
            "TSP tour must visit each of the " + std::to_string(inst.size()) +
                " customers exactly once");
}

inline double tsp_tour_cost(const TspTour& tour, const Instance& inst) {
    validate_tsp_tour(tour, inst);
    return tour_cost(Tour{0, tour.order}, inst);
}

}  // namespace cvrp
