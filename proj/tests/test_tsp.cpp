#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cvrp_itp/experiment.hpp"
#include "cvrp_itp/tsp.hpp"
#include "support/oracles.hpp"

using namespace cvrp;

namespace {

std::vector<Point> random_points(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<Point> pts(n);
    for (Point& p : pts) p = {rng.uniform(), rng.uniform()};
    return pts;
}

bool is_cycle_permutation(const Cycle& c, std::size_t n) {
    if (c.size() != n) return false;
    std::vector<char> seen(n, 0);
    for (std::size_t v : c) {
        if (v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

}  // namespace

TEST(HeldKarp, UnitSquareCorners) {
    const std::vector<Point> pts{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    EXPECT_NEAR(cycle_cost(pts, held_karp(pts)), 4.0, 1e-12);
}

TEST(HeldKarp, CollinearIsOutAndBack) {
    const std::vector<Point> pts{{0, 0}, {2.5, 0}, {1, 0}, {4, 0}, {3, 0}};
    EXPECT_NEAR(cycle_cost(pts, held_karp(pts)), 8.0, 1e-12);
}

TEST(HeldKarp, MatchesPermutationOracle) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto pts = random_points(8, 100 + s);
        const Cycle c = held_karp(pts);
        ASSERT_TRUE(is_cycle_permutation(c, 8));
        EXPECT_EQ(c.front(), 0u);
        EXPECT_NEAR(cycle_cost(pts, c), oracle::brute_tsp(pts), 1e-9);
    }
}

TEST(HeldKarp, SizeLimits) {
    EXPECT_THROW(held_karp(random_points(1, 1)), PreconditionError);
    EXPECT_THROW(held_karp(random_points(17, 1)), PreconditionError);
    EXPECT_NO_THROW(held_karp(random_points(16, 1)));
}

TEST(Nn2Opt, TwoPoints) {
    const std::vector<Point> pts{{0, 0}, {0.3, 0.4}};
    EXPECT_NEAR(cycle_cost(pts, nn_2opt(pts, 0)), 1.0, 1e-15);
}

TEST(Nn2Opt, RecoversCircleOrder) {
    for (std::size_t n : {5u, 8u, 12u}) {
        std::vector<Point> pts;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = 2.0 * std::numbers::pi * static_cast<double>((i * 5) % n) / static_cast<double>(n);
            pts.push_back({std::cos(a), std::sin(a)});
        }
        EXPECT_NEAR(cycle_cost(pts, nn_2opt(pts, 0, 3)), cycle_cost(pts, held_karp(pts)), 1e-9);
    }
}

TEST(Nn2Opt, NoWorseThanNearestNeighborAndStartsAtStart) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto pts = random_points(40, 200 + s);
        const Cycle improved = nn_2opt(pts, 5, s);
        const Cycle plain = nn_2opt(pts, 5, s, 0);  // zero cap: no 2-opt moves
        ASSERT_TRUE(is_cycle_permutation(improved, 40));
        EXPECT_EQ(improved.front(), 5u);
        EXPECT_LE(cycle_cost(pts, improved), cycle_cost(pts, plain) + 1e-12);
        EXPECT_EQ(improved, nn_2opt(pts, 5, s));
    }
}

TEST(Nn2Opt, WithinQuarterOfOptimumOnSmallInstances) {
    int within = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto pts = random_points(3 + s % 8, 300 + s);
        const double opt = cycle_cost(pts, held_karp(pts));
        if (cycle_cost(pts, nn_2opt(pts, 0, s)) <= 1.25 * opt + 1e-12) ++within;
    }
    EXPECT_GE(within, 190);
}

TEST(KarpGrid, SideRule) {
    EXPECT_EQ(karp_grid_side(16, 0.1), 2u);
    EXPECT_EQ(karp_grid_side(4096, 0.1), 8u);
    EXPECT_EQ(karp_grid_side(1, 1.0), 1u);
}

TEST(KarpGrid, SerpentineCellsAreAdjacent) {
    for (std::size_t g : {1u, 2u, 5u, 8u}) {
        const auto cells = serpentine_cells(g);
        ASSERT_EQ(cells.size(), g * g);
        for (std::size_t i = 1; i < cells.size(); ++i) {
            const auto dc = std::abs(static_cast<long>(cells[i].col) - static_cast<long>(cells[i - 1].col));
            const auto dr = std::abs(static_cast<long>(cells[i].row) - static_cast<long>(cells[i - 1].row));
            EXPECT_EQ(dc + dr, 1);
        }
    }
}

TEST(KarpGrid, SingleOccupiedSquareIsItsTourPlusDepotLinks) {
    SplitMix64 rng(4);
    std::vector<Point> pts(20);
    for (Point& p : pts) p = {0.01 + 0.2 * rng.uniform(), 0.01 + 0.2 * rng.uniform()};
    const Instance inst(pts, {{0.5, -1000}}, 5);
    const KarpGridTour kt = karp_grid_tour_detailed(inst, 0.1);
    ASSERT_EQ(kt.occupied_cells.size(), 1u);
    const Cycle local = nn_2opt(pts, 0, 0);
    auto path = open_at_longest_edge(pts, local);
    if (euclid(inst.depot(), pts[path.back()]) < euclid(inst.depot(), pts[path.front()]))
        std::reverse(path.begin(), path.end());
    EXPECT_EQ(kt.tour.order, path);
    const double expect = path_cost(pts, path) + euclid(inst.depot(), pts[path.front()]) +
                          euclid(inst.depot(), pts[path.back()]);
    EXPECT_NEAR(tsp_tour_cost(kt.tour, inst), expect, 1e-9);
}

TEST(KarpGrid, NormalisedCostInBand) {
    const Instance inst = gen_instance(4096, 64, 1);
    const auto& o = karp_grid_tour(inst, 0.1).order;
    double cycle = euclid(inst.customer(o.back()), inst.customer(o.front()));
    for (std::size_t i = 1; i < o.size(); ++i) cycle += euclid(inst.customer(o[i - 1]), inst.customer(o[i]));
    EXPECT_GT(cycle / 64.0, 0.62);
    EXPECT_LT(cycle / 64.0, 1.05);
}

TEST(KarpGrid, Preconditions) {
    const Instance small = gen_instance(15, 3, 1);
    EXPECT_THROW(karp_grid_tour(small, 0.1), PreconditionError);
    const Instance inst = gen_instance(20, 3, 1);
    EXPECT_THROW(karp_grid_tour(inst, 0.0), PreconditionError);
    EXPECT_THROW(karp_grid_tour(inst, 1.5), PreconditionError);
}

TEST(Builders, ExactMatchesOracleAndToursArePermutations) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Instance inst = gen_instance(8, 3, 500 + s, s % 2 ? DepotSpec::uniform(1) : DepotSpec{});
        const TspTour exact = build_tsp_tour(inst, TspMethod::exact());
        ASSERT_TRUE(is_permutation_tour(exact, 8));
        EXPECT_NEAR(tsp_tour_cost(exact, inst), oracle::brute_tsp(depot_and_customers(inst)), 1e-9);
    }
    const Instance big = gen_instance(300, 10, 9, DepotSpec::uniform(1));
    EXPECT_TRUE(is_permutation_tour(build_tsp_tour(big, TspMethod::karp(0.1)), 300));
    EXPECT_TRUE(is_permutation_tour(build_tsp_tour(big, TspMethod::nn2opt(3)), 300));
    EXPECT_THROW(build_tsp_tour(big, TspMethod::exact()), PreconditionError);
}

TEST(Builders, ExactNotWorseThanHeuristicsOnSmallInstances) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Instance inst = gen_instance(15, 3, 600 + s, DepotSpec::uniform(1));
        const double exact = tsp_tour_cost(build_tsp_tour(inst, TspMethod::exact()), inst);
        EXPECT_LE(exact, tsp_tour_cost(build_tsp_tour(inst, TspMethod::nn2opt(s)), inst) + 1e-9);
    }
}

TEST(Builders, ParseMethodNames) {
    EXPECT_EQ(parse_tsp_variant("exact"), TspMethod::Variant::exact_dp);
    EXPECT_EQ(parse_tsp_variant("nn2opt"), TspMethod::Variant::nn_2opt);
    EXPECT_EQ(parse_tsp_variant("karp"), TspMethod::Variant::karp_grid);
    EXPECT_THROW(parse_tsp_variant("christofides"), PreconditionError);
}
