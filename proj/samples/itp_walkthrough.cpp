// Small end-to-end run: generate an instance, tour it, partition it, bound it.

#include <cstdio>

#include "cvrp_itp.hpp"

int main() {
    using namespace cvrp;
    const Instance inst = gen_instance(12, 4, 2024, DepotSpec::uniform(1));

    const TspTour tour = build_tsp_tour(inst, TspMethod::exact());
    const ItpResult r = itp(tour, inst);
    std::printf("tour %.6f  itp %.6f  (shift %zu of %zu)\n", r.tsp_cost, r.cost, r.best_shift,
                inst.capacity());

    const RoutePlan opt = exact_cvrp(inst);
    BoundReport b = theorem42_bound(opt, inst);
    attach_classic_bound(b, inst);
    std::printf("rad %.6f  classic %.6f  near-set bound %.6f  OPT %.6f\n", b.rad, b.classic_lb,
                b.thm42_lb, opt.total_cost);
    std::printf("itp / OPT = %.4f\n", r.cost / opt.total_cost);
    std::printf("%s\n", to_json(r.plan).dump().c_str());
}
