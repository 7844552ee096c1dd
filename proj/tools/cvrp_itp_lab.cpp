// cvrp-itp-lab: command-line front end over the header library.
//
// Exit codes: 0 success, 2 precondition violation (bad input, bad flags),
// 3 I/O error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvrp_itp.hpp"

using namespace cvrp;

namespace {

struct Globals {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
    std::size_t threads = 1;
};

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        std::cout.flush();
    } else {
        write_text_file(g.out, text);
    }
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

bool csv(const Globals& g) { return g.format == "csv"; }

std::string csv_table(const std::vector<std::pair<std::string, std::string>>& cols) {
    std::string head, row;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        head += (i ? "," : "") + cols[i].first;
        row += (i ? "," : "") + cols[i].second;
    }
    return head + "\n" + row + "\n";
}

Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

TspMethod make_method(const std::string& name, double eps2, std::uint64_t seed) {
    TspMethod m;
    m.variant = parse_tsp_variant(name);
    m.eps2 = eps2;
    m.seed = seed;
    return m;
}

Point parse_point(const std::string& text) {
    const auto comma = text.find(',');
    require(comma != std::string::npos, "expected a point as x,y, got '" + text + "'");
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw PreconditionError("expected a point as x,y, got '" + text + "'");
    }
}

Json itp_json(const ItpResult& r, const Instance& inst, const TspTour& tour) {
    Json j;
    j["cost"] = r.cost;
    j["best_shift"] = r.best_shift;
    j["splitting_weight_total"] = r.splitting_weight_total;
    j["tsp_cost"] = r.tsp_cost;
    j["rad"] = radial_cost(inst);
    const double k = static_cast<double>(inst.capacity());
    j["ag_slack"] = radial_cost(inst) + (1.0 - 1.0 / k) * r.tsp_cost - r.cost;
    j["identity_max_deviation"] = itp_identity_check(tour, inst).max_deviation;
    j["per_shift_costs"] = r.per_shift_costs;
    j["plan"] = to_json(r.plan);
    return j;
}

Json bound_json(const BoundReport& b) {
    Json j;
    j["rad"] = b.rad;
    j["classic_lb"] = b.classic_lb;
    j["tsp_optimum"] = b.tsp_optimum ? Json(*b.tsp_optimum) : Json(nullptr);
    j["thm42_lb"] = b.thm42_lb;
    j["plan_cost"] = b.plan_cost;
    j["lambda"] = b.lambda;
    j["epsilon"] = b.epsilon;
    j["witness_size"] = b.witness_U.size();
    j["witness_size_ok"] = b.witness_size_ok;
    j["witness_nearest_sum"] = b.witness_nearest_sum;
    j["merged_tour_count"] = b.merged_tour_count;
    j["witness_U"] = b.witness_U;
    return j;
}

std::string breakdown_csv(const MixedBreakdown& b) {
    return csv_table({{"rad", format_double(b.rad)},
                      {"mixed_tours", std::to_string(b.mixed_tours)},
                      {"mixed_cost", format_double(b.mixed_cost)},
                      {"mixed_waypoint_cost", format_double(b.mixed_waypoint_cost)},
                      {"fallback_groups", std::to_string(b.fallback_groups)},
                      {"fallback_tours", std::to_string(b.fallback_tours)},
                      {"fallback_cost", format_double(b.fallback_cost)},
                      {"type3_customers", std::to_string(b.type3_customers)},
                      {"type3_tsp_cost", format_double(b.type3_tsp_cost)},
                      {"type3_splitting_weight", format_double(b.type3_splitting_weight)},
                      {"type3_cost", format_double(b.type3_cost)},
                      {"total", format_double(b.total)}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iterated tour partitioning for the unit-demand Euclidean CVRP"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--out", g.out, "Output file (stdout when omitted)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (0 = hardware)")->capture_default_str();
    app.fallthrough();

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a seeded uniform instance");
    std::size_t gen_n = 100;
    std::string gen_k = "sqrt";
    std::size_t gen_depots = 0;
    std::string gen_depot = "0.5,-1000";
    gen->add_option("--n", gen_n, "Customer count")->capture_default_str();
    gen->add_option("--k", gen_k, "Capacity: integer, sqrt, fixed:<k> or ratio:<r>")->capture_default_str();
    gen->add_option("--depot", gen_depot, "Fixed depot x,y")->capture_default_str();
    gen->add_option("--in-square-depots", gen_depots, "Draw this many depots uniformly in the square instead");

    // tsp
    auto* tsp = app.add_subcommand("tsp", "Build a TSP tour over depot and customers");
    std::string instance_path, method_name = "karp";
    double eps2 = 0.1;
    tsp->add_option("--instance", instance_path, "Instance JSON")->required();
    tsp->add_option("--method", method_name, "exact | nn2opt | karp")->capture_default_str();
    tsp->add_option("--eps2", eps2, "Grid parameter for karp")->capture_default_str();

    // itp
    auto* itp_cmd = app.add_subcommand("itp", "Run iterated tour partitioning");
    itp_cmd->add_option("--instance", instance_path, "Instance JSON")->required();
    itp_cmd->add_option("--method", method_name, "exact | nn2opt | karp")->capture_default_str();
    itp_cmd->add_option("--eps2", eps2, "Grid parameter for karp")->capture_default_str();

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Lower bounds for a plan");
    std::string plan_path;
    double lambda = analysis::kDefaultLambda, eps = analysis::kDefaultEpsilon;
    bool use_exact = false;
    bounds->add_option("--instance", instance_path, "Instance JSON")->required();
    bounds->add_option("--plan", plan_path, "Plan JSON (defaults to the exact optimum with --exact)");
    bounds->add_option("--lambda", lambda, "lambda")->capture_default_str();
    bounds->add_option("--eps", eps, "epsilon")->capture_default_str();
    bounds->add_flag("--exact", use_exact, "Solve the instance exactly (n <= 12) and report OPT");

    // mixed
    auto* mixed = app.add_subcommand("mixed", "Mixed-tour construction on a seeded instance");
    std::size_t mixed_n = 40000;
    double eps1 = 1.0, beta = analysis::kBeta0;
    std::string breakdown_path;
    mixed->add_option("--n", mixed_n, "Customer count (>= 10000)")->capture_default_str();
    mixed->add_option("--eps1", eps1, "eps1 in (0, 1]")->capture_default_str();
    mixed->add_option("--beta", beta, "Decomposition beta")->capture_default_str();
    mixed->add_option("--breakdown", breakdown_path, "Cost breakdown CSV (default <out>.breakdown.csv)");

    // multi
    auto* multi = app.add_subcommand("multi", "Nearest-depot assignment and per-depot ITP");
    multi->add_option("--instance", instance_path, "Instance JSON")->required();
    multi->add_option("--method", method_name, "exact | nn2opt | karp")->capture_default_str();
    multi->add_option("--eps2", eps2, "Grid parameter for karp")->capture_default_str();

    // xi
    auto* xi_cmd = app.add_subcommand("xi", "Truncated nearest-neighbor expectation");
    xi_cmd->add_option("--lambda", lambda, "lambda in [0, 1)")->required();

    // constants
    auto* consts = app.add_subcommand("constants", "Approximation-ratio constants");

    // plot-h
    auto* plot = app.add_subcommand("plot-h", "SVG plot of h(lambda) = (1-lambda) xi(lambda)");
    std::size_t plot_points = 2000;
    plot->add_option("--points", plot_points, "Grid points")->capture_default_str();

    // estimate-beta
    auto* beta_cmd = app.add_subcommand("estimate-beta", "Monte Carlo estimate of the BHH constant");
    std::size_t beta_n = 4096, trials = 5;
    beta_cmd->add_option("--n", beta_n, "Customer count (>= 256)")->capture_default_str();
    beta_cmd->add_option("--trials", trials, "Trials")->capture_default_str();
    beta_cmd->add_option("--eps2", eps2, "Grid parameter")->capture_default_str();

    // experiment
    auto* exp = app.add_subcommand("experiment", "Seeded Monte Carlo experiment, one CSV row per trial");
    std::vector<std::size_t> exp_ns{256, 1024, 4096};
    std::string exp_k = "sqrt", exp_depot = "far";
    bool exp_mixed = false, exp_timing = false;
    exp->add_option("--n", exp_ns, "Sizes")->delimiter(',')->capture_default_str();
    exp->add_option("--k", exp_k, "Capacity rule")->capture_default_str();
    exp->add_option("--trials", trials, "Trials per size")->capture_default_str();
    exp->add_option("--method", method_name, "exact | nn2opt | karp")->capture_default_str();
    exp->add_option("--eps2", eps2, "Grid parameter for karp")->capture_default_str();
    exp->add_option("--lambda", lambda, "lambda")->capture_default_str();
    exp->add_option("--eps", eps, "epsilon")->capture_default_str();
    exp->add_option("--depot", exp_depot, "far | square | x,y")->capture_default_str();
    exp->add_flag("--mixed", exp_mixed, "Also build the mixed solution (n >= 10000, k = sqrt)");
    exp->add_option("--eps1", eps1, "eps1 for --mixed")->capture_default_str();
    exp->add_flag("--timing", exp_timing, "Add a wall_time column (output no longer byte-stable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            const std::size_t k = parse_k_rule(gen_k).capacity(gen_n);
            const DepotSpec spec = gen_depots > 0 ? DepotSpec::uniform(gen_depots)
                                                  : DepotSpec::at(parse_point(gen_depot));
            const Instance inst = gen_instance(gen_n, k, g.seed, spec);
            if (csv(g)) {
                std::string text = "role,index,x,y\n";
                for (std::size_t d = 0; d < inst.depot_count(); ++d)
                    text += "depot," + std::to_string(d) + "," + format_double(inst.depot(d).x) + "," +
                            format_double(inst.depot(d).y) + "\n";
                for (std::size_t c = 0; c < inst.size(); ++c)
                    text += "customer," + std::to_string(c) + "," + format_double(inst.customer(c).x) +
                            "," + format_double(inst.customer(c).y) + "\n";
                emit(g, text);
            } else {
                Json j = to_json(inst);
                j["rng"] = std::string(kRngId);
                emit(g, json_text(j));
            }
        } else if (*tsp) {
            const Instance inst = load_instance(instance_path);
            const TspMethod m = make_method(method_name, eps2, g.seed);
            const TspTour tour = build_tsp_tour(inst, m);
            const double cost = tsp_tour_cost(tour, inst);
            if (csv(g)) {
                emit(g, csv_table({{"method", to_string(m.variant)}, {"n", std::to_string(inst.size())},
                                   {"cost", format_double(cost)}}));
            } else {
                Json j = to_json(tour);
                j["method"] = to_string(m.variant);
                j["cost"] = cost;
                emit(g, json_text(j));
            }
        } else if (*itp_cmd) {
            const Instance inst = load_instance(instance_path);
            const TspTour tour = build_tsp_tour(inst, make_method(method_name, eps2, g.seed));
            const ItpResult r = itp(tour, inst);
            const Json j = itp_json(r, inst, tour);
            if (csv(g)) {
                emit(g, csv_table({{"n", std::to_string(inst.size())},
                                   {"k", std::to_string(inst.capacity())},
                                   {"tsp_cost", format_double(r.tsp_cost)},
                                   {"itp_cost", format_double(r.cost)},
                                   {"best_shift", std::to_string(r.best_shift)},
                                   {"splitting_weight_total", format_double(r.splitting_weight_total)},
                                   {"rad", format_double(j["rad"].get<double>())},
                                   {"ag_slack", format_double(j["ag_slack"].get<double>())},
                                   {"identity_max_deviation",
                                    format_double(j["identity_max_deviation"].get<double>())}}));
            } else {
                emit(g, json_text(j));
            }
        } else if (*bounds) {
            const Instance inst = load_instance(instance_path);
            require(!plan_path.empty() || use_exact, "bounds needs --plan or --exact");
            std::optional<RoutePlan> opt;
            if (use_exact) opt = exact_cvrp(inst);
            const RoutePlan plan = plan_path.empty() ? *opt : plan_from_json(read_json_file(plan_path), inst);
            BoundReport b = theorem42_bound(plan, inst, lambda, eps);
            attach_classic_bound(b, inst);
            Json j = bound_json(b);
            j["opt"] = opt ? Json(opt->total_cost) : Json(nullptr);
            if (csv(g)) {
                emit(g, csv_table({{"rad", format_double(b.rad)},
                                   {"classic_lb", format_double(b.classic_lb)},
                                   {"thm42_lb", format_double(b.thm42_lb)},
                                   {"plan_cost", format_double(b.plan_cost)},
                                   {"opt", opt ? format_double(opt->total_cost) : std::string()},
                                   {"witness_size", std::to_string(b.witness_U.size())}}));
            } else {
                emit(g, json_text(j));
            }
        } else if (*mixed) {
            const Instance inst = gen_instance(mixed_n, sqrt_capacity(mixed_n), g.seed);
            const MixedSolution sol = build_solution(inst, eps1, beta);
            const CapacityReport cap = capacity_check(sol.decomposition, inst);
            const std::string table = breakdown_csv(sol.breakdown);
            if (csv(g)) {
                emit(g, table);
            } else {
                Json j;
                j["n"] = inst.size();
                j["k"] = inst.capacity();
                j["seed"] = g.seed;
                j["eps1"] = eps1;
                j["groups"] = sol.decomposition.groups.size();
                j["groups_over_capacity"] = cap.groups_over_capacity;
                j["rect_band_violations"] = cap.band_violations;
                j["total_cost"] = sol.plan.total_cost;
                j["plan"] = to_json(sol.plan);
                emit(g, json_text(j));
                const std::string path = !breakdown_path.empty() ? breakdown_path
                                         : !g.out.empty()        ? g.out + ".breakdown.csv"
                                                                 : std::string();
                if (!path.empty()) write_text_file(path, table);
            }
        } else if (*multi) {
            const Instance inst = load_instance(instance_path);
            const MultiItpResult r = multi_itp(inst, make_method(method_name, eps2, g.seed), g.threads);
            Json per = Json::array();
            for (std::size_t d = 0; d < r.per_depot.size(); ++d) {
                Json pd;
                pd["depot"] = d;
                pd["customers"] = r.assignment.customers[d].size();
                pd["cost"] = r.per_depot[d] ? Json(r.per_depot[d]->cost) : Json(0.0);
                per.push_back(pd);
            }
            if (csv(g)) {
                std::string text = "depot,customers,cost\n";
                for (const Json& pd : per)
                    text += std::to_string(pd["depot"].get<std::size_t>()) + "," +
                            std::to_string(pd["customers"].get<std::size_t>()) + "," +
                            format_double(pd["cost"].get<double>()) + "\n";
                emit(g, text);
            } else {
                Json j;
                j["cost"] = r.cost;
                j["rad"] = r.rad;
                j["per_depot"] = per;
                j["assignment"] = r.assignment.depot_of;
                j["plan"] = to_json(r.plan);
                emit(g, json_text(j));
            }
        } else if (*xi_cmd) {
            const double x = analysis::xi(lambda);
            const double r0 = analysis::r0_of_lambda(lambda);
            if (csv(g)) {
                emit(g, csv_table({{"lambda", format_double(lambda)}, {"xi", format_double(x)},
                                   {"h", format_double(analysis::h(lambda))}, {"r0", format_double(r0)}}));
            } else {
                emit(g, json_text(Json{{"lambda", lambda}, {"xi", x}, {"h", analysis::h(lambda)}, {"r0", r0}}));
            }
        } else if (*consts) {
            const analysis::AnalysisConstants c = analysis::constants();
            if (csv(g)) {
                emit(g, csv_table({{"beta0", format_double(c.beta0)}, {"beta1", format_double(c.beta1)},
                                   {"lambda_star", format_double(c.lambda_star)},
                                   {"h_max", format_double(c.h_max)},
                                   {"xi_at_lambda_star", format_double(c.xi_at_lambda_star)},
                                   {"c1", format_double(c.c1)},
                                   {"ratio_constant", format_double(c.ratio_constant)}}));
            } else {
                emit(g, json_text(Json{{"beta0", c.beta0},
                                       {"beta1", c.beta1},
                                       {"lambda_star", c.lambda_star},
                                       {"h_max", c.h_max},
                                       {"xi_at_lambda_star", c.xi_at_lambda_star},
                                       {"c1", c.c1},
                                       {"ratio_constant", c.ratio_constant}}));
            }
        } else if (*plot) {
            require(plot_points >= 2, "plot-h needs at least 2 points");
            require(!g.out.empty(), "plot-h needs --out <file.svg>");
            Series s;
            s.title = "h(lambda) = (1 - lambda) xi(lambda)";
            s.x_label = "lambda";
            s.y_label = "h";
            for (std::size_t i = 0; i < plot_points; ++i) {
                const double l = analysis::kLambdaSearchUpper * static_cast<double>(i) /
                                 static_cast<double>(plot_points - 1);
                s.x.push_back(l);
                s.y.push_back(analysis::h(l));
            }
            const PlotSummary p = emit_plot(s, g.out);
            std::cout << json_text(Json{{"svg", g.out}, {"max_lambda", p.max_x}, {"max_h", p.max_y}});
        } else if (*beta_cmd) {
            const BetaEstimate b = estimate_beta(beta_n, trials, g.seed, eps2, g.threads);
            if (csv(g)) {
                emit(g, csv_table({{"n", std::to_string(b.n)}, {"trials", std::to_string(b.trials)},
                                   {"mean", format_double(b.mean)},
                                   {"stderr", b.stderr_ ? format_double(*b.stderr_) : "NA"}}));
            } else {
                emit(g, json_text(Json{{"n", b.n},
                                       {"trials", b.trials},
                                       {"seed", g.seed},
                                       {"mean", b.mean},
                                       {"stderr", b.stderr_ ? Json(*b.stderr_) : Json(nullptr)},
                                       {"samples", b.samples}}));
            }
        } else if (*exp) {
            ExperimentConfig cfg;
            cfg.ns = exp_ns;
            cfg.k_rule = parse_k_rule(exp_k);
            cfg.trials = trials;
            cfg.seed = g.seed;
            cfg.method = make_method(method_name, eps2, g.seed);
            cfg.lambda = lambda;
            cfg.epsilon = eps;
            if (exp_depot == "far")
                cfg.depot = DepotSpec{};
            else if (exp_depot == "square")
                cfg.depot = DepotSpec::uniform(1);
            else
                cfg.depot = DepotSpec::at(parse_point(exp_depot));
            cfg.with_mixed = exp_mixed;
            cfg.eps1 = eps1;
            cfg.threads = g.threads;
            cfg.with_timing = exp_timing;
            cfg.out_csv = g.out;
            const auto rows = run_experiment(cfg);
            if (g.out.empty()) std::cout << rows_to_csv(rows, cfg);
        }
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
