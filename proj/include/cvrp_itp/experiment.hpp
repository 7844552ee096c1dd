#pragma once

// Seeded instance generation, beta estimation and the Monte Carlo experiment
// driver. Trial t at size n uses the stream stream_seed(stream_seed(base, n), t).

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cvrp_itp/bounds.hpp"
#include "cvrp_itp/core.hpp"
#include "cvrp_itp/itp.hpp"
#include "cvrp_itp/json_io.hpp"
#include "cvrp_itp/mixed.hpp"
#include "cvrp_itp/parallel.hpp"
#include "cvrp_itp/rng.hpp"
#include "cvrp_itp/tsp.hpp"

namespace cvrp {

inline constexpr std::string_view kToolName = "cvrp-itp-lab";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kCsvSchema = 1;

inline const Point kFarDepot{0.5, -1000.0};

struct DepotSpec {
    enum class Kind { fixed, in_square };
    Kind kind = Kind::fixed;
    Point fixed = kFarDepot;
    std::size_t count = 1;  // in_square only

    static DepotSpec at(Point p) { return {Kind::fixed, p, 1}; }
    static DepotSpec uniform(std::size_t count = 1) { return {Kind::in_square, kFarDepot, count}; }
};

inline std::uint64_t trial_seed(std::uint64_t base, std::size_t n, std::size_t trial) {
    return stream_seed(stream_seed(base, n), trial);
}

// Customers first (x then y per point), then in-square depots.
inline Instance gen_instance(std::size_t n, std::size_t k, std::uint64_t seed,
                             const DepotSpec& depot = {}) {
    require(n >= 1, "gen_instance needs n >= 1");
    SplitMix64 rng(seed);
    std::vector<Point> customers(n);
    for (Point& p : customers) {
        p.x = rng.uniform();
        p.y = rng.uniform();
    }
    std::vector<Point> depots;
    if (depot.kind == DepotSpec::Kind::fixed) {
        depots.push_back(depot.fixed);
    } else {
        require(depot.count >= 1, "gen_instance needs at least one depot");
        for (std::size_t d = 0; d < depot.count; ++d) {
            const double x = rng.uniform();
            depots.push_back({x, rng.uniform()});
        }
    }
    return Instance(std::move(customers), std::move(depots), k, seed);
}

struct KRule {
    enum class Kind { fixed, sqrt_n, ratio };
    Kind kind = Kind::sqrt_n;
    double value = 0.0;  // k for fixed, k/n for ratio

    static KRule fixed(std::size_t k) { return {Kind::fixed, static_cast<double>(k)}; }
    static KRule sqrt() { return {Kind::sqrt_n, 0.0}; }
    static KRule ratio(double r) { return {Kind::ratio, r}; }

    std::size_t capacity(std::size_t n) const {
        double k = 0.0;
        switch (kind) {
            case Kind::fixed: k = value; break;
            case Kind::sqrt_n: k = std::sqrt(static_cast<double>(n)); break;
            case Kind::ratio: k = value * static_cast<double>(n); break;
        }
        const auto rounded = static_cast<long long>(std::llround(k));
        require(rounded >= 1 && static_cast<std::size_t>(rounded) <= n,
                "k rule yields k=" + std::to_string(rounded) + " outside [1, " + std::to_string(n) +
                    "]");
        return static_cast<std::size_t>(rounded);
    }
};

inline std::string to_string(const KRule& r) {
    switch (r.kind) {
        case KRule::Kind::fixed: return "fixed:" + format_double(r.value);
        case KRule::Kind::sqrt_n: return "sqrt";
        case KRule::Kind::ratio: return "ratio:" + format_double(r.value);
    }
    return "?";
}

// "sqrt", "fixed:<k>", "ratio:<r>", or a bare integer for fixed.
inline KRule parse_k_rule(const std::string& text) {
    try {
        if (text == "sqrt" || text == "sqrt_n") return KRule::sqrt();
        if (text.rfind("fixed:", 0) == 0) return {KRule::Kind::fixed, std::stod(text.substr(6))};
        if (text.rfind("ratio:", 0) == 0) return KRule::ratio(std::stod(text.substr(6)));
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return {KRule::Kind::fixed, v};
    } catch (const std::exception&) {
    }
    throw PreconditionError("bad k rule '" + text + "' (expected sqrt, fixed:<k>, ratio:<r>)");
}

// ---------------------------------------------------------------------------

struct BetaEstimate {
    std::size_t n = 0;
    std::size_t trials = 0;
    double mean = 0.0;
    std::optional<double> stderr_;  // absent for a single trial
    std::vector<double> samples;    // cost / sqrt(n) per trial
};

// Grid-tour length over the customers alone (the depot is spliced out and the
// customer cycle closed directly), normalised by sqrt(n).
inline BetaEstimate estimate_beta(std::size_t n, std::size_t trials, std::uint64_t seed,
                                  double eps2 = 0.1, std::size_t threads = 1) {
    require(n >= 256, "estimate_beta needs n >= 256");
    require(trials >= 1, "estimate_beta needs trials >= 1");
    BetaEstimate out;
    out.n = n;
    out.trials = trials;
    out.samples.resize(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        const Instance inst = gen_instance(n, 1, trial_seed(seed, n, t));
        const TspTour tour = karp_grid_tour(inst, eps2);
        const auto& o = tour.order;
        double cost = euclid(inst.customer(o.back()), inst.customer(o.front()));
        for (std::size_t j = 1; j < o.size(); ++j)
            cost += euclid(inst.customer(o[j - 1]), inst.customer(o[j]));
        out.samples[t] = cost / std::sqrt(static_cast<double>(n));
    });
    double sum = 0.0;
    for (double v : out.samples) sum += v;
    out.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
        double ss = 0.0;
        for (double v : out.samples) ss += (v - out.mean) * (v - out.mean);
        const double sd = std::sqrt(ss / static_cast<double>(trials - 1));
        out.stderr_ = sd / std::sqrt(static_cast<double>(trials));
    }
    return out;
}

// ---------------------------------------------------------------------------

struct ExperimentConfig {
    std::vector<std::size_t> ns;
    KRule k_rule = KRule::sqrt();
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    TspMethod method = TspMethod::nn2opt();
    double lambda = analysis::kDefaultLambda;
    double epsilon = analysis::kDefaultEpsilon;
    DepotSpec depot{};
    bool with_mixed = false;  // needs n >= 10^4, k = round(sqrt(n)), depot below the square
    double eps1 = 1.0;
    std::size_t threads = 1;
    std::string out_csv;      // empty: no file
    bool with_timing = false; // wall_time column; makes output nondeterministic
};

struct TrialRow {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double tsp_cost = 0.0;
    double itp_cost = 0.0;
    double rad = 0.0;
    double thm42_bound = 0.0;
    std::optional<double> mixed_cost;
    double itp_over_bound = 0.0;
    std::optional<double> mixed_over_itp;
    double wall_time = 0.0;
    std::vector<std::string> violations;
};

inline void validate_config(const ExperimentConfig& cfg) {
    require(cfg.trials >= 1, "experiment needs trials >= 1");
    require(!cfg.ns.empty(), "experiment needs at least one n");
    for (std::size_t n : cfg.ns) {
        require(n >= 1, "experiment sizes must be >= 1");
        (void)cfg.k_rule.capacity(n);
    }
}

inline TrialRow run_trial(const ExperimentConfig& cfg, std::size_t n, std::size_t trial) {
    const auto start = std::chrono::steady_clock::now();
    TrialRow row;
    row.n = n;
    row.k = cfg.k_rule.capacity(n);
    row.trial = trial;
    row.seed = trial_seed(cfg.seed, n, trial);
    const Instance inst = gen_instance(n, row.k, row.seed, cfg.depot);
    require(inst.single_depot(), "experiment trials use a single depot");

    TspMethod method = cfg.method;
    method.seed = row.seed;
    const TspTour tour = build_tsp_tour(inst, method);
    const ItpResult r = itp(tour, inst);
    row.tsp_cost = r.tsp_cost;
    row.itp_cost = r.cost;
    row.rad = radial_cost(inst);
    const BoundReport b = theorem42_bound(r.plan, inst, cfg.lambda, cfg.epsilon);
    row.thm42_bound = b.thm42_lb;
    row.itp_over_bound = row.itp_cost / row.thm42_bound;

    const double tol = kCostTolerance;
    const double kd = static_cast<double>(row.k);
    if (row.itp_cost < row.rad - tol) row.violations.push_back("itp_below_rad");
    if (row.rad + (1.0 - 1.0 / kd) * row.tsp_cost - row.itp_cost < -tol)
        row.violations.push_back("ag_slack");
    if (row.thm42_bound > r.plan.total_cost + tol) row.violations.push_back("bound_above_plan");
    if (cfg.method.variant == TspMethod::Variant::exact_dp && row.itp_cost < row.tsp_cost - tol)
        row.violations.push_back("itp_below_tsp");
    if (cfg.with_mixed) {
        const MixedSolution sol = build_solution(inst, cfg.eps1);
        row.mixed_cost = sol.plan.total_cost;
        row.mixed_over_itp = *row.mixed_cost / row.itp_cost;
        if (!is_feasible(sol.plan, inst)) row.violations.push_back("mixed_infeasible");
    }
    row.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return row;
}

inline std::string csv_header_comment() {
    return "# " + std::string(kToolName) + " v" + std::string(kToolVersion) +
           " schema=" + std::to_string(kCsvSchema) + "\n";
}

inline std::string rows_to_csv(const std::vector<TrialRow>& rows, const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << csv_header_comment();
    os << "# rng=" << kRngId << " seed=" << cfg.seed << " k_rule=" << to_string(cfg.k_rule)
       << " method=" << to_string(cfg.method.variant) << " lambda=" << format_double(cfg.lambda)
       << " eps=" << format_double(cfg.epsilon) << "\n";
    os << "n,k,trial,seed,tsp_cost,itp_cost,rad,thm42_bound,mixed_cost,itp_over_bound,"
          "mixed_over_itp";
    if (cfg.with_timing) os << ",wall_time";
    os << ",violations\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const TrialRow& r : rows) {
        os << r.n << ',' << r.k << ',' << r.trial << ',' << r.seed << ',' << format_double(r.tsp_cost)
           << ',' << format_double(r.itp_cost) << ',' << format_double(r.rad) << ','
           << format_double(r.thm42_bound) << ',' << opt(r.mixed_cost) << ','
           << format_double(r.itp_over_bound) << ',' << opt(r.mixed_over_itp);
        if (cfg.with_timing) os << ',' << format_double(r.wall_time);
        os << ',';
        if (r.violations.empty()) {
            os << "none";
        } else {
            for (std::size_t i = 0; i < r.violations.size(); ++i)
                os << (i ? ";" : "") << r.violations[i];
        }
        os << '\n';
    }
    return os.str();
}

// One row per (n, trial) in that order, whatever the thread count.
inline std::vector<TrialRow> run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    std::ofstream probe;
    if (!cfg.out_csv.empty()) {
        probe.open(cfg.out_csv, std::ios::binary | std::ios::trunc);
        if (!probe) throw IoError("cannot open '" + cfg.out_csv + "' for writing");
    }
    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t n : cfg.ns)
        for (std::size_t t = 0; t < cfg.trials; ++t) jobs.emplace_back(n, t);
    std::vector<TrialRow> rows(jobs.size());
    parallel_for(jobs.size(), cfg.threads,
                 [&](std::size_t j) { rows[j] = run_trial(cfg, jobs[j].first, jobs[j].second); });
    if (probe.is_open()) {
        probe << rows_to_csv(rows, cfg);
        if (!probe.flush()) throw IoError("failed writing '" + cfg.out_csv + "'");
    }
    return rows;
}

}  // namespace cvrp
