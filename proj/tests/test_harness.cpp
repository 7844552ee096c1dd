#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cvrp_itp/analysis.hpp"
#include "cvrp_itp/experiment.hpp"
#include "cvrp_itp/json_io.hpp"
#include "cvrp_itp/parallel.hpp"
#include "cvrp_itp/svg_plot.hpp"

using namespace cvrp;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("cvrp_itp_" + name)).string();
}

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.ns = {50, 200};
    cfg.k_rule = KRule::sqrt();
    cfg.trials = 6;
    cfg.seed = 99;
    cfg.method = TspMethod::nn2opt();
    cfg.depot = DepotSpec::uniform(1);
    return cfg;
}

}  // namespace

TEST(Rng, ReferenceSequence) {
    SplitMix64 g(1234567);
    EXPECT_EQ(g.next(), 6457827717110365317ULL);
    EXPECT_EQ(g.next(), 3203168211198807973ULL);
    EXPECT_EQ(g.next(), 9817491932198370423ULL);
}

TEST(Rng, StreamsDiffer) {
    EXPECT_NE(stream_seed(1, 0), stream_seed(1, 1));
    EXPECT_NE(stream_seed(1, 0), stream_seed(2, 0));
    EXPECT_NE(trial_seed(5, 100, 0), trial_seed(5, 101, 0));
}

TEST(GenInstance, Deterministic) {
    const Instance a = gen_instance(300, 17, 42, DepotSpec::uniform(3));
    const Instance b = gen_instance(300, 17, 42, DepotSpec::uniform(3));
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    EXPECT_NE(to_json(a).dump(), to_json(gen_instance(300, 17, 43, DepotSpec::uniform(3))).dump());
}

TEST(GenInstance, UniformMean) {
    const Instance inst = gen_instance(10000, 100, 5);
    double sx = 0.0, sy = 0.0;
    for (const Point& p : inst.customers()) {
        EXPECT_GE(p.x, 0.0);
        EXPECT_LT(p.x, 1.0);
        EXPECT_GE(p.y, 0.0);
        EXPECT_LT(p.y, 1.0);
        sx += p.x;
        sy += p.y;
    }
    EXPECT_NEAR(sx / 10000.0, 0.5, 0.02);
    EXPECT_NEAR(sy / 10000.0, 0.5, 0.02);
}

TEST(GenInstance, FixedDepot) {
    const Instance inst = gen_instance(10, 2, 1);
    ASSERT_EQ(inst.depot_count(), 1u);
    EXPECT_EQ(inst.depot().x, 0.5);
    EXPECT_EQ(inst.depot().y, -1000.0);
    EXPECT_EQ(inst.seed(), std::optional<std::uint64_t>(1));
    // customers do not depend on the depot spec
    const Instance sq = gen_instance(10, 2, 1, DepotSpec::uniform(2));
    for (std::size_t c = 0; c < 10; ++c) EXPECT_EQ(inst.customer(c).x, sq.customer(c).x);
}

TEST(KRuleTest, ParseAndCapacity) {
    EXPECT_EQ(parse_k_rule("sqrt").capacity(4096), 64u);
    EXPECT_EQ(parse_k_rule("fixed:7").capacity(100), 7u);
    EXPECT_EQ(parse_k_rule("12").capacity(100), 12u);
    EXPECT_EQ(parse_k_rule("ratio:0.1").capacity(250), 25u);
    EXPECT_THROW(parse_k_rule("bogus"), PreconditionError);
    EXPECT_THROW(parse_k_rule("fixed:"), PreconditionError);
    EXPECT_THROW(KRule::fixed(11).capacity(10), PreconditionError);
    EXPECT_THROW(KRule::ratio(0.0).capacity(10), PreconditionError);
    EXPECT_EQ(to_string(parse_k_rule(to_string(KRule::ratio(0.25)))), "ratio:0.25");
}

TEST(EstimateBeta, InBand) {
    const BetaEstimate b = estimate_beta(4096, 5, 1);
    EXPECT_GT(b.mean, 0.62866);
    EXPECT_LT(b.mean, 1.05);
    ASSERT_TRUE(b.stderr_.has_value());
    EXPECT_EQ(b.samples.size(), 5u);
}

TEST(EstimateBeta, ScaleConsistency) {
    const BetaEstimate a = estimate_beta(4096, 8, 2), b = estimate_beta(16384, 8, 2);
    const double se = std::hypot(*a.stderr_, *b.stderr_);
    EXPECT_LT(std::abs(a.mean - b.mean), 3.0 * se) << a.mean << " vs " << b.mean;
}

TEST(EstimateBeta, SingleTrialAndPreconditions) {
    EXPECT_FALSE(estimate_beta(256, 1, 3).stderr_.has_value());
    EXPECT_THROW(estimate_beta(255, 3, 3), PreconditionError);
    EXPECT_THROW(estimate_beta(1000, 0, 3), PreconditionError);
}

TEST(EstimateBeta, ThreadsDoNotChangeSamples) {
    EXPECT_EQ(estimate_beta(1024, 6, 4, 0.1, 1).samples, estimate_beta(1024, 6, 4, 0.1, 3).samples);
}

TEST(Experiment, RejectsBadConfig) {
    ExperimentConfig cfg = small_config();
    cfg.trials = 0;
    EXPECT_THROW(run_experiment(cfg), PreconditionError);
    cfg = small_config();
    cfg.ns.clear();
    EXPECT_THROW(run_experiment(cfg), PreconditionError);
    cfg = small_config();
    cfg.k_rule = KRule::fixed(80);
    EXPECT_THROW(run_experiment(cfg), PreconditionError);
}

TEST(Experiment, IdenticalBytesAcrossRunsAndThreads) {
    ExperimentConfig cfg = small_config();
    const std::string p1 = temp_path("exp1.csv"), p2 = temp_path("exp2.csv"), p4 = temp_path("exp4.csv");
    cfg.out_csv = p1;
    run_experiment(cfg);
    cfg.out_csv = p2;
    run_experiment(cfg);
    cfg.out_csv = p4;
    cfg.threads = 4;
    run_experiment(cfg);
    const std::string a = slurp(p1);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(p2));
    EXPECT_EQ(a, slurp(p4));
    for (const auto& p : {p1, p2, p4}) std::filesystem::remove(p);
}

TEST(Experiment, HeaderAndColumns) {
    ExperimentConfig cfg = small_config();
    cfg.ns = {30};
    cfg.trials = 2;
    const auto rows = run_experiment(cfg);
    const std::string csv = rows_to_csv(rows, cfg);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# cvrp-itp-lab v0.1.0 schema=1");
    std::getline(in, line);
    EXPECT_NE(line.find("rng=splitmix64"), std::string::npos);
    EXPECT_NE(line.find("seed=99"), std::string::npos);
    std::getline(in, line);
    EXPECT_EQ(line.find("wall_time"), std::string::npos);
    std::size_t data = 0;
    while (std::getline(in, line)) {
        ++data;
        EXPECT_EQ(line.substr(line.rfind(',') + 1), "none");
    }
    EXPECT_EQ(data, 2u);
    cfg.with_timing = true;
    EXPECT_NE(rows_to_csv(rows, cfg).find(",wall_time,"), std::string::npos);
}

TEST(Experiment, ItpNeverBelowBound) {
    ExperimentConfig cfg;
    cfg.ns = {4096};
    cfg.k_rule = KRule::fixed(64);
    cfg.trials = 20;
    cfg.seed = 3;
    cfg.method = TspMethod::karp();
    const auto rows = run_experiment(cfg);
    ASSERT_EQ(rows.size(), 20u);
    double mean = 0.0;
    for (const TrialRow& r : rows) {
        EXPECT_GE(r.itp_over_bound, 1.0);
        EXPECT_TRUE(r.violations.empty());
        EXPECT_EQ(r.k, 64u);
        mean += r.itp_over_bound / 20.0;
    }
    EXPECT_GE(mean, 1.0);
}

TEST(Experiment, MixedColumn) {
    ExperimentConfig cfg;
    cfg.ns = {10000};
    cfg.trials = 1;
    cfg.seed = 4;
    cfg.method = TspMethod::karp();
    cfg.with_mixed = true;
    const auto rows = run_experiment(cfg);
    ASSERT_TRUE(rows[0].mixed_cost.has_value());
    EXPECT_NEAR(*rows[0].mixed_over_itp, *rows[0].mixed_cost / rows[0].itp_cost, 1e-15);
    EXPECT_TRUE(rows[0].violations.empty());
}

TEST(Experiment, UnwritablePathFailsFirst) {
    ExperimentConfig cfg = small_config();
    cfg.ns = {100000};
    cfg.trials = 1000;  // would take a long time if it ran
    cfg.out_csv = "/nonexistent-dir/x/out.csv";
    EXPECT_THROW(run_experiment(cfg), IoError);
}

TEST(Parallel, RethrowsWorkerException) {
    std::atomic<int> ran{0};
    EXPECT_THROW(parallel_for(100, 4,
                              [&](std::size_t i) {
                                  ++ran;
                                  if (i == 17) throw PreconditionError("boom");
                              }),
                 PreconditionError);
    EXPECT_GE(ran.load(), 1);
    std::vector<int> hit(1000, 0);
    parallel_for(hit.size(), 3, [&](std::size_t i) { hit[i] += 1; });
    for (int v : hit) EXPECT_EQ(v, 1);
}

TEST(SvgPlot, HPlotMaximum) {
    Series s;
    for (int i = 0; i < 2000; ++i) {
        const double lambda = analysis::kLambdaSearchUpper * i / 1999.0;
        s.x.push_back(lambda);
        s.y.push_back(analysis::h(lambda));
    }
    const std::string path = temp_path("h.svg");
    const PlotSummary sum = emit_plot(s, path);
    const analysis::Maximum m = analysis::maximize_h();
    EXPECT_NEAR(sum.max_x, m.lambda_star, 1e-3);
    EXPECT_NEAR(sum.max_y, m.h_max, 1e-4);

    boost::property_tree::ptree tree;
    std::istringstream in(slurp(path));
    ASSERT_NO_THROW(boost::property_tree::read_xml(in, tree));
    const auto& svg = tree.get_child("svg");
    bool found = false;
    for (const auto& [tag, node] : svg)
        if (tag == "g" && node.get<std::string>("<xmlattr>.id", "") == "maximum") {
            found = true;
            EXPECT_NEAR(node.get<double>("<xmlattr>.data-y"), m.h_max, 1e-4);
            EXPECT_EQ(node.get<std::size_t>("<xmlattr>.data-index"), sum.max_index);
        }
    EXPECT_TRUE(found);
    std::filesystem::remove(path);
}

TEST(SvgPlot, ConstantSeries) {
    Series s;
    s.x = {0, 1, 2, 3};
    s.y = {2, 2, 2, 2};
    const PlotSummary sum = series_maximum(s);
    EXPECT_EQ(sum.max_index, 0u);
    const std::string svg = render_svg(s);
    boost::property_tree::ptree tree;
    std::istringstream in(svg);
    EXPECT_NO_THROW(boost::property_tree::read_xml(in, tree));
    EXPECT_NE(svg.find("data-index=\"0\""), std::string::npos);
}

TEST(SvgPlot, Errors) {
    EXPECT_THROW(series_maximum(Series{}), PreconditionError);
    Series s;
    s.x = {0};
    s.y = {1};
    EXPECT_THROW(emit_plot(s, "/nonexistent-dir/x/h.svg"), IoError);
    Series bad;
    bad.x = {0, 1};
    bad.y = {1};
    EXPECT_THROW(render_svg(bad), PreconditionError);
}
