#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"

using namespace policysim;
namespace fs = std::filesystem;

namespace {

double brute_force_d(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> points = a;
    points.insert(points.end(), b.begin(), b.end());
    double d = 0.0;
    for (double x : points) {
        const auto fa = static_cast<double>(std::count_if(a.begin(), a.end(), [x](double v) { return v <= x; }));
        const auto fb = static_cast<double>(std::count_if(b.begin(), b.end(), [x](double v) { return v <= x; }));
        d = std::max(d, std::abs(fa / static_cast<double>(a.size()) - fb / static_cast<double>(b.size())));
    }
    return d;
}

double brute_force_gini(const std::vector<double>& v) {
    double diff = 0.0;
    double sum = 0.0;
    for (double x : v) {
        sum += x;
        for (double y : v) diff += std::abs(x - y);
    }
    const double n = static_cast<double>(v.size());
    return sum == 0.0 ? 0.0 : diff / (2.0 * n * sum);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentPlan plan_for(RunType type, int runs) {
    ExperimentPlan plan;
    plan.type = type;
    plan.runs_per_config = runs;
    plan.regions = {"fixture3"};
    return plan;
}

std::map<std::string, RegionData> fixture_regions() { return {{"fixture3", testing_helpers::fixture3()}}; }

}  // namespace

TEST(Ks, IdenticalSamples) {
    const std::vector<double> a{3, 1, 4, 1, 5, 9, 2, 6};
    const auto r = ks_two_sample(a, a);
    EXPECT_EQ(r.d, 0.0);
    EXPECT_EQ(r.p_value, 1.0);
}

TEST(Ks, DisjointSupports) {
    const std::vector<double> a{0, 0, 0};
    const std::vector<double> b{1, 1, 1};
    EXPECT_EQ(ks_two_sample(a, b).d, 1.0);
}

TEST(Ks, ShiftedByOne) {
    const std::vector<double> a{1, 2, 3, 4};
    const std::vector<double> b{2, 3, 4, 5};
    EXPECT_DOUBLE_EQ(ks_two_sample(a, b).d, 0.25);
    EXPECT_DOUBLE_EQ(brute_force_d(a, b), 0.25);
}

TEST(Ks, MatchesBruteForceAndIsSymmetric) {
    Rng rng(606);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(1 + rng.index(50));
        std::vector<double> b(1 + rng.index(50));
        // Integer-valued samples so ties are common.
        for (auto& x : a) x = static_cast<double>(rng.index(20));
        for (auto& x : b) x = static_cast<double>(rng.index(20)) + (trial % 2 ? 0.0 : 3.0);
        const auto r = ks_two_sample(a, b);
        EXPECT_NEAR(r.d, brute_force_d(a, b), 1e-12);
        EXPECT_EQ(r.d, ks_two_sample(b, a).d);
        EXPECT_GE(r.d, 0.0);
        EXPECT_LE(r.d, 1.0);
        EXPECT_GE(r.p_value, 0.0);
        EXPECT_LE(r.p_value, 1.0);
    }
}

TEST(Ks, EmptySampleRejected) {
    const std::vector<double> a{1.0};
    const std::vector<double> none;
    EXPECT_THROW(ks_two_sample(a, none), Error);
}

TEST(Ks, AsymptoticPValue) {
    // Q(lambda) at a few reference points of the Kolmogorov distribution.
    EXPECT_NEAR(kolmogorov_q(1.36), 0.0494, 5e-4);
    EXPECT_NEAR(kolmogorov_q(1.63), 0.0098, 2e-4);
    EXPECT_NEAR(kolmogorov_q(0.5), 0.9639, 5e-4);
}

TEST(Gini, Examples) {
    const std::vector<double> equal{5, 5, 5, 5};
    EXPECT_NEAR(gini(equal), 0.0, 1e-15);
    const std::vector<double> one_rich{0, 0, 0, 1};
    EXPECT_DOUBLE_EQ(gini(one_rich), 0.75);
    const std::vector<double> single{42};
    EXPECT_EQ(gini(single), 0.0);
    const std::vector<double> zeros{0, 0, 0};
    EXPECT_EQ(gini(zeros), 0.0);
    const std::vector<double> negative{1, -1};
    EXPECT_THROW(gini(negative), Error);
}

TEST(Gini, MatchesPairwiseDefinition) {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(1 + rng.index(30));
        for (auto& x : v) x = rng.uniform(0, 100);
        EXPECT_NEAR(gini(v), brute_force_gini(v), 1e-12);
    }
}

TEST(ExpandPlan, SensitivityTwentyEightJobs) {
    auto plan = plan_for(RunType::sensitivity, 4);
    plan.sweeps = {parse_sweep_spec("ALPHA:.04:.94:7")};
    const auto jobs = expand_plan(plan, SimParams{});
    ASSERT_EQ(jobs.size(), 28u);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        EXPECT_EQ(jobs[i].config_id, i / 4);
        EXPECT_EQ(jobs[i].replicate, static_cast<int>(i % 4));
        EXPECT_NEAR(jobs[i].params.alpha, 0.04 + 0.15 * static_cast<double>(i / 4), 1e-12);
    }
}

TEST(ExpandPlan, CartesianProduct) {
    auto plan = plan_for(RunType::sensitivity, 2);
    plan.sweeps = {parse_sweep_spec("ALPHA:.1:.3:3"), parse_sweep_spec("FPM_DISTRIBUTION")};
    const auto jobs = expand_plan(plan, SimParams{});
    EXPECT_EQ(jobs.size(), 12u);
    EXPECT_EQ(jobs.back().label, "ALPHA=0.3 FPM_DISTRIBUTION=false");
}

TEST(ExpandPlan, DistributionsFourRegimes) {
    const auto jobs = expand_plan(plan_for(RunType::distributions, 1), SimParams{});
    ASSERT_EQ(jobs.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(jobs[i].params.regime(), kAllRegimes[i]);
}

TEST(ExpandPlan, SingleRun) { EXPECT_EQ(expand_plan(plan_for(RunType::run, 1), SimParams{}).size(), 1u); }

TEST(ExpandPlan, AcpsEveryRegion) {
    auto plan = plan_for(RunType::acps, 2);
    plan.regions = {"a", "b", "c"};
    const auto jobs = expand_plan(plan, SimParams{});
    ASSERT_EQ(jobs.size(), 6u);
    EXPECT_EQ(jobs[0].region, "a");
    EXPECT_EQ(jobs[5].region, "c");
}

TEST(ExpandPlan, SeedsStableWhenConfigsAreAdded) {
    auto small = plan_for(RunType::sensitivity, 2);
    small.sweeps = {parse_sweep_spec("BETA:0:1:2")};
    auto big = small;
    big.sweeps = {parse_sweep_spec("BETA:0:1:5")};
    const auto a = expand_plan(small, SimParams{});
    const auto b = expand_plan(big, SimParams{});
    EXPECT_EQ(a[0].seed, b[0].seed);
    EXPECT_EQ(a[1].seed, b[1].seed);
    EXPECT_NE(a[0].seed, a[1].seed);
}

TEST(ExpandPlan, PlanValidation) {
    auto plan = plan_for(RunType::sensitivity, 1);
    EXPECT_THROW(expand_plan(plan, SimParams{}), Error);
    plan = plan_for(RunType::run, 1);
    plan.sweeps = {parse_sweep_spec("BETA:0:1:2")};
    EXPECT_THROW(expand_plan(plan, SimParams{}), Error);
    plan = plan_for(RunType::run, 0);
    EXPECT_THROW(expand_plan(plan, SimParams{}), Error);
}

TEST(Execute, ResultsInJobOrderAndFailuresIsolated) {
    auto plan = plan_for(RunType::sensitivity, 2);
    plan.sweeps = {parse_sweep_spec("BETA:.5:.9:3")};
    SimParams base;
    base.months = 6;
    const auto jobs = expand_plan(plan, base);
    const auto regions = fixture_regions();
    const auto normal = region_runner(regions);
    auto runner = [&](const Job& j) {
        if (j.config_id == 1) throw Error("month 3: injected failure");
        return normal(j);
    };
    const auto outcomes = execute(jobs, 4, runner);
    ASSERT_EQ(outcomes.size(), jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (jobs[i].config_id == 1) {
            EXPECT_FALSE(outcomes[i].ok());
            EXPECT_NE(outcomes[i].error.find("config 1"), std::string::npos);
            EXPECT_NE(outcomes[i].error.find("month 3"), std::string::npos);
        } else {
            ASSERT_TRUE(outcomes[i].ok());
            EXPECT_EQ(outcomes[i].result->records.size(), 6u);
            const auto direct = run(testing_helpers::fixture3(), jobs[i].params, jobs[i].seed);
            EXPECT_EQ(outcomes[i].result->records, direct.records);
        }
    }
}

TEST(Execute, AllHardwareThreads) {
    SimParams base;
    base.months = 3;
    const auto jobs = expand_plan(plan_for(RunType::run, 1), base);
    const auto regions = fixture_regions();
    const auto outcomes = execute(jobs, -1, region_runner(regions));
    ASSERT_EQ(outcomes.size(), 1u);
    EXPECT_TRUE(outcomes[0].ok());
}

TEST(Aggregate, SingleReplicateIsItself) {
    SimParams p;
    p.months = 12;
    const auto r = run(testing_helpers::fixture3(), p, 3);
    const auto agg = aggregate({&r});
    EXPECT_EQ(agg.mean, monthly_table(r));
    for (const auto& row : agg.std)
        for (double v : row) EXPECT_EQ(v, 0.0);
}

TEST(Aggregate, PopulationStd) {
    RunResult a;
    RunResult b;
    a.final_world.municipalities.resize(1);
    b.final_world.municipalities.resize(1);
    MonthRecord ra;
    ra.unemployment = 2.0;
    ra.qli = {1.0};
    MonthRecord rb = ra;
    rb.unemployment = 4.0;
    a.records = {ra};
    b.records = {rb};
    const auto agg = aggregate({&a, &b});
    const auto col = static_cast<std::size_t>(
        std::find(agg.columns.begin(), agg.columns.end(), "unemployment") - agg.columns.begin());
    EXPECT_DOUBLE_EQ(agg.mean[0][col], 3.0);
    EXPECT_DOUBLE_EQ(agg.std[0][col], 1.0);
}

TEST(CompareTaxes, IdenticalNotRejected) {
    RegionTaxes sim;
    Rng rng(1);
    for (int i = 0; i < 10; ++i) {
        TaxAmounts t;
        for (auto& v : t.values) v = rng.uniform(1, 100);
        sim["r" + std::to_string(i)] = t;
    }
    const auto report = compare_tax_distributions(sim, sim);
    ASSERT_EQ(report.rows.size(), 6u);
    for (const auto& row : report.rows) {
        EXPECT_EQ(row.d, 0.0);
        EXPECT_FALSE(row.rejected);
    }
    EXPECT_TRUE(report.notes.empty());
}

TEST(CompareTaxes, ScaleNote) {
    RegionTaxes sim;
    RegionTaxes ref;
    Rng rng(2);
    for (int i = 0; i < 10; ++i) {
        TaxAmounts t;
        for (auto& v : t.values) v = rng.uniform(1, 100);
        sim["r" + std::to_string(i)] = t;
        for (auto& v : t.values) v *= 1000.0;
        ref["r" + std::to_string(i)] = t;
    }
    const auto report = compare_tax_distributions(sim, ref);
    EXPECT_FALSE(report.notes.empty());
    for (const auto& row : report.rows) EXPECT_TRUE(row.rejected);
}

TEST(CompareTaxes, KeyMismatchNamesRegion) {
    RegionTaxes sim{{"a", {}}, {"b", {}}};
    RegionTaxes ref{{"a", {}}, {"c", {}}};
    try {
        compare_tax_distributions(sim, ref);
        FAIL();
    } catch (const Error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("b"), std::string::npos);
        EXPECT_NE(msg.find("c"), std::string::npos);
    }
}

TEST(CompareTaxes, FixtureReferenceFile) {
    const auto ref = load_reference_taxes(testing_helpers::data_dir() / "reference_taxes.csv");
    ASSERT_EQ(ref.size(), 3u);
    RegionTaxes sim;
    SimParams p;
    p.months = 24;
    for (const auto& [name, _] : ref)
        sim[name] = final_year_taxes(run(load_region_data(testing_helpers::data_dir() / name), p, 1));
    EXPECT_EQ(compare_tax_distributions(sim, ref).rows.size(), 6u);
}

TEST(SaveFlags, Parse) {
    const auto f = parse_save_flags("agents, HOUSE,firms");
    EXPECT_TRUE(f.agents);
    EXPECT_TRUE(f.house);
    EXPECT_TRUE(f.firms);
    EXPECT_FALSE(f.grave);
    EXPECT_FALSE(parse_save_flags("").any());
    EXPECT_THROW(parse_save_flags("agents,pets"), Error);
}

TEST(RunExperiment, WritesEveryOutput) {
    const auto out = fs::temp_directory_path() / "policysim_experiment_outputs";
    fs::remove_all(out);
    auto plan = plan_for(RunType::run, 4);
    plan.output_dir = out;
    plan.save = parse_save_flags("agents,grave,house,family,firms");
    SimParams p;
    p.months = 18;
    const auto report = run_experiment(plan, p, fixture_regions());
    EXPECT_EQ(report.failures(), 0u);
    const auto run_dir = out / "config_000" / "run_000";
    for (const char* f : {"monthly.csv", "agents.csv", "grave.csv", "houses.csv", "sales.csv", "families.csv",
                          "firms.csv"})
        EXPECT_TRUE(fs::exists(run_dir / f)) << f;
    for (const char* f : {"config_000/mean.csv", "config_000/std.csv", "mean.csv", "summary.json", "plots.gp"})
        EXPECT_TRUE(fs::exists(out / f)) << f;

    // header + one row per month
    const auto mean = slurp(out / "config_000" / "mean.csv");
    EXPECT_EQ(std::count(mean.begin(), mean.end(), '\n'), 19);

    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    EXPECT_EQ(summary["run_type"], "run");
    ASSERT_EQ(summary["configs"].size(), 1u);
    EXPECT_EQ(summary["configs"][0]["runs"].size(), 4u);
    EXPECT_EQ(summary["configs"][0]["runs"][2]["seed"].get<std::uint64_t>(), derive_seed(0, 0, 2));
}
