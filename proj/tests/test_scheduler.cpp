#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"

using namespace policysim;
using testing_helpers::fixture3;

TEST(Step, EmptyWorldGivesZeros) {
    World w;
    const auto rec = step(w, SimParams{});
    EXPECT_EQ(rec.unemployment, 0.0);
    EXPECT_EQ(rec.population, 0);
    EXPECT_EQ(rec.taxes.total(), 0.0);
    EXPECT_EQ(rec.money, 0.0);
    EXPECT_EQ(w.clock, 1);
}

TEST(Step, SameWorldSameRecord) {
    auto a = generate_world(fixture3(), SimParams{}, 5);
    auto b = a;
    for (int i = 0; i < 6; ++i) EXPECT_EQ(step(a, SimParams{}), step(b, SimParams{}));
    EXPECT_TRUE(a == b);
}

TEST(Run, TwoHundredFortyMonths) {
    const auto r = run(fixture3(), SimParams{}, 1);
    EXPECT_EQ(r.records.size(), 240u);
    EXPECT_EQ(r.final_world.clock, 240);
    for (std::size_t i = 0; i < r.records.size(); ++i) EXPECT_EQ(r.records[i].month, static_cast<int>(i));
}

TEST(Run, ThirtyYearCap) {
    SimParams p;
    p.months = 361;
    EXPECT_THROW(run(fixture3(), p, 1), Error);
    p.months = 360;
    EXPECT_NO_THROW(p.validate());
}

TEST(Run, ZeroMonths) {
    SimParams p;
    p.months = 0;
    const auto r = run(fixture3(), p, 1);
    EXPECT_TRUE(r.records.empty());
    EXPECT_EQ(r.final_world.clock, 0);
}

TEST(Run, PureFunctionOfArguments) {
    SimParams p;
    p.months = 36;
    const auto a = run(fixture3(), p, 77);
    const auto b = run(fixture3(), p, 77);
    EXPECT_EQ(serialize(a.final_world), serialize(b.final_world));
    EXPECT_EQ(a.records, b.records);
    const auto c = run(fixture3(), p, 78);
    EXPECT_NE(serialize(a.final_world), serialize(c.final_world));
}

TEST(Run, LedgerWrittenOnlyInCollectionSteps) {
    SimParams p;
    p.months = 24;
    const auto r = run(fixture3(), p, 3);
    const auto& writes = r.final_world.ledger.writes_by_step();
    const auto& resets = r.final_world.ledger.resets_by_step();
    for (int s = 0; s <= 8; ++s) {
        if (s == 3 || s == 5 || s == 6) EXPECT_GT(writes[s], 0) << "step " << s;
        else EXPECT_EQ(writes[s], 0) << "step " << s;
        if (s == 7) EXPECT_EQ(resets[s], 24);
        else EXPECT_EQ(resets[s], 0) << "step " << s;
    }
}

TEST(Run, MoneyOnlyLeavesThroughQliInvestment) {
    SimParams p;
    p.months = 48;
    const auto r = run(fixture3(), p, 12);
    double previous = r.initial_money;
    for (const auto& rec : r.records) {
        EXPECT_NEAR(rec.money - previous, -rec.qli_investment, 1e-6) << "month " << rec.month;
        previous = rec.money;
    }
}

TEST(Run, IntegrityHoldsEveryMonth) {
    SimParams p;
    p.months = 60;
    RunOptions o;
    o.check_integrity = true;
    EXPECT_NO_THROW(run(fixture3(), p, 4, o));
}

TEST(Run, QliNeverDecreases) {
    SimParams p;
    p.months = 60;
    const auto r = run(fixture3(), p, 9);
    for (std::size_t i = 1; i < r.records.size(); ++i)
        for (std::size_t m = 0; m < r.records[i].qli.size(); ++m)
            EXPECT_GE(r.records[i].qli[m], r.records[i - 1].qli[m]);
}

TEST(Run, LogsDeathsAndSales) {
    SimParams p;
    p.months = 60;
    RunOptions o;
    o.keep_deaths = true;
    o.keep_sales = true;
    const auto r = run(fixture3(), p, 2, o);
    std::int64_t deaths = 0;
    std::int64_t sales = 0;
    for (const auto& rec : r.records) {
        deaths += rec.deaths;
        sales += rec.sales;
    }
    EXPECT_EQ(static_cast<std::int64_t>(r.deaths.size()), deaths);
    EXPECT_EQ(static_cast<std::int64_t>(r.sales.size()), sales);
}

TEST(Run, ErrorsNameTheMonth) {
    auto region = fixture3();
    // A mortality table that stops at age 5 fails as soon as someone older is checked.
    region.mortality = MortalityTable::flat(0.0, 5);
    try {
        run(region, SimParams{}, 1);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("month 0"), std::string::npos) << e.what();
    }
}
