#include <gtest/gtest.h>

#include <algorithm>

#include "helpers.hpp"

using namespace policysim;
using namespace testing_helpers;

namespace {

double output_of(std::vector<int> quals, double alpha) { return production_output(quals, alpha); }

FirmDecisionParams always_evaluate(double markup) {
    FirmDecisionParams p;
    p.sticky_prices = 1.0;
    p.markup = markup;
    return p;
}

}  // namespace

TEST(Produce, Linear) { EXPECT_DOUBLE_EQ(output_of({3, 5}, 1.0), 8.0); }

TEST(Produce, SquareRoot) { EXPECT_DOUBLE_EQ(output_of({4, 9}, 0.5), 5.0); }

TEST(Produce, HeadcountAtAlphaZero) { EXPECT_DOUBLE_EQ(output_of({7, 7, 7}, 0.0), 3.0); }

TEST(Produce, AddsToStock) {
    auto w = bare_world();
    const auto fam = add_family(w, {0, 0});
    const auto a = add_citizen(w, fam, 30, 4);
    const auto b = add_citizen(w, fam, 30, 9);
    const auto f = add_firm(w, {0, 0});
    w.firm(f).wage_offer = 1.0;
    hire(w, f, a);
    hire(w, f, b);
    w.firm(f).stock = 1.0;
    EXPECT_DOUBLE_EQ(produce(w.firm(f), w.citizens, 0.5), 5.0);
    EXPECT_DOUBLE_EQ(w.firm(f).stock, 6.0);
    EXPECT_DOUBLE_EQ(w.firm(f).last_output, 5.0);
}

TEST(Produce, PermutationInvariantAndMonotone) {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> q(1 + rng.index(10));
        for (auto& x : q) x = static_cast<int>(rng.index(22));
        const double alpha = rng.uniform(0.05, 1.0);
        const double base = output_of(q, alpha);
        auto shuffled = q;
        rng.shuffle(shuffled);
        EXPECT_NEAR(output_of(shuffled, alpha), base, 1e-9);
        auto more = q;
        more.push_back(1 + static_cast<int>(rng.index(21)));
        EXPECT_GT(output_of(more, alpha), base);
    }
}

TEST(UpdatePrice, StickyZeroNeverChanges) {
    Firm f;
    f.price = 2.0;
    f.stock = 0.0;
    f.last_output = 10.0;
    FirmDecisionParams p;
    p.sticky_prices = 0.0;
    Rng rng(1);
    for (int i = 0; i < 100; ++i) update_price(f, p, rng);
    EXPECT_EQ(f.price, 2.0);
}

TEST(UpdatePrice, EmptyStockRaisesByMarkup) {
    Firm f;
    f.price = 1.0;
    f.stock = 0.0;
    f.last_output = 10.0;
    Rng rng(1);
    EXPECT_DOUBLE_EQ(update_price(f, always_evaluate(0.1), rng), 1.1);
}

TEST(UpdatePrice, GlutLowersByMarkup) {
    Firm f;
    f.price = 1.0;
    f.stock = 50.0;
    f.last_output = 10.0;
    Rng rng(1);
    EXPECT_DOUBLE_EQ(update_price(f, always_evaluate(0.1), rng), 0.9);
}

TEST(UpdatePrice, ZeroMarkupNeverChanges) {
    Rng rng(2);
    Firm f;
    f.price = 3.0;
    for (int i = 0; i < 200; ++i) {
        f.stock = rng.uniform(0, 20);
        f.last_output = rng.uniform(0, 20);
        update_price(f, always_evaluate(0.0), rng);
    }
    EXPECT_EQ(f.price, 3.0);
}

TEST(UpdatePrice, StaysAboveFloor) {
    Rng rng(3);
    Firm f;
    f.price = 1.0;
    f.last_output = 1.0;
    f.stock = 100.0;
    auto p = always_evaluate(0.9);
    for (int i = 0; i < 1000; ++i) update_price(f, p, rng);
    EXPECT_GE(f.price, p.min_price);
}

TEST(UpdateWage, IgnoringUnemployment) {
    auto w = bare_world();
    const auto fam = add_family(w, {0, 0});
    const auto f = add_firm(w, {0, 0});
    w.firm(f).wage_offer = 1.0;
    for (int i = 0; i < 10; ++i) hire(w, f, add_citizen(w, fam, 30, 5));
    w.firm(f).revenue_this_month = 1000.0;
    FirmDecisionParams p;
    p.wage_ignore_unemployment = true;
    EXPECT_DOUBLE_EQ(update_wage(w.firm(f), 0.2, p), 100.0);
    p.wage_ignore_unemployment = false;
    EXPECT_DOUBLE_EQ(update_wage(w.firm(f), 0.2, p), 80.0);
}

TEST(UpdateWage, FlagInertAtFullEmployment) {
    Firm a;
    a.revenue_this_month = 321.0;
    Firm b = a;
    FirmDecisionParams p;
    p.wage_ignore_unemployment = true;
    update_wage(a, 0.0, p);
    p.wage_ignore_unemployment = false;
    update_wage(b, 0.0, p);
    EXPECT_EQ(a.wage_offer, b.wage_offer);
}

TEST(HireFire, ProfitOpensVacancy) {
    Firm f;
    f.last_profit = 50.0;
    EXPECT_EQ(hire_fire_decision(f, {}, 0, 1).decision, LaborDecision::open_vacancy);
}

TEST(HireFire, LossFiresLeastQualified) {
    auto w = bare_world();
    const auto fam = add_family(w, {0, 0});
    const auto f = add_firm(w, {0, 0});
    w.firm(f).wage_offer = 1.0;
    const auto five = add_citizen(w, fam, 30, 5);
    const auto two = add_citizen(w, fam, 30, 2);
    hire(w, f, five);
    hire(w, f, two);
    w.firm(f).last_profit = -50.0;
    const auto out = hire_fire_decision(w.firm(f), w.citizens, 0, 1);
    EXPECT_EQ(out.decision, LaborDecision::fire_one);
    ASSERT_TRUE(out.fired.has_value());
    EXPECT_EQ(*out.fired, two);
}

TEST(HireFire, OffFrequencyHolds) {
    Firm f;
    f.last_profit = 50.0;
    EXPECT_EQ(hire_fire_decision(f, {}, 1, 3).decision, LaborDecision::hold);
    f.last_profit = -50.0;
    EXPECT_EQ(hire_fire_decision(f, {}, 2, 3).decision, LaborDecision::hold);
    EXPECT_EQ(hire_fire_decision(f, {}, 3, 3).decision, LaborDecision::hold);  // no employees to fire
}

TEST(HireFire, SignalMatchesProfitSign) {
    Rng rng(8);
    auto w = bare_world();
    const auto fam = add_family(w, {0, 0});
    const auto f = add_firm(w, {0, 0});
    w.firm(f).wage_offer = 1.0;
    hire(w, f, add_citizen(w, fam, 30, 5));
    for (int i = 0; i < 200; ++i) {
        w.firm(f).last_profit = rng.uniform(-10, 10);
        const auto d = hire_fire_decision(w.firm(f), w.citizens, 0, 1).decision;
        EXPECT_EQ(d, w.firm(f).last_profit > 0 ? LaborDecision::open_vacancy : LaborDecision::fire_one);
    }
}

TEST(Profit, Arithmetic) {
    Firm f;
    f.revenue_this_month = 100.0;
    f.wage_bill_this_month = 60.0;
    EXPECT_DOUBLE_EQ(compute_profit(f, 10.0), 30.0);
    EXPECT_DOUBLE_EQ(f.last_profit, 30.0);
    EXPECT_EQ(f.revenue_this_month, 0.0);
    Firm zero;
    EXPECT_EQ(compute_profit(zero, 0.0), 0.0);
    Firm loss;
    loss.wage_bill_this_month = 60.0;
    EXPECT_DOUBLE_EQ(compute_profit(loss, 0.0), -60.0);
}
