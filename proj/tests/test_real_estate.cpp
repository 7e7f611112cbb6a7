#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"

using namespace policysim;
using namespace testing_helpers;

TEST(Hedonic, Formula) { EXPECT_DOUBLE_EQ(hedonic_offer_price(50, 2, 1.0, 1.0), 100.0); }

TEST(Hedonic, LinearInQliAndQuality) {
    EXPECT_DOUBLE_EQ(hedonic_offer_price(73, 3, 2.4, 0.5), 2.0 * hedonic_offer_price(73, 3, 1.2, 0.5));
    EXPECT_DOUBLE_EQ(hedonic_offer_price(73, 4, 1.2, 0.5), 4.0 * hedonic_offer_price(73, 1, 1.2, 0.5));
}

TEST(Hedonic, StoresCurrentPrice) {
    House h;
    h.size = 50;
    h.quality = 2;
    hedonic_offer_price(h, 1.5, 1.0);
    EXPECT_DOUBLE_EQ(h.current_price, 150.0);
}

TEST(Entrants, Edges) {
    std::vector<Family> fams(20);
    Rng rng(1);
    EXPECT_TRUE(select_entrants(fams, 0.0, rng).empty());
    EXPECT_EQ(select_entrants(fams, 1.0, rng).size(), 20u);
    fams[3].active = false;
    EXPECT_EQ(select_entrants(fams, 1.0, rng).size(), 19u);
}

TEST(Entrants, BinomialWithinFourSigma) {
    std::vector<Family> fams(10000);
    Rng rng(99);
    const auto n = select_entrants(fams, 0.1, rng).size();
    EXPECT_NEAR(static_cast<double>(n), 1000.0, 4.0 * std::sqrt(10000 * 0.1 * 0.9));
}

namespace {

struct Market {
    World w;
    FamilyId seller;
    HouseId listed;
};

// A seller owning one vacant house priced `offer`, plus buyers with the given savings.
Market market(double offer, const std::vector<double>& savings) {
    Market m;
    m.w = bare_world();
    m.seller = add_family(m.w, {0, 0});
    add_citizen(m.w, m.seller, 40, 5);
    m.w.house(m.w.family(m.seller).residence).current_price = 1.0;
    m.listed = add_vacant_house(m.w, m.seller, 200, 4);
    m.w.house(m.listed).current_price = offer;
    for (double s : savings) {
        const auto b = add_family(m.w, {1, 1}, MunicipalityId(0u), 0.0, s);
        add_citizen(m.w, b, 30, 5);
        m.w.house(m.w.family(b).residence).current_price = 1.0;
    }
    return m;
}

}  // namespace

TEST(MatchMarket, AveragedPriceAndTax) {
    auto m = market(80.0, {100.0});
    const FamilyId buyer(1u);
    const auto sales = match_market(m.w, {buyer}, vacant_listings(m.w), 0.1);
    ASSERT_EQ(sales.size(), 1u);
    EXPECT_DOUBLE_EQ(sales[0].transaction_price, 90.0);
    EXPECT_DOUBLE_EQ(m.w.family(buyer).savings, 10.0);
    EXPECT_DOUBLE_EQ(m.w.family(m.seller).monthly_cash, 81.0);
    EXPECT_DOUBLE_EQ(m.w.ledger.amount(MunicipalityId(0u), TaxKind::transaction), 9.0);
    EXPECT_EQ(m.w.house(m.listed).owner, buyer);
    EXPECT_TRUE(contains_sorted(m.w.family(buyer).owned_houses, m.listed));
    EXPECT_FALSE(contains_sorted(m.w.family(m.seller).owned_houses, m.listed));
}

TEST(MatchMarket, TooPoorBuysNothing) {
    auto m = market(80.0, {79.0});
    EXPECT_TRUE(match_market(m.w, {FamilyId(1u)}, vacant_listings(m.w), 0.1).empty());
}

TEST(MatchMarket, RichestEntrantFirst) {
    auto m = market(250.0, {300.0, 500.0});
    const auto sales = match_market(m.w, {FamilyId(1u), FamilyId(2u)}, vacant_listings(m.w), 0.0);
    ASSERT_GE(sales.size(), 1u);
    EXPECT_EQ(sales[0].buyer, FamilyId(2u));
    EXPECT_EQ(sales[0].house, m.listed);
    // the richer buyer moved out, so its old home (priced 1.0) went to the other entrant
    ASSERT_EQ(sales.size(), 2u);
    EXPECT_EQ(sales[1].buyer, FamilyId(1u));
}

TEST(MatchMarket, RelocatesToBetterHouse) {
    auto m = market(80.0, {100.0});
    const FamilyId buyer(1u);
    const HouseId old_home = m.w.family(buyer).residence;
    const auto sales = match_market(m.w, {buyer}, vacant_listings(m.w), 0.0);
    ASSERT_EQ(sales.size(), 1u);
    EXPECT_TRUE(sales[0].relocated);  // 200 m2 x quality 4 beats 50 m2 x quality 1
    EXPECT_EQ(m.w.family(buyer).residence, m.listed);
    EXPECT_TRUE(m.w.house(m.listed).occupied);
    EXPECT_FALSE(m.w.house(old_home).occupied);
}

class MarketProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(MarketProperties, SalesInvariants) {
    SimParams p;
    p.months = 24;
    auto r = run(fixture3(), p, GetParam());
    World& w = r.final_world;
    price_houses(w, p.hedonic_base);
    std::vector<double> savings_at_start;
    for (const auto& f : w.families) savings_at_start.push_back(f.savings);
    const auto houses_before = w.houses.size();
    const double money_before = total_money(w);

    const auto entrants = select_entrants(w.families, 0.5, w.rng);
    const auto sales = match_market(w, entrants, vacant_listings(w), p.taxes.transaction);
    EXPECT_EQ(w.houses.size(), houses_before);
    EXPECT_NEAR(total_money(w), money_before, 1e-9 * money_before);
    EXPECT_TRUE(check_integrity(w).empty());
    for (std::size_t k = 0; k < sales.size(); ++k) {
        const auto& s = sales[k];
        EXPECT_LE(s.offer, savings_at_start[s.buyer.index()]);
        if (s.bid != s.offer) {
            EXPECT_GT(s.transaction_price, std::min(s.bid, s.offer));
            EXPECT_LT(s.transaction_price, std::max(s.bid, s.offer));
        }
        for (std::size_t later = k + 1; later < sales.size(); ++later)
            EXPECT_GE(savings_at_start[s.buyer.index()], savings_at_start[sales[later].buyer.index()]);
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, MarketProperties, ::testing::Values(1u, 2u, 3u));

TEST(PropertyTax, Arithmetic) {
    auto w = bare_world();
    const auto fam = add_family(w, {0, 0}, MunicipalityId(0u), 10.0);
    w.house(w.family(fam).residence).current_price = 100.0;
    EXPECT_DOUBLE_EQ(collect_property_tax(w, 0.005), 0.5);
    EXPECT_DOUBLE_EQ(w.family(fam).monthly_cash, 9.5);
    EXPECT_DOUBLE_EQ(w.ledger.amount(MunicipalityId(0u), TaxKind::property), 0.5);
}

TEST(PropertyTax, ZeroRateNoFlow) {
    auto w = bare_world();
    const auto fam = add_family(w, {0, 0}, MunicipalityId(0u), 10.0);
    w.house(w.family(fam).residence).current_price = 100.0;
    EXPECT_EQ(collect_property_tax(w, 0.0), 0.0);
    EXPECT_EQ(w.ledger.total(), 0.0);
}

TEST(PropertyTax, ClampedAtCash) {
    auto w = bare_world();
    const auto fam = add_family(w, {0, 0}, MunicipalityId(0u), 0.2);
    w.house(w.family(fam).residence).current_price = 100.0;
    EXPECT_DOUBLE_EQ(collect_property_tax(w, 0.005), 0.2);
    EXPECT_EQ(w.family(fam).monthly_cash, 0.0);
}
