#pragma once

#include <algorithm>
#include <vector>

#include "policysim/world.hpp"

namespace policysim {

/// Hedonic asking price: multiplicative in surface, quality and the QLI of
/// the house's municipality, hence strictly increasing in each.
inline double hedonic_offer_price(double size, int quality, double qli, double base_coefficient) {
    return base_coefficient * size * static_cast<double>(quality) * qli;
}

/// Prices `house` and stores the result as its current price.
inline double hedonic_offer_price(House& house, double municipality_qli, double base_coefficient) {
    house.current_price = hedonic_offer_price(house.size, house.quality, municipality_qli, base_coefficient);
    return house.current_price;
}

struct Listing {
    HouseId house;
    double offer_price = 0.0;
    bool operator==(const Listing&) const = default;
};

struct SaleRecord {
    int month = 0;
    HouseId house;
    FamilyId seller;
    FamilyId buyer;
    double bid = 0.0;
    double offer = 0.0;
    double transaction_price = 0.0;
    double tax = 0.0;
    bool relocated = false;
    bool operator==(const SaleRecord&) const = default;
};

/// Housing desirability used for relocation: size x quality x QLI.
inline double house_attractiveness(const World& w, const House& h) {
    return h.size * static_cast<double>(h.quality) * w.municipality(h.municipality_id).qli;
}

inline void price_houses(World& w, double base_coefficient) {
    for (auto& h : w.houses) hedonic_offer_price(h, w.municipality(h.municipality_id).qli, base_coefficient);
}

/// One listing per vacant house at its current price, in house-id order.
inline std::vector<Listing> vacant_listings(const World& w) {
    std::vector<Listing> listings;
    for (const auto& h : w.houses)
        if (!h.occupied) listings.push_back({h.id, h.current_price});
    return listings;
}

/// Each active family enters independently with probability `pct`.
inline std::vector<FamilyId> select_entrants(const std::vector<Family>& families, double pct, Rng& rng) {
    std::vector<FamilyId> entrants;
    for (const auto& f : families) {
        if (!f.active) continue;
        if (rng.bernoulli(pct)) entrants.push_back(f.id);
    }
    return entrants;
}

/// Sequential bid matching. Entrants go in order of savings (highest first,
/// ties by id); each bids its full savings for the most expensive listing it
/// can afford (ties by house id). Houses vacated by relocating buyers join
/// the market for later entrants. The seller's proceeds, net of tax, are
/// liquid: a sold house turns into spendable cash.
inline std::vector<SaleRecord> match_market(World& w, std::vector<FamilyId> entrants, std::vector<Listing> listings,
                                            double transaction_tax_rate) {
    std::stable_sort(entrants.begin(), entrants.end(), [&](FamilyId a, FamilyId b) {
        const double sa = w.family(a).savings;
        const double sb = w.family(b).savings;
        if (sa != sb) return sa > sb;
        return a < b;
    });

    std::vector<SaleRecord> sales;
    for (FamilyId buyer_id : entrants) {
        auto& buyer = w.family(buyer_id);
        if (!buyer.active) continue;
        const double bid = buyer.savings;

        auto best = listings.end();
        for (auto it = listings.begin(); it != listings.end(); ++it) {
            if (it->offer_price > bid) continue;
            if (w.house(it->house).owner == buyer_id) continue;
            if (best == listings.end() || it->offer_price > best->offer_price ||
                (it->offer_price == best->offer_price && it->house < best->house))
                best = it;
        }
        if (best == listings.end()) continue;

        const Listing listing = *best;
        listings.erase(best);
        auto& house = w.house(listing.house);
        auto& seller = w.family(house.owner);

        SaleRecord sale;
        sale.month = w.clock;
        sale.house = house.id;
        sale.seller = seller.id;
        sale.buyer = buyer_id;
        sale.bid = bid;
        sale.offer = listing.offer_price;
        sale.transaction_price = (bid + listing.offer_price) / 2.0;
        sale.tax = sale.transaction_price * transaction_tax_rate;

        buyer.savings -= sale.transaction_price;
        seller.monthly_cash += sale.transaction_price - sale.tax;
        w.ledger.credit(house.municipality_id, TaxKind::transaction, sale.tax);

        erase_sorted(seller.owned_houses, house.id);
        insert_sorted(buyer.owned_houses, house.id);
        house.owner = buyer_id;

        auto& current = w.house(buyer.residence);
        if (house_attractiveness(w, house) > house_attractiveness(w, current)) {
            current.occupied = false;
            listings.push_back({current.id, current.current_price});
            house.occupied = true;
            buyer.residence = house.id;
            sale.relocated = true;
        }
        sales.push_back(sale);
    }
    return sales;
}

/// Residents pay current_price x rate from liquid cash, clamped at what they hold.
inline double collect_property_tax(World& w, double property_tax_rate) {
    double collected = 0.0;
    for (auto& f : w.families) {
        if (!f.active) continue;
        const auto& h = w.house(f.residence);
        const double paid = std::min(f.monthly_cash, h.current_price * property_tax_rate);
        if (paid <= 0.0) continue;
        f.monthly_cash -= paid;
        w.ledger.credit(h.municipality_id, TaxKind::property, paid);
        collected += paid;
    }
    return collected;
}

}  // namespace policysim
