#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "policysim/params.hpp"
#include "policysim/world.hpp"

namespace policysim {

struct PurchaseRecord {
    FamilyId family_id;
    FirmId firm_id;
    double quantity = 0.0;
    double gross_value = 0.0;
    double tax = 0.0;
    bool operator==(const PurchaseRecord&) const = default;
};

struct Budget {
    double consume = 0.0;
    double saved = 0.0;
};

/// Splits liquid cash: beta of it is this month's consumption budget (kept
/// as cash until spent), the rest moves to illiquid savings.
inline Budget set_budget(Family& family, double beta) {
    Budget b;
    b.consume = beta * family.monthly_cash;
    b.saved = family.monthly_cash - b.consume;
    family.savings += b.saved;
    family.monthly_cash = b.consume;
    return b;
}

enum class ShoppingCriterion { price, distance };

/// Cheapest or closest firm among `sample` (ties to the lower firm id).
inline FirmId pick_firm(std::span<const Firm* const> sample, ShoppingCriterion criterion, Location home) {
    const Firm* best = nullptr;
    double best_key = 0.0;
    for (const Firm* f : sample) {
        const double key = criterion == ShoppingCriterion::price ? f->price : distance(home, f->location);
        if (!best || key < best_key || (key == best_key && f->id < best->id)) {
            best = f;
            best_key = key;
        }
    }
    return best->id;
}

/// Samples min(size_market, #firms) firms uniformly, then shops by price with
/// probability `price_probability`, otherwise by distance from home.
inline FirmId choose_firm(Location home, std::span<const Firm> firms, int size_market, double price_probability,
                          Rng& rng) {
    if (firms.empty()) throw Error("choose_firm: no firms");
    const auto picks = rng.sample(firms.size(), static_cast<std::size_t>(std::max(size_market, 1)));
    std::vector<const Firm*> sample;
    sample.reserve(picks.size());
    for (std::size_t i : picks) sample.push_back(&firms[i]);
    const auto criterion = rng.bernoulli(price_probability) ? ShoppingCriterion::price : ShoppingCriterion::distance;
    return pick_firm(sample, criterion, home);
}

/// Buys min(stock, budget / price) units. The family pays the gross value;
/// the firm keeps gross x (1 - rate) and the rest is credited as consumption
/// tax to the firm's municipality.
inline PurchaseRecord transact(Family& family, Firm& firm, double budget, double consumption_tax_rate,
                               TaxLedger& ledger) {
    PurchaseRecord r{family.id, firm.id, 0.0, 0.0, 0.0};
    if (budget <= 0.0 || firm.stock <= 0.0) return r;
    const double affordable = budget / firm.price;
    if (affordable <= firm.stock) {
        r.quantity = affordable;
        r.gross_value = budget;
    } else {
        r.quantity = firm.stock;
        r.gross_value = std::min(budget, firm.stock * firm.price);
    }
    const double net = r.gross_value * (1.0 - consumption_tax_rate);
    r.tax = r.gross_value - net;
    firm.stock = std::max(0.0, firm.stock - r.quantity);
    family.monthly_cash -= r.gross_value;
    firm.cash += net;
    firm.revenue_this_month += net;
    ledger.credit(firm.municipality_id, TaxKind::consumption, r.tax);
    return r;
}

/// The monthly goods market: families in a fresh random order, one shop each.
inline std::vector<PurchaseRecord> run_goods_market(World& w, const SimParams& params) {
    std::vector<FamilyId> order;
    for (const auto& f : w.families)
        if (f.active) order.push_back(f.id);
    w.rng.shuffle(order);

    std::vector<PurchaseRecord> purchases;
    if (w.firms.empty()) return purchases;
    purchases.reserve(order.size());
    for (FamilyId id : order) {
        auto& family = w.family(id);
        const Budget budget = set_budget(family, params.beta);
        const FirmId chosen = choose_firm(w.house(family.residence).location, w.firms, params.size_market,
                                          params.price_criterion_probability, w.rng);
        purchases.push_back(transact(family, w.firm(chosen), budget.consume, params.taxes.consumption, w.ledger));
    }
    return purchases;
}

}  // namespace policysim
