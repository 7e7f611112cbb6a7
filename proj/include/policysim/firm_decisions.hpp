#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "policysim/params.hpp"
#include "policysim/world.hpp"

namespace policysim {

struct FirmDecisionParams {
    double alpha = 0.5;
    double markup = 0.05;
    double sticky_prices = 0.3;
    int labor_market_frequency = 1;
    bool wage_ignore_unemployment = false;
    double min_price = 1e-6;  ///< floor for prices and wage offers
    double low_stock_fraction = 0.1;
    double high_stock_fraction = 1.0;

    static FirmDecisionParams from(const SimParams& p) {
        return {p.alpha,     p.markup,          p.sticky_prices,      p.labor_market_frequency, p.wage_ignore_unemployment,
                p.min_price, p.low_stock_fraction, p.high_stock_fraction};
    }
};

/// Sum of qualification^alpha over the workforce (0^0 = 1, so alpha = 0 counts heads).
inline double production_output(std::span<const int> qualifications, double alpha) {
    double output = 0.0;
    for (int q : qualifications) output += std::pow(static_cast<double>(q), alpha);
    return output;
}

/// Monthly production; adds to stock and returns the units made.
inline double produce(Firm& firm, const std::vector<Citizen>& citizens, double alpha) {
    std::vector<int> quals;
    quals.reserve(firm.employee_ids.size());
    for (CitizenId id : firm.employee_ids) quals.push_back(citizens.at(id.index()).qualification);
    const double output = production_output(quals, alpha);
    firm.stock += output;
    firm.last_output = output;
    return output;
}

/// Stock-driven price adjustment, evaluated with probability sticky_prices.
/// One uniform draw per call regardless of parameters.
inline double update_price(Firm& firm, const FirmDecisionParams& p, Rng& rng) {
    const bool evaluate = rng.bernoulli(p.sticky_prices);
    if (evaluate) {
        if (firm.stock < p.low_stock_fraction * firm.last_output)
            firm.price *= 1.0 + p.markup;
        else if (firm.stock > p.high_stock_fraction * firm.last_output)
            firm.price *= 1.0 - p.markup;
    }
    firm.price = std::max(firm.price, p.min_price);
    return firm.price;
}

/// Revenue per employee, damped by unemployment unless told to ignore it.
inline double update_wage(Firm& firm, double unemployment_rate, const FirmDecisionParams& p) {
    const double headcount = std::max<double>(1.0, static_cast<double>(firm.employee_ids.size()));
    const double target = firm.revenue_this_month / headcount;
    const double offer = p.wage_ignore_unemployment ? target : target * (1.0 - unemployment_rate);
    firm.wage_offer = std::max(offer, p.min_price);
    return firm.wage_offer;
}

enum class LaborDecision { open_vacancy, fire_one, hold };

struct HireFireOutcome {
    LaborDecision decision = LaborDecision::hold;
    std::optional<CitizenId> fired;  ///< set for fire_one
};

/// Employee with the lowest qualification, ties to the lowest id.
inline std::optional<CitizenId> least_qualified(const Firm& firm, const std::vector<Citizen>& citizens) {
    std::optional<CitizenId> worst;
    for (CitizenId id : firm.employee_ids)  // ascending ids, so strict < keeps the lowest id on ties
        if (!worst || citizens.at(id.index()).qualification < citizens.at(worst->index()).qualification) worst = id;
    return worst;
}

/// Profit sign drives hiring on decision months (clock mod frequency == 0).
inline HireFireOutcome hire_fire_decision(const Firm& firm, const std::vector<Citizen>& citizens, int clock,
                                          int labor_market_frequency) {
    if (labor_market_frequency < 1 || clock % labor_market_frequency != 0) return {};
    if (firm.last_profit > 0.0) return {LaborDecision::open_vacancy, std::nullopt};
    if (firm.last_profit < 0.0 && !firm.employee_ids.empty())
        return {LaborDecision::fire_one, least_qualified(firm, citizens)};
    return {};
}

/// profit = revenue - wage bill - firm tax paid; stores it and resets the
/// monthly accumulators.
inline double compute_profit(Firm& firm, double firm_tax_paid) {
    const double profit = firm.revenue_this_month - firm.wage_bill_this_month - firm_tax_paid;
    firm.last_profit = profit;
    firm.revenue_this_month = 0.0;
    firm.wage_bill_this_month = 0.0;
    return profit;
}

}  // namespace policysim
