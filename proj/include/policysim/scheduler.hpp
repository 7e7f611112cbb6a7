#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "policysim/demographics.hpp"
#include "policysim/firm_decisions.hpp"
#include "policysim/fiscal.hpp"
#include "policysim/generate.hpp"
#include "policysim/goods_market.hpp"
#include "policysim/labor_market.hpp"
#include "policysim/params.hpp"
#include "policysim/real_estate.hpp"
#include "policysim/stats.hpp"
#include "policysim/world.hpp"

namespace policysim {

struct MonthRecord {
    int month = 0;
    double unemployment = 0.0;
    double price_index = 0.0;  ///< unweighted mean firm price
    double inflation = 0.0;    ///< relative change of the price index over the previous month
    TaxAmounts taxes;          ///< collected this month, by kind
    std::vector<double> qli;   ///< per municipality, after this month's investment
    std::vector<std::int64_t> residents;  ///< per municipality
    std::int64_t population = 0;
    double gini = 0.0;         ///< of family wealth (cash + savings)
    double house_price_index = 0.0;
    double money = 0.0;        ///< total money after the month
    double qli_investment = 0.0;
    std::int64_t births = 0;
    std::int64_t deaths = 0;
    std::int64_t sales = 0;
    double gdp = 0.0;          ///< units produced

    bool operator==(const MonthRecord&) const = default;
};

/// Population-weighted mean QLI of the last record of a run.
inline double weighted_qli(const World& w) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& m : w.municipalities) {
        num += m.qli * static_cast<double>(m.population);
        den += static_cast<double>(m.population);
    }
    return den > 0.0 ? num / den : 0.0;
}

struct StepLogs {
    std::vector<DeathRecord>* deaths = nullptr;
    std::vector<SaleRecord>* sales = nullptr;
};

inline double price_index(const World& w) {
    if (w.firms.empty()) return 0.0;
    double s = 0.0;
    for (const auto& f : w.firms) s += f.price;
    return s / static_cast<double>(w.firms.size());
}

inline double family_wealth_gini(const World& w) {
    std::vector<double> wealth;
    for (const auto& f : w.families)
        if (f.active) wealth.push_back(std::max(0.0, f.monthly_cash + f.savings));
    return wealth.empty() ? 0.0 : gini(wealth);
}

namespace detail {

inline MonthRecord run_month(World& w, const SimParams& params, StepLogs logs) {
    MonthRecord rec;
    rec.month = w.clock;
    const double previous_index = price_index(w);
    const auto firm_params = FirmDecisionParams::from(params);

    // 1. production
    w.ledger.set_step(1);
    for (auto& f : w.firms) rec.gdp += produce(f, w.citizens, params.alpha);

    // 2. demographics
    w.ledger.set_step(2);
    age_step(w);
    retire_step(w, params.working_age_max);
    auto deaths = mortality_step(w, w.region.mortality, w.rng);
    rec.deaths = static_cast<std::int64_t>(deaths.size());
    rec.births = static_cast<std::int64_t>(fertility_step(w, w.region.fertility, w.rng).size());
    if (logs.deaths) logs.deaths->insert(logs.deaths->end(), deaths.begin(), deaths.end());
    recount_population(w);

    // 3. goods market
    w.ledger.set_step(3);
    run_goods_market(w, params);

    // 4. firm decisions
    w.ledger.set_step(4);
    const double u = unemployment_rate(w, params.working_age_min, params.working_age_max);
    std::vector<FirmId> hiring;
    std::vector<CitizenId> dismissed;  // leave at the end of the month, after being paid
    for (auto& f : w.firms) {
        update_price(f, firm_params, w.rng);
        update_wage(f, u, firm_params);
        const auto decision = hire_fire_decision(f, w.citizens, w.clock, params.labor_market_frequency);
        if (decision.decision == LaborDecision::open_vacancy) hiring.push_back(f.id);
        else if (decision.decision == LaborDecision::fire_one && decision.fired) dismissed.push_back(*decision.fired);
    }

    // 5. labor market and wages
    w.ledger.set_step(5);
    const auto pool = build_pool(w, hiring, params.working_age_min, params.working_age_max);
    apply_hires(w, match(w, pool, params.pct_distance_hiring, params.candidate_sample_size(), w.rng));
    pay_wages(w, params.taxes.labor);
    for (auto& f : w.firms) compute_profit(f, collect_firm_tax(f, params.taxes.firms, w.ledger));
    for (CitizenId id : dismissed) separate(w, id);

    // 6. real estate
    w.ledger.set_step(6);
    price_houses(w, params.hedonic_base);
    auto sales = match_market(w, select_entrants(w.families, params.percentage_check_new_location, w.rng),
                              vacant_listings(w), params.taxes.transaction);
    rec.sales = static_cast<std::int64_t>(sales.size());
    if (logs.sales) logs.sales->insert(logs.sales->end(), sales.begin(), sales.end());
    collect_property_tax(w, params.taxes.property);

    // 7. fiscal
    w.ledger.set_step(7);
    const auto fiscal = run_fiscal_step(w, params);
    rec.taxes = fiscal.collected;
    rec.qli_investment = fiscal.invested;

    // 8. record
    w.ledger.set_step(8);
    rec.unemployment = unemployment_rate(w, params.working_age_min, params.working_age_max);
    rec.price_index = price_index(w);
    rec.inflation = previous_index > 0.0 ? rec.price_index / previous_index - 1.0 : 0.0;
    for (const auto& m : w.municipalities) {
        rec.qli.push_back(m.qli);
        rec.residents.push_back(m.population);
        rec.population += m.population;
    }
    rec.gini = family_wealth_gini(w);
    double house_total = 0.0;
    for (const auto& h : w.houses) house_total += h.current_price;
    rec.house_price_index = w.houses.empty() ? 0.0 : house_total / static_cast<double>(w.houses.size());
    rec.money = total_money(w);
    ++w.clock;
    w.ledger.set_step(0);
    return rec;
}

}  // namespace detail

/// One month of the schedule. Module errors are rethrown with the month.
inline MonthRecord step(World& w, const SimParams& params, StepLogs logs = {}) {
    try {
        return detail::run_month(w, params, logs);
    } catch (const std::exception& e) {
        throw Error("month " + std::to_string(w.clock) + ": " + e.what());
    }
}

struct RunOptions {
    bool keep_deaths = false;
    bool keep_sales = false;
    bool check_integrity = false;  ///< verify structural invariants after every month
};

struct RunResult {
    std::vector<MonthRecord> records;
    World final_world;
    double initial_money = 0.0;
    int calibration_rounds = 0;
    std::vector<DeathRecord> deaths;
    std::vector<SaleRecord> sales;
};

/// Generates the world, calibrates unemployment, then runs params.months steps.
inline RunResult run(const RegionData& region, const SimParams& params, std::uint64_t seed, const RunOptions& options = {}) {
    if (params.months > 360) throw Error("months must not exceed 360 (30 years)");
    params.validate();
    RunResult result;
    World w = generate_world(region, params, seed);
    result.calibration_rounds = calibrate_initial_unemployment(w, params.initial_unemployment, params, w.rng);
    result.initial_money = total_money(w);
    StepLogs logs{options.keep_deaths ? &result.deaths : nullptr, options.keep_sales ? &result.sales : nullptr};
    result.records.reserve(static_cast<std::size_t>(params.months));
    for (int m = 0; m < params.months; ++m) {
        result.records.push_back(step(w, params, logs));
        if (options.check_integrity) {
            const auto problems = check_integrity(w);
            if (!problems.empty()) throw Error("month " + std::to_string(m) + ": " + problems.front());
        }
    }
    result.final_world = std::move(w);
    return result;
}

}  // namespace policysim
