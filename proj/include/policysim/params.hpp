#pragma once

#include <string>
#include <vector>

#include "policysim/core.hpp"
#include "policysim/taxes.hpp"

namespace policysim {

/// Every tunable of a simulation run. Defaults are the documented baseline
/// (see README "Configuration").
struct SimParams {
    // Firms
    double alpha = 0.5;                   ///< exponent on qualification in production
    double markup = 0.05;                 ///< relative price step
    double sticky_prices = 0.3;           ///< monthly probability of re-evaluating price
    int labor_market_frequency = 1;       ///< months between hire/fire decisions
    bool wage_ignore_unemployment = false;
    double min_price = 1e-6;              ///< floor for prices and wage offers
    double low_stock_fraction = 0.1;      ///< stock below this share of last output -> raise price
    double high_stock_fraction = 1.0;     ///< stock above this share of last output -> lower price
    double citizens_per_firm = 15.0;      ///< firm density used when generating the world

    // Families and markets
    double beta = 0.9;                    ///< propensity to consume
    int size_market = 10;                 ///< firms sampled per shopping decision
    double price_criterion_probability = 0.5;  ///< chance a family shops by price rather than distance
    double pct_distance_hiring = 0.3;
    int hiring_sample_size = 0;           ///< candidates sampled per vacancy; 0 = SIZE_MARKET
    int working_age_min = 16;
    int working_age_max = 70;
    double initial_unemployment = 0.1;    ///< calibration target for month 0

    // Population and housing
    double house_vacancy = 0.1;
    double members_per_family = 2.5;
    double percentage_actual_pop = 1.0;
    double percentage_check_new_location = 0.05;
    double hedonic_base = 0.5;            ///< currency per (m2 x quality x QLI)
    double initial_savings_months = 72.0; ///< month-0 savings per adult, in months of the initial wage

    // Fiscal
    bool alternative0 = true;
    bool fpm_distribution = true;
    TaxRates taxes{0.05, 0.05, 0.005, 0.1, 0.0005};
    DistributionMatrix taxes_structure = DistributionMatrix::standard();
    double reference_cost_per_capita = 100.0;  ///< per-capita spending that raises QLI by 1

    // Run
    std::vector<std::string> processing_acps;
    int months = 240;

    DistributionRegime regime() const { return {alternative0, fpm_distribution}; }
    int candidate_sample_size() const { return hiring_sample_size > 0 ? hiring_sample_size : size_market; }

    void validate() const {
        auto require = [](bool ok, const char* what) {
            if (!ok) throw Error(std::string("invalid parameter: ") + what);
        };
        auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
        require(alpha > 0.0 && alpha <= 1.0, "ALPHA must be in (0, 1]");
        require(unit(beta), "BETA must be in [0, 1]");
        require(markup >= 0.0, "MARKUP must be >= 0");
        require(unit(sticky_prices), "STICKY_PRICES must be in [0, 1]");
        require(labor_market_frequency >= 1, "LABOR_MARKET must be >= 1");
        require(unit(pct_distance_hiring), "PCT_DISTANCE_HIRING must be in [0, 1]");
        require(size_market >= 1, "SIZE_MARKET must be >= 1");
        require(hiring_sample_size >= 0, "HIRING_SAMPLE_SIZE must be >= 0");
        require(house_vacancy >= 0.0, "HOUSE_VACANCY must be >= 0");
        require(members_per_family > 0.0, "MEMBERS_PER_FAMILY must be > 0");
        require(percentage_actual_pop > 0.0 && percentage_actual_pop <= 1.0, "PERCENTAGE_ACTUAL_POP must be in (0, 1]");
        require(unit(percentage_check_new_location), "PERCENTAGE_CHECK_NEW_LOCATION must be in [0, 1]");
        for (TaxKind k : kAllTaxKinds) require(unit(taxes[k]), "TAXES.* rates must be in [0, 1]");
        require(months >= 0 && months <= 360, "MONTHS must be in [0, 360]");
        require(working_age_min >= 0 && working_age_min <= working_age_max, "working age bounds are inverted");
        require(unit(price_criterion_probability), "PRICE_CRITERION_PROBABILITY must be in [0, 1]");
        require(min_price > 0.0, "MIN_PRICE must be > 0");
        require(low_stock_fraction >= 0.0 && low_stock_fraction <= high_stock_fraction,
                "stock thresholds must satisfy 0 <= low <= high");
        require(reference_cost_per_capita > 0.0, "REFERENCE_COST_PER_CAPITA must be > 0");
        require(unit(initial_unemployment), "INITIAL_UNEMPLOYMENT must be in [0, 1]");
        require(citizens_per_firm > 0.0, "CITIZENS_PER_FIRM must be > 0");
        require(hedonic_base > 0.0, "HEDONIC_BASE must be > 0");
        require(initial_savings_months >= 0.0, "INITIAL_SAVINGS_MONTHS must be >= 0");
        taxes_structure.validate();
    }

    bool operator==(const SimParams&) const = default;
};

}  // namespace policysim
