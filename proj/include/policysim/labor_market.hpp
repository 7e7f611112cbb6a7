#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "policysim/firm_decisions.hpp"
#include "policysim/params.hpp"
#include "policysim/world.hpp"

namespace policysim {

struct Vacancy {
    FirmId firm;
    double wage_offer = 0.0;
    bool operator==(const Vacancy&) const = default;
};

struct LaborPool {
    std::vector<CitizenId> candidates;  ///< unemployed, of working age, ascending id
    std::vector<Vacancy> vacancies;     ///< wage descending, ties by firm id
};

struct Hire {
    FirmId firm;
    CitizenId citizen;
    bool operator==(const Hire&) const = default;
};

inline void sort_vacancies(std::vector<Vacancy>& vacancies) {
    std::stable_sort(vacancies.begin(), vacancies.end(), [](const Vacancy& a, const Vacancy& b) {
        if (a.wage_offer != b.wage_offer) return a.wage_offer > b.wage_offer;
        return a.firm < b.firm;
    });
}

/// Candidates are every unemployed living citizen within the working-age
/// bounds; one vacancy per hiring firm at its current wage offer.
inline LaborPool build_pool(const World& w, std::span<const FirmId> hiring_firms, int working_age_min,
                            int working_age_max) {
    LaborPool pool;
    for (const auto& c : w.citizens)
        if (is_working_age(c, working_age_min, working_age_max) && !c.employed()) pool.candidates.push_back(c.id);
    for (FirmId f : hiring_firms) pool.vacancies.push_back({f, w.firm(f).wage_offer});
    sort_vacancies(pool.vacancies);
    return pool;
}

enum class HiringCriterion { qualification, distance };

/// Best of `sample` for the firm: closest home or highest qualification,
/// ties to the lower citizen id.
inline CitizenId pick_candidate(const World& w, std::span<const CitizenId> sample, HiringCriterion criterion,
                                Location firm_location) {
    CitizenId best = sample.front();
    auto key = [&](CitizenId id) {
        const auto& c = w.citizen(id);
        return criterion == HiringCriterion::distance ? distance(w.home_of(c), firm_location)
                                                      : -static_cast<double>(c.qualification);
    };
    double best_key = key(best);
    for (CitizenId id : sample.subspan(1)) {
        const double k = key(id);
        if (k < best_key || (k == best_key && id < best)) {
            best = id;
            best_key = k;
        }
    }
    return best;
}

/// Vacancies are filled in order (highest wage first). Each draws a uniform
/// sample of the remaining candidates and, with probability
/// `pct_distance_hiring`, takes the closest one, otherwise the best qualified.
/// Pure: the world is not modified; see apply_hires.
inline std::vector<Hire> match(const World& w, const LaborPool& pool, double pct_distance_hiring, int sample_size,
                               Rng& rng) {
    std::vector<CitizenId> remaining = pool.candidates;
    std::vector<Hire> hires;
    for (const Vacancy& v : pool.vacancies) {
        if (remaining.empty()) break;
        const auto picks = rng.sample(remaining.size(), static_cast<std::size_t>(std::max(sample_size, 1)));
        std::vector<CitizenId> sample;
        sample.reserve(picks.size());
        for (std::size_t i : picks) sample.push_back(remaining[i]);
        const auto criterion =
            rng.bernoulli(pct_distance_hiring) ? HiringCriterion::distance : HiringCriterion::qualification;
        const CitizenId chosen = pick_candidate(w, sample, criterion, w.firm(v.firm).location);
        hires.push_back({v.firm, chosen});
        remaining.erase(std::find(remaining.begin(), remaining.end(), chosen));
    }
    return hires;
}

inline void apply_hires(World& w, std::span<const Hire> hires) {
    for (const Hire& h : hires) hire(w, h.firm, h.citizen);
}

/// Every firm pays every employee its wage offer. A firm that cannot cover the
/// bill lets its least qualified employees go until it can. Labor tax is
/// withheld and credited to the firm's municipality. Returns the tax total.
inline double pay_wages(World& w, double labor_tax_rate) {
    double collected = 0.0;
    for (auto& firm : w.firms) {
        while (!firm.employee_ids.empty() &&
               firm.cash < firm.wage_offer * static_cast<double>(firm.employee_ids.size())) {
            separate(w, *least_qualified(firm, w.citizens));
        }
        double bill = 0.0;
        for (CitizenId id : firm.employee_ids) {
            auto& c = w.citizen(id);
            c.wage = firm.wage_offer;
            const double net = c.wage * (1.0 - labor_tax_rate);
            const double tax = c.wage - net;
            w.family(c.family_id).monthly_cash += net;
            w.ledger.credit(firm.municipality_id, TaxKind::labor, tax);
            bill += c.wage;
            collected += tax;
        }
        firm.cash = std::max(0.0, firm.cash - bill);
        firm.wage_bill_this_month += bill;
    }
    return collected;
}

/// Firm tax on last month's positive profit, paid from cash (clamped).
inline double collect_firm_tax(Firm& firm, double firm_tax_rate, TaxLedger& ledger) {
    const double tax = std::min(firm.cash, std::max(0.0, firm.last_profit) * firm_tax_rate);
    if (tax <= 0.0) return 0.0;
    firm.cash -= tax;
    ledger.credit(firm.municipality_id, TaxKind::firms, tax);
    return tax;
}

/// Pre-simulation rounds of hiring until unemployment is at or below the
/// target (at most 100 rounds). Each round opens exactly the number of
/// vacancies still needed, spread across firms by their share of the
/// expected workforce.
inline int calibrate_initial_unemployment(World& w, double target_rate, const SimParams& params, Rng& rng) {
    if (w.firms.empty()) return 0;
    // Firm weight: residents of its municipality per firm located there.
    std::vector<double> firms_in(w.municipalities.size(), 0.0);
    for (const auto& f : w.firms) firms_in[f.municipality_id.index()] += 1.0;
    std::vector<double> weights;
    for (const auto& f : w.firms) {
        const auto& m = w.municipality(f.municipality_id);
        weights.push_back(std::max(1.0, static_cast<double>(m.population)) / firms_in[m.id.index()]);
    }

    int rounds = 0;
    for (; rounds < 100; ++rounds) {
        const double u = unemployment_rate(w, params.working_age_min, params.working_age_max);
        if (u <= target_rate) break;
        std::size_t working = 0;
        std::size_t employed = 0;
        for (const auto& c : w.citizens) {
            if (!is_working_age(c, params.working_age_min, params.working_age_max)) continue;
            ++working;
            employed += c.employed() ? 1u : 0u;
        }
        const auto wanted = static_cast<std::int64_t>(
            std::ceil(static_cast<double>(working) * (1.0 - target_rate) - 1e-9));
        const std::int64_t needed = wanted - static_cast<std::int64_t>(employed);
        if (needed <= 0) break;

        const auto per_firm = apportion(needed, weights);
        LaborPool pool = build_pool(w, {}, params.working_age_min, params.working_age_max);
        if (pool.candidates.empty()) break;
        for (std::size_t i = 0; i < w.firms.size(); ++i)
            for (std::int64_t k = 0; k < per_firm[i]; ++k) pool.vacancies.push_back({w.firms[i].id, w.firms[i].wage_offer});
        sort_vacancies(pool.vacancies);
        const auto hires = match(w, pool, params.pct_distance_hiring, params.candidate_sample_size(), rng);
        if (hires.empty()) break;
        apply_hires(w, hires);
    }
    return rounds;
}

}  // namespace policysim
