#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "policysim/params.hpp"
#include "policysim/real_estate.hpp"
#include "policysim/region.hpp"
#include "policysim/world.hpp"

namespace policysim {

inline constexpr double kHouseSizeMin = 40.0;
inline constexpr double kHouseSizeMax = 160.0;
inline constexpr int kAdultAge = 18;

namespace detail {

struct AgeGenderSampler {
    std::vector<double> cumulative;
    std::vector<std::pair<int, Gender>> outcomes;

    explicit AgeGenderSampler(const RegionData& region) {
        double acc = 0.0;
        for (const auto& r : region.age_gender) {
            for (Gender g : {Gender::female, Gender::male}) {
                const double p = g == Gender::female ? r.p_female : r.p_male;
                if (p <= 0.0) continue;
                acc += p;
                cumulative.push_back(acc);
                outcomes.emplace_back(r.age, g);
            }
        }
    }

    std::pair<int, Gender> draw(Rng& rng) const {
        const double u = rng.uniform() * cumulative.back();
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        return outcomes[static_cast<std::size_t>(it - cumulative.begin())];
    }
};

inline int draw_qualification(const RegionData& region, int age, Rng& rng) {
    const auto* band = region.band_for(age);
    if (!band) throw Error("no qualification band covers age " + std::to_string(age));
    const double u = rng.uniform();
    double acc = 0.0;
    for (const auto& [years, p] : band->years) {
        acc += p;
        if (u < acc) return years;
    }
    return band->years.back().first;
}

inline Location draw_location(const BoundingBox& box, Rng& rng) {
    return {rng.uniform(box.xmin, box.xmax), rng.uniform(box.ymin, box.ymax)};
}

}  // namespace detail

/// Mean monthly output of a working-age citizen at unit price; the wage level
/// families and firms are endowed with at month 0.
inline double average_productivity_wage(const World& w, const SimParams& params) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& c : w.citizens) {
        if (!is_working_age(c, params.working_age_min, params.working_age_max)) continue;
        sum += std::pow(static_cast<double>(c.qualification), params.alpha);
        ++n;
    }
    return n == 0 ? 1.0 : std::max(params.min_price, sum / static_cast<double>(n));
}

/// Builds the month-0 world. Equal (region, params, seed) give equal worlds.
inline World generate_world(const RegionData& region, const SimParams& params, std::uint64_t seed) {
    params.validate();
    if (region.municipalities.empty()) throw Error("region has no municipalities");
    for (const auto& m : region.municipalities)
        if (m.target_population <= 0)
            throw Error("municipality " + std::to_string(m.id) + " has zero population");

    World w;
    w.rng = Rng(seed);
    w.region = region;
    Rng& rng = w.rng;
    const std::size_t n_mun = region.municipalities.size();

    std::vector<double> targets;
    double represented = 0.0;
    for (const auto& m : region.municipalities) {
        targets.push_back(static_cast<double>(m.target_population));
        represented += static_cast<double>(m.target_population) * params.percentage_actual_pop;
    }
    const auto n_citizens = static_cast<std::int64_t>(std::llround(represented));
    const auto citizens_per_mun = apportion(n_citizens, targets);

    std::int64_t n_families = 0;
    if (n_citizens > 0)
        n_families = std::clamp<std::int64_t>(
            std::llround(static_cast<double>(n_citizens) / params.members_per_family), 1, n_citizens);
    std::vector<double> citizen_weights(citizens_per_mun.begin(), citizens_per_mun.end());
    auto families_per_mun = apportion(n_families, citizen_weights);
    for (std::size_t i = 0; i < n_mun; ++i)
        families_per_mun[i] = std::clamp<std::int64_t>(families_per_mun[i], citizens_per_mun[i] > 0 ? 1 : 0,
                                                      citizens_per_mun[i]);
    n_families = 0;
    for (auto f : families_per_mun) n_families += f;

    const auto n_houses = static_cast<std::int64_t>(
        std::ceil(static_cast<double>(n_families) * (1.0 + params.house_vacancy) - 1e-9));
    std::vector<double> family_weights(families_per_mun.begin(), families_per_mun.end());
    const auto surplus_per_mun = apportion(std::max<std::int64_t>(0, n_houses - n_families), family_weights);

    for (std::size_t mi = 0; mi < n_mun; ++mi) {
        Municipality m;
        m.id = MunicipalityId(mi);
        m.code = region.municipalities[mi].id;
        w.municipalities.push_back(m);
    }
    w.ledger = TaxLedger(n_mun);

    const detail::AgeGenderSampler sampler(region);

    // Citizens and families, municipality by municipality.
    for (std::size_t mi = 0; mi < n_mun; ++mi) {
        const std::size_t first_citizen = w.citizens.size();
        for (std::int64_t k = 0; k < citizens_per_mun[mi]; ++k) {
            Citizen c;
            c.id = CitizenId(w.citizens.size());
            const auto [age, gender] = sampler.draw(rng);
            c.age = age;
            c.gender = gender;
            c.qualification = detail::draw_qualification(region, age, rng);
            c.birth_month = static_cast<int>(rng.index(12));
            w.citizens.push_back(c);
        }
        const std::size_t first_family = w.families.size();
        for (std::int64_t k = 0; k < families_per_mun[mi]; ++k) {
            Family f;
            f.id = FamilyId(w.families.size());
            w.families.push_back(f);
        }
        if (families_per_mun[mi] == 0) continue;

        // One head per family, adults first (oldest fallback), the rest at random.
        std::vector<std::size_t> order;
        for (std::size_t ci = first_citizen; ci < w.citizens.size(); ++ci) order.push_back(ci);
        rng.shuffle(order);
        std::stable_partition(order.begin(), order.end(),
                              [&](std::size_t ci) { return w.citizens[ci].age >= kAdultAge; });
        const auto n_fam = static_cast<std::size_t>(families_per_mun[mi]);
        for (std::size_t k = 0; k < order.size(); ++k) {
            const std::size_t fi = k < n_fam ? first_family + k : first_family + rng.index(n_fam);
            auto& c = w.citizens[order[k]];
            c.family_id = FamilyId(fi);
            insert_sorted(w.families[fi].member_ids, c.id);
        }
    }

    // Houses: one residence per family, surplus houses after them.
    std::size_t family_cursor = 0;
    std::vector<HouseId> surplus;
    for (std::size_t mi = 0; mi < n_mun; ++mi) {
        const auto& box = region.municipalities[mi].bbox;
        const auto n_here = families_per_mun[mi] + surplus_per_mun[mi];
        for (std::int64_t k = 0; k < n_here; ++k) {
            House h;
            h.id = HouseId(w.houses.size());
            h.municipality_id = MunicipalityId(mi);
            h.location = detail::draw_location(box, rng);
            h.size = std::round(rng.uniform(kHouseSizeMin, kHouseSizeMax));
            h.quality = 1 + static_cast<int>(rng.index(4));
            hedonic_offer_price(h, 1.0, params.hedonic_base);
            if (k < families_per_mun[mi]) {
                auto& fam = w.families[family_cursor++];
                h.owner = fam.id;
                h.occupied = true;
                fam.residence = h.id;
                insert_sorted(fam.owned_houses, h.id);
            } else {
                surplus.push_back(h.id);
            }
            w.houses.push_back(h);
        }
    }
    for (HouseId id : surplus) {
        auto& h = w.house(id);
        auto& fam = w.families[rng.index(w.families.size())];
        h.owner = fam.id;
        insert_sorted(fam.owned_houses, id);
    }

    // Firms proportional to population, at least one per municipality.
    const auto n_firms_target = static_cast<std::int64_t>(
        std::llround(static_cast<double>(n_citizens) / params.citizens_per_firm));
    auto firms_per_mun = apportion(n_firms_target, citizen_weights);
    for (auto& f : firms_per_mun) f = std::max<std::int64_t>(f, 1);

    const double wage = average_productivity_wage(w, params);
    std::size_t working_age = 0;
    for (const auto& c : w.citizens)
        working_age += is_working_age(c, params.working_age_min, params.working_age_max) ? 1u : 0u;
    std::int64_t total_firms = 0;
    for (auto f : firms_per_mun) total_firms += f;
    const double expected_employees =
        static_cast<double>(working_age) * (1.0 - params.initial_unemployment) / static_cast<double>(total_firms);

    for (std::size_t mi = 0; mi < n_mun; ++mi) {
        for (std::int64_t k = 0; k < firms_per_mun[mi]; ++k) {
            Firm f;
            f.id = FirmId(w.firms.size());
            f.municipality_id = MunicipalityId(mi);
            f.location = detail::draw_location(region.municipalities[mi].bbox, rng);
            f.price = 1.0;
            f.stock = 0.0;
            f.wage_offer = wage;
            f.cash = wage * std::ceil(expected_employees);
            w.firms.push_back(f);
        }
    }

    for (auto& fam : w.families) {
        int adults = 0;
        for (CitizenId id : fam.member_ids) adults += w.citizen(id).age >= kAdultAge ? 1 : 0;
        fam.monthly_cash = wage * adults;
        fam.savings = wage * adults * params.initial_savings_months;
    }

    recount_population(w);
    for (auto& m : w.municipalities)
        m.fpm_coefficient = region.fpm.coefficient(
            static_cast<std::int64_t>(std::llround(static_cast<double>(m.population) / params.percentage_actual_pop)));
    return w;
}

}  // namespace policysim
