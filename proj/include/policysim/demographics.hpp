#pragma once

#include <cmath>
#include <vector>

#include "policysim/region.hpp"
#include "policysim/world.hpp"

namespace policysim {

struct DeathRecord {
    int month = 0;
    CitizenId citizen;
    FamilyId family;
    int age = 0;
    Gender gender = Gender::female;
    bool operator==(const DeathRecord&) const = default;
};

/// Citizens age one year in the calendar month of their birthday.
inline void age_step(World& w) {
    const int month_of_year = w.clock % 12;
    for (auto& c : w.citizens)
        if (c.alive && c.birth_month == month_of_year) ++c.age;
}

/// Employed citizens older than the working-age ceiling leave their jobs.
inline std::vector<CitizenId> retire_step(World& w, int working_age_max) {
    std::vector<CitizenId> retired;
    for (auto& c : w.citizens) {
        if (!c.alive || !c.employer || c.age <= working_age_max) continue;
        retired.push_back(c.id);
        separate(w, c.id);
    }
    return retired;
}

/// Annual -> monthly probability under compounding: 1 - (1 - p)^(1/12).
inline double monthly_probability(double annual) {
    if (annual >= 1.0) return 1.0;
    if (annual <= 0.0) return 0.0;
    return 1.0 - std::pow(1.0 - annual, 1.0 / 12.0);
}

namespace detail {

// Houses, cash and savings of a family whose last member died go to a
// uniformly drawn surviving family. Membership only changes through births
// and deaths, so no former co-member can survive in another family.
inline void settle_extinct_family(World& w, Family& extinct, Rng& rng) {
    w.house(extinct.residence).occupied = false;
    extinct.active = false;

    std::vector<FamilyId> heirs;
    for (const auto& f : w.families)
        if (f.active) heirs.push_back(f.id);
    if (heirs.empty()) return;  // nobody left to inherit; the estate stays put

    auto& heir = w.family(heirs[rng.index(heirs.size())]);
    for (HouseId h : extinct.owned_houses) {
        w.house(h).owner = heir.id;
        insert_sorted(heir.owned_houses, h);
    }
    extinct.owned_houses.clear();
    heir.monthly_cash += extinct.monthly_cash;
    heir.savings += extinct.savings;
    extinct.monthly_cash = 0.0;
    extinct.savings = 0.0;
}

}  // namespace detail

/// Each living citizen dies this month with the monthly equivalent of the
/// table's annual probability. The deceased leave their employer and family;
/// extinct families pass their estate on. Returns deaths in id order.
inline std::vector<DeathRecord> mortality_step(World& w, const MortalityTable& table, Rng& rng) {
    std::vector<CitizenId> deceased;
    for (const auto& c : w.citizens) {
        if (!c.alive) continue;
        const double p = monthly_probability(table.annual_probability(c.age, c.gender));
        if (rng.bernoulli(p)) deceased.push_back(c.id);
    }

    std::vector<DeathRecord> records;
    records.reserve(deceased.size());
    for (CitizenId id : deceased) {
        separate(w, id);
        auto& c = w.citizen(id);
        c.alive = false;
        records.push_back({w.clock, id, c.family_id, c.age, c.gender});
        auto& fam = w.family(c.family_id);
        erase_sorted(fam.member_ids, id);
        if (fam.member_ids.empty()) detail::settle_extinct_family(w, fam, rng);
    }
    return records;
}

/// Each living woman gives birth with probability min(1, annual_rate / 12).
/// Newborns join the mother's family, unemployed, with no schooling.
inline std::vector<CitizenId> fertility_step(World& w, const FertilityTable& table, Rng& rng) {
    std::vector<CitizenId> mothers;
    for (const auto& c : w.citizens) {
        if (!c.alive || c.gender != Gender::female) continue;
        const double p = std::min(1.0, table.annual_rate(c.age) / 12.0);
        if (rng.bernoulli(p)) mothers.push_back(c.id);
    }

    std::vector<CitizenId> born;
    born.reserve(mothers.size());
    for (CitizenId mother : mothers) {
        Citizen baby;
        baby.id = CitizenId(w.citizens.size());
        baby.family_id = w.citizen(mother).family_id;
        baby.age = 0;
        baby.qualification = 0;
        baby.gender = rng.bernoulli(0.5) ? Gender::female : Gender::male;
        baby.birth_month = w.clock % 12;
        w.citizens.push_back(baby);
        insert_sorted(w.family(baby.family_id).member_ids, baby.id);
        born.push_back(baby.id);
    }
    return born;
}

}  // namespace policysim
