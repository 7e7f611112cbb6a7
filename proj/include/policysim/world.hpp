#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "policysim/core.hpp"
#include "policysim/random.hpp"
#include "policysim/region.hpp"
#include "policysim/taxes.hpp"

namespace policysim {

struct Citizen {
    CitizenId id;
    FamilyId family_id;
    int age = 0;
    Gender gender = Gender::female;
    int qualification = 0;  ///< years of schooling, [0, 21]
    std::optional<FirmId> employer;
    double wage = 0.0;      ///< > 0 iff employed
    int birth_month = 0;    ///< calendar month (0..11) of the yearly age increment
    bool alive = true;

    bool employed() const { return employer.has_value(); }
    bool operator==(const Citizen&) const = default;
};

struct Family {
    FamilyId id;
    std::vector<CitizenId> member_ids;  // sorted
    HouseId residence;
    std::vector<HouseId> owned_houses;  // sorted
    double monthly_cash = 0.0;          ///< liquid, used for consumption and property tax
    double savings = 0.0;               ///< illiquid, used only in the real-estate market
    bool active = true;                 ///< false once every member has died

    bool operator==(const Family&) const = default;
};

struct House {
    HouseId id;
    MunicipalityId municipality_id;
    Location location;
    double size = 0.0;  ///< m2
    int quality = 1;    ///< 1..4
    double current_price = 0.0;
    FamilyId owner;
    bool occupied = false;

    bool operator==(const House&) const = default;
};

struct Firm {
    FirmId id;
    MunicipalityId municipality_id;
    Location location;
    double stock = 0.0;
    double price = 1.0;
    double cash = 0.0;
    double wage_offer = 0.0;
    std::vector<CitizenId> employee_ids;  // sorted
    double last_profit = 0.0;
    double revenue_this_month = 0.0;      ///< net of consumption tax
    double wage_bill_this_month = 0.0;
    double last_output = 0.0;

    bool operator==(const Firm&) const = default;
};

struct Municipality {
    MunicipalityId id;
    std::int64_t code = 0;  ///< id from municipalities.csv
    int acp_id = 0;
    double treasury = 0.0;
    double qli = 1.0;
    std::int64_t population = 0;
    double fpm_coefficient = 1.0;

    bool operator==(const Municipality&) const = default;
};

/// Complete simulation state. A World is a plain value: copying it forks the
/// simulation, and two worlds compare equal field for field.
struct World {
    int clock = 0;  ///< months since January 2000
    std::vector<Citizen> citizens;  // indexed by id; dead citizens stay as tombstones
    std::vector<Family> families;   // indexed by id; extinct families stay inactive
    std::vector<House> houses;
    std::vector<Firm> firms;
    std::vector<Municipality> municipalities;
    Rng rng;
    TaxLedger ledger;
    RegionData region;

    Citizen& citizen(CitizenId id) { return citizens.at(id.index()); }
    const Citizen& citizen(CitizenId id) const { return citizens.at(id.index()); }
    Family& family(FamilyId id) { return families.at(id.index()); }
    const Family& family(FamilyId id) const { return families.at(id.index()); }
    House& house(HouseId id) { return houses.at(id.index()); }
    const House& house(HouseId id) const { return houses.at(id.index()); }
    Firm& firm(FirmId id) { return firms.at(id.index()); }
    const Firm& firm(FirmId id) const { return firms.at(id.index()); }
    Municipality& municipality(MunicipalityId id) { return municipalities.at(id.index()); }
    const Municipality& municipality(MunicipalityId id) const { return municipalities.at(id.index()); }

    Location home_of(const Citizen& c) const { return house(family(c.family_id).residence).location; }

    bool operator==(const World&) const = default;
};

inline std::size_t living_population(const World& w) {
    std::size_t n = 0;
    for (const auto& c : w.citizens) n += c.alive ? 1u : 0u;
    return n;
}

inline bool is_working_age(const Citizen& c, int age_min, int age_max) {
    return c.alive && c.age >= age_min && c.age <= age_max;
}

/// Unemployed share of the living working-age population; 0 when nobody is of working age.
inline double unemployment_rate(const World& w, int age_min, int age_max) {
    std::size_t working = 0;
    std::size_t employed = 0;
    for (const auto& c : w.citizens) {
        if (!is_working_age(c, age_min, age_max)) continue;
        ++working;
        if (c.employed()) ++employed;
    }
    return working == 0 ? 0.0 : 1.0 - static_cast<double>(employed) / static_cast<double>(working);
}

/// Family cash + savings + firm cash + treasuries + taxes held in the ledger.
inline double total_money(const World& w) {
    double total = 0.0;
    for (const auto& f : w.families) total += f.monthly_cash + f.savings;
    for (const auto& f : w.firms) total += f.cash;
    for (const auto& m : w.municipalities) total += m.treasury;
    total += w.ledger.total();
    return total;
}

/// Recounts each municipality's residents (members of families living in its houses).
inline void recount_population(World& w) {
    for (auto& m : w.municipalities) m.population = 0;
    for (const auto& f : w.families) {
        if (!f.active) continue;
        w.municipality(w.house(f.residence).municipality_id).population += static_cast<std::int64_t>(f.member_ids.size());
    }
}

inline void hire(World& w, FirmId firm_id, CitizenId citizen_id) {
    auto& c = w.citizen(citizen_id);
    auto& firm = w.firm(firm_id);
    if (c.employer) throw Error("citizen " + std::to_string(citizen_id.value) + " is already employed");
    c.employer = firm_id;
    c.wage = firm.wage_offer;
    insert_sorted(firm.employee_ids, citizen_id);
}

inline void separate(World& w, CitizenId citizen_id) {
    auto& c = w.citizen(citizen_id);
    if (!c.employer) return;
    erase_sorted(w.firm(*c.employer).employee_ids, citizen_id);
    c.employer.reset();
    c.wage = 0.0;
}

/// Every violated structural invariant, one message each; empty when consistent.
inline std::vector<std::string> check_integrity(const World& w) {
    std::vector<std::string> problems;
    auto report = [&](const std::string& what) {
        if (problems.size() < 50) problems.push_back(what);
    };
    const auto n_families = w.families.size();
    const auto n_houses = w.houses.size();
    const auto n_firms = w.firms.size();

    for (std::size_t i = 0; i < w.citizens.size(); ++i) {
        const auto& c = w.citizens[i];
        const std::string who = "citizen " + std::to_string(i);
        if (c.id.index() != i) report(who + ": id mismatch");
        if (!c.alive) {
            if (c.employer) report(who + ": dead but employed");
            continue;
        }
        if (c.age < 0) report(who + ": negative age");
        if (c.qualification < 0 || c.qualification > 21) report(who + ": qualification outside [0, 21]");
        if ((c.wage > 0.0) != c.employer.has_value()) report(who + ": wage > 0 iff employed violated");
        if (c.family_id.index() >= n_families) {
            report(who + ": unknown family");
            continue;
        }
        const auto& fam = w.families[c.family_id.index()];
        if (!fam.active || !contains_sorted(fam.member_ids, c.id)) report(who + ": not a member of its family");
        if (c.employer) {
            if (c.employer->index() >= n_firms) report(who + ": unknown employer");
            else if (!contains_sorted(w.firms[c.employer->index()].employee_ids, c.id))
                report(who + ": missing from employer's employee set");
        }
    }

    std::vector<int> residents(n_houses, 0);
    std::vector<int> owners(n_houses, 0);
    for (std::size_t i = 0; i < n_families; ++i) {
        const auto& f = w.families[i];
        const std::string who = "family " + std::to_string(i);
        if (f.id.index() != i) report(who + ": id mismatch");
        if (!(f.savings >= 0.0)) report(who + ": negative savings");
        if (!(f.monthly_cash >= 0.0)) report(who + ": negative cash");
        for (HouseId h : f.owned_houses) {
            if (h.index() >= n_houses) {
                report(who + ": owns unknown house");
                continue;
            }
            ++owners[h.index()];
            if (w.houses[h.index()].owner != f.id) report(who + ": owns a house recorded under another owner");
        }
        if (!f.active) {
            if (!f.member_ids.empty()) report(who + ": inactive with members");
            continue;
        }
        if (f.member_ids.empty()) report(who + ": active without members");
        for (CitizenId c : f.member_ids)
            if (c.index() >= w.citizens.size() || !w.citizens[c.index()].alive ||
                w.citizens[c.index()].family_id != f.id)
                report(who + ": member " + std::to_string(c.value) + " is dead or belongs elsewhere");
        if (f.residence.index() >= n_houses) {
            report(who + ": unknown residence");
            continue;
        }
        ++residents[f.residence.index()];
        if (!contains_sorted(f.owned_houses, f.residence)) report(who + ": does not own its residence");
    }

    for (std::size_t i = 0; i < n_houses; ++i) {
        const auto& h = w.houses[i];
        const std::string who = "house " + std::to_string(i);
        if (!(h.size > 0.0)) report(who + ": non-positive size");
        if (!(h.current_price > 0.0)) report(who + ": non-positive price");
        if (owners[i] != 1) report(who + ": has " + std::to_string(owners[i]) + " owners");
        if (h.occupied != (residents[i] == 1) || residents[i] > 1)
            report(who + ": occupancy flag disagrees with residents (" + std::to_string(residents[i]) + ")");
        if (h.municipality_id.index() >= w.municipalities.size()) report(who + ": unknown municipality");
    }

    std::vector<int> employers(w.citizens.size(), 0);
    for (std::size_t i = 0; i < n_firms; ++i) {
        const auto& f = w.firms[i];
        const std::string who = "firm " + std::to_string(i);
        if (!(f.stock >= 0.0)) report(who + ": negative stock");
        if (!(f.price > 0.0)) report(who + ": non-positive price");
        if (!(f.cash >= 0.0)) report(who + ": negative cash");
        for (CitizenId c : f.employee_ids) {
            if (c.index() >= w.citizens.size()) {
                report(who + ": unknown employee");
                continue;
            }
            if (++employers[c.index()] > 1) report("citizen " + std::to_string(c.value) + ": in two employee sets");
            if (w.citizens[c.index()].employer != f.id) report(who + ": employee does not list it as employer");
        }
    }

    for (const auto& m : w.municipalities) {
        if (!(m.qli > 0.0)) report("municipality " + std::to_string(m.code) + ": non-positive QLI");
        if (!(m.treasury >= 0.0)) report("municipality " + std::to_string(m.code) + ": negative treasury");
    }
    return problems;
}

/// Human-readable dump of the full state; equal worlds serialize identically.
inline std::string serialize(const World& w) {
    std::ostringstream out;
    out << "clock " << w.clock << '\n';
    for (const auto& c : w.citizens)
        out << "C " << c.id.value << ' ' << c.family_id.value << ' ' << c.age << ' ' << to_string(c.gender) << ' '
            << c.qualification << ' ' << (c.employer ? static_cast<std::int64_t>(c.employer->value) : -1) << ' '
            << csv::format(c.wage) << ' ' << c.birth_month << ' ' << c.alive << '\n';
    for (const auto& f : w.families) {
        out << "F " << f.id.value << ' ' << f.residence.value << ' ' << csv::format(f.monthly_cash) << ' '
            << csv::format(f.savings) << ' ' << f.active << " m";
        for (auto id : f.member_ids) out << ' ' << id.value;
        out << " h";
        for (auto id : f.owned_houses) out << ' ' << id.value;
        out << '\n';
    }
    for (const auto& h : w.houses)
        out << "H " << h.id.value << ' ' << h.municipality_id.value << ' ' << csv::format(h.location.x) << ' '
            << csv::format(h.location.y) << ' ' << csv::format(h.size) << ' ' << h.quality << ' '
            << csv::format(h.current_price) << ' ' << h.owner.value << ' ' << h.occupied << '\n';
    for (const auto& f : w.firms) {
        out << "B " << f.id.value << ' ' << f.municipality_id.value << ' ' << csv::format(f.location.x) << ' '
            << csv::format(f.location.y) << ' ' << csv::format(f.stock) << ' ' << csv::format(f.price) << ' '
            << csv::format(f.cash) << ' ' << csv::format(f.wage_offer) << ' ' << csv::format(f.last_profit) << ' '
            << csv::format(f.last_output) << " e";
        for (auto id : f.employee_ids) out << ' ' << id.value;
        out << '\n';
    }
    for (const auto& m : w.municipalities)
        out << "M " << m.id.value << ' ' << m.code << ' ' << csv::format(m.treasury) << ' ' << csv::format(m.qli)
            << ' ' << m.population << ' ' << csv::format(m.fpm_coefficient) << '\n';
    out << "R " << w.rng.next_preview() << '\n';
    return out.str();
}

}  // namespace policysim
