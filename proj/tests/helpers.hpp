#pragma once

#include <filesystem>
#include <string>

#include "policysim/policysim.hpp"

namespace testing_helpers {

using namespace policysim;

inline std::filesystem::path data_dir() { return POLICYSIM_DATA_DIR; }

inline const RegionData& fixture3() {
    static const RegionData r = load_region_data(data_dir() / "fixture3");
    return r;
}

/// Empty world with `n` municipalities, each a unit square side by side.
inline World bare_world(std::size_t n = 1) {
    World w;
    for (std::size_t i = 0; i < n; ++i) {
        Municipality m;
        m.id = MunicipalityId(i);
        m.code = static_cast<std::int64_t>(i);
        w.municipalities.push_back(m);
    }
    w.ledger = TaxLedger(n);
    return w;
}

/// Adds a family living in a new house at `where`; returns its id.
inline FamilyId add_family(World& w, Location where, MunicipalityId mun = MunicipalityId(0u), double cash = 0.0,
                           double savings = 0.0) {
    House h;
    h.id = HouseId(w.houses.size());
    h.municipality_id = mun;
    h.location = where;
    h.size = 50.0;
    h.quality = 1;
    h.occupied = true;
    Family f;
    f.id = FamilyId(w.families.size());
    f.residence = h.id;
    f.owned_houses = {h.id};
    f.monthly_cash = cash;
    f.savings = savings;
    h.owner = f.id;
    w.houses.push_back(h);
    w.families.push_back(f);
    return f.id;
}

inline CitizenId add_citizen(World& w, FamilyId fam, int age, int qualification, Gender g = Gender::female) {
    Citizen c;
    c.id = CitizenId(w.citizens.size());
    c.family_id = fam;
    c.age = age;
    c.gender = g;
    c.qualification = qualification;
    w.citizens.push_back(c);
    insert_sorted(w.family(fam).member_ids, c.id);
    return c.id;
}

inline FirmId add_firm(World& w, Location where, MunicipalityId mun = MunicipalityId(0u), double cash = 0.0) {
    Firm f;
    f.id = FirmId(w.firms.size());
    f.municipality_id = mun;
    f.location = where;
    f.cash = cash;
    w.firms.push_back(f);
    return f.id;
}

/// Adds a vacant house owned by `owner`.
inline HouseId add_vacant_house(World& w, FamilyId owner, double size, int quality,
                                MunicipalityId mun = MunicipalityId(0u)) {
    House h;
    h.id = HouseId(w.houses.size());
    h.municipality_id = mun;
    h.size = size;
    h.quality = quality;
    h.owner = owner;
    h.occupied = false;
    w.houses.push_back(h);
    insert_sorted(w.family(owner).owned_houses, h.id);
    return h.id;
}

}  // namespace testing_helpers
