#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "policysim/params.hpp"
#include "policysim/region.hpp"
#include "policysim/taxes.hpp"
#include "policysim/world.hpp"

namespace policysim {

/// What distribute() needs to know about each recipient.
struct Recipient {
    int acp_id = 0;
    std::int64_t population = 0;  ///< simulated residents
    double fpm_coefficient = 1.0;
};

struct Distribution {
    std::vector<double> receipts;  ///< per municipality, same order as the recipients
    /// Amount routed through each channel, per tax kind, before allocation.
    std::array<std::array<double, kChannels>, kTaxKinds> routed{};

    double routed_amount(TaxKind k, Channel c) const {
        return routed[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
    }
    double total() const {
        double t = 0.0;
        for (double r : receipts) t += r;
        return t;
    }
};

/// FPM pool split by coefficient: share_i = pool x c_i / sum(c). The last
/// recipient absorbs rounding so the shares add up to the pool.
inline std::vector<double> fpm_allocate(double pool, std::span<const double> coefficients) {
    for (double c : coefficients)
        if (!(c > 0.0)) throw Error("FPM coefficients must be positive");
    return split_proportional(pool, coefficients);
}

/// Looks each population up in the bracket table, then allocates.
inline std::vector<double> fpm_allocate(double pool, std::span<const std::int64_t> populations, const FpmTable& table) {
    std::vector<double> coefficients;
    coefficients.reserve(populations.size());
    for (auto p : populations) coefficients.push_back(table.coefficient(p));
    return fpm_allocate(pool, coefficients);
}

/// Splits the month's collections among municipalities.
///
/// With alternative0 the municipalities are autonomous: the `local` share stays
/// where it was collected, the `equal_pool` share of the whole ACP is divided
/// equally among its municipalities, and the `fpm_pool` share by FPM
/// coefficient. Without alternative0 the ACP acts as a single fiscal unit: it
/// receives everything, which is then handed back in proportion to population.
/// Channel totals are recorded in both cases. Sum out equals sum in.
inline Distribution distribute(const TaxLedger& ledger, DistributionRegime regime, const DistributionMatrix& matrix,
                               std::span<const Recipient> recipients) {
    matrix.validate();
    if (ledger.municipalities() != recipients.size()) throw Error("ledger and recipients disagree on size");

    Distribution out;
    out.receipts.assign(recipients.size(), 0.0);

    std::map<int, std::vector<std::size_t>> acps;
    for (std::size_t i = 0; i < recipients.size(); ++i) acps[recipients[i].acp_id].push_back(i);

    for (const auto& [acp, members] : acps) {
        double equal_pool = 0.0;
        double fpm_pool = 0.0;
        std::vector<double> local(members.size(), 0.0);
        for (TaxKind kind : kAllTaxKinds) {
            const auto& row = matrix.row(regime, kind);
            for (std::size_t j = 0; j < members.size(); ++j) {
                const double collected = ledger.amount(MunicipalityId(members[j]), kind);
                if (collected == 0.0) continue;
                const double to_equal = collected * row[static_cast<std::size_t>(Channel::equal_pool)];
                const double to_fpm = collected * row[static_cast<std::size_t>(Channel::fpm_pool)];
                const double to_local = collected - to_equal - to_fpm;
                local[j] += to_local;
                equal_pool += to_equal;
                fpm_pool += to_fpm;
                auto& routed = out.routed[static_cast<std::size_t>(kind)];
                routed[static_cast<std::size_t>(Channel::local)] += to_local;
                routed[static_cast<std::size_t>(Channel::equal_pool)] += to_equal;
                routed[static_cast<std::size_t>(Channel::fpm_pool)] += to_fpm;
            }
        }

        if (!regime.alternative0) {
            double merged = equal_pool + fpm_pool;
            for (double l : local) merged += l;
            std::vector<double> weights;
            for (std::size_t i : members) weights.push_back(static_cast<double>(recipients[i].population));
            const auto shares = split_proportional(merged, weights);
            for (std::size_t j = 0; j < members.size(); ++j) out.receipts[members[j]] += shares[j];
            continue;
        }

        for (std::size_t j = 0; j < members.size(); ++j) out.receipts[members[j]] += local[j];
        const std::vector<double> ones(members.size(), 1.0);
        const auto equal_shares = split_proportional(equal_pool, ones);
        std::vector<double> coefficients;
        for (std::size_t i : members) coefficients.push_back(recipients[i].fpm_coefficient);
        const auto fpm_shares = fpm_allocate(fpm_pool, coefficients);
        for (std::size_t j = 0; j < members.size(); ++j) out.receipts[members[j]] += equal_shares[j] + fpm_shares[j];
    }
    return out;
}

/// Spends `funds` from the treasury on quality of life:
/// qli += (funds / population) / reference_cost_per_capita. The money leaves
/// the economy.
inline double invest_qli(Municipality& m, double funds, double reference_cost_per_capita) {
    if (funds < 0.0) throw Error("negative QLI investment");
    if (m.population < 1) throw Error("QLI investment needs a resident population");
    m.qli += (funds / static_cast<double>(m.population)) / reference_cost_per_capita;
    m.treasury -= funds;
    return m.qli;
}

/// Recipients for the current world, with FPM coefficients looked up from the
/// population each municipality stands for (simulated / sampled share).
inline std::vector<Recipient> fiscal_recipients(World& w, const SimParams& params) {
    std::vector<Recipient> recipients;
    for (auto& m : w.municipalities) {
        const auto represented = static_cast<std::int64_t>(
            std::llround(static_cast<double>(m.population) / params.percentage_actual_pop));
        m.fpm_coefficient = w.region.fpm.coefficient(represented);
        recipients.push_back({m.acp_id, m.population, m.fpm_coefficient});
    }
    return recipients;
}

struct FiscalOutcome {
    TaxAmounts collected;
    Distribution distribution;
    double invested = 0.0;  ///< leaves the economy
};

/// Distributes the ledger to treasuries, invests every populated treasury in
/// QLI, and clears the ledger.
inline FiscalOutcome run_fiscal_step(World& w, const SimParams& params) {
    recount_population(w);
    FiscalOutcome out;
    out.collected = w.ledger.totals();
    const auto recipients = fiscal_recipients(w, params);
    out.distribution = distribute(w.ledger, params.regime(), params.taxes_structure, recipients);
    w.ledger.reset();
    for (std::size_t i = 0; i < w.municipalities.size(); ++i) {
        auto& m = w.municipalities[i];
        m.treasury += out.distribution.receipts[i];
        if (m.population < 1 || m.treasury <= 0.0) continue;
        const double funds = m.treasury;
        invest_qli(m, funds, params.reference_cost_per_capita);
        out.invested += funds;
    }
    return out;
}

}  // namespace policysim
