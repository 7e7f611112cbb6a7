#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "policysim/core.hpp"

namespace policysim {

enum class TaxKind : std::uint8_t { consumption = 0, labor = 1, transaction = 2, firms = 3, property = 4 };

inline constexpr std::size_t kTaxKinds = 5;
inline constexpr std::array<TaxKind, kTaxKinds> kAllTaxKinds = {
    TaxKind::consumption, TaxKind::labor, TaxKind::transaction, TaxKind::firms, TaxKind::property};

inline constexpr std::string_view to_string(TaxKind k) {
    constexpr std::array<std::string_view, kTaxKinds> names = {"consumption", "labor", "transaction", "firms",
                                                               "property"};
    return names[static_cast<std::size_t>(k)];
}

inline TaxKind tax_kind_from_string(std::string_view name) {
    for (TaxKind k : kAllTaxKinds)
        if (to_string(k) == name) return k;
    throw Error("unknown tax kind '" + std::string(name) + "'");
}

/// Per-kind amounts, indexable by TaxKind.
struct TaxAmounts {
    std::array<double, kTaxKinds> values{};

    double& operator[](TaxKind k) { return values[static_cast<std::size_t>(k)]; }
    double operator[](TaxKind k) const { return values[static_cast<std::size_t>(k)]; }

    double total() const {
        double t = 0.0;
        for (double v : values) t += v;
        return t;
    }

    bool operator==(const TaxAmounts&) const = default;
};

/// Taxes collected this month, per (municipality, kind). Also counts writes by
/// schedule step so the step-order contract can be audited.
class TaxLedger {
public:
    TaxLedger() = default;
    explicit TaxLedger(std::size_t municipalities) : amounts_(municipalities) {}

    void credit(MunicipalityId m, TaxKind kind, double amount) {
        if (!(amount >= 0.0)) throw Error("negative tax credit");
        if (m.index() >= amounts_.size()) throw Error("tax credit to unknown municipality");
        amounts_[m.index()][kind] += amount;
        ++writes_by_step_[static_cast<std::size_t>(step_)];
    }

    double amount(MunicipalityId m, TaxKind kind) const { return amounts_.at(m.index())[kind]; }
    const TaxAmounts& amounts(MunicipalityId m) const { return amounts_.at(m.index()); }
    std::size_t municipalities() const { return amounts_.size(); }

    TaxAmounts totals() const {
        TaxAmounts t;
        for (const auto& a : amounts_)
            for (TaxKind k : kAllTaxKinds) t[k] += a[k];
        return t;
    }
    double total() const { return totals().total(); }

    void reset() {
        for (auto& a : amounts_) a = TaxAmounts{};
        ++resets_by_step_[static_cast<std::size_t>(step_)];
    }

    /// Schedule step (1..8) currently executing; 0 outside the monthly loop.
    void set_step(int step) { step_ = step; }
    const std::array<int, 9>& writes_by_step() const { return writes_by_step_; }
    const std::array<int, 9>& resets_by_step() const { return resets_by_step_; }

    bool operator==(const TaxLedger&) const = default;

private:
    std::vector<TaxAmounts> amounts_;
    int step_ = 0;
    std::array<int, 9> writes_by_step_{};
    std::array<int, 9> resets_by_step_{};
};

struct TaxRates {
    double consumption = 0.0;
    double labor = 0.0;
    double transaction = 0.0;
    double firms = 0.0;
    double property = 0.0;

    double& operator[](TaxKind k) {
        switch (k) {
            case TaxKind::consumption: return consumption;
            case TaxKind::labor: return labor;
            case TaxKind::transaction: return transaction;
            case TaxKind::firms: return firms;
            case TaxKind::property: break;
        }
        return property;
    }
    double operator[](TaxKind k) const { return const_cast<TaxRates&>(*this)[k]; }

    bool operator==(const TaxRates&) const = default;
};

/// The two fiscal flags. alternative0 = municipalities fiscally autonomous;
/// fpm_distribution = FPM transfer rule in effect.
struct DistributionRegime {
    bool alternative0 = true;
    bool fpm_distribution = true;

    /// Column-group order of the distribution table:
    /// 0 (Alt0 T, FPM T), 1 (Alt0 F, FPM T), 2 (Alt0 T, FPM F), 3 (Alt0 F, FPM F).
    constexpr std::size_t index() const { return (alternative0 ? 0u : 1u) + (fpm_distribution ? 0u : 2u); }

    static constexpr DistributionRegime from_index(std::size_t i) { return {i % 2 == 0, i < 2}; }

    std::string name() const {
        return std::string("ALT0_") + (alternative0 ? "TRUE" : "FALSE") + "_FPM_" + (fpm_distribution ? "TRUE" : "FALSE");
    }

    bool operator==(const DistributionRegime&) const = default;
};

inline constexpr std::array<DistributionRegime, 4> kAllRegimes = {
    DistributionRegime::from_index(0), DistributionRegime::from_index(1), DistributionRegime::from_index(2),
    DistributionRegime::from_index(3)};

enum class Channel : std::uint8_t { local = 0, equal_pool = 1, fpm_pool = 2 };

inline constexpr std::size_t kChannels = 3;
inline constexpr std::array<Channel, kChannels> kAllChannels = {Channel::local, Channel::equal_pool, Channel::fpm_pool};

inline constexpr std::string_view to_string(Channel c) {
    constexpr std::array<std::string_view, kChannels> names = {"local", "equal_pool", "fpm_pool"};
    return names[static_cast<std::size_t>(c)];
}

/// Fractions of each tax kind routed to each channel, per regime.
class DistributionMatrix {
public:
    using Row = std::array<double, kChannels>;

    /// The default routing for the four regimes.
    static DistributionMatrix standard() {
        DistributionMatrix m;
        constexpr Row local{1.0, 0.0, 0.0};
        constexpr Row equal{0.0, 1.0, 0.0};
        constexpr Row split{0.0, 0.765, 0.235};

        const DistributionRegime autonomous_fpm{true, true};
        m.set(autonomous_fpm, TaxKind::consumption, {0.1875, 0.8125, 0.0});
        m.set(autonomous_fpm, TaxKind::labor, split);
        m.set(autonomous_fpm, TaxKind::transaction, local);
        m.set(autonomous_fpm, TaxKind::firms, split);
        m.set(autonomous_fpm, TaxKind::property, local);

        const DistributionRegime merged_fpm{false, true};
        m.set(merged_fpm, TaxKind::consumption, equal);
        m.set(merged_fpm, TaxKind::labor, split);
        m.set(merged_fpm, TaxKind::transaction, equal);
        m.set(merged_fpm, TaxKind::firms, split);
        m.set(merged_fpm, TaxKind::property, equal);

        for (TaxKind k : kAllTaxKinds) {
            m.set({true, false}, k, local);
            m.set({false, false}, k, equal);
        }
        return m;
    }

    const Row& row(DistributionRegime regime, TaxKind kind) const {
        return rows_[regime.index()][static_cast<std::size_t>(kind)];
    }
    double fraction(DistributionRegime regime, TaxKind kind, Channel channel) const {
        return row(regime, kind)[static_cast<std::size_t>(channel)];
    }

    void set(DistributionRegime regime, TaxKind kind, const Row& row) {
        rows_[regime.index()][static_cast<std::size_t>(kind)] = row;
    }
    void set(DistributionRegime regime, TaxKind kind, Channel channel, double fraction) {
        rows_[regime.index()][static_cast<std::size_t>(kind)][static_cast<std::size_t>(channel)] = fraction;
    }

    /// Throws unless every fraction is in [0, 1] and every row sums to 1 within 1e-12.
    void validate() const {
        for (DistributionRegime regime : kAllRegimes) {
            for (TaxKind kind : kAllTaxKinds) {
                double sum = 0.0;
                for (double f : row(regime, kind)) {
                    if (!(f >= 0.0 && f <= 1.0))
                        throw Error("TAXES_STRUCTURE." + regime.name() + "." + std::string(to_string(kind)) +
                                    ": fraction outside [0, 1]");
                    sum += f;
                }
                if (std::abs(sum - 1.0) > 1e-12)
                    throw Error("TAXES_STRUCTURE." + regime.name() + "." + std::string(to_string(kind)) +
                                ": fractions sum to " + std::to_string(sum) + ", expected 1");
            }
        }
    }

    bool operator==(const DistributionMatrix&) const = default;

private:
    std::array<std::array<Row, kTaxKinds>, 4> rows_{};
};

}  // namespace policysim
