#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "policysim/csv.hpp"
#include "policysim/params.hpp"

namespace policysim {

enum class ParamKind { real, integer, boolean, list };

/// A named SimParams field, addressable from config files and sweep specs.
struct ParamInfo {
    std::string name;
    ParamKind kind = ParamKind::real;
    std::function<double(const SimParams&)> get;
    std::function<void(SimParams&, double)> set;
};

namespace detail {

inline std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline std::optional<double> to_number(std::string_view text) {
    text = csv::trim(text);
    if (text.empty()) return std::nullopt;
    // from_chars rejects a leading '+' and accepts ".5" only with a digit first on some
    // toolchains, so normalise both.
    std::string s(text);
    if (s.front() == '+') s.erase(0, 1);
    if (!s.empty() && s.front() == '.') s.insert(0, "0");
    if (s.size() > 1 && s[0] == '-' && s[1] == '.') s.insert(1, "0");
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<bool> to_bool(std::string_view text) {
    const auto t = lower(csv::trim(text));
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    return std::nullopt;
}

template <class T>
ParamInfo real_param(std::string name, T SimParams::*field) {
    return {std::move(name), ParamKind::real, [field](const SimParams& p) { return static_cast<double>(p.*field); },
            [field](SimParams& p, double v) { p.*field = static_cast<T>(v); }};
}

inline ParamInfo int_param(std::string name, int SimParams::*field) {
    return {std::move(name), ParamKind::integer, [field](const SimParams& p) { return static_cast<double>(p.*field); },
            [field](SimParams& p, double v) { p.*field = static_cast<int>(std::llround(v)); }};
}

inline ParamInfo bool_param(std::string name, bool SimParams::*field) {
    return {std::move(name), ParamKind::boolean, [field](const SimParams& p) { return p.*field ? 1.0 : 0.0; },
            [field](SimParams& p, double v) { p.*field = v != 0.0; }};
}

inline ParamInfo tax_param(TaxKind kind) {
    return {"TAXES." + upper(to_string(kind)), ParamKind::real, [kind](const SimParams& p) { return p.taxes[kind]; },
            [kind](SimParams& p, double v) { p.taxes[kind] = v; }};
}

}  // namespace detail

/// Every numeric or boolean parameter, by its upper-case config name.
inline const std::vector<ParamInfo>& parameter_registry() {
    static const std::vector<ParamInfo> registry = [] {
        using namespace detail;
        std::vector<ParamInfo> r = {
            real_param("ALPHA", &SimParams::alpha),
            real_param("BETA", &SimParams::beta),
            real_param("MARKUP", &SimParams::markup),
            real_param("STICKY_PRICES", &SimParams::sticky_prices),
            int_param("LABOR_MARKET", &SimParams::labor_market_frequency),
            real_param("PCT_DISTANCE_HIRING", &SimParams::pct_distance_hiring),
            int_param("SIZE_MARKET", &SimParams::size_market),
            real_param("HOUSE_VACANCY", &SimParams::house_vacancy),
            real_param("MEMBERS_PER_FAMILY", &SimParams::members_per_family),
            real_param("PERCENTAGE_ACTUAL_POP", &SimParams::percentage_actual_pop),
            real_param("PERCENTAGE_CHECK_NEW_LOCATION", &SimParams::percentage_check_new_location),
            bool_param("WAGE_IGNORE_UNEMPLOYMENT", &SimParams::wage_ignore_unemployment),
            bool_param("ALTERNATIVE0", &SimParams::alternative0),
            bool_param("FPM_DISTRIBUTION", &SimParams::fpm_distribution),
            real_param("MIN_PRICE", &SimParams::min_price),
            real_param("LOW_STOCK_FRACTION", &SimParams::low_stock_fraction),
            real_param("HIGH_STOCK_FRACTION", &SimParams::high_stock_fraction),
            real_param("CITIZENS_PER_FIRM", &SimParams::citizens_per_firm),
            real_param("PRICE_CRITERION_PROBABILITY", &SimParams::price_criterion_probability),
            int_param("HIRING_SAMPLE_SIZE", &SimParams::hiring_sample_size),
            int_param("WORKING_AGE_MIN", &SimParams::working_age_min),
            int_param("WORKING_AGE_MAX", &SimParams::working_age_max),
            real_param("INITIAL_UNEMPLOYMENT", &SimParams::initial_unemployment),
            real_param("HEDONIC_BASE", &SimParams::hedonic_base),
            real_param("INITIAL_SAVINGS_MONTHS", &SimParams::initial_savings_months),
            real_param("REFERENCE_COST_PER_CAPITA", &SimParams::reference_cost_per_capita),
            int_param("MONTHS", &SimParams::months),
        };
        for (TaxKind k : kAllTaxKinds) r.push_back(tax_param(k));
        return r;
    }();
    return registry;
}

inline const ParamInfo* find_parameter(std::string_view name) {
    const auto key = detail::upper(csv::trim(name));
    for (const auto& p : parameter_registry())
        if (p.name == key) return &p;
    return nullptr;
}

/// Contents of a config file: parameters plus the optional master seed.
struct Config {
    SimParams params;
    std::optional<std::uint64_t> seed;
};

namespace detail {

inline DistributionRegime regime_from_name(std::string_view name) {
    const auto key = upper(name);
    for (auto r : kAllRegimes)
        if (r.name() == key) return r;
    throw Error("unknown regime '" + std::string(name) + "' (expected e.g. ALT0_TRUE_FPM_TRUE)");
}

inline Channel channel_from_name(std::string_view name) {
    const auto key = lower(name);
    for (auto c : kAllChannels)
        if (to_string(c) == key) return c;
    throw Error("unknown channel '" + std::string(name) + "' (expected local, equal_pool or fpm_pool)");
}

// TAXES_STRUCTURE.<REGIME>.<KIND>.<CHANNEL> = fraction
inline void set_structure(SimParams& p, std::string_view key, double value) {
    std::vector<std::string> parts = csv::split(key, '.');
    if (parts.size() != 4) throw Error("expected TAXES_STRUCTURE.<REGIME>.<KIND>.<CHANNEL>");
    p.taxes_structure.set(regime_from_name(parts[1]), tax_kind_from_string(lower(parts[2])), channel_from_name(parts[3]),
                          value);
}

}  // namespace detail

/// Applies one `KEY = value` assignment.
inline void apply_setting(Config& config, std::string_view key_text, std::string_view value_text) {
    const auto key = detail::upper(csv::trim(key_text));
    const auto value = csv::trim(value_text);
    if (key == "SEED") {
        std::uint64_t s = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
        if (ec != std::errc() || ptr != value.data() + value.size()) throw Error("SEED must be a non-negative integer");
        config.seed = s;
        return;
    }
    if (key == "PROCESSING_ACPS") {
        config.params.processing_acps.clear();
        for (const auto& item : csv::split(value, ','))
            if (!item.empty()) config.params.processing_acps.push_back(item);
        return;
    }
    if (key.rfind("TAXES_STRUCTURE.", 0) == 0) {
        const auto v = detail::to_number(value);
        if (!v) throw Error(key + ": expected a number");
        detail::set_structure(config.params, key, *v);
        return;
    }
    const ParamInfo* info = find_parameter(key);
    if (!info) throw Error("unknown parameter '" + key + "'");
    if (info->kind == ParamKind::boolean) {
        const auto b = detail::to_bool(value);
        if (!b) throw Error(key + ": expected true or false");
        info->set(config.params, *b ? 1.0 : 0.0);
        return;
    }
    const auto v = detail::to_number(value);
    if (!v) throw Error(key + ": expected a number, got '" + std::string(value) + "'");
    if (info->kind == ParamKind::integer && *v != std::floor(*v)) throw Error(key + ": expected an integer");
    info->set(config.params, *v);
}

/// Parses flat `KEY = value` text. '#' starts a comment. Errors name the line.
inline Config parse_config(std::string_view text, const std::string& source = "config", Config base = {}) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto body = csv::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) throw DataError(source, line_no, "expected KEY = value");
        try {
            apply_setting(base, body.substr(0, eq), body.substr(eq + 1));
        } catch (const DataError&) {
            throw;
        } catch (const Error& e) {
            throw DataError(source, line_no, e.what());
        }
    }
    try {
        base.params.validate();
    } catch (const Error& e) {
        throw DataError(source, 0, e.what());
    }
    return base;
}

inline Config load_config(const std::filesystem::path& path, Config base = {}) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string(), std::move(base));
}

/// Writes every registry parameter (and the distribution matrix) as config text.
inline std::string format_config(const SimParams& p) {
    std::ostringstream out;
    for (const auto& info : parameter_registry()) {
        out << info.name << " = ";
        if (info.kind == ParamKind::boolean) out << (info.get(p) != 0.0 ? "true" : "false");
        else out << csv::format(info.get(p));
        out << '\n';
    }
    out << "PROCESSING_ACPS = ";
    for (std::size_t i = 0; i < p.processing_acps.size(); ++i) out << (i ? "," : "") << p.processing_acps[i];
    out << '\n';
    for (auto r : kAllRegimes)
        for (TaxKind k : kAllTaxKinds)
            for (Channel c : kAllChannels)
                out << "TAXES_STRUCTURE." << r.name() << '.' << detail::upper(to_string(k)) << '.' << to_string(c) << " = "
                    << csv::format(p.taxes_structure.fraction(r, k, c)) << '\n';
    return out.str();
}

struct SweepSpec {
    enum class Kind { boolean, range };
    std::string parameter;
    Kind kind = Kind::range;
    double first = 0.0;
    double last = 0.0;
    int count = 2;

    /// The grid: {true, false} for booleans, else `count` evenly spaced values
    /// including both ends.
    std::vector<double> values() const {
        if (kind == Kind::boolean) return {1.0, 0.0};
        std::vector<double> v;
        for (int i = 0; i < count; ++i)
            v.push_back(i == count - 1 ? last : first + (last - first) * static_cast<double>(i) / (count - 1));
        return v;
    }
};

/// "NAME" for a boolean sweep, "NAME:first:last:count" for a numeric one.
inline SweepSpec parse_sweep_spec(std::string_view text) {
    const auto parts = csv::split(text, ':');
    const ParamInfo* info = find_parameter(parts.front());
    if (!info) throw Error("unknown parameter '" + parts.front() + "' in sweep spec");
    SweepSpec spec;
    spec.parameter = info->name;
    if (parts.size() == 1) {
        if (info->kind != ParamKind::boolean)
            throw Error(info->name + " is numeric; use " + info->name + ":first:last:count");
        spec.kind = SweepSpec::Kind::boolean;
        return spec;
    }
    if (info->kind == ParamKind::boolean) throw Error(info->name + " is boolean; give the bare name");
    if (parts.size() != 4) throw Error("sweep spec must be NAME:first:last:count");
    const auto first = detail::to_number(parts[1]);
    const auto last = detail::to_number(parts[2]);
    if (!first || !last) throw Error("sweep bounds must be numbers in '" + std::string(text) + "'");
    int count = 0;
    const auto c = csv::trim(parts[3]);
    auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), count);
    if (ec != std::errc() || ptr != c.data() + c.size()) throw Error("sweep count must be an integer");
    if (count < 2) throw Error("sweep count must be at least 2");
    if (*first > *last) throw Error("sweep first value exceeds last");
    spec.kind = SweepSpec::Kind::range;
    spec.first = *first;
    spec.last = *last;
    spec.count = count;
    return spec;
}

}  // namespace policysim
