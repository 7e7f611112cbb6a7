#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "policysim/core.hpp"
#include "policysim/csv.hpp"
#include "policysim/random.hpp"

namespace policysim {

enum class Gender : std::uint8_t { female = 0, male = 1 };

inline const char* to_string(Gender g) { return g == Gender::female ? "female" : "male"; }

struct MunicipalitySpec {
    std::int64_t id = 0;
    std::int64_t target_population = 0;
    BoundingBox bbox;
    bool operator==(const MunicipalitySpec&) const = default;
};

struct AgeGenderRow {
    int age = 0;
    double p_female = 0.0;
    double p_male = 0.0;
    bool operator==(const AgeGenderRow&) const = default;
};

struct QualificationBand {
    int age_min = 0;
    int age_max = 0;
    std::vector<std::pair<int, double>> years;  // (years of schooling, probability)
    bool operator==(const QualificationBand&) const = default;
};

/// Annual death probability by (age, gender); every age from 0 to the
/// terminal age is present and the terminal age has probability 1.
class MortalityTable {
public:
    MortalityTable() = default;
    explicit MortalityTable(std::array<std::vector<double>, 2> by_gender) : by_gender_(std::move(by_gender)) {}

    /// Uniform table (same probability at every age up to `terminal_age`, which is 1).
    static MortalityTable flat(double annual_probability, int terminal_age) {
        std::vector<double> p(static_cast<std::size_t>(terminal_age) + 1, annual_probability);
        p.back() = 1.0;
        return MortalityTable({p, p});
    }

    double annual_probability(int age, Gender g) const {
        const auto& column = by_gender_[static_cast<std::size_t>(g)];
        if (age < 0 || static_cast<std::size_t>(age) >= column.size())
            throw Error("mortality table has no entry for age " + std::to_string(age) + " (" + to_string(g) + ")");
        return column[static_cast<std::size_t>(age)];
    }

    int terminal_age(Gender g) const {
        return static_cast<int>(by_gender_[static_cast<std::size_t>(g)].size()) - 1;
    }

    const std::vector<double>& column(Gender g) const { return by_gender_[static_cast<std::size_t>(g)]; }

    bool operator==(const MortalityTable&) const = default;

private:
    std::array<std::vector<double>, 2> by_gender_;
};

/// Annual births per woman by age. Ages outside the table have rate 0.
class FertilityTable {
public:
    FertilityTable() = default;
    explicit FertilityTable(std::map<int, double> rates) : rates_(std::move(rates)) {}

    static FertilityTable flat(double annual_rate, int age_min, int age_max) {
        std::map<int, double> r;
        for (int a = age_min; a <= age_max; ++a) r[a] = annual_rate;
        return FertilityTable(std::move(r));
    }

    double annual_rate(int age) const {
        auto it = rates_.find(age);
        return it == rates_.end() ? 0.0 : it->second;
    }

    const std::map<int, double>& rates() const { return rates_; }

    bool operator==(const FertilityTable&) const = default;

private:
    std::map<int, double> rates_;
};

struct FpmBracket {
    std::int64_t population_min = 0;
    std::int64_t population_max = 0;
    double coefficient = 1.0;
    bool operator==(const FpmBracket&) const = default;
};

/// Population bracket -> transfer coefficient.
class FpmTable {
public:
    FpmTable() = default;
    explicit FpmTable(std::vector<FpmBracket> brackets) : brackets_(std::move(brackets)) {}

    double coefficient(std::int64_t population) const {
        for (const auto& b : brackets_)
            if (population >= b.population_min && population <= b.population_max) return b.coefficient;
        throw Error("population " + std::to_string(population) + " is outside every FPM bracket");
    }

    const std::vector<FpmBracket>& brackets() const { return brackets_; }

    bool operator==(const FpmTable&) const = default;

private:
    std::vector<FpmBracket> brackets_;
};

struct RegionData {
    std::string name;
    std::vector<MunicipalitySpec> municipalities;
    std::vector<AgeGenderRow> age_gender;
    std::vector<QualificationBand> qualification;
    MortalityTable mortality;
    FertilityTable fertility;
    FpmTable fpm;

    std::int64_t total_target_population() const {
        std::int64_t total = 0;
        for (const auto& m : municipalities) total += m.target_population;
        return total;
    }

    const QualificationBand* band_for(int age) const {
        for (const auto& b : qualification)
            if (age >= b.age_min && age <= b.age_max) return &b;
        return nullptr;
    }

    bool operator==(const RegionData&) const = default;
};

namespace detail {

constexpr double kProbabilityTolerance = 1e-9;

inline std::filesystem::path region_file(const std::filesystem::path& dir, const char* name) {
    const auto path = dir / name;
    if (!std::filesystem::exists(path)) throw DataError(path, 0, "missing file");
    return path;
}

inline void check_probability(const csv::Table& t, const csv::Row& row, std::size_t col, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        t.fail(row, "column '" + t.header[col] + "': probability " + csv::format(p) + " outside [0, 1]");
}

inline std::pair<int, int> parse_age_band(const csv::Table& t, const csv::Row& row, std::size_t col) {
    const std::string& text = row.cells[col];
    const auto dash = text.find('-');
    auto to_int = [&](std::string_view s) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 0)
            t.fail(row, "malformed age band '" + text + "'");
        return v;
    };
    if (dash == std::string::npos) {
        const int a = to_int(text);
        return {a, a};
    }
    const int lo = to_int(std::string_view(text).substr(0, dash));
    const int hi = to_int(std::string_view(text).substr(dash + 1));
    if (lo > hi) t.fail(row, "age band '" + text + "' has min > max");
    return {lo, hi};
}

}  // namespace detail

/// Loads and validates one region directory (see README for the schema).
inline RegionData load_region_data(const std::filesystem::path& dir) {
    using detail::check_probability;
    using detail::kProbabilityTolerance;
    if (!std::filesystem::is_directory(dir)) throw DataError(dir, 0, "not a directory");

    RegionData region;
    region.name = std::filesystem::absolute(dir).lexically_normal().filename().string();
    if (region.name.empty()) region.name = std::filesystem::absolute(dir).parent_path().filename().string();

    {
        const auto t = csv::read(detail::region_file(dir, "municipalities.csv"),
                                 {"id", "target_population", "xmin", "ymin", "xmax", "ymax"});
        if (t.rows.empty()) throw DataError(t.path, 1, "no municipalities");
        for (const auto& row : t.rows) {
            MunicipalitySpec m;
            m.id = t.integer(row, 0);
            m.target_population = t.integer(row, 1);
            m.bbox = {t.number(row, 2), t.number(row, 3), t.number(row, 4), t.number(row, 5)};
            if (m.id < 0) t.fail(row, "negative municipality id");
            if (m.target_population < 0) t.fail(row, "negative target_population");
            if (m.bbox.xmin > m.bbox.xmax || m.bbox.ymin > m.bbox.ymax) t.fail(row, "empty bounding box");
            for (const auto& other : region.municipalities)
                if (other.id == m.id) t.fail(row, "duplicate municipality id " + std::to_string(m.id));
            region.municipalities.push_back(m);
        }
    }

    {
        const auto t = csv::read(detail::region_file(dir, "age_gender.csv"), {"age", "p_female", "p_male"});
        if (t.rows.empty()) throw DataError(t.path, 1, "empty age distribution");
        double sum = 0.0;
        for (const auto& row : t.rows) {
            AgeGenderRow r{static_cast<int>(t.integer(row, 0)), t.number(row, 1), t.number(row, 2)};
            if (r.age < 0) t.fail(row, "negative age");
            check_probability(t, row, 1, r.p_female);
            check_probability(t, row, 2, r.p_male);
            for (const auto& other : region.age_gender)
                if (other.age == r.age) t.fail(row, "duplicate age " + std::to_string(r.age));
            sum += r.p_female + r.p_male;
            region.age_gender.push_back(r);
        }
        if (std::abs(sum - 1.0) > kProbabilityTolerance)
            t.fail(t.rows.back(), "probabilities sum to " + csv::format(sum) + ", expected 1");
    }

    {
        const auto t = csv::read(detail::region_file(dir, "qualification.csv"),
                                 {"age_band", "years_schooling", "probability"});
        std::vector<const csv::Row*> first_row;
        for (const auto& row : t.rows) {
            const auto [lo, hi] = detail::parse_age_band(t, row, 0);
            const auto years = t.integer(row, 1);
            const double p = t.number(row, 2);
            if (years < 0 || years > 21) t.fail(row, "years_schooling outside [0, 21]");
            check_probability(t, row, 2, p);
            QualificationBand* band = nullptr;
            for (auto& b : region.qualification) {
                if (b.age_min == lo && b.age_max == hi) band = &b;
                else if (lo <= b.age_max && hi >= b.age_min) t.fail(row, "age band overlaps another band");
            }
            if (!band) {
                region.qualification.push_back(QualificationBand{lo, hi, {}});
                band = &region.qualification.back();
                first_row.push_back(&row);
            }
            band->years.emplace_back(static_cast<int>(years), p);
        }
        for (std::size_t i = 0; i < region.qualification.size(); ++i) {
            double sum = 0.0;
            for (const auto& [years, p] : region.qualification[i].years) sum += p;
            if (std::abs(sum - 1.0) > kProbabilityTolerance)
                t.fail(*first_row[i], "band probabilities sum to " + csv::format(sum) + ", expected 1");
        }
        for (const auto& r : region.age_gender)
            if ((r.p_female > 0.0 || r.p_male > 0.0) && !region.band_for(r.age))
                throw DataError(t.path, 0, "no qualification band covers age " + std::to_string(r.age));
    }

    {
        const auto t = csv::read(detail::region_file(dir, "mortality.csv"), {"age", "gender", "annual_probability"});
        std::array<std::map<int, std::pair<double, std::size_t>>, 2> by_gender;
        for (const auto& row : t.rows) {
            const auto age = t.integer(row, 0);
            if (age < 0) t.fail(row, "negative age");
            const std::string& g = row.cells[1];
            Gender gender;
            if (g == "female" || g == "F" || g == "f") gender = Gender::female;
            else if (g == "male" || g == "M" || g == "m") gender = Gender::male;
            else t.fail(row, "unknown gender '" + g + "'");
            const double p = t.number(row, 2);
            check_probability(t, row, 2, p);
            auto& column = by_gender[static_cast<std::size_t>(gender)];
            if (!column.emplace(static_cast<int>(age), std::make_pair(p, row.line)).second)
                t.fail(row, "duplicate (age, gender)");
        }
        std::array<std::vector<double>, 2> dense;
        for (std::size_t g = 0; g < 2; ++g) {
            const auto& column = by_gender[g];
            const char* gname = to_string(static_cast<Gender>(g));
            if (column.empty()) throw DataError(t.path, 0, std::string("no mortality rows for ") + gname);
            int expected = 0;
            for (const auto& [age, entry] : column) {
                if (age != expected)
                    throw DataError(t.path, entry.second,
                                    std::string("mortality ages for ") + gname + " must be contiguous from 0");
                dense[g].push_back(entry.first);
                ++expected;
            }
            if (dense[g].back() != 1.0)
                throw DataError(t.path, column.rbegin()->second.second,
                                std::string("terminal age for ") + gname + " must have probability 1");
        }
        region.mortality = MortalityTable(std::move(dense));
        for (const auto& r : region.age_gender) {
            if ((r.p_female > 0.0 && r.age > region.mortality.terminal_age(Gender::female)) ||
                (r.p_male > 0.0 && r.age > region.mortality.terminal_age(Gender::male)))
                throw DataError(t.path, 0, "mortality table does not cover age " + std::to_string(r.age));
        }
    }

    {
        const auto t = csv::read(detail::region_file(dir, "fertility.csv"), {"age", "annual_rate"});
        std::map<int, double> rates;
        for (const auto& row : t.rows) {
            const auto age = t.integer(row, 0);
            const double rate = t.number(row, 1);
            if (age < 0) t.fail(row, "negative age");
            if (!(rate >= 0.0 && rate <= 12.0)) t.fail(row, "annual_rate outside [0, 12]");
            if (!rates.emplace(static_cast<int>(age), rate).second) t.fail(row, "duplicate age");
        }
        region.fertility = FertilityTable(std::move(rates));
    }

    {
        const auto t = csv::read(detail::region_file(dir, "fpm_coefficients.csv"),
                                 {"population_min", "population_max", "coefficient"});
        if (t.rows.empty()) throw DataError(t.path, 1, "empty coefficient table");
        std::vector<FpmBracket> brackets;
        for (const auto& row : t.rows) {
            FpmBracket b{t.integer(row, 0), t.integer(row, 1), t.number(row, 2)};
            if (b.population_min < 0 || b.population_min > b.population_max) t.fail(row, "invalid bracket bounds");
            if (!(b.coefficient > 0.0)) t.fail(row, "coefficient must be positive");
            for (const auto& other : brackets)
                if (b.population_min <= other.population_max && b.population_max >= other.population_min)
                    t.fail(row, "bracket overlaps another bracket");
            brackets.push_back(b);
        }
        region.fpm = FpmTable(std::move(brackets));
    }
    return region;
}

/// Writes a region in the directory schema read by load_region_data.
inline void write_region_data(const RegionData& region, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name);
        if (!out) throw Error("cannot write " + (dir / name).string());
        return out;
    };
    {
        auto out = open("municipalities.csv");
        csv::Writer w(out);
        w.cell("id").cell("target_population").cell("xmin").cell("ymin").cell("xmax").cell("ymax").end_row();
        for (const auto& m : region.municipalities)
            w.cell(m.id).cell(m.target_population).cell(m.bbox.xmin).cell(m.bbox.ymin).cell(m.bbox.xmax)
                .cell(m.bbox.ymax).end_row();
    }
    {
        auto out = open("age_gender.csv");
        csv::Writer w(out);
        w.cell("age").cell("p_female").cell("p_male").end_row();
        for (const auto& r : region.age_gender) w.cell(r.age).cell(r.p_female).cell(r.p_male).end_row();
    }
    {
        auto out = open("qualification.csv");
        csv::Writer w(out);
        w.cell("age_band").cell("years_schooling").cell("probability").end_row();
        for (const auto& b : region.qualification)
            for (const auto& [years, p] : b.years)
                w.cell(std::to_string(b.age_min) + "-" + std::to_string(b.age_max)).cell(years).cell(p).end_row();
    }
    {
        auto out = open("mortality.csv");
        csv::Writer w(out);
        w.cell("age").cell("gender").cell("annual_probability").end_row();
        for (Gender g : {Gender::female, Gender::male}) {
            const auto& column = region.mortality.column(g);
            for (std::size_t a = 0; a < column.size(); ++a) w.cell(a).cell(to_string(g)).cell(column[a]).end_row();
        }
    }
    {
        auto out = open("fertility.csv");
        csv::Writer w(out);
        w.cell("age").cell("annual_rate").end_row();
        for (const auto& [age, rate] : region.fertility.rates()) w.cell(age).cell(rate).end_row();
    }
    {
        auto out = open("fpm_coefficients.csv");
        csv::Writer w(out);
        w.cell("population_min").cell("population_max").cell("coefficient").end_row();
        for (const auto& b : region.fpm.brackets())
            w.cell(b.population_min).cell(b.population_max).cell(b.coefficient).end_row();
    }
}

// ---------------------------------------------------------------------------
// Synthetic regions

struct SyntheticRegionSpec {
    std::string name = "synthetic";
    std::vector<std::int64_t> populations;
    double residents_per_km2 = 50.0;
    /// FPM bracket bounds are the legal brackets multiplied by this factor, so
    /// small demo regions still span several brackets.
    double fpm_bracket_scale = 1.0;
};

/// Legal interior-municipality FPM brackets (upper bound, coefficient).
inline const std::vector<std::pair<std::int64_t, double>>& legal_fpm_brackets() {
    static const std::vector<std::pair<std::int64_t, double>> brackets = {
        {10188, 0.6},   {13584, 0.8},   {16980, 1.0},   {23772, 1.2},  {30564, 1.4},  {37356, 1.6},
        {44148, 1.8},   {50940, 2.0},   {61128, 2.2},   {71316, 2.4},  {81504, 2.6},  {91692, 2.8},
        {101880, 3.0},  {115464, 3.2},  {129048, 3.4},  {142632, 3.6}, {156216, 3.8},
    };
    return brackets;
}

inline FpmTable scaled_fpm_table(double scale) {
    std::vector<FpmBracket> out;
    std::int64_t lo = 0;
    for (const auto& [upper, coefficient] : legal_fpm_brackets()) {
        const auto hi = static_cast<std::int64_t>(std::floor(static_cast<double>(upper) * scale));
        if (hi >= lo) {
            out.push_back({lo, hi, coefficient});
            lo = hi + 1;
        }
    }
    out.push_back({lo, std::int64_t{1} << 40, 4.0});
    return FpmTable(std::move(out));
}

/// Builds a region with smooth demographic tables and core-periphery
/// geography: municipality 0 sits at the origin, the rest ring around it.
inline RegionData make_synthetic_region(const SyntheticRegionSpec& spec) {
    RegionData region;
    region.name = spec.name;

    const double pi = std::acos(-1.0);
    double core_half = 0.0;
    for (std::size_t i = 0; i < spec.populations.size(); ++i) {
        const double area = std::max(1.0, static_cast<double>(spec.populations[i]) / spec.residents_per_km2);
        const double half = std::sqrt(area) / 2.0;
        double cx = 0.0;
        double cy = 0.0;
        if (i == 0) {
            core_half = half;
        } else {
            const double angle = 2.0 * pi * static_cast<double>(i - 1) / static_cast<double>(spec.populations.size() - 1);
            const double radius = core_half + half;
            cx = std::round(radius * std::cos(angle) * 1000.0) / 1000.0;
            cy = std::round(radius * std::sin(angle) * 1000.0) / 1000.0;
        }
        const double h = std::round(half * 1000.0) / 1000.0;
        region.municipalities.push_back(
            {static_cast<std::int64_t>(i), spec.populations[i], {cx - h, cy - h, cx + h, cy + h}});
    }

    // Population pyramid: flat to 40, then tapering to 20% at 89.
    std::vector<double> weights;
    double total = 0.0;
    for (int age = 0; age <= 89; ++age) {
        const double w = age < 40 ? 1.0 : 1.0 - 0.8 * static_cast<double>(age - 40) / 49.0;
        weights.push_back(w);
        total += w;
    }
    double assigned = 0.0;
    for (int age = 0; age <= 89; ++age) {
        const double p = weights[static_cast<std::size_t>(age)] / total;
        const double female_share = age < 60 ? 0.5 : 0.55;
        AgeGenderRow row{age, p * female_share, p * (1.0 - female_share)};
        if (age == 89) {
            const double rest = 1.0 - assigned;
            row.p_female = rest * female_share;
            row.p_male = rest - row.p_female;
        }
        assigned += row.p_female + row.p_male;
        region.age_gender.push_back(row);
    }

    region.qualification = {
        {0, 5, {{0, 1.0}}},
        {6, 15, {{1, 0.2}, {3, 0.3}, {5, 0.3}, {7, 0.2}}},
        {16, 24, {{8, 0.2}, {11, 0.5}, {12, 0.1}, {15, 0.2}}},
        {25, 120, {{4, 0.2}, {8, 0.25}, {11, 0.35}, {15, 0.15}, {18, 0.05}}},
    };

    std::array<std::vector<double>, 2> mortality;
    for (int age = 0; age <= 100; ++age) {
        const double base = 0.0008 + 0.00004 * std::exp(0.092 * age);
        mortality[0].push_back(age == 100 ? 1.0 : std::min(1.0, base));
        mortality[1].push_back(age == 100 ? 1.0 : std::min(1.0, 1.3 * base));
    }
    region.mortality = MortalityTable(std::move(mortality));

    // Triangular schedule over 15..49 peaking at 27, about 2 children per woman.
    std::map<int, double> fertility;
    for (int age = 15; age <= 49; ++age) {
        const double shape = age <= 27 ? static_cast<double>(age - 14) / 13.0 : static_cast<double>(50 - age) / 23.0;
        fertility[age] = std::round(0.11 * shape * 1e6) / 1e6;
    }
    region.fertility = FertilityTable(std::move(fertility));
    region.fpm = scaled_fpm_table(spec.fpm_bracket_scale);
    return region;
}

}  // namespace policysim
