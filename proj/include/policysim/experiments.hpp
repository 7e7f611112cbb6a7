#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "policysim/config.hpp"
#include "policysim/csv.hpp"
#include "policysim/random.hpp"
#include "policysim/region.hpp"
#include "policysim/scheduler.hpp"
#include "policysim/stats.hpp"

namespace policysim {

enum class RunType { run, sensitivity, distributions, acps };

inline const char* to_string(RunType t) {
    switch (t) {
        case RunType::run: return "run";
        case RunType::sensitivity: return "sensitivity";
        case RunType::distributions: return "distributions";
        case RunType::acps: return "acps";
    }
    return "?";
}

inline RunType run_type_from_string(std::string_view s) {
    for (auto t : {RunType::run, RunType::sensitivity, RunType::distributions, RunType::acps})
        if (s == to_string(t)) return t;
    throw Error("unknown run type '" + std::string(s) + "'");
}

/// Optional entity dumps. `house` also writes the sale log.
struct SaveFlags {
    bool agents = false;
    bool grave = false;
    bool house = false;
    bool family = false;
    bool firms = false;

    bool any() const { return agents || grave || house || family || firms; }
    bool operator==(const SaveFlags&) const = default;
};

inline SaveFlags parse_save_flags(std::string_view text) {
    SaveFlags f;
    for (const auto& raw : csv::split(text, ',')) {
        const auto item = detail::lower(raw);
        if (item.empty()) continue;
        if (item == "agents") f.agents = true;
        else if (item == "grave") f.grave = true;
        else if (item == "house") f.house = true;
        else if (item == "family") f.family = true;
        else if (item == "firms") f.firms = true;
        else throw Error("unknown save-data flag '" + item + "' (agents, grave, house, family, firms)");
    }
    return f;
}

struct ExperimentPlan {
    RunType type = RunType::run;
    int runs_per_config = 1;
    int cores = -1;  ///< -1: all hardware threads
    std::vector<SweepSpec> sweeps;
    std::filesystem::path output_dir = "output";
    SaveFlags save;
    std::uint64_t master_seed = 0;
    std::vector<std::string> regions;  ///< region names to simulate; acps uses all of them

    void validate() const {
        if (runs_per_config < 1) throw Error("runs per config must be >= 1");
        if (cores == 0 || cores < -1) throw Error("cores must be -1 or >= 1");
        if (type == RunType::sensitivity && sweeps.empty()) throw Error("sensitivity needs at least one sweep spec");
        if (type != RunType::sensitivity && !sweeps.empty())
            throw Error(std::string(to_string(type)) + " takes no sweep specs");
        if (regions.empty()) throw Error("no region to simulate");
    }
};

struct Job {
    std::size_t config_id = 0;
    int replicate = 0;
    std::string label;   ///< e.g. "ALPHA=0.19" or a regime name
    std::string region;
    SimParams params;
    std::uint64_t seed = 0;
};

/// Cartesian product of configurations x replicates. Seeds depend only on
/// (master seed, config id, replicate).
inline std::vector<Job> expand_plan(const ExperimentPlan& plan, const SimParams& base) {
    plan.validate();
    struct Config {
        std::string label;
        std::string region;
        SimParams params;
    };
    std::vector<Config> configs;

    switch (plan.type) {
        case RunType::run:
            configs.push_back({"base", plan.regions.front(), base});
            break;
        case RunType::distributions:
            for (auto regime : kAllRegimes) {
                SimParams p = base;
                p.alternative0 = regime.alternative0;
                p.fpm_distribution = regime.fpm_distribution;
                configs.push_back({regime.name(), plan.regions.front(), p});
            }
            break;
        case RunType::acps:
            for (const auto& region : plan.regions) configs.push_back({region, region, base});
            break;
        case RunType::sensitivity: {
            configs.push_back({"", plan.regions.front(), base});
            for (const auto& spec : plan.sweeps) {
                const ParamInfo* info = find_parameter(spec.parameter);
                if (!info) throw Error("unknown parameter '" + spec.parameter + "'");
                std::vector<Config> next;
                for (const auto& c : configs) {
                    for (double v : spec.values()) {
                        Config n = c;
                        info->set(n.params, v);
                        const std::string value = info->kind == ParamKind::boolean ? (v != 0.0 ? "true" : "false")
                                                                                   : csv::format(info->get(n.params));
                        n.label += (n.label.empty() ? "" : " ") + spec.parameter + "=" + value;
                        next.push_back(std::move(n));
                    }
                }
                configs = std::move(next);
            }
            break;
        }
    }

    std::vector<Job> jobs;
    for (std::size_t c = 0; c < configs.size(); ++c) {
        configs[c].params.validate();
        for (int r = 0; r < plan.runs_per_config; ++r) {
            Job j;
            j.config_id = c;
            j.replicate = r;
            j.label = configs[c].label;
            j.region = configs[c].region;
            j.params = configs[c].params;
            j.seed = derive_seed(plan.master_seed, c, static_cast<std::uint64_t>(r));
            jobs.push_back(std::move(j));
        }
    }
    return jobs;
}

struct JobOutcome {
    std::optional<RunResult> result;
    std::string error;  ///< set when the job failed
    bool ok() const { return result.has_value(); }
};

using JobRunner = std::function<RunResult(const Job&)>;

inline int resolve_cores(int cores) {
    if (cores > 0) return cores;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs every job on a pool of workers. Outcomes come back in job order; a
/// job that throws is reported without stopping the others.
inline std::vector<JobOutcome> execute(const std::vector<Job>& jobs, int cores, const JobRunner& runner) {
    if (jobs.empty()) throw Error("execute: no jobs");
    std::vector<JobOutcome> outcomes(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
            try {
                outcomes[i].result = runner(jobs[i]);
            } catch (const std::exception& e) {
                outcomes[i].error = "config " + std::to_string(jobs[i].config_id) + " (" + jobs[i].label +
                                    "), replicate " + std::to_string(jobs[i].replicate) + ": " + e.what();
            }
        }
    };
    const auto n = static_cast<std::size_t>(std::min<int>(resolve_cores(cores), static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return outcomes;
}

/// Runner over regions loaded up front (read-only while jobs run).
inline JobRunner region_runner(const std::map<std::string, RegionData>& regions, RunOptions options = {}) {
    return [&regions, options](const Job& job) {
        const auto it = regions.find(job.region);
        if (it == regions.end()) throw Error("region '" + job.region + "' not loaded");
        return run(it->second, job.params, job.seed, options);
    };
}

// ---- time series -----------------------------------------------------------

/// Column names of a monthly table for a region with the given municipality codes.
inline std::vector<std::string> monthly_columns(const std::vector<std::int64_t>& codes) {
    std::vector<std::string> cols = {"month", "unemployment", "price_index", "inflation"};
    for (TaxKind k : kAllTaxKinds) cols.push_back("tax_" + std::string(to_string(k)));
    for (const char* c : {"tax_total", "population", "gini", "house_price_index", "money", "qli_investment", "births",
                          "deaths", "sales", "gdp", "qli_mean"})
        cols.emplace_back(c);
    for (auto code : codes) cols.push_back("qli_" + std::to_string(code));
    return cols;
}

/// One record as numbers, in monthly_columns order. qli_mean is weighted by
/// the month's residents.
inline std::vector<double> record_values(const MonthRecord& r) {
    std::vector<double> v = {static_cast<double>(r.month), r.unemployment, r.price_index, r.inflation};
    for (TaxKind k : kAllTaxKinds) v.push_back(r.taxes[k]);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < r.qli.size(); ++i) {
        const double w = i < r.residents.size() ? static_cast<double>(r.residents[i]) : 1.0;
        num += r.qli[i] * w;
        den += w;
    }
    v.insert(v.end(), {r.taxes.total(), static_cast<double>(r.population), r.gini, r.house_price_index, r.money,
                       r.qli_investment, static_cast<double>(r.births), static_cast<double>(r.deaths),
                       static_cast<double>(r.sales), r.gdp, den > 0.0 ? num / den : 0.0});
    v.insert(v.end(), r.qli.begin(), r.qli.end());
    return v;
}

inline std::vector<std::int64_t> municipality_codes(const World& w) {
    std::vector<std::int64_t> codes;
    for (const auto& m : w.municipalities) codes.push_back(m.code);
    return codes;
}

/// The run's table, one row per month.
inline std::vector<std::vector<double>> monthly_table(const RunResult& r) {
    std::vector<std::vector<double>> rows;
    for (const auto& rec : r.records) rows.push_back(record_values(rec));
    return rows;
}

struct Aggregate {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> std;  ///< population standard deviation
};

/// Pointwise mean and std across replicates of one configuration.
inline Aggregate aggregate(const std::vector<const RunResult*>& replicates) {
    if (replicates.empty()) throw Error("aggregate: no replicates");
    Aggregate a;
    a.columns = monthly_columns(municipality_codes(replicates.front()->final_world));
    std::vector<std::vector<std::vector<double>>> tables;
    for (const auto* r : replicates) tables.push_back(monthly_table(*r));
    const std::size_t rows = tables.front().size();
    for (const auto& t : tables)
        if (t.size() != rows) throw Error("aggregate: replicates differ in length");
    for (std::size_t i = 0; i < rows; ++i) {
        std::vector<double> m(a.columns.size());
        std::vector<double> s(a.columns.size());
        for (std::size_t c = 0; c < a.columns.size(); ++c) {
            std::vector<double> xs;
            for (const auto& t : tables) xs.push_back(t[i][c]);
            m[c] = mean(xs);
            s[c] = stddev(xs);
        }
        a.mean.push_back(std::move(m));
        a.std.push_back(std::move(s));
    }
    return a;
}

inline void write_table(const std::filesystem::path& path, const std::vector<std::string>& columns,
                        const std::vector<std::vector<double>>& rows) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    csv::Writer w(out);
    for (const auto& c : columns) w.cell(c);
    w.end_row();
    for (const auto& row : rows) {
        for (double v : row) w.cell(v);
        w.end_row();
    }
}

// ---- KS comparison of tax distributions ------------------------------------

struct KsRow {
    std::string tax;  ///< a tax kind or "total"
    std::size_t n = 0;
    double d = 0.0;
    double p_value = 1.0;
    bool rejected = false;  ///< at alpha = 0.05
};

struct KsReport {
    std::vector<KsRow> rows;
    std::vector<std::string> notes;
};

using RegionTaxes = std::map<std::string, TaxAmounts>;

/// Per-kind and total KS tests of simulated against reference collections
/// across regions. The region sets must match.
inline KsReport compare_tax_distributions(const RegionTaxes& simulated, const RegionTaxes& reference,
                                          double alpha = 0.05) {
    KsReport report;
    std::vector<std::string> problems;
    for (const auto& [region, _] : simulated)
        if (!reference.contains(region)) problems.push_back(region + " (missing from reference)");
    for (const auto& [region, _] : reference)
        if (!simulated.contains(region)) problems.push_back(region + " (missing from simulation)");
    if (!problems.empty()) {
        std::string msg = "region sets differ:";
        for (const auto& p : problems) msg += " " + p;
        throw Error(msg);
    }
    if (simulated.empty()) throw Error("no regions to compare");

    auto test = [&](const std::string& name, auto pick) {
        std::vector<double> a;
        std::vector<double> b;
        for (const auto& [region, t] : simulated) a.push_back(pick(t));
        for (const auto& [region, t] : reference) b.push_back(pick(t));
        const auto ks = ks_two_sample(a, b);
        report.rows.push_back({name, a.size(), ks.d, ks.p_value, ks.p_value < alpha});
        std::vector<double> sa = a;
        std::vector<double> sb = b;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        const double ma = sa[sa.size() / 2];
        const double mb = sb[sb.size() / 2];
        if (ma > 0.0 && mb > 0.0) {
            const double ratio = ma / mb;
            if (ratio > 10.0 || ratio < 0.1)
                report.notes.push_back(name + ": medians differ by a factor of " + csv::format(std::round(ratio * 1000) / 1000) +
                                       "; KS on raw values is scale-sensitive, compare shares or logs as well");
        }
    };
    for (TaxKind k : kAllTaxKinds) test(std::string(to_string(k)), [k](const TaxAmounts& t) { return t[k]; });
    test("total", [](const TaxAmounts& t) { return t.total(); });
    return report;
}

/// Reference collections: region,consumption,labor,transaction,firms,property.
inline RegionTaxes load_reference_taxes(const std::filesystem::path& path) {
    const auto table = csv::read(path, {"region", "consumption", "labor", "transaction", "firms", "property"});
    RegionTaxes out;
    for (const auto& row : table.rows) {
        TaxAmounts t;
        for (std::size_t i = 0; i < kTaxKinds; ++i) {
            t.values[i] = table.number(row, i + 1);
            if (t.values[i] < 0.0) table.fail(row, "negative tax amount");
        }
        if (!out.emplace(row.cells[0], t).second) table.fail(row, "duplicate region " + row.cells[0]);
    }
    return out;
}

/// Taxes collected over the final 12 months of a run (annual collection).
inline TaxAmounts final_year_taxes(const RunResult& r) {
    TaxAmounts t;
    const std::size_t n = r.records.size();
    for (std::size_t i = n > 12 ? n - 12 : 0; i < n; ++i)
        for (TaxKind k : kAllTaxKinds) t[k] += r.records[i].taxes[k];
    return t;
}

inline void write_ks_report(const std::filesystem::path& path, const KsReport& report) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    csv::Writer w(out);
    for (const char* c : {"tax", "n", "d", "p_value", "rejected"}) w.cell(std::string_view(c));
    w.end_row();
    for (const auto& r : report.rows) {
        w.cell(r.tax).cell(r.n).cell(r.d).cell(r.p_value).cell(std::string_view(r.rejected ? "true" : "false"));
        w.end_row();
    }
    for (const auto& note : report.notes) out << "# " << note << '\n';
}

// ---- entity dumps ----------------------------------------------------------

inline void write_entities(const std::filesystem::path& dir, const RunResult& r, const SaveFlags& save) {
    const World& w = r.final_world;
    auto open = [&](const char* name) {
        std::ofstream out(dir / name);
        if (!out) throw Error("cannot write " + (dir / name).string());
        return out;
    };
    auto header = [](csv::Writer& cw, std::initializer_list<const char*> cols) {
        for (const char* c : cols) cw.cell(std::string_view(c));
        cw.end_row();
    };
    if (save.agents) {
        auto out = open("agents.csv");
        csv::Writer cw(out);
        header(cw, {"id", "family", "age", "gender", "qualification", "employer", "wage", "alive"});
        for (const auto& c : w.citizens) {
            cw.cell(static_cast<std::int64_t>(c.id.value)).cell(static_cast<std::int64_t>(c.family_id.value)).cell(c.age);
            cw.cell(std::string_view(to_string(c.gender))).cell(c.qualification);
            cw.cell(c.employer ? static_cast<std::int64_t>(c.employer->value) : std::int64_t{-1}).cell(c.wage);
            cw.cell(static_cast<std::int64_t>(c.alive)).end_row();
        }
    }
    if (save.grave) {
        auto out = open("grave.csv");
        csv::Writer cw(out);
        header(cw, {"month", "citizen", "family", "age", "gender"});
        for (const auto& d : r.deaths) {
            cw.cell(d.month).cell(static_cast<std::int64_t>(d.citizen.value)).cell(static_cast<std::int64_t>(d.family.value));
            cw.cell(d.age).cell(std::string_view(to_string(d.gender))).end_row();
        }
    }
    if (save.house) {
        auto out = open("houses.csv");
        csv::Writer cw(out);
        header(cw, {"id", "municipality", "x", "y", "size", "quality", "price", "owner", "occupied"});
        for (const auto& h : w.houses) {
            cw.cell(static_cast<std::int64_t>(h.id.value)).cell(w.municipality(h.municipality_id).code);
            cw.cell(h.location.x).cell(h.location.y).cell(h.size).cell(h.quality).cell(h.current_price);
            cw.cell(static_cast<std::int64_t>(h.owner.value)).cell(static_cast<std::int64_t>(h.occupied)).end_row();
        }
        auto sales = open("sales.csv");
        csv::Writer sw(sales);
        header(sw, {"month", "house", "seller", "buyer", "bid", "offer", "price", "tax", "relocated"});
        for (const auto& s : r.sales) {
            sw.cell(s.month).cell(static_cast<std::int64_t>(s.house.value)).cell(static_cast<std::int64_t>(s.seller.value));
            sw.cell(static_cast<std::int64_t>(s.buyer.value)).cell(s.bid).cell(s.offer).cell(s.transaction_price);
            sw.cell(s.tax).cell(static_cast<std::int64_t>(s.relocated)).end_row();
        }
    }
    if (save.family) {
        auto out = open("families.csv");
        csv::Writer cw(out);
        header(cw, {"id", "members", "residence", "houses_owned", "cash", "savings", "active"});
        for (const auto& f : w.families) {
            cw.cell(static_cast<std::int64_t>(f.id.value)).cell(f.member_ids.size());
            cw.cell(static_cast<std::int64_t>(f.residence.value)).cell(f.owned_houses.size());
            cw.cell(f.monthly_cash).cell(f.savings).cell(static_cast<std::int64_t>(f.active)).end_row();
        }
    }
    if (save.firms) {
        auto out = open("firms.csv");
        csv::Writer cw(out);
        header(cw, {"id", "municipality", "x", "y", "employees", "price", "stock", "cash", "wage_offer", "last_profit"});
        for (const auto& f : w.firms) {
            cw.cell(static_cast<std::int64_t>(f.id.value)).cell(w.municipality(f.municipality_id).code);
            cw.cell(f.location.x).cell(f.location.y).cell(f.employee_ids.size()).cell(f.price).cell(f.stock);
            cw.cell(f.cash).cell(f.wage_offer).cell(f.last_profit).end_row();
        }
    }
}

// ---- the whole experiment --------------------------------------------------

struct ExperimentReport {
    std::vector<Job> jobs;
    std::vector<JobOutcome> outcomes;
    std::optional<KsReport> ks;
    std::size_t failures() const {
        std::size_t n = 0;
        for (const auto& o : outcomes) n += o.ok() ? 0 : 1;
        return n;
    }
};

inline std::string config_dir_name(std::size_t id) {
    std::string s = std::to_string(id);
    return "config_" + std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

inline std::string run_dir_name(int replicate) {
    std::string s = std::to_string(replicate);
    return "run_" + std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

namespace detail {

inline void write_gnuplot(const std::filesystem::path& path, const std::vector<std::pair<std::size_t, std::string>>& configs,
                          const std::vector<std::string>& columns) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << "# gnuplot " << path.filename().string() << "  (run from this directory)\n";
    out << "set datafile separator ','\nset key outside right\nset terminal pngcairo size 1000,600\n";
    for (const char* series : {"unemployment", "price_index", "tax_total", "qli_mean", "gini", "house_price_index"}) {
        const auto it = std::find(columns.begin(), columns.end(), series);
        if (it == columns.end()) continue;
        const auto col = static_cast<std::size_t>(it - columns.begin()) + 1;
        out << "\nset output '" << series << ".png'\nset title '" << series << "'\nset xlabel 'month'\nplot ";
        for (std::size_t i = 0; i < configs.size(); ++i) {
            out << (i ? ", \\\n     " : "") << "'" << config_dir_name(configs[i].first) << "/mean.csv' every ::1 using 1:"
                << col << " with lines title '" << configs[i].second << "'";
        }
        out << '\n';
    }
}

inline nlohmann::json params_json(const SimParams& p) {
    nlohmann::json j;
    for (const auto& info : parameter_registry()) {
        if (info.kind == ParamKind::boolean) j[info.name] = info.get(p) != 0.0;
        else if (info.kind == ParamKind::integer) j[info.name] = static_cast<std::int64_t>(info.get(p));
        else j[info.name] = info.get(p);
    }
    j["PROCESSING_ACPS"] = p.processing_acps;
    return j;
}

}  // namespace detail

/// Runs the plan and writes every output under plan.output_dir. `reference`
/// (region -> collections) triggers the KS report.
inline ExperimentReport run_experiment(const ExperimentPlan& plan, const SimParams& base,
                                       const std::map<std::string, RegionData>& regions,
                                       const std::optional<RegionTaxes>& reference = std::nullopt) {
    ExperimentReport report;
    report.jobs = expand_plan(plan, base);
    RunOptions options;
    options.keep_deaths = plan.save.grave;
    options.keep_sales = plan.save.house;
    report.outcomes = execute(report.jobs, plan.cores, region_runner(regions, options));

    const auto& out = plan.output_dir;
    std::filesystem::create_directories(out);

    std::map<std::size_t, std::vector<std::size_t>> by_config;
    for (std::size_t i = 0; i < report.jobs.size(); ++i) by_config[report.jobs[i].config_id].push_back(i);

    std::vector<std::pair<std::size_t, std::string>> plotted;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> combined;
    std::vector<std::string> combined_columns;
    for (const auto& [config, indices] : by_config) {
        const auto dir = out / config_dir_name(config);
        std::vector<const RunResult*> ok;
        for (std::size_t i : indices) {
            const auto& o = report.outcomes[i];
            if (!o.ok()) continue;
            ok.push_back(&*o.result);
            const auto run_dir = dir / run_dir_name(report.jobs[i].replicate);
            std::filesystem::create_directories(run_dir);
            write_table(run_dir / "monthly.csv", monthly_columns(municipality_codes(o.result->final_world)),
                        monthly_table(*o.result));
            if (plan.save.any()) write_entities(run_dir, *o.result, plan.save);
        }
        if (ok.empty()) continue;
        const auto agg = aggregate(ok);
        write_table(dir / "mean.csv", agg.columns, agg.mean);
        write_table(dir / "std.csv", agg.columns, agg.std);
        plotted.emplace_back(config, report.jobs[indices.front()].label);
        if (columns.empty()) columns = agg.columns;
        // The combined table keeps the columns every region shares.
        const std::size_t shared = monthly_columns({}).size();
        if (combined_columns.empty()) {
            combined_columns = {"config"};
            combined_columns.insert(combined_columns.end(), agg.columns.begin(), agg.columns.begin() + shared);
        }
        for (const auto& row : agg.mean) {
            std::vector<double> r = {static_cast<double>(config)};
            r.insert(r.end(), row.begin(), row.begin() + shared);
            combined.push_back(std::move(r));
        }
    }
    if (!combined.empty()) write_table(out / "mean.csv", combined_columns, combined);
    if (!plotted.empty()) detail::write_gnuplot(out / "plots.gp", plotted, columns);

    if (reference) {
        RegionTaxes simulated;
        std::map<std::string, int> counts;
        for (std::size_t i = 0; i < report.jobs.size(); ++i) {
            const auto& o = report.outcomes[i];
            if (!o.ok()) continue;
            const auto t = final_year_taxes(*o.result);
            auto& acc = simulated[report.jobs[i].region];
            for (TaxKind k : kAllTaxKinds) acc[k] += t[k];
            ++counts[report.jobs[i].region];
        }
        for (auto& [region, t] : simulated)
            for (auto& v : t.values) v /= counts[region];
        report.ks = compare_tax_distributions(simulated, *reference);
        write_ks_report(out / "ks_report.csv", *report.ks);
    }

    nlohmann::json summary;
    summary["run_type"] = to_string(plan.type);
    summary["master_seed"] = plan.master_seed;
    summary["runs_per_config"] = plan.runs_per_config;
    summary["regions"] = plan.regions;
    summary["schema_version"] = 1;
    nlohmann::json sweeps = nlohmann::json::array();
    for (const auto& s : plan.sweeps) sweeps.push_back({{"parameter", s.parameter}, {"values", s.values()}});
    summary["sweeps"] = sweeps;
    nlohmann::json configs = nlohmann::json::array();
    for (const auto& [config, indices] : by_config) {
        nlohmann::json c;
        const auto& first = report.jobs[indices.front()];
        c["id"] = config;
        c["directory"] = config_dir_name(config);
        c["label"] = first.label;
        c["region"] = first.region;
        c["params"] = detail::params_json(first.params);
        nlohmann::json runs = nlohmann::json::array();
        for (std::size_t i : indices) {
            const auto& o = report.outcomes[i];
            nlohmann::json r{{"replicate", report.jobs[i].replicate}, {"seed", report.jobs[i].seed}, {"ok", o.ok()}};
            if (o.ok()) {
                r["months"] = o.result->records.size();
                r["final_weighted_qli"] = weighted_qli(o.result->final_world);
            } else {
                r["error"] = o.error;
            }
            runs.push_back(r);
        }
        c["runs"] = runs;
        configs.push_back(c);
    }
    summary["configs"] = configs;
    if (report.ks) {
        nlohmann::json ks = nlohmann::json::array();
        for (const auto& r : report.ks->rows)
            ks.push_back({{"tax", r.tax}, {"d", r.d}, {"p_value", r.p_value}, {"rejected", r.rejected}});
        summary["ks"] = ks;
        summary["ks_notes"] = report.ks->notes;
    }
    summary["failures"] = report.failures();
    std::ofstream json_out(out / "summary.json");
    json_out << summary.dump(2) << '\n';
    return report;
}

}  // namespace policysim
