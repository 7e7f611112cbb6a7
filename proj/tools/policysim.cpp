// policysim command-line front end.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "policysim/policysim.hpp"

namespace fs = std::filesystem;
using namespace policysim;

namespace {

struct Options {
    std::string config_path;
    std::string data_dir = "data/regions";
    std::string output_dir = "output";
    std::string reference_path;
    std::string region;
    int runs = 1;
    int cores = -1;
    std::optional<std::uint64_t> seed;
    std::optional<int> months;
    std::string save_data;
    std::vector<std::string> sweeps;
};

bool is_region_dir(const fs::path& dir) { return fs::is_regular_file(dir / "municipalities.csv"); }

/// A region directory, or a root whose subdirectories are regions.
std::map<std::string, RegionData> load_regions(const fs::path& data) {
    std::map<std::string, RegionData> out;
    if (is_region_dir(data)) {
        auto r = load_region_data(data);
        out.emplace(r.name, std::move(r));
        return out;
    }
    if (!fs::is_directory(data)) throw Error("data directory " + data.string() + " does not exist");
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(data))
        if (entry.is_directory() && is_region_dir(entry.path())) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) {
        auto r = load_region_data(d);
        out.emplace(r.name, std::move(r));
    }
    if (out.empty()) throw Error("no region directories under " + data.string());
    return out;
}

int run_command(RunType type, const Options& o) {
    Config config;
    if (!o.config_path.empty()) config = load_config(o.config_path);
    if (o.months) config.params.months = *o.months;
    config.params.validate();

    auto regions = load_regions(o.data_dir);
    if (!config.params.processing_acps.empty()) {
        std::map<std::string, RegionData> kept;
        for (const auto& name : config.params.processing_acps) {
            auto it = regions.find(name);
            if (it == regions.end()) throw Error("PROCESSING_ACPS names unknown region '" + name + "'");
            kept.emplace(name, it->second);
        }
        regions = std::move(kept);
    }

    ExperimentPlan plan;
    plan.type = type;
    plan.runs_per_config = o.runs;
    plan.cores = o.cores;
    plan.output_dir = o.output_dir;
    plan.save = parse_save_flags(o.save_data);
    plan.master_seed = o.seed.value_or(config.seed.value_or(0));
    for (const auto& s : o.sweeps) plan.sweeps.push_back(parse_sweep_spec(s));
    if (type == RunType::acps) {
        for (const auto& [name, _] : regions) plan.regions.push_back(name);
    } else if (!o.region.empty()) {
        if (!regions.contains(o.region)) throw Error("unknown region '" + o.region + "'");
        plan.regions.push_back(o.region);
    } else {
        plan.regions.push_back(regions.begin()->first);
    }

    std::optional<RegionTaxes> reference;
    fs::path ref_path = o.reference_path;
    if (ref_path.empty() && type == RunType::acps && fs::is_regular_file(fs::path(o.data_dir) / "reference_taxes.csv"))
        ref_path = fs::path(o.data_dir) / "reference_taxes.csv";
    if (!ref_path.empty()) {
        auto all = load_reference_taxes(ref_path);
        RegionTaxes matched;
        for (const auto& name : plan.regions) {
            auto it = all.find(name);
            if (it == all.end()) throw Error("reference file has no row for region '" + name + "'");
            matched.emplace(name, it->second);
        }
        reference = std::move(matched);
    }

    const auto report = run_experiment(plan, config.params, regions, reference);
    std::cout << to_string(type) << ": " << report.jobs.size() << " job(s), " << report.failures() << " failed, output in "
              << plan.output_dir.string() << '\n';
    for (const auto& outcome : report.outcomes)
        if (!outcome.ok()) std::cerr << "failed: " << outcome.error << '\n';
    if (report.ks) {
        for (const auto& row : report.ks->rows)
            std::cout << "KS " << row.tax << ": D=" << csv::format(row.d) << " p=" << csv::format(row.p_value)
                      << (row.rejected ? " rejected" : " not rejected") << '\n';
        for (const auto& note : report.ks->notes) std::cout << "note: " << note << '\n';
    }
    return report.failures() == 0 ? 0 : 1;
}

void add_run_options(CLI::App* cmd, Options& o, bool sweeps) {
    cmd->add_option("--config", o.config_path, "KEY = value parameter file")->check(CLI::ExistingFile);
    cmd->add_option("--data", o.data_dir, "region directory, or a directory of region directories")
        ->capture_default_str();
    cmd->add_option("--output", o.output_dir, "output directory")->capture_default_str();
    cmd->add_option("--runs", o.runs, "runs per configuration")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--cores", o.cores, "worker threads, -1 for all")->capture_default_str();
    cmd->add_option("--seed", o.seed, "master seed (overrides SEED in the config)");
    cmd->add_option("--months", o.months, "months to simulate (max 360)");
    cmd->add_option("--save-data", o.save_data, "comma list of agents,grave,house,family,firms");
    cmd->add_option("--region", o.region, "region to simulate when the data directory holds several");
    cmd->add_option("--reference", o.reference_path, "reference tax collections for the KS report")
        ->check(CLI::ExistingFile);
    if (sweeps) cmd->add_option("sweeps", o.sweeps, "NAME:first:last:count, or a boolean NAME")->required();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial agent-based model of municipal taxes, firms, families and housing"};
    app.require_subcommand(1);

    Options options;
    std::map<CLI::App*, RunType> commands;
    for (auto type : {RunType::run, RunType::sensitivity, RunType::distributions, RunType::acps}) {
        const char* help = type == RunType::run             ? "simulate the base configuration"
                           : type == RunType::sensitivity   ? "sweep one or more parameters"
                           : type == RunType::distributions ? "compare the four tax distribution regimes"
                                                            : "simulate every region in the data directory";
        auto* cmd = app.add_subcommand(to_string(type), help);
        add_run_options(cmd, options, type == RunType::sensitivity);
        commands[cmd] = type;
    }

    SyntheticRegionSpec synth;
    std::string synth_out;
    auto* gen = app.add_subcommand("generate-region", "write a synthetic region in the CSV input format");
    gen->add_option("--output", synth_out, "directory to create")->required();
    gen->add_option("--name", synth.name)->capture_default_str();
    gen->add_option("--populations", synth.populations, "target population per municipality")
        ->required()
        ->delimiter(',');
    gen->add_option("--density", synth.residents_per_km2, "residents per km2")->capture_default_str();
    gen->add_option("--fpm-scale", synth.fpm_bracket_scale, "factor applied to the FPM bracket bounds")
        ->capture_default_str();

    auto* show = app.add_subcommand("show-config", "print the effective parameters as a config file");
    std::string show_path;
    show->add_option("--config", show_path)->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        for (const auto& [cmd, type] : commands)
            if (cmd->parsed()) return run_command(type, options);
        if (gen->parsed()) {
            write_region_data(make_synthetic_region(synth), synth_out);
            std::cout << "wrote region " << synth.name << " to " << synth_out << '\n';
            return 0;
        }
        if (show->parsed()) {
            const Config c = show_path.empty() ? Config{} : load_config(show_path);
            std::cout << format_config(c.params);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
