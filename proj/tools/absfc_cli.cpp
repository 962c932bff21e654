// Command-line front end: simulate ensembles, run parameter sweeps, run the
// post-processing and emit the figure set, or dump a period's full state.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "absfc/analytics.hpp"
#include "absfc/config.hpp"
#include "absfc/engine.hpp"
#include "absfc/experiments.hpp"
#include "absfc/plot.hpp"

namespace fs = std::filesystem;
using namespace absfc;

namespace {

void write_interbank_csv(const analytics::Ensemble& ens, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "period,replicate,segment,demand,supply,settled,rate,gamma,facility_loans,"
           "facility_deps\n";
    for (const auto& f : ens.frames) {
        const auto& row = [&](const char* c) -> const std::vector<double>& {
            return f.columns.at(c);
        };
        for (std::size_t t = 0; t < f.rows(); ++t) {
            out << fmt::format("{},{},on,{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                               t + 1, f.replicate, row("demand_on")[t], row("supply_on")[t],
                               row("settled_on")[t], row("rate_on")[t], row("gamma_on")[t],
                               row("facility_loans")[t], row("facility_deps")[t]);
            out << fmt::format("{},{},term,{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                               t + 1, f.replicate, row("demand_term")[t], row("supply_term")[t],
                               row("settled_term")[t], row("rate_term")[t], row("gamma_term")[t],
                               row("facility_loans")[t], row("facility_deps")[t]);
        }
    }
}

RunConfig base_config(const std::string& config_path) {
    if (config_path.empty()) return RunConfig{};
    return load_config(config_path);
}

struct CommonArgs {
    std::string config_path;
    std::string scenario = "baseline";
    std::string shock = "missing";
    int replicates = -1;
    int steps = -1;
    int burn_in = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = -1;
    std::string out = "out";

    RunConfig resolve() const {
        RunConfig cfg = base_config(config_path);
        cfg.interbank.scenario = scenario_from_string(scenario);
        cfg.shock = shock_from_string(shock);
        if (replicates > 0) cfg.replicates = replicates;
        if (steps > 0) cfg.steps = steps;
        if (burn_in >= 0) cfg.burn_in = burn_in;
        if (seed_set) cfg.seed = seed;
        if (threads >= 0) cfg.threads = threads;
        cfg.out_dir = out;
        cfg.validate();
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON configuration file");
    cmd->add_option("--scenario", args.scenario, "baseline or maturity")
        ->check(CLI::IsMember({"baseline", "maturity"}));
    cmd->add_option("--shock", args.shock, "missing, corridor, width or uncertainty")
        ->check(CLI::IsMember({"missing", "corridor", "width", "uncertainty"}));
    cmd->add_option("--replicates", args.replicates, "parallel replicates");
    cmd->add_option("--steps", args.steps, "simulation periods");
    cmd->add_option("--burn-in", args.burn_in, "periods excluded from analytics");
    auto* seed_opt = cmd->add_option("--seed", args.seed, "base RNG seed");
    seed_opt->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads, "worker threads (0 = auto)");
    cmd->add_option("--out", args.out, "output directory");
}

int cmd_simulate(const CommonArgs& args, bool figures) {
    RunConfig cfg = args.resolve();
    fs::create_directories(cfg.out_dir);
    save_config(cfg, cfg.out_dir + "/config.json");

    auto result = engine::run_ensemble(cfg);
    analytics::export_long_csv(result.ensemble, cfg.out_dir + "/series_long.csv");
    analytics::export_summary_csv(result.ensemble, cfg.out_dir + "/summary.csv");
    write_interbank_csv(result.ensemble, cfg.out_dir + "/interbank.csv");

    {  // audit trace of the first replicate, one line per period
        RunConfig one = cfg;
        one.replicates = 1;
        engine::run_single(one, 0, cfg.out_dir + "/audit.csv");
    }
    if (figures)
        plot::make_run_figures(result.ensemble, cfg.out_dir + "/figures", cfg.burn_in,
                               fmt::format("{}_{}", to_string(cfg.interbank.scenario),
                                           to_string(cfg.shock)));

    if (!result.failed_replicates.empty()) {
        std::cerr << "audit failures in replicates:";
        for (int r : result.failed_replicates) std::cerr << " " << r;
        std::cerr << "\n";
        return 1;
    }
    std::cout << fmt::format("simulate: {} replicates x {} steps -> {}\n", cfg.replicates,
                             cfg.steps, cfg.out_dir);
    return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& param, const std::string& grid_text) {
    RunConfig cfg = args.resolve();
    fs::create_directories(cfg.out_dir);

    experiments::SweepSpec spec;
    spec.parameter = param;
    spec.grid = experiments::parse_grid(grid_text);
    spec.replicates = cfg.replicates;
    const auto points = experiments::run_sweep(spec, cfg);

    std::ofstream summary(cfg.out_dir + fmt::format("/sweep_{}_summary.csv", param));
    summary << "value,settled_on,settled_term,facility_loans,facility_deps,gamma_on,"
               "gamma_term,output\n";
    for (const auto& p : points) {
        const std::string dir = cfg.out_dir + fmt::format("/sweep_{}_{:g}", param, p.value);
        fs::create_directories(dir);
        if (p.ensemble.frames.size() == 1)
            analytics::export_wide_csv(p.ensemble.frames.front(), dir + "/series.csv");
        else
            analytics::export_long_csv(p.ensemble, dir + "/series_long.csv");
        summary << fmt::format(
            "{:g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", p.value,
            analytics::ensemble_stat(p.ensemble, "settled_on", cfg.burn_in),
            analytics::ensemble_stat(p.ensemble, "settled_term", cfg.burn_in),
            analytics::ensemble_stat(p.ensemble, "facility_loans", cfg.burn_in),
            analytics::ensemble_stat(p.ensemble, "facility_deps", cfg.burn_in),
            analytics::ensemble_stat(p.ensemble, "gamma_on", cfg.burn_in),
            analytics::ensemble_stat(p.ensemble, "gamma_term", cfg.burn_in),
            analytics::ensemble_stat(p.ensemble, "output", cfg.burn_in));
    }
    std::cout << fmt::format("sweep {}: {} grid points -> {}\n", param, points.size(),
                             cfg.out_dir);
    return 0;
}

int cmd_analyze(const std::vector<std::string>& inputs, double hp_lambda, int ma_window,
                bool figures, const std::string& out, int burn_in) {
    fs::create_directories(out);
    std::vector<std::pair<std::string, analytics::Ensemble>> runs;
    for (const auto& path : inputs) {
        auto label = fs::path(path).parent_path().filename().string();
        if (label.empty()) label = fs::path(path).stem().string();
        runs.emplace_back(label, analytics::read_long_csv(path));
    }
    for (const auto& [label, ens] : runs) {
        if (ens.frames.empty()) {
            std::cerr << "analyze: empty ensemble for " << label << "\n";
            continue;
        }
        std::ofstream csv(fmt::format("{}/processed_{}.csv", out, label));
        csv << "period,variable,mean,trend,cycle,ma\n";
        for (const auto& name : ens.frames.front().names) {
            const auto m = analytics::ensemble_mean(ens, name);
            const auto trimmed = analytics::drop_burn_in(m, burn_in);
            if (trimmed.size() < 4) continue;
            const auto hp = analytics::hp_filter(trimmed, hp_lambda);
            const auto ma = analytics::moving_average(trimmed, ma_window);
            for (std::size_t t = 0; t < trimmed.size(); ++t)
                csv << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                                   t + 1 + burn_in, name, trimmed[t], hp.trend[t],
                                   hp.cycle[t], ma[t]);
        }
        if (figures) plot::make_run_figures(ens, out + "/figures", burn_in, label);
    }
    if (figures && runs.size() > 1) {
        for (const char* var : {"settled_on", "settled_term", "rate_on", "rate_term",
                                "gamma_on", "gamma_term", "facility_loans", "facility_deps"})
            plot::make_overlay_figure(runs, var,
                                      fmt::format("{}/figures/overlay_{}.svg", out, var),
                                      burn_in);
    }
    std::cout << fmt::format("analyze: {} run(s) -> {}\n", runs.size(), out);
    return 0;
}

int cmd_state_dump(const CommonArgs& args, int period) {
    RunConfig cfg = args.resolve();
    fs::create_directories(cfg.out_dir);
    EconomyState state = engine::init_economy(cfg, cfg.seed);
    const int target = period > 0 ? period : cfg.steps;
    for (int t = 1; t <= target; ++t) engine::step(state, cfg);
    const std::string path = cfg.out_dir + fmt::format("/state_t{}.json", target);
    engine::dump_state(state, path);
    std::cout << "state-dump: " << path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-tier interbank payment-system simulator"};
    app.require_subcommand(1);

    CommonArgs sim_args;
    bool sim_figures = false;
    auto* sim = app.add_subcommand("simulate", "run one scenario/shock ensemble");
    add_common(sim, sim_args);
    sim->add_flag("--figures", sim_figures, "emit the SVG figure set");

    CommonArgs sweep_args;
    std::string sweep_param = "m1", sweep_grid = "0:1:0.1";
    auto* sweep = app.add_subcommand("sweep", "parameter sensitivity sweep");
    add_common(sweep, sweep_args);
    sweep_args.replicates = 1;  // the NSFR sweeps follow the paper's single-run protocol
    sweep->add_option("--param", sweep_param,
                      "m1..m5, r, delta, l, gamma or g_d")->required();
    sweep->add_option("--grid", sweep_grid, "a:b:step or comma list");

    std::vector<std::string> an_inputs;
    double hp_lambda = 14400.0;
    int ma_window = 200;
    bool an_figures = false;
    std::string an_out = "out/analysis";
    int an_burn_in = 100;
    auto* an = app.add_subcommand("analyze", "HP filter, moving averages, figures");
    an->add_option("--input", an_inputs, "series_long.csv paths")->required();
    an->add_option("--hp", hp_lambda, "HP smoothing parameter");
    an->add_option("--ma", ma_window, "moving-average window");
    an->add_flag("--figures", an_figures, "emit figures");
    an->add_option("--out", an_out, "output directory");
    an->add_option("--burn-in", an_burn_in, "periods dropped before processing");

    CommonArgs dump_args;
    int dump_period = 0;
    auto* dump = app.add_subcommand("state-dump", "dump the full state of a period");
    add_common(dump, dump_args);
    dump->add_option("--period", dump_period, "period to dump (default: last)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_args, sim_figures);
        if (sweep->parsed()) return cmd_sweep(sweep_args, sweep_param, sweep_grid);
        if (an->parsed())
            return cmd_analyze(an_inputs, hp_lambda, ma_window, an_figures, an_out, an_burn_in);
        if (dump->parsed()) return cmd_state_dump(dump_args, dump_period);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
