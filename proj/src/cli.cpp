#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gadmm/errors.hpp"
#include "gadmm/experiments.hpp"

namespace gadmm {

namespace {

struct Options {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
};

void add_common(CLI::App* cmd, Options& opts) {
    cmd->add_option("--config", opts.config, "experiment config (JSON)")->required();
    cmd->add_option("--out", opts.out, "output directory");
    cmd->add_option("--seed", opts.seed, "overrides the seed in the config");
    cmd->add_option("--workers", opts.workers, "parallel sweep workers")->check(CLI::PositiveNumber);
}

int report_rows(const std::vector<SweepRow>& rows) {
    int code = exit_code::ok;
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            std::cerr << "row " << format_number(row.value) << " failed: " << row.error << '\n';
            code = exit_code::solver_error;
        }
    }
    return code;
}

int do_run(const ExperimentConfig& config, const Options& opts) {
    const ExperimentData data = prepare_data(config);
    SweepRow row;
    row.inner = config.run.inner;
    try {
        RunOptions ro;
        ro.reference = data.centralized;
        row.outcome = run(config.run, data.datasets, ro);
        row.delta = compute_delta(row.outcome->state, data.centralized, config.run.loss, data.datasets);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    const std::vector<SweepRow> rows{row};
    emit_csv(rows, opts.out, "run");
    emit_plot_data(rows, std::filesystem::path(opts.out) / "plot.dat", "run");
    return report_rows(rows);
}

int do_sweep(const ExperimentConfig& config, const Options& opts) {
    if (!config.sweep) throw ConfigError("sweep: the config has no sweep section", exit_code::invalid_config, "sweep");
    const std::string name = config.sweep->parameter == SweepParameter::epsilon ? "epsilon" : "varsigma";
    const auto rows = run_sweep(config, *config.sweep, opts.workers);
    emit_csv(rows, opts.out, name);
    emit_plot_data(rows, std::filesystem::path(opts.out) / "plot.dat", name);
    return report_rows(rows);
}

int do_diagnose(const ExperimentConfig& config, const Options& opts) {
    const auto report = diagnose(config);
    std::error_code ec;
    std::filesystem::create_directories(opts.out, ec);
    if (ec) throw OutputError("cannot create " + opts.out + ": " + ec.message());
    const auto path = std::filesystem::path(opts.out) / "diagnostics.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + path.string());
    out << report.dump(2) << '\n';
    if (!out) throw OutputError("write failed for " + path.string());
    std::cout << report.dump(2) << '\n';
    return exit_code::ok;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Generalized ADMM experiments"};
    app.require_subcommand(1);
    Options opts;
    auto* run_cmd = app.add_subcommand("run", "single configuration");
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep");
    auto* diag_cmd = app.add_subcommand("diagnose", "VI diagnostics report");
    for (auto* cmd : {run_cmd, sweep_cmd, diag_cmd}) add_common(cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_code::ok : exit_code::invalid_config;
    }

    try {
        ExperimentConfig config = parse_config(opts.config);
        if (opts.seed) config.run.seed = *opts.seed;
        if (run_cmd->parsed()) return do_run(config, opts);
        if (sweep_cmd->parsed()) return do_sweep(config, opts);
        return do_diagnose(config, opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error [" << e.field() << "]: " << e.what() << '\n';
        return e.code();
    } catch (const OutputError& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return exit_code::io_failure;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return exit_code::solver_error;
    }
}

}  // namespace gadmm
