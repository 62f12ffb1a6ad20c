#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gadmm/centralized_baseline.hpp"
#include "gadmm/errors.hpp"
#include "gadmm/simnet_orchestrator.hpp"
#include "gadmm/types.hpp"

namespace gadmm {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int missing_file = 1;
inline constexpr int invalid_config = 2;
inline constexpr int io_failure = 3;
inline constexpr int solver_error = 4;
}  // namespace exit_code

/// Config problems; carries the process exit code and the offending field.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int code, std::string field = {})
        : Error(what), code_(code), field_(std::move(field)) {}
    int code() const noexcept { return code_; }
    const std::string& field() const noexcept { return field_; }

private:
    int code_;
    std::string field_;
};

class OutputError : public Error {
public:
    using Error::Error;
};

struct DataConfig {
    std::size_t samples_per_user = 20;
    std::size_t dim = 10;
    double noise_std = 0.1;
};

enum class SweepParameter { epsilon, varsigma };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::epsilon;
    std::vector<double> values;
};

struct ExperimentConfig {
    RunConfig run;
    DataConfig data;
    std::optional<SweepSpec> sweep;
    // delta_n used when a varsigma sweep adds protection to an unprotected config.
    double protection_delta = 0.1;
};

ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// A config with the sweep parameter set to `value` for every user.
RunConfig with_sweep_value(const ExperimentConfig& config, SweepParameter parameter, double value);

struct SweepRow {
    double value = 0.0;
    std::optional<RunOutcome> outcome;
    Delta delta;
    std::string error;  // empty when the run completed
    InnerSolverConfig inner;
};

struct ExperimentData {
    std::vector<UserDataset> datasets;
    Vector ground_truth;
    Vector centralized;
};

/// Synthetic data from the config's seed plus the centralized reference solution.
ExperimentData prepare_data(const ExperimentConfig& config);

/// One full orchestration per value, all sharing the same data. Rows come back
/// in input order regardless of `workers`; per-run failures land in SweepRow::error.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const SweepSpec& sweep, unsigned workers = 1);

/// summary.csv plus trace_<k>.csv per row, and report.txt describing the run.
void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& out_dir,
              const std::string& parameter_name = "value");

/// Whitespace-separated (iteration, delta) columns, one '#'-headed block per row.
void emit_plot_data(const std::vector<SweepRow>& rows, const std::filesystem::path& path,
                    const std::string& parameter_name = "value");

/// Diagnostics report for one configuration: Upsilon, P-matrix verdict,
/// empirical monotonicity constants and the KKT residual of a full run.
nlohmann::json diagnose(const ExperimentConfig& config);

std::string format_number(double value);

/// Entry point of the command-line tool; returns the process exit code.
int cli_main(int argc, char** argv);

}  // namespace gadmm
