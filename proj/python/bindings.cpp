#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gadmm/centralized_baseline.hpp"
#include "gadmm/core_model.hpp"
#include "gadmm/experiments.hpp"
#include "gadmm/multiplier_updates.hpp"
#include "gadmm/simnet_orchestrator.hpp"
#include "gadmm/vi_diagnostics.hpp"

namespace py = pybind11;
using namespace gadmm;

namespace {

using PyDataset = std::pair<Matrix, Vector>;

LossKind loss_from(const std::string& name) {
    if (name == "linear") return LossKind::linear;
    if (name == "logistic") return LossKind::logistic;
    throw InvalidArgument("unknown loss '" + name + "'");
}

std::vector<UserDataset> to_datasets(const std::vector<PyDataset>& in) {
    std::vector<UserDataset> out;
    out.reserve(in.size());
    for (const auto& [x, y] : in) out.emplace_back(x, y);
    return out;
}

std::vector<PyDataset> from_datasets(const std::vector<UserDataset>& in) {
    std::vector<PyDataset> out;
    for (const auto& ds : in) out.emplace_back(ds.features(), ds.labels());
    return out;
}

ExperimentConfig config_from(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what(), exit_code::invalid_config, "<syntax>");
    }
    return parse_config_json(doc);
}

py::dict outcome_dict(const RunOutcome& out) {
    py::list records;
    for (const auto& r : out.trace.records) {
        py::dict d;
        d["iteration"] = r.iteration;
        d["state_change"] = r.state_change;
        d["consensus_violation"] = r.consensus_violation;
        d["delta_param"] = r.delta_param;
        d["delta_objective"] = r.delta_objective;
        d["messages"] = r.messages_sent;
        d["lambda_min"] = r.lambda_min;
        d["lambda_max"] = r.lambda_max;
        records.append(d);
    }
    py::dict d;
    d["weights"] = out.state.weights;
    d["consensus"] = out.state.consensus;
    d["lambda"] = out.state.lambda;
    d["mu"] = out.state.mu;
    d["iterations"] = out.trace.iterations_used;
    d["converged"] = out.trace.converged;
    d["messages"] = out.trace.messages.size();
    d["records"] = records;
    return d;
}

py::dict run_config(const std::string& text, const std::optional<std::vector<PyDataset>>& given) {
    const ExperimentConfig config = config_from(text);
    py::dict result;
    if (given) {
        py::gil_scoped_release release;
        const RunOutcome out = run(config.run, to_datasets(*given));
        py::gil_scoped_acquire acquire;
        return outcome_dict(out);
    }
    ExperimentData data;
    RunOutcome out;
    Delta delta;
    {
        py::gil_scoped_release release;
        data = prepare_data(config);
        RunOptions opts;
        opts.reference = data.centralized;
        out = run(config.run, data.datasets, opts);
        delta = compute_delta(out.state, data.centralized, config.run.loss, data.datasets);
    }
    result = outcome_dict(out);
    result["centralized"] = data.centralized;
    result["delta_param"] = delta.param;
    result["delta_objective"] = delta.objective;
    return result;
}

py::list sweep_config(const std::string& text, unsigned workers, const std::optional<std::string>& out_dir) {
    const ExperimentConfig config = config_from(text);
    if (!config.sweep) throw ConfigError("sweep: the config has no sweep section", exit_code::invalid_config, "sweep");
    std::vector<SweepRow> rows;
    {
        py::gil_scoped_release release;
        rows = run_sweep(config, *config.sweep, workers);
        if (out_dir) {
            const std::string name = config.sweep->parameter == SweepParameter::epsilon ? "epsilon" : "varsigma";
            emit_csv(rows, *out_dir, name);
            emit_plot_data(rows, std::filesystem::path(*out_dir) / "plot.dat", name);
        }
    }
    py::list out;
    for (const auto& row : rows) {
        py::dict d = row.outcome ? outcome_dict(*row.outcome) : py::dict();
        d["value"] = row.value;
        d["error"] = row.error.empty() ? py::object(py::none()) : py::object(py::str(row.error));
        if (row.outcome) {
            d["delta_param"] = row.delta.param;
            d["delta_objective"] = row.delta.objective;
        }
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_gadmm, m) {
    m.doc() = "Generalized ADMM with soft consensus constraints";

    auto base = py::register_exception<Error>(m, "GadmmError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<NotConverged>(m, "NotConverged", base.ptr());
    py::register_exception<StepSearchFailed>(m, "StepSearchFailed", base.ptr());

    m.def(
        "generate_synthetic",
        [](std::uint64_t seed, std::size_t n_users, std::size_t samples_per_user, std::size_t dim, double noise_std,
           const std::string& loss) {
            const auto syn = generate_synthetic(seed, n_users, samples_per_user, dim, noise_std, loss_from(loss));
            return py::make_tuple(from_datasets(syn.datasets), syn.ground_truth);
        },
        py::arg("seed"), py::arg("n_users"), py::arg("samples_per_user"), py::arg("dim"), py::arg("noise_std"),
        py::arg("loss") = "linear", "Seeded per-user (X, y) pairs and the ground-truth weights.");

    m.def(
        "solve_centralized",
        [](const std::vector<PyDataset>& datasets, const std::string& loss) {
            return solve_centralized(loss_from(loss), to_datasets(datasets));
        },
        py::arg("datasets"), py::arg("loss") = "linear");

    m.def(
        "compute_delta",
        [](const std::vector<Vector>& weights, const Vector& w_star, const std::vector<PyDataset>& datasets,
           const std::string& loss) {
            SystemState s;
            s.weights = weights;
            s.consensus = Vector::Zero(w_star.size());
            s.lambda = s.mu = Vector::Zero(static_cast<Eigen::Index>(weights.size()));
            const Delta d = compute_delta(s, w_star, loss_from(loss), to_datasets(datasets));
            return py::make_tuple(d.param, d.objective);
        },
        py::arg("weights"), py::arg("w_star"), py::arg("datasets"), py::arg("loss") = "linear");

    m.def("run", &run_config, py::arg("config_json"), py::arg("datasets") = py::none(),
          "Single orchestration. Without datasets the config's synthetic data is used and delta is reported.");
    m.def("run_sweep", &sweep_config, py::arg("config_json"), py::arg("workers") = 1u,
          py::arg("out_dir") = py::none());
    m.def(
        "diagnose", [](const std::string& text) { return diagnose(config_from(text)).dump(); }, py::arg("config_json"));
    m.def(
        "normalize_config", [](const std::string& text) { return config_to_json(config_from(text)).dump(); },
        py::arg("config_json"));

    m.def("is_p_matrix", &is_p_matrix, py::arg("m"));
    m.def("projection_update", &projection_update, py::arg("lam"), py::arg("phi"), py::arg("tau"));
    m.def(
        "hyperplane_update",
        [](const Vector& lam, const PhiEvaluator& phi_at, double delta, int max_backtracks, bool squared_residual) {
            return hyperplane_update(lam, phi_at, HyperplaneScheme{delta, max_backtracks, squared_residual});
        },
        py::arg("lam"), py::arg("phi"), py::arg("delta") = 0.5, py::arg("max_backtracks") = 40,
        py::arg("squared_residual") = true);
    m.def("tikhonov_update", &tikhonov_update, py::arg("lam"), py::arg("phi"), py::arg("zeta"), py::arg("tau_n"),
          py::arg("inner_iters") = 1);
    m.def("tikhonov_step_valid", &tikhonov_step_valid, py::arg("tau_n"), py::arg("zeta"), py::arg("c_coc"));
}
