#include "gadmm/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "gadmm/core_model.hpp"
#include "gadmm/errors.hpp"
#include "gadmm/multiplier_updates.hpp"
#include "gadmm/prox_solver.hpp"
#include "gadmm/vi_diagnostics.hpp"

namespace gadmm {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw ConfigError(field + ": " + what, exit_code::invalid_config, field);
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const json& obj, const std::string& prefix, const std::set<std::string>& allowed) {
    if (!obj.is_object()) bad(prefix.empty() ? "<root>" : prefix, "expected an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key())) bad(join(prefix, item.key()), "unknown key");
}

double get_number(const json& obj, const std::string& key, const std::string& field, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) bad(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad(field, "must be finite");
    return x;
}

std::uint64_t get_count(const json& obj, const std::string& key, const std::string& field, std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) bad(field, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& field, std::string fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) bad(field, "expected a string");
    return v.get<std::string>();
}

// A scalar broadcast to every user, or an explicit per-user list.
std::vector<double> get_per_user(const json& obj, const std::string& key, const std::string& field, std::size_t n,
                                 double fallback) {
    if (!obj.contains(key)) return std::vector<double>(n, fallback);
    const json& v = obj.at(key);
    if (v.is_number()) return std::vector<double>(n, v.get<double>());
    if (!v.is_array()) bad(field, "expected a number or a list of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) bad(field, "expected a number or a list of numbers");
        out.push_back(e.get<double>());
    }
    if (out.size() != n) bad(field, "needs one entry per user (" + std::to_string(n) + ")");
    return out;
}

ConstraintSpec parse_constraint(const json& obj, std::size_t n) {
    check_keys(obj, "constraint", {"kind", "p", "epsilon", "adjacency"});
    const std::string kind = get_string(obj, "kind", "constraint.kind", "classical");
    if (kind == "classical") return Classical{};
    if (kind == "soft_norm") {
        SoftNorm s;
        s.p = static_cast<int>(get_count(obj, "p", "constraint.p", 2));
        if (s.p != 1 && s.p != 2) bad("constraint.p", "must be 1 or 2");
        s.epsilon = get_per_user(obj, "epsilon", "constraint.epsilon", n, 0.05);
        return s;
    }
    if (kind == "group") {
        Group g;
        if (!obj.contains("adjacency")) {
            // Ring by default.
            g.adjacency.resize(n);
            for (std::size_t i = 0; i < n && n > 1; ++i) {
                g.adjacency[i].push_back((i + n - 1) % n);
                if (n > 2) g.adjacency[i].push_back((i + 1) % n);
            }
            return g;
        }
        const json& adj = obj.at("adjacency");
        if (!adj.is_array()) bad("constraint.adjacency", "expected a list of neighbour lists");
        for (const auto& row : adj) {
            if (!row.is_array()) bad("constraint.adjacency", "expected a list of neighbour lists");
            std::vector<std::size_t> nb;
            for (const auto& m : row) {
                if (!m.is_number_integer() || m.get<std::int64_t>() < 0)
                    bad("constraint.adjacency", "neighbours must be user indices");
                nb.push_back(m.get<std::size_t>());
            }
            g.adjacency.push_back(std::move(nb));
        }
        return g;
    }
    bad("constraint.kind", "unknown constraint kind '" + kind + "'");
}

ProtectionSpec parse_protection(const json& obj, std::size_t n) {
    check_keys(obj, "protection", {"kind", "varsigma", "delta"});
    const std::string kind = get_string(obj, "kind", "protection.kind", "l2");
    if (kind == "none") return NoProtection{};
    if (kind != "l2") bad("protection.kind", "unknown protection kind '" + kind + "'");
    L2Protection p;
    p.varsigma = get_per_user(obj, "varsigma", "protection.varsigma", n, 0.0);
    p.delta = get_per_user(obj, "delta", "protection.delta", n, 0.0);
    return p;
}

MultiplierScheme parse_scheme(const json& obj) {
    check_keys(obj, "scheme",
               {"kind", "lambda0", "mu0", "tau", "delta", "max_backtracks", "squared_residual", "zeta0", "tau_n",
                "inner_iters"});
    const std::string kind = get_string(obj, "kind", "scheme.kind", "projection");
    if (kind == "fixed") {
        FixedMultipliers f;
        f.lambda0 = get_number(obj, "lambda0", "scheme.lambda0", f.lambda0);
        f.mu0 = get_number(obj, "mu0", "scheme.mu0", f.mu0);
        return f;
    }
    if (kind == "projection") {
        ProjectionScheme p;
        p.tau = get_number(obj, "tau", "scheme.tau", p.tau);
        return p;
    }
    if (kind == "hyperplane") {
        HyperplaneScheme h;
        h.delta = get_number(obj, "delta", "scheme.delta", h.delta);
        h.max_backtracks = static_cast<int>(get_count(obj, "max_backtracks", "scheme.max_backtracks", 40));
        if (obj.contains("squared_residual")) {
            if (!obj.at("squared_residual").is_boolean()) bad("scheme.squared_residual", "expected true or false");
            h.squared_residual = obj.at("squared_residual").get<bool>();
        }
        return h;
    }
    if (kind == "tikhonov") {
        TikhonovScheme t;
        t.zeta0 = get_number(obj, "zeta0", "scheme.zeta0", t.zeta0);
        t.tau_n = get_number(obj, "tau_n", "scheme.tau_n", t.tau_n);
        t.inner_iters = static_cast<int>(get_count(obj, "inner_iters", "scheme.inner_iters", 1));
        return t;
    }
    bad("scheme.kind", "unknown scheme kind '" + kind + "'");
}

InnerSolverConfig parse_inner(const json& obj) {
    check_keys(obj, "inner", {"step_size", "tolerance", "max_iters", "box_bound"});
    InnerSolverConfig c;
    if (obj.contains("step_size") && !obj.at("step_size").is_null())
        c.step_size = get_number(obj, "step_size", "inner.step_size", 0.0);
    c.tolerance = get_number(obj, "tolerance", "inner.tolerance", c.tolerance);
    c.max_iters = static_cast<int>(get_count(obj, "max_iters", "inner.max_iters", static_cast<std::uint64_t>(c.max_iters)));
    c.box_bound = get_number(obj, "box_bound", "inner.box_bound", c.box_bound);
    return c;
}

SweepSpec parse_sweep(const json& obj) {
    check_keys(obj, "sweep", {"parameter", "values"});
    SweepSpec s;
    const std::string p = get_string(obj, "parameter", "sweep.parameter", "epsilon");
    if (p == "epsilon") s.parameter = SweepParameter::epsilon;
    else if (p == "varsigma") s.parameter = SweepParameter::varsigma;
    else bad("sweep.parameter", "must be 'epsilon' or 'varsigma'");
    if (!obj.contains("values") || !obj.at("values").is_array()) bad("sweep.values", "expected a list of numbers");
    for (const auto& v : obj.at("values")) {
        if (!v.is_number()) bad("sweep.values", "expected a list of numbers");
        s.values.push_back(v.get<double>());
    }
    if (s.values.empty()) bad("sweep.values", "must not be empty");
    return s;
}

// Maps a validation failure to the config field it concerns.
std::string field_for(const std::string& message) {
    // More specific phrases first.
    static const std::pair<const char*, const char*> table[] = {
        {"inner step", "inner.step_size"},
        {"inner tolerance", "inner.tolerance"},
        {"inner max_iters", "inner.max_iters"},
        {"box bound", "inner.box_bound"},
        {"tau_n", "scheme.tau_n"},
        {"zeta0", "scheme.zeta0"},
        {"inner_iters", "scheme.inner_iters"},
        {"max_backtracks", "scheme.max_backtracks"},
        {"hyperplane delta", "scheme.delta"},
        {"projection tau", "scheme.tau"},
        {"fixed lambda", "scheme.lambda0"},
        {"soft-norm p", "constraint.p"},
        {"epsilon", "constraint.epsilon"},
        {"adjacency", "constraint.adjacency"},
        {"varsigma", "protection.varsigma"},
        {"delta", "protection.delta"},
        {"mu_step", "mu_step"},
        {"tolerance", "tolerance"},
        {"n_users", "n_users"},
        {"max_iterations", "max_iterations"},
    };
    for (const auto& [needle, field] : table)
        if (message.find(needle) != std::string::npos) return field;
    return "<config>";
}

std::string parameter_name(SweepParameter p) { return p == SweepParameter::epsilon ? "epsilon" : "varsigma"; }

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw OutputError("write failed for " + path.string());
}

std::string describe_inner(const InnerSolverConfig& inner) {
    return "step=" + (inner.step_size ? format_number(*inner.step_size) : std::string("auto")) +
           " tol=" + format_number(inner.tolerance) + " max_iters=" + std::to_string(inner.max_iters) +
           " box=" + format_number(inner.box_bound);
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

ExperimentConfig parse_config_json(const json& doc) {
    check_keys(doc, "",
               {"seed", "n_users", "samples_per_user", "dim", "noise_std", "loss", "constraint", "protection",
                "scheme", "mu_step", "tolerance", "max_iterations", "inner", "sweep", "protection_delta"});
    ExperimentConfig c;
    RunConfig& r = c.run;
    r.seed = get_count(doc, "seed", "seed", 0);
    r.n_users = get_count(doc, "n_users", "n_users", 5);
    if (r.n_users == 0) bad("n_users", "must be at least 1");
    c.data.samples_per_user = get_count(doc, "samples_per_user", "samples_per_user", c.data.samples_per_user);
    c.data.dim = get_count(doc, "dim", "dim", c.data.dim);
    if (c.data.samples_per_user == 0) bad("samples_per_user", "must be at least 1");
    if (c.data.dim == 0) bad("dim", "must be at least 1");
    c.data.noise_std = get_number(doc, "noise_std", "noise_std", c.data.noise_std);
    if (c.data.noise_std < 0.0) bad("noise_std", "must be >= 0");

    const std::string loss = get_string(doc, "loss", "loss", "linear");
    if (loss == "linear") r.loss = LossKind::linear;
    else if (loss == "logistic") r.loss = LossKind::logistic;
    else bad("loss", "unknown loss kind '" + loss + "'");

    if (doc.contains("constraint")) r.constraint = parse_constraint(doc.at("constraint"), r.n_users);
    if (doc.contains("protection")) r.protection = parse_protection(doc.at("protection"), r.n_users);
    if (doc.contains("scheme")) r.scheme = parse_scheme(doc.at("scheme"));
    else r.scheme = ProjectionScheme{};
    r.mu_step = get_number(doc, "mu_step", "mu_step", r.mu_step);
    r.tolerance = get_number(doc, "tolerance", "tolerance", r.tolerance);
    r.max_iterations = get_count(doc, "max_iterations", "max_iterations", r.max_iterations);
    if (doc.contains("inner")) r.inner = parse_inner(doc.at("inner"));
    if (doc.contains("sweep")) c.sweep = parse_sweep(doc.at("sweep"));
    c.protection_delta = get_number(doc, "protection_delta", "protection_delta", c.protection_delta);

    try {
        r.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what(), exit_code::invalid_config, field_for(e.what()));
    }
    if (c.sweep && c.sweep->parameter == SweepParameter::epsilon && !std::holds_alternative<SoftNorm>(r.constraint))
        bad("sweep.parameter", "an epsilon sweep needs the soft_norm constraint");
    return c;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string(), exit_code::missing_file, "--config");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what(), exit_code::invalid_config, "<syntax>");
    }
    return parse_config_json(doc);
}

json config_to_json(const ExperimentConfig& config) {
    const RunConfig& r = config.run;
    json doc;
    doc["seed"] = r.seed;
    doc["n_users"] = r.n_users;
    doc["samples_per_user"] = config.data.samples_per_user;
    doc["dim"] = config.data.dim;
    doc["noise_std"] = config.data.noise_std;
    doc["loss"] = to_string(r.loss);

    json c;
    if (std::holds_alternative<Classical>(r.constraint)) {
        c["kind"] = "classical";
    } else if (const auto* s = std::get_if<SoftNorm>(&r.constraint)) {
        c["kind"] = "soft_norm";
        c["p"] = s->p;
        c["epsilon"] = s->epsilon;
    } else {
        c["kind"] = "group";
        c["adjacency"] = std::get<Group>(r.constraint).adjacency;
    }
    doc["constraint"] = c;

    if (const auto* p = std::get_if<L2Protection>(&r.protection))
        doc["protection"] = {{"kind", "l2"}, {"varsigma", p->varsigma}, {"delta", p->delta}};
    else
        doc["protection"] = {{"kind", "none"}};

    json s;
    if (const auto* f = std::get_if<FixedMultipliers>(&r.scheme)) {
        s = {{"kind", "fixed"}, {"lambda0", f->lambda0}, {"mu0", f->mu0}};
    } else if (const auto* p = std::get_if<ProjectionScheme>(&r.scheme)) {
        s = {{"kind", "projection"}, {"tau", p->tau}};
    } else if (const auto* h = std::get_if<HyperplaneScheme>(&r.scheme)) {
        s = {{"kind", "hyperplane"},
             {"delta", h->delta},
             {"max_backtracks", h->max_backtracks},
             {"squared_residual", h->squared_residual}};
    } else {
        const auto& t = std::get<TikhonovScheme>(r.scheme);
        s = {{"kind", "tikhonov"}, {"zeta0", t.zeta0}, {"tau_n", t.tau_n}, {"inner_iters", t.inner_iters}};
    }
    doc["scheme"] = s;
    doc["mu_step"] = r.mu_step;
    doc["tolerance"] = r.tolerance;
    doc["max_iterations"] = r.max_iterations;
    json inner = {{"tolerance", r.inner.tolerance}, {"max_iters", r.inner.max_iters}, {"box_bound", r.inner.box_bound}};
    if (r.inner.step_size) inner["step_size"] = *r.inner.step_size;
    doc["inner"] = inner;
    if (config.sweep) doc["sweep"] = {{"parameter", parameter_name(config.sweep->parameter)}, {"values", config.sweep->values}};
    doc["protection_delta"] = config.protection_delta;
    return doc;
}

RunConfig with_sweep_value(const ExperimentConfig& config, SweepParameter parameter, double value) {
    RunConfig r = config.run;
    const std::size_t n = r.n_users;
    if (parameter == SweepParameter::epsilon) {
        auto* s = std::get_if<SoftNorm>(&r.constraint);
        if (s == nullptr) throw InvalidArgument("an epsilon sweep needs the soft-norm constraint");
        s->epsilon.assign(n, value);
    } else {
        L2Protection p;
        if (const auto* existing = std::get_if<L2Protection>(&r.protection)) p.delta = existing->delta;
        else p.delta.assign(n, config.protection_delta);
        p.varsigma.assign(n, value);
        r.protection = p;
    }
    r.validate();
    return r;
}

ExperimentData prepare_data(const ExperimentConfig& config) {
    const RunConfig& r = config.run;
    SyntheticData syn = generate_synthetic(r.seed, r.n_users, config.data.samples_per_user, config.data.dim,
                                           config.data.noise_std, r.loss);
    ExperimentData out;
    out.centralized = solve_centralized(r.loss, syn.datasets);
    out.datasets = std::move(syn.datasets);
    out.ground_truth = std::move(syn.ground_truth);
    return out;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const SweepSpec& sweep, unsigned workers) {
    if (sweep.values.empty()) throw InvalidArgument("sweep needs at least one value");
    const ExperimentData data = prepare_data(config);
    std::vector<SweepRow> rows(sweep.values.size());

    auto run_one = [&](std::size_t k) {
        SweepRow& row = rows[k];
        row.value = sweep.values[k];
        row.inner = config.run.inner;
        try {
            const RunConfig rc = with_sweep_value(config, sweep.parameter, row.value);
            RunOptions opts;
            opts.reference = data.centralized;
            row.outcome = run(rc, data.datasets, opts);
            row.delta = compute_delta(row.outcome->state, data.centralized, rc.loss, data.datasets);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    const std::size_t n_workers = std::max<std::size_t>(1, std::min<std::size_t>(workers, rows.size()));
    if (n_workers == 1) {
        for (std::size_t k = 0; k < rows.size(); ++k) run_one(k);
        return rows;
    }
    std::mutex mutex;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t k;
                {
                    const std::lock_guard<std::mutex> lock(mutex);
                    if (next == rows.size()) return;
                    k = next++;
                }
                run_one(k);
            }
        });
    }
    for (auto& t : pool) t.join();
    return rows;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& out_dir,
              const std::string& parameter_name) {
    if (rows.empty()) throw InvalidArgument("nothing to emit");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw OutputError("cannot create " + out_dir.string() + ": " + ec.message());

    const auto summary_path = out_dir / "summary.csv";
    auto summary = open_for_write(summary_path);
    summary << "value,iterations,delta_param,delta_objective,messages,converged,status\n";
    for (const auto& row : rows) {
        summary << format_number(row.value) << ',';
        if (row.outcome) {
            const auto& t = row.outcome->trace;
            summary << t.iterations_used << ',' << format_number(row.delta.param) << ','
                    << format_number(row.delta.objective) << ',' << t.messages.size() << ','
                    << (t.converged ? "true" : "false") << ',' << (t.converged ? "converged" : "max_iterations");
        } else {
            summary << ",,,,false,error";
        }
        summary << '\n';
    }
    finish(summary, summary_path);

    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!rows[k].outcome) continue;
        const auto path = out_dir / ("trace_" + std::to_string(k) + ".csv");
        auto out = open_for_write(path);
        out << "iteration,state_change,consensus_violation,delta_param,delta_objective,messages,lambda_min,lambda_max\n";
        for (const auto& rec : rows[k].outcome->trace.records) {
            out << rec.iteration << ',' << format_number(rec.state_change) << ','
                << format_number(rec.consensus_violation) << ',' << opt_number(rec.delta_param) << ','
                << opt_number(rec.delta_objective) << ',' << rec.messages_sent << ',' << format_number(rec.lambda_min)
                << ',' << format_number(rec.lambda_max) << '\n';
        }
        finish(out, path);
    }

    const auto report_path = out_dir / "report.txt";
    auto report = open_for_write(report_path);
    report << "# Synthetic data. Absolute iteration counts and Delta values depend on the dataset\n"
              "# and step sizes, so numbers obtained on other data are not reproducible here.\n"
              "# Only the trends across the sweep are meaningful.\n";
    report << "parameter: " << parameter_name << '\n';
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& row = rows[k];
        report << "row " << k << ": " << parameter_name << '=' << format_number(row.value) << " inner["
               << describe_inner(row.inner) << ']';
        if (!row.error.empty()) report << " error: " << row.error;
        report << '\n';
    }
    finish(report, report_path);
}

void emit_plot_data(const std::vector<SweepRow>& rows, const std::filesystem::path& path,
                    const std::string& parameter_name) {
    if (rows.empty()) throw InvalidArgument("nothing to emit");
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw OutputError("cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    auto out = open_for_write(path);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (k > 0) out << "\n\n";
        out << "# series " << k << ' ' << parameter_name << '=' << format_number(rows[k].value) << '\n';
        out << "# iteration delta_param\n";
        if (!rows[k].outcome) continue;
        for (const auto& rec : rows[k].outcome->trace.records)
            out << rec.iteration << ' ' << opt_number(rec.delta_param) << '\n';
    }
    finish(out, path);
}

json diagnose(const ExperimentConfig& config) {
    const RunConfig& rc = config.run;
    const ExperimentData data = prepare_data(config);
    const Problem problem{rc.loss, data.datasets, rc.constraint, rc.protection};
    json report;
    report["config"] = config_to_json(config);

    const UpsilonMatrix ups = build_upsilon(problem, true);
    json rows = json::array();
    for (Eigen::Index i = 0; i < ups.entries.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < ups.entries.cols(); ++j) row.push_back(ups.entries(i, j));
        rows.push_back(row);
    }
    report["upsilon"] = rows;
    if (rc.n_users <= 20) report["upsilon_is_p_matrix"] = is_p_matrix(ups.entries);
    else report["upsilon_is_p_matrix"] = nullptr;

    const auto nd = static_cast<Eigen::Index>(rc.n_users * config.data.dim);
    const SamplingDomain box{Vector::Constant(nd, -1.0), Vector::Constant(nd, 1.0), rc.seed};
    const auto mapping = [&](const Vector& w) { return robust_mapping(problem, w); };
    report["strong_monotonicity_estimate"] = estimate_strong_monotonicity(mapping, 64, box);

    json warnings = json::array();
    RunOptions opts;
    opts.reference = data.centralized;
    const RunOutcome outcome = run(rc, data.datasets, opts);
    const KKTResidual kkt = kkt_residual(outcome.state, problem);
    report["run"] = {{"iterations", outcome.trace.iterations_used}, {"converged", outcome.trace.converged}};
    report["kkt"] = {{"stationarity_norm", kkt.stationarity_norm},
                     {"equality_norm", kkt.equality_norm},
                     {"complementarity_gap", kkt.complementarity_gap},
                     {"dual_feasibility_violation", kkt.dual_feasibility_violation},
                     {"primal_violation", kkt.primal_violation}};

    if (std::holds_alternative<SoftNorm>(rc.constraint)) {
        // phi as a function of lambda, with local solves anchored at the final state.
        const auto phi_at = [&](const Vector& lam) {
            SystemState probe = outcome.state;
            probe.lambda = lam;
            for (std::size_t n = 0; n < probe.n_users(); ++n)
                probe.weights[n] = solve_local(n, probe, outcome.state.weights[n], problem, rc.inner);
            return phi(probe, rc.constraint);
        };
        const auto n = static_cast<Eigen::Index>(rc.n_users);
        const SamplingDomain lam_box{Vector::Zero(n), Vector::Constant(n, 1.0), rc.seed + 1};
        try {
            const double c_coc = estimate_cocoercivity(phi_at, 24, lam_box);
            report["cocoercivity_estimate"] = c_coc;
            if (const auto* t = std::get_if<TikhonovScheme>(&rc.scheme); t && c_coc > 0.0) {
                const double zeta = t->zeta(0);
                if (!tikhonov_step_valid(t->tau_n, zeta, c_coc))
                    warnings.push_back("tau_n=" + format_number(t->tau_n) + " is below the co-coercivity threshold " +
                                       format_number(tikhonov_step_threshold(zeta, c_coc)));
            }
            if (c_coc <= 0.0) warnings.push_back("phi is not co-coercive on the sampled box");
        } catch (const InsufficientSamples& e) {
            report["cocoercivity_estimate"] = nullptr;
            warnings.push_back(e.what());
        }
    }
    report["warnings"] = warnings;
    return report;
}

}  // namespace gadmm
