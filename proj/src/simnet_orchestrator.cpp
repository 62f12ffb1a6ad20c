#include "gadmm/simnet_orchestrator.hpp"

#include <algorithm>

#include "gadmm/consensus_constraints.hpp"
#include "gadmm/core_model.hpp"
#include "gadmm/errors.hpp"
#include "gadmm/multiplier_updates.hpp"
#include "gadmm/prox_solver.hpp"

namespace gadmm {

namespace {

// Message bookkeeping for one synchronous round.
class Network {
public:
    Network(const RunConfig& config, std::size_t dim, bool variable)
        : constraint_(config.constraint), n_users_(config.n_users), dim_(dim), variable_(variable) {}

    void uplink(RunTrace& trace, std::size_t round) const {
        if (const auto* g = std::get_if<Group>(&constraint_)) {
            for (std::size_t n = 0; n < n_users_; ++n)
                for (std::size_t m : g->adjacency[n]) trace.messages.push_back({round, n, m, PayloadKind::weights, dim_});
            return;
        }
        for (std::size_t n = 0; n < n_users_; ++n)
            trace.messages.push_back({round, n, std::nullopt, PayloadKind::weights, dim_});
    }

    void multipliers(RunTrace& trace, std::size_t round) const {
        if (!variable_) return;
        for (std::size_t n = 0; n < n_users_; ++n)
            trace.messages.push_back({round, n, std::nullopt, PayloadKind::multipliers, 2});
    }

    void broadcast(RunTrace& trace, std::size_t round) const {
        if (std::holds_alternative<Group>(constraint_)) return;
        for (std::size_t n = 0; n < n_users_; ++n)
            trace.messages.push_back({round, std::nullopt, n, PayloadKind::consensus, dim_});
    }

private:
    const ConstraintSpec& constraint_;
    std::size_t n_users_;
    std::size_t dim_;
    bool variable_;
};

double consensus_violation(const SystemState& state, const ConstraintSpec& spec) {
    double worst = 0.0;
    for (std::size_t n = 0; n < state.n_users(); ++n) {
        const double eq = eval_equality(spec, n, state.weights[n], state.consensus, state.weights).norm();
        const double ineq = std::max(0.0, eval_inequality(spec, n, state.weights[n], state.consensus));
        worst = std::max({worst, eq, ineq});
    }
    return worst;
}

Vector solve_user(std::size_t round, std::size_t n, const SystemState& snapshot, const Problem& problem,
                  const InnerSolverConfig& inner) {
    try {
        return solve_local(n, snapshot, snapshot.weights[n], problem, inner);
    } catch (const InnerDivergence& e) {
        throw InnerDivergence(std::string(e.what()) + " (user " + std::to_string(n) + ", round " +
                                  std::to_string(round) + ")",
                              n, round);
    }
}

// phi as a function of trial multipliers: every user re-solves its local problem
// from the round snapshot with lambda replaced, and reports -g2 against the
// snapshot's z. The evaluation at the snapshot's own lambda is cached.
class PhiOracle {
public:
    PhiOracle(std::size_t round, const SystemState& snapshot, const Problem& problem, const InnerSolverConfig& inner,
              Vector phi_at_snapshot)
        : round_(round), snapshot_(snapshot), problem_(problem), inner_(inner), cached_(std::move(phi_at_snapshot)) {}

    Vector operator()(const Vector& trial) const {
        if (trial.size() == snapshot_.lambda.size() && trial == snapshot_.lambda) return cached_;
        SystemState probe = snapshot_;
        probe.lambda = trial.cwiseMax(0.0);
        for (std::size_t n = 0; n < probe.n_users(); ++n)
            probe.weights[n] = solve_user(round_, n, probe, problem_, inner_);
        return phi(probe, problem_.constraint);
    }

private:
    std::size_t round_;
    const SystemState& snapshot_;
    const Problem& problem_;
    const InnerSolverConfig& inner_;
    Vector cached_;
};

void update_multipliers(std::size_t round, SystemState& state, const SystemState& snapshot, const RunConfig& config,
                        const Problem& problem) {
    const Vector phi_now = phi(state, config.constraint);
    const PhiOracle oracle(round, snapshot, problem, config.inner, phi_now);

    if (const auto* p = std::get_if<ProjectionScheme>(&config.scheme)) {
        state.lambda = projection_update(snapshot.lambda, phi_now, p->tau);
    } else if (const auto* h = std::get_if<HyperplaneScheme>(&config.scheme)) {
        state.lambda = hyperplane_update(snapshot.lambda, std::cref(oracle), *h);
    } else if (const auto* t = std::get_if<TikhonovScheme>(&config.scheme)) {
        state.lambda = tikhonov_update(snapshot.lambda, std::cref(oracle), t->zeta(round - 1), t->tau_n, t->inner_iters);
    }

    if (std::holds_alternative<SoftNorm>(config.constraint)) return;
    for (std::size_t n = 0; n < state.n_users(); ++n) {
        const double g1 = eval_equality(config.constraint, n, state.weights[n], state.consensus, state.weights).sum();
        state.mu(static_cast<Eigen::Index>(n)) += config.mu_step * g1;
    }
}

RunOutcome run_rounds(const RunConfig& config, const std::vector<UserDataset>& datasets, const RunOptions& options,
                      bool variable) {
    config.validate();
    if (datasets.size() != config.n_users)
        throw InvalidArgument("config expects " + std::to_string(config.n_users) + " users but got " +
                              std::to_string(datasets.size()) + " datasets");
    Problem problem{config.loss, datasets, config.constraint, config.protection};
    const std::size_t d = problem.dim();
    for (const auto& ds : datasets)
        if (ds.dim() != d) throw InvalidArgument("datasets disagree on the feature dimension");
    if (options.reference && static_cast<std::size_t>(options.reference->size()) != d)
        throw InvalidArgument("reference solution has the wrong dimension");

    RunOutcome out;
    SystemState& state = out.state;
    RunTrace& trace = out.trace;
    state = init_state(config, d);
    const Network net(config, d, variable);

    for (std::size_t round = 1; round <= config.max_iterations; ++round) {
        const SystemState snapshot = state;

        // Every user solves against the previous round's snapshot.
        for (std::size_t n = 0; n < config.n_users; ++n) {
            if (options.observer) options.observer(round, n, snapshot.iteration);
            state.weights[n] = solve_user(round, n, snapshot, problem, config.inner);
        }
        net.uplink(trace, round);
        // multipliers see the fresh weights but the old z
        if (variable) {
            update_multipliers(round, state, snapshot, config, problem);
            net.multipliers(trace, round);
        }
        state.consensus = update_z(state, config.constraint);
        state.iteration = round;
        net.broadcast(trace, round);

        IterationRecord rec;
        rec.iteration = round;
        rec.weight_change.reserve(config.n_users);
        for (std::size_t n = 0; n < config.n_users; ++n)
            rec.weight_change.push_back((state.weights[n] - snapshot.weights[n]).norm());
        rec.state_change = state_distance(snapshot, state);
        rec.consensus_violation = consensus_violation(state, config.constraint);
        if (options.reference) {
            const Delta delta = compute_delta(state, *options.reference, config.loss, datasets);
            rec.delta_param = delta.param;
            rec.delta_objective = delta.objective;
        }
        rec.messages_sent = trace.messages.size();
        rec.lambda_min = state.lambda.minCoeff();
        rec.lambda_max = state.lambda.maxCoeff();
        trace.records.push_back(std::move(rec));
        trace.iterations_used = round;

        if (has_converged(snapshot, state, config.tolerance)) {
            trace.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace

RunOutcome run_fixed_multipliers(const RunConfig& config, const std::vector<UserDataset>& datasets,
                          const RunOptions& options) {
    if (!is_fixed(config.scheme)) throw InvalidArgument("run_fixed_multipliers needs the fixed multiplier scheme");
    return run_rounds(config, datasets, options, false);
}

RunOutcome run_variable_multipliers(const RunConfig& config, const std::vector<UserDataset>& datasets,
                          const RunOptions& options) {
    if (is_fixed(config.scheme)) throw InvalidArgument("run_variable_multipliers needs a variable multiplier scheme");
    return run_rounds(config, datasets, options, true);
}

RunOutcome run(const RunConfig& config, const std::vector<UserDataset>& datasets, const RunOptions& options) {
    return is_fixed(config.scheme) ? run_fixed_multipliers(config, datasets, options)
                                   : run_variable_multipliers(config, datasets, options);
}

bool has_converged(const SystemState& prev, const SystemState& curr, double zeta) {
    return state_distance(prev, curr) <= zeta;
}

std::size_t messages_per_round(const RunConfig& config) {
    std::size_t count = 0;
    if (const auto* g = std::get_if<Group>(&config.constraint)) {
        for (const auto& nb : g->adjacency) count += nb.size();
    } else {
        count = 2 * config.n_users;
    }
    if (!is_fixed(config.scheme)) count += config.n_users;
    return count;
}

}  // namespace gadmm
