#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gadmm/centralized_baseline.hpp"
#include "gadmm/types.hpp"

namespace gadmm {

/// Called before every local solve with the round being computed, the user,
/// and the iteration stamp of the snapshot the solve reads from.
using SolveObserver = std::function<void(std::size_t round, std::size_t user, std::size_t snapshot_iteration)>;

struct RunOptions {
    // Centralized solution; when set, each trace record carries Delta.
    std::optional<Vector> reference;
    SolveObserver observer;
};

struct RunOutcome {
    SystemState state;
    RunTrace trace;
};

/// Fixed multipliers: local proximal solves, uplink, z update and broadcast,
/// until the stacked weight change is <= tolerance or max_iterations.
RunOutcome run_fixed_multipliers(const RunConfig& config, const std::vector<UserDataset>& datasets,
                          const RunOptions& options = {});

/// As run_fixed_multipliers plus a per-round multiplier update with the configured
/// Projection, Hyperplane or Tikhonov scheme.
RunOutcome run_variable_multipliers(const RunConfig& config, const std::vector<UserDataset>& datasets,
                          const RunOptions& options = {});

/// Dispatches on the scheme kind.
RunOutcome run(const RunConfig& config, const std::vector<UserDataset>& datasets, const RunOptions& options = {});

/// state_distance(prev, curr) <= zeta.
bool has_converged(const SystemState& prev, const SystemState& curr, double zeta);

/// Messages exchanged in one round; see README for the accounting.
std::size_t messages_per_round(const RunConfig& config);

}  // namespace gadmm
