#pragma once

#include <cstdint>
#include <vector>

#include "gadmm/types.hpp"

namespace gadmm {

struct SyntheticData {
    std::vector<UserDataset> datasets;
    Vector ground_truth;
    double noise_std = 0.0;
};

/// Seeded synthetic regression/classification data.
///
/// Features and the ground-truth weights are standard normal. Linear labels
/// are X w* + noise; logistic labels are sign(X w* + noise) with sign(0) = +1.
/// The result is a pure function of the arguments.
SyntheticData generate_synthetic(std::uint64_t seed, std::size_t n_users, std::size_t samples_per_user,
                                 std::size_t dim, double noise_std, LossKind task);

/// Zero weights and consensus; multipliers from the fixed scheme, zero otherwise.
SystemState init_state(const RunConfig& config, std::size_t dim);

/// Euclidean norm of the stacked user-weight difference (consensus excluded).
double state_distance(const SystemState& a, const SystemState& b);

}  // namespace gadmm
