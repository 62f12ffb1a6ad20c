#pragma once

#include <vector>

#include "gadmm/types.hpp"

namespace gadmm {

/// Minimiser of sum_n V_n(w) over the pooled data. Linear: normal equations
/// (ridge 1e-10 if singular). Logistic: gradient descent until the gradient
/// norm drops below `tolerance`; throws NotConverged otherwise.
Vector solve_centralized(LossKind loss, const std::vector<UserDataset>& datasets, double tolerance = 1e-8,
                         std::size_t max_iters = 200000);

double centralized_objective(LossKind loss, const std::vector<UserDataset>& datasets, const Vector& w);

struct Delta {
    double param = 0.0;      // mean_n ||w_n - w*|| / max(||w*||, 1e-12)
    double objective = 0.0;  // (F(mean w) - F(w*)) / max(|F(w*)|, 1e-12)
};

Delta compute_delta(const SystemState& state, const Vector& w_star, LossKind loss,
                    const std::vector<UserDataset>& datasets);

/// Parameter-space part only; needs no data.
double delta_param(const SystemState& state, const Vector& w_star);

}  // namespace gadmm
