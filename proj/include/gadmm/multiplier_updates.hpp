#pragma once

#include <functional>

#include "gadmm/types.hpp"

namespace gadmm {

using PhiEvaluator = std::function<Vector(const Vector&)>;

/// NCP slack phi_n = -g2_n(w_n, z). Positive means the soft constraint holds
/// with room to spare; vacuous inequalities give zeros.
Vector phi(const SystemState& state, const ConstraintSpec& spec);

/// lambda' = max(0, lambda - tau * phi).
Vector projection_update(const Vector& lambda, const Vector& phi_vals, double tau);

/// One hyperplane-projection step:
///  1. r = lambda - [lambda - phi(lambda)]^+
///  2. smallest l >= 1 with r^T phi(lambda - 2^-l r) >= delta ||r||^2
///  3. project lambda onto {x : phi(y)^T (x - y) = 0}, y = lambda - 2^-l r, then clamp at 0.
///
/// Returns lambda unchanged if r = 0 and [lambda - phi(lambda)]^+ if phi(y) = 0.
/// Throws StepSearchFailed after scheme.max_backtracks trials.
Vector hyperplane_update(const Vector& lambda, const PhiEvaluator& phi_at, const HyperplaneScheme& scheme);

/// Tikhonov-regularised inner loop with phi frozen at the input lambda:
///   hat^{l+1} = [hat^l - (phi(lambda) + zeta * hat^l) / tau_n]^+,  hat^0 = lambda.
Vector tikhonov_update(const Vector& lambda, const PhiEvaluator& phi_at, double zeta, double tau_n,
                       int inner_iters);

/// (1/c_coc + zeta)^2 / (2 zeta).
double tikhonov_step_threshold(double zeta, double c_coc);

/// tau_n > tikhonov_step_threshold(zeta, c_coc), strictly.
bool tikhonov_step_valid(double tau_n, double zeta, double c_coc);

}  // namespace gadmm
