#pragma once

#include <optional>

#include "gadmm/types.hpp"

namespace gadmm {

/// Proximal local objective of user n evaluated at w:
///
///   Phi_n(w; w_{-n}) + mu_n * sum(g1_n(w, z)) + lambda_n * g2_n(w, z) + 0.5 ||w - w_prev||^2
///
/// with z, multipliers and the other users' weights read from `state`.
double local_objective(std::size_t n, const Vector& w, const SystemState& state, const Vector& w_prev_n,
                       const Problem& problem);

/// Approximate minimiser of local_objective over the box [-B, B]^d.
///
/// Uses the closed form when the loss is linear, the penalty terms are at most
/// quadratic and the solution lies inside the box; otherwise runs
/// solve_local_iterative.
Vector solve_local(std::size_t n, const SystemState& state, const Vector& w_prev_n, const Problem& problem,
                   const InnerSolverConfig& config);

/// Projected (proximal) gradient descent with halving backtracking. The p = 1
/// soft-norm term is handled through its soft-thresholding prox.
///
/// Throws InnerDivergence when backtracking cannot produce a decrease while the
/// gradient mapping is still large, or when iterates become non-finite.
Vector solve_local_iterative(std::size_t n, const SystemState& state, const Vector& w_prev_n,
                             const Problem& problem, const InnerSolverConfig& config);

/// Normal-equation solution of the unconstrained local problem; nullopt when the
/// loss is logistic or the coupling is the p = 1 soft norm.
std::optional<Vector> solve_local_closed_form(std::size_t n, const SystemState& state, const Vector& w_prev_n,
                                              const Problem& problem);

/// Server-side consensus update, using state.weights (fresh) and state.consensus
/// as the previous z.
///
///  - Classical: average of the user weights.
///  - SoftNorm: argmin_z sum_n lambda_n ||w_n - z||_p^p + 0.5 ||z - z_prev||^2.
///  - Group: z unchanged.
Vector update_z(const SystemState& state, const ConstraintSpec& spec);

}  // namespace gadmm
