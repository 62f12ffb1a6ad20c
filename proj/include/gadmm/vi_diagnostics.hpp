#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gadmm/types.hpp"

namespace gadmm {

/// Where an Upsilon entry came from.
enum class UpsilonSource {
    curvature_min,           // alpha_n^min from curvature_bounds
    curvature_min_plus_prox, // alpha_n^min + 1 (proximal term)
    protection_coupling,     // -2 varsigma_n
};

struct UpsilonMatrix {
    Matrix entries;
    std::vector<std::vector<UpsilonSource>> sources;
};

/// Diagonal: alpha_n^min (+1 with include_proximal). Off-diagonal row n: -2 varsigma_n.
UpsilonMatrix build_upsilon(const Problem& problem, bool include_proximal = false);

/// Every principal minor strictly positive. Exhaustive, so limited to N <= 20.
bool is_p_matrix(const Matrix& m);

struct SamplingDomain {
    Vector lower;
    Vector upper;
    std::uint64_t seed = 0;
};

using VectorMap = std::function<Vector(const Vector&)>;

/// Empirical strong-monotonicity constant: the minimum over sampled pairs of
/// (x1 - x2)^T (F(x1) - F(x2)) / ||x1 - x2||^2. An upper bound on the true constant.
double estimate_strong_monotonicity(const VectorMap& F, std::size_t sample_count, const SamplingDomain& domain);

/// Empirical co-coercivity constant: the minimum over sampled pairs of
/// (l1 - l2)^T (phi(l1) - phi(l2)) / ||phi(l1) - phi(l2)||^2.
double estimate_cocoercivity(const VectorMap& phi_at, std::size_t sample_count, const SamplingDomain& domain);

/// Stacked VI mapping of the robust problem: block n is the gradient of
/// sum_m Phi_m with respect to w_n, which adds 2 sum_{m != n} varsigma_m w_n to
/// the loss gradient.
Vector robust_mapping(const Problem& problem, const Vector& stacked_weights);

/// Stacked loss gradients (the non-robust mapping).
Vector plain_mapping(const Problem& problem, const Vector& stacked_weights);

struct KKTResidual {
    double stationarity_norm = 0.0;
    double equality_norm = 0.0;
    double complementarity_gap = 0.0;
    double dual_feasibility_violation = 0.0;  // max(0, -min lambda)
    double primal_violation = 0.0;            // max_n max(0, g2_n)
};

/// Residuals of the Lagrangian system at `state`. Stationarity stacks, per user,
/// the gradient of the user's own objective plus multiplier terms, and for
/// server-based variants the z block.
KKTResidual kkt_residual(const SystemState& state, const Problem& problem);

/// M = M1 + M2 with M1 = blkdiag(jacobian, 0).
Matrix assemble_vi_matrix(const Matrix& jacobian, const Matrix& m2);

bool is_skew_symmetric(const Matrix& m);

}  // namespace gadmm
