#pragma once

#include <span>

#include "gadmm/types.hpp"

namespace gadmm {

/// varsigma_n * sum_{m != n} ||w_m||^2 + delta_n, or 0 without protection.
/// Only w_{-n} enters: all_weights[n] is ignored.
double protection_value(const ProtectionSpec& spec, std::size_t n, std::span<const Vector> all_weights);

/// Phi_n = V_n(w_n) + protection_value(n). all_weights supplies w_{-n}.
double robust_objective(LossKind loss, const ProtectionSpec& spec, std::size_t n, const Vector& w_n,
                        const UserDataset& data, std::span<const Vector> all_weights);

/// 2 varsigma_n: curvature of Phi_n along any other user's weights, used as the
/// off-diagonal coupling bound of the Upsilon matrix.
double protection_cross_coupling(const ProtectionSpec& spec, std::size_t n);

}  // namespace gadmm
