#include "gadmm/multiplier_updates.hpp"

#include <cmath>

#include "gadmm/consensus_constraints.hpp"
#include "gadmm/errors.hpp"

namespace gadmm {

Vector phi(const SystemState& state, const ConstraintSpec& spec) {
    Vector out(static_cast<Eigen::Index>(state.n_users()));
    for (std::size_t n = 0; n < state.n_users(); ++n)
        out(static_cast<Eigen::Index>(n)) = -eval_inequality(spec, n, state.weights[n], state.consensus);
    return out;
}

Vector projection_update(const Vector& lambda, const Vector& phi_vals, double tau) {
    if (lambda.size() != phi_vals.size()) throw InvalidArgument("lambda and phi sizes differ");
    if (!(tau > 0.0)) throw InvalidArgument("tau must be > 0");
    return (lambda - tau * phi_vals).cwiseMax(0.0);
}

Vector hyperplane_update(const Vector& lambda, const PhiEvaluator& phi_at, const HyperplaneScheme& scheme) {
    if (!(scheme.delta > 0.0 && scheme.delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    const Vector phi0 = phi_at(lambda);
    if (phi0.size() != lambda.size()) throw InvalidArgument("phi evaluator returned the wrong size");

    const Vector quarter = (lambda - phi0).cwiseMax(0.0);
    const Vector residual = lambda - quarter;
    const double r_norm = residual.norm();
    if (r_norm == 0.0) return lambda;

    const double target = scheme.delta * (scheme.squared_residual ? r_norm * r_norm : r_norm);
    Vector trial;
    Vector phi_trial;
    bool found = false;
    int l = 1;
    for (; l <= scheme.max_backtracks; ++l) {
        const double step = std::ldexp(1.0, -l);
        trial = lambda - step * residual;
        phi_trial = phi_at(trial);
        if (residual.dot(phi_trial) >= target) {
            found = true;
            break;
        }
    }
    if (!found) throw StepSearchFailed("hyperplane line search exhausted", scheme.max_backtracks);

    const double phi_sq = phi_trial.squaredNorm();
    if (phi_sq == 0.0) return quarter;
    // Projection of lambda onto the separating hyperplane through `trial`.
    const double shift = phi_trial.dot(lambda - trial) / phi_sq;
    return (lambda - shift * phi_trial).cwiseMax(0.0);
}

Vector tikhonov_update(const Vector& lambda, const PhiEvaluator& phi_at, double zeta, double tau_n, int inner_iters) {
    if (!(zeta > 0.0) || !(tau_n > 0.0)) throw InvalidArgument("zeta and tau_n must be > 0");
    const Vector frozen = phi_at(lambda);
    if (frozen.size() != lambda.size()) throw InvalidArgument("phi evaluator returned the wrong size");
    Vector hat = lambda;
    for (int l = 0; l < inner_iters; ++l) hat = (hat - (frozen + zeta * hat) / tau_n).cwiseMax(0.0);
    return hat;
}

double tikhonov_step_threshold(double zeta, double c_coc) {
    if (!(zeta > 0.0) || !(c_coc > 0.0)) throw InvalidArgument("zeta and c_coc must be > 0");
    const double a = 1.0 / c_coc + zeta;
    return a * a / (2.0 * zeta);
}

bool tikhonov_step_valid(double tau_n, double zeta, double c_coc) {
    return tau_n > tikhonov_step_threshold(zeta, c_coc);
}

}  // namespace gadmm
