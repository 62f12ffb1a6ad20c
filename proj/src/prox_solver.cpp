#include "gadmm/prox_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "gadmm/consensus_constraints.hpp"
#include "gadmm/errors.hpp"
#include "gadmm/losses.hpp"
#include "gadmm/robust_protection.hpp"

namespace gadmm {

namespace {

constexpr int kMaxHalvings = 60;

// Splits the local objective into a smooth part and a prox-friendly part
// (box indicator plus, for the p = 1 soft norm, lambda_n ||w - z||_1).
class LocalModel {
public:
    LocalModel(std::size_t n, const SystemState& state, const Vector& w_prev, const Problem& problem, double box)
        : n_(n), state_(state), w_prev_(w_prev), problem_(problem), box_(box) {
        if (n >= problem.n_users() || n >= state.n_users()) throw InvalidArgument("user index out of range");
        if (w_prev.size() != state.consensus.size()) throw InvalidArgument("w_prev dimension mismatch");
        lambda_ = state.lambda(static_cast<Eigen::Index>(n));
        mu_ = state.mu(static_cast<Eigen::Index>(n));
        if (const auto* s = std::get_if<SoftNorm>(&problem.constraint)) {
            p_ = s->p;
            epsilon_ = s->epsilon.at(n);
        }
        multiplicity_ = static_cast<double>(equality_multiplicity(problem.constraint, n));
    }

    double smooth_value(const Vector& w) const {
        double v = loss_value(problem_.loss, w, data()) + 0.5 * (w - w_prev_).squaredNorm();
        v += protection_value(problem_.protection, n_, state_.weights);
        if (multiplicity_ > 0.0)
            v += mu_ * eval_equality(problem_.constraint, n_, w, state_.consensus, state_.weights).sum();
        if (p_ == 2) v += lambda_ * ((w - state_.consensus).squaredNorm() - epsilon_);
        if (p_ == 1) v -= lambda_ * epsilon_;
        return v;
    }

    Vector smooth_gradient(const Vector& w) const {
        Vector g = loss_gradient(problem_.loss, w, data()) + (w - w_prev_);
        if (multiplicity_ > 0.0) g.array() += mu_ * multiplicity_;
        if (p_ == 2) g += 2.0 * lambda_ * (w - state_.consensus);
        return g;
    }

    double nonsmooth_value(const Vector& w) const {
        if (p_ == 1) return lambda_ * (w - state_.consensus).lpNorm<1>();
        return 0.0;
    }

    // Separable, so the prox of (l1 + box) is the clamped soft-threshold.
    Vector prox(const Vector& v, double step) const {
        Vector out = v;
        if (p_ == 1 && lambda_ > 0.0) {
            const double t = step * lambda_;
            for (Eigen::Index i = 0; i < out.size(); ++i) {
                const double u = v(i) - state_.consensus(i);
                const double shrunk = std::copysign(std::max(std::abs(u) - t, 0.0), u);
                out(i) = state_.consensus(i) + shrunk;
            }
        }
        return out.cwiseMax(-box_).cwiseMin(box_);
    }

    double default_step() const {
        const double lip = curvature_bounds(problem_.loss, data()).lipschitz;
        return 1.0 / (lip + 1.0 + (p_ == 2 ? 2.0 * lambda_ : 0.0));
    }

    const UserDataset& data() const { return problem_.datasets[n_]; }
    int p() const { return p_; }
    double lambda() const { return lambda_; }
    double mu() const { return mu_; }
    double multiplicity() const { return multiplicity_; }

private:
    std::size_t n_;
    const SystemState& state_;
    const Vector& w_prev_;
    const Problem& problem_;
    double box_;
    double lambda_ = 0.0;
    double mu_ = 0.0;
    int p_ = 0;  // 0: no inequality term
    double epsilon_ = 0.0;
    double multiplicity_ = 0.0;
};

bool inside_box(const Vector& w, double box) { return w.size() == 0 || w.cwiseAbs().maxCoeff() <= box; }

}  // namespace

double local_objective(std::size_t n, const Vector& w, const SystemState& state, const Vector& w_prev_n,
                       const Problem& problem) {
    if (n >= problem.n_users()) throw InvalidArgument("user index out of range");
    const Vector& z = state.consensus;
    const auto idx = static_cast<Eigen::Index>(n);
    double v = robust_objective(problem.loss, problem.protection, n, w, problem.datasets[n], state.weights);
    v += state.mu(idx) * eval_equality(problem.constraint, n, w, z, state.weights).sum();
    v += state.lambda(idx) * eval_inequality(problem.constraint, n, w, z);
    v += 0.5 * (w - w_prev_n).squaredNorm();
    return v;
}

std::optional<Vector> solve_local_closed_form(std::size_t n, const SystemState& state, const Vector& w_prev_n,
                                              const Problem& problem) {
    if (problem.loss != LossKind::linear) return std::nullopt;
    LocalModel model(n, state, w_prev_n, problem, std::numeric_limits<double>::infinity());
    if (model.p() == 1) return std::nullopt;

    const UserDataset& data = model.data();
    const auto d = static_cast<Eigen::Index>(data.dim());
    const double curvature = 1.0 + (model.p() == 2 ? 2.0 * model.lambda() : 0.0);
    Matrix h = data.features().transpose() * data.features();
    h.diagonal().array() += curvature;
    Vector rhs = data.features().transpose() * data.labels() + w_prev_n;
    if (model.p() == 2) rhs += 2.0 * model.lambda() * state.consensus;
    rhs.array() -= model.mu() * model.multiplicity();
    Eigen::LLT<Matrix> llt(h);
    if (llt.info() != Eigen::Success) return std::nullopt;
    Vector w = llt.solve(rhs);
    if (w.size() != d || !w.allFinite()) return std::nullopt;
    return w;
}

Vector solve_local_iterative(std::size_t n, const SystemState& state, const Vector& w_prev_n, const Problem& problem,
                             const InnerSolverConfig& config) {
    const LocalModel model(n, state, w_prev_n, problem, config.box_bound);
    const double base_step = config.step_size.value_or(model.default_step());

    Vector w = model.prox(w_prev_n, base_step);
    double f = model.smooth_value(w);
    if (!std::isfinite(f)) throw InnerDivergence("local objective is not finite at the starting point", n);

    for (int k = 0; k < config.max_iters; ++k) {
        const Vector g = model.smooth_gradient(w);
        double step = base_step;
        bool accepted = false;
        Vector next;
        double f_next = 0.0;
        for (int h = 0; h <= kMaxHalvings; ++h, step *= 0.5) {
            next = model.prox(w - step * g, step);
            const Vector delta = next - w;
            f_next = model.smooth_value(next);
            const double bound = f + g.dot(delta) + delta.squaredNorm() / (2.0 * step);
            if (std::isfinite(f_next) && f_next <= bound + 1e-12 * (1.0 + std::abs(f))) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            const double mapping = (model.prox(w - base_step * g, base_step) - w).norm() / base_step;
            if (mapping <= 1e3 * config.tolerance) return w;
            throw InnerDivergence("backtracking exhausted without decreasing the local objective (gradient mapping " +
                                      std::to_string(mapping) + ")",
                                  n);
        }
        const double moved = (next - w).norm();
        w = std::move(next);
        f = f_next;
        if (!w.allFinite()) throw InnerDivergence("non-finite inner iterate", n);
        if (moved / step <= config.tolerance) break;
    }
    return w;
}

Vector solve_local(std::size_t n, const SystemState& state, const Vector& w_prev_n, const Problem& problem,
                   const InnerSolverConfig& config) {
    if (auto closed = solve_local_closed_form(n, state, w_prev_n, problem); closed && inside_box(*closed, config.box_bound))
        return *closed;
    return solve_local_iterative(n, state, w_prev_n, problem, config);
}

namespace {

// argmin_z 0.5 (z - z0)^2 + sum_n weight_n |z - anchor_n|, exact.
double l1_consensus_1d(double z0, const std::vector<double>& anchors, const std::vector<double>& weight) {
    auto objective = [&](double z) {
        double v = 0.5 * (z - z0) * (z - z0);
        for (std::size_t n = 0; n < anchors.size(); ++n) v += weight[n] * std::abs(z - anchors[n]);
        return v;
    };
    std::vector<double> breaks = anchors;
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::vector<double> candidates = breaks;
    // One stationary point per open interval between consecutive breakpoints.
    for (std::size_t k = 0; k <= breaks.size(); ++k) {
        const double lo = k == 0 ? -std::numeric_limits<double>::infinity() : breaks[k - 1];
        const double hi = k == breaks.size() ? std::numeric_limits<double>::infinity() : breaks[k];
        double probe;
        if (std::isinf(lo) && std::isinf(hi)) probe = 0.0;
        else if (std::isinf(lo)) probe = hi - 1.0;
        else if (std::isinf(hi)) probe = lo + 1.0;
        else probe = 0.5 * (lo + hi);
        double z = z0;
        for (std::size_t n = 0; n < anchors.size(); ++n) z -= weight[n] * (probe > anchors[n] ? 1.0 : -1.0);
        if (z > lo && z < hi) candidates.push_back(z);
    }
    double best = z0;
    double best_value = objective(z0);
    for (double c : candidates) {
        const double v = objective(c);
        if (v < best_value) {
            best_value = v;
            best = c;
        }
    }
    return best;
}

}  // namespace

Vector update_z(const SystemState& state, const ConstraintSpec& spec) {
    if (state.n_users() == 0) throw InvalidArgument("update_z needs at least one user");
    const Vector& z_prev = state.consensus;
    if (std::holds_alternative<Classical>(spec)) {
        Vector sum = Vector::Zero(z_prev.size());
        for (const auto& w : state.weights) sum += w;
        return sum / static_cast<double>(state.n_users());
    }
    if (const auto* s = std::get_if<SoftNorm>(&spec)) {
        if (s->p == 2) {
            Vector num = z_prev;
            double den = 1.0;
            for (std::size_t n = 0; n < state.n_users(); ++n) {
                const double l = state.lambda(static_cast<Eigen::Index>(n));
                num += 2.0 * l * state.weights[n];
                den += 2.0 * l;
            }
            return num / den;
        }
        Vector z(z_prev.size());
        std::vector<double> anchors(state.n_users());
        std::vector<double> weight(state.lambda.data(), state.lambda.data() + state.lambda.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            for (std::size_t n = 0; n < state.n_users(); ++n) anchors[n] = state.weights[n](i);
            z(i) = l1_consensus_1d(z_prev(i), anchors, weight);
        }
        return z;
    }
    return z_prev;
}

}  // namespace gadmm
