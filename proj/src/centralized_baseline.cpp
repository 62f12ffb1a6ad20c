#include "gadmm/centralized_baseline.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "gadmm/errors.hpp"
#include "gadmm/losses.hpp"

namespace gadmm {

namespace {

constexpr double kFloor = 1e-12;

std::size_t shared_dim(const std::vector<UserDataset>& datasets) {
    if (datasets.empty()) throw InvalidArgument("no datasets");
    const std::size_t d = datasets.front().dim();
    for (const auto& ds : datasets)
        if (ds.dim() != d) throw InvalidArgument("datasets disagree on the feature dimension");
    return d;
}

Vector total_gradient(LossKind loss, const std::vector<UserDataset>& datasets, const Vector& w) {
    Vector g = Vector::Zero(w.size());
    for (const auto& ds : datasets) g += loss_gradient(loss, w, ds);
    return g;
}

}  // namespace

double centralized_objective(LossKind loss, const std::vector<UserDataset>& datasets, const Vector& w) {
    double v = 0.0;
    for (const auto& ds : datasets) v += loss_value(loss, w, ds);
    return v;
}

Vector solve_centralized(LossKind loss, const std::vector<UserDataset>& datasets, double tolerance,
                         std::size_t max_iters) {
    const auto d = static_cast<Eigen::Index>(shared_dim(datasets));
    Matrix gram = Matrix::Zero(d, d);
    Vector rhs = Vector::Zero(d);
    for (const auto& ds : datasets) {
        gram.noalias() += ds.features().transpose() * ds.features();
        rhs.noalias() += ds.features().transpose() * ds.labels();
    }

    if (loss == LossKind::linear) {
        Eigen::LDLT<Matrix> ldlt(gram);
        const Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
        const double lo = eig.eigenvalues().minCoeff();
        const double hi = std::max(eig.eigenvalues().maxCoeff(), 1.0);
        if (ldlt.info() != Eigen::Success || lo <= 1e-13 * hi) {
            gram.diagonal().array() += 1e-10;
            ldlt.compute(gram);
        }
        return ldlt.solve(rhs);
    }

    // Logistic: gradient descent with step 1/L, L = lambda_max(X^T X) / 4.
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    const double lipschitz = std::max(0.25 * eig.eigenvalues().maxCoeff(), 1e-12);
    const double step = 1.0 / lipschitz;
    Vector w = Vector::Zero(d);
    Vector best = w;
    double best_norm = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < max_iters; ++k) {
        const Vector g = total_gradient(loss, datasets, w);
        const double gn = g.norm();
        if (gn < best_norm) {
            best_norm = gn;
            best = w;
        }
        if (gn <= tolerance) return w;
        w -= step * g;
    }
    throw NotConverged("centralized gradient descent stopped at gradient norm " + std::to_string(best_norm), best);
}

double delta_param(const SystemState& state, const Vector& w_star) {
    if (state.n_users() == 0) throw InvalidArgument("state has no users");
    double sum = 0.0;
    for (const auto& w : state.weights) {
        if (w.size() != w_star.size()) throw InvalidArgument("w* dimension mismatch");
        sum += (w - w_star).norm();
    }
    return sum / static_cast<double>(state.n_users()) / std::max(w_star.norm(), kFloor);
}

Delta compute_delta(const SystemState& state, const Vector& w_star, LossKind loss,
                    const std::vector<UserDataset>& datasets) {
    Delta out;
    out.param = delta_param(state, w_star);
    Vector mean = Vector::Zero(w_star.size());
    for (const auto& w : state.weights) mean += w;
    mean /= static_cast<double>(state.n_users());
    const double f_star = centralized_objective(loss, datasets, w_star);
    out.objective = (centralized_objective(loss, datasets, mean) - f_star) / std::max(std::abs(f_star), kFloor);
    return out;
}

}  // namespace gadmm
