#include "gadmm/losses.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "gadmm/errors.hpp"

namespace gadmm {

namespace {

void check_inputs(const Vector& w, const UserDataset& data) {
    if (static_cast<std::size_t>(w.size()) != data.dim())
        throw InvalidArgument("weight dimension " + std::to_string(w.size()) + " != feature dimension " +
                              std::to_string(data.dim()));
    if (!w.allFinite()) throw NumericDomainError("non-finite weights");
}

// log(1 + exp(-t)) without overflow.
double softplus_neg(double t) { return t > 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t)); }

// 1 / (1 + exp(t)).
double sigmoid_neg(double t) {
    if (t >= 0.0) {
        const double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

}  // namespace

double loss_value(LossKind kind, const Vector& w, const UserDataset& data) {
    check_inputs(w, data);
    const Vector margin = data.features() * w;
    double value = 0.0;
    if (kind == LossKind::linear) {
        value = 0.5 * (margin - data.labels()).squaredNorm();
    } else {
        for (Eigen::Index i = 0; i < margin.size(); ++i) value += softplus_neg(data.labels()(i) * margin(i));
    }
    if (!std::isfinite(value)) throw NumericDomainError("loss evaluated to a non-finite value");
    return value;
}

Vector loss_gradient(LossKind kind, const Vector& w, const UserDataset& data) {
    check_inputs(w, data);
    const Vector margin = data.features() * w;
    Vector coeff(margin.size());
    if (kind == LossKind::linear) {
        coeff = margin - data.labels();
    } else {
        for (Eigen::Index i = 0; i < margin.size(); ++i) {
            const double y = data.labels()(i);
            coeff(i) = -y * sigmoid_neg(y * margin(i));
        }
    }
    Vector g = data.features().transpose() * coeff;
    if (!g.allFinite()) throw NumericDomainError("gradient evaluated to a non-finite value");
    return g;
}

CurvatureBounds curvature_bounds(LossKind kind, const UserDataset& data) {
    if (data.samples() == 0) throw InvalidArgument("empty dataset");
    const Matrix gram = data.features().transpose() * data.features();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    const double hi = std::max(0.0, ev.maxCoeff());
    // Rank-deficient Gram matrices come back with round-off sized eigenvalues of either sign.
    double lo = ev.minCoeff();
    if (lo <= 1e-13 * std::max(1.0, hi)) lo = 0.0;
    if (kind == LossKind::linear) return {lo, hi};
    return {0.0, 0.25 * hi};
}

}  // namespace gadmm
