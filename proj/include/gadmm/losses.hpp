#pragma once

#include "gadmm/types.hpp"

namespace gadmm {

/// linear: 0.5 ||Xw - y||^2; logistic: sum_i log(1 + exp(-y_i x_i^T w)).
double loss_value(LossKind kind, const Vector& w, const UserDataset& data);

Vector loss_gradient(LossKind kind, const Vector& w, const UserDataset& data);

struct CurvatureBounds {
    double alpha_min = 0.0;  // lower bound on the Hessian's smallest eigenvalue
    double lipschitz = 0.0;  // upper bound on the gradient's Lipschitz constant
};

/// linear: eigenvalue range of X^T X. logistic: (0, lambda_max(X^T X) / 4); the
/// logistic loss is not strongly convex, so zero is the only uniform lower bound.
CurvatureBounds curvature_bounds(LossKind kind, const UserDataset& data);

}  // namespace gadmm
