#pragma once

#include <span>

#include "gadmm/types.hpp"

namespace gadmm {

/// g1_n(w_n, z): w_n - z (classical), stacked w_n - w_m over neighbours (group),
/// empty for the soft-norm variant.
Vector eval_equality(const ConstraintSpec& spec, std::size_t n, const Vector& w_n, const Vector& z,
                     std::span<const Vector> all_weights);

/// Number of equality rows of user n divided by d, i.e. how many copies of w_n
/// appear in g1_n. The scalar mu_n multiplies the sum of g1_n's components.
std::size_t equality_multiplicity(const ConstraintSpec& spec, std::size_t n);

/// g2_n(w_n, z) = ||w_n - z||_p^p - epsilon_n for the soft-norm variant, 0 otherwise.
double eval_inequality(const ConstraintSpec& spec, std::size_t n, const Vector& w_n, const Vector& z);

struct InequalityGradient {
    Vector wrt_weights;
    Vector wrt_consensus;
};

/// Gradient of g2_n. For p = 1 the subgradient uses sign(0) = 0.
InequalityGradient grad_inequality(const ConstraintSpec& spec, std::size_t n, const Vector& w_n, const Vector& z);

/// Which off-diagonal sign to use for the classical C matrix.
enum class ClassicalSign {
    plus,       // diagonal 1 - 1/N, off-diagonal +1/N
    averaging,  // diagonal 1 - 1/N, off-diagonal -1/N (I - 11^T/N)
};

/// Linear-constraint form g1 = d - C w, g2 = b - A w on per-user scalars, and the
/// skew-symmetric coupling block M2 = [[0, C^T, A^T], [-C, 0, 0], [-A, 0, 0]].
struct LinearConstraintMatrices {
    Matrix C;
    Vector d_vec;
    Matrix A;
    Vector b_vec;
    Matrix M2;
};

LinearConstraintMatrices build_linear_matrices(const ConstraintSpec& spec, std::size_t n_users,
                                               ClassicalSign sign = ClassicalSign::plus);

/// C (x) I_d, expanding per-user scalar coefficients to d-dimensional blocks.
Matrix kron_expand(const Matrix& coefficients, std::size_t dim);

}  // namespace gadmm
