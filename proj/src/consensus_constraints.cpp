#include "gadmm/consensus_constraints.hpp"

#include <cmath>

#include "gadmm/errors.hpp"

namespace gadmm {

namespace {

void check_dims(const Vector& w_n, const Vector& z) {
    if (w_n.size() != z.size()) throw InvalidArgument("w_n and z dimensions differ");
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

const SoftNorm* soft_norm_of(const ConstraintSpec& spec, std::size_t n) {
    const auto* s = std::get_if<SoftNorm>(&spec);
    if (s == nullptr) return nullptr;
    if (n >= s->epsilon.size()) throw InvalidArgument("user index out of range");
    if (s->p != 1 && s->p != 2) throw InvalidArgument("unsupported soft-norm order p = " + std::to_string(s->p));
    return s;
}

}  // namespace

Vector eval_equality(const ConstraintSpec& spec, std::size_t n, const Vector& w_n, const Vector& z,
                     std::span<const Vector> all_weights) {
    check_dims(w_n, z);
    if (std::holds_alternative<Classical>(spec)) {
        if (!all_weights.empty() && n >= all_weights.size()) throw InvalidArgument("user index out of range");
        return w_n - z;
    }
    if (const auto* g = std::get_if<Group>(&spec)) {
        if (n >= g->adjacency.size()) throw InvalidArgument("user index out of range");
        const auto& neighbours = g->adjacency[n];
        const Eigen::Index d = w_n.size();
        Vector out(d * static_cast<Eigen::Index>(neighbours.size()));
        for (std::size_t k = 0; k < neighbours.size(); ++k) {
            const std::size_t m = neighbours[k];
            if (m >= all_weights.size()) throw InvalidArgument("neighbour index out of range");
            out.segment(static_cast<Eigen::Index>(k) * d, d) = w_n - all_weights[m];
        }
        return out;
    }
    soft_norm_of(spec, n);
    return Vector(0);
}

std::size_t equality_multiplicity(const ConstraintSpec& spec, std::size_t n) {
    if (std::holds_alternative<Classical>(spec)) return 1;
    if (const auto* g = std::get_if<Group>(&spec)) {
        if (n >= g->adjacency.size()) throw InvalidArgument("user index out of range");
        return g->adjacency[n].size();
    }
    return 0;
}

double eval_inequality(const ConstraintSpec& spec, std::size_t n, const Vector& w_n, const Vector& z) {
    check_dims(w_n, z);
    const auto* s = soft_norm_of(spec, n);
    if (s == nullptr) return 0.0;
    const Vector diff = w_n - z;
    const double norm_pp = s->p == 1 ? diff.lpNorm<1>() : diff.squaredNorm();
    return norm_pp - s->epsilon[n];
}

InequalityGradient grad_inequality(const ConstraintSpec& spec, std::size_t n, const Vector& w_n, const Vector& z) {
    check_dims(w_n, z);
    const auto* s = soft_norm_of(spec, n);
    if (s == nullptr) return {Vector::Zero(w_n.size()), Vector::Zero(z.size())};
    const Vector diff = w_n - z;
    Vector g = s->p == 2 ? Vector(2.0 * diff) : Vector(diff.unaryExpr([](double v) { return sign(v); }));
    return {g, -g};
}

LinearConstraintMatrices build_linear_matrices(const ConstraintSpec& spec, std::size_t n_users, ClassicalSign sign) {
    if (n_users == 0) throw InvalidArgument("n_users must be >= 1");
    const auto N = static_cast<Eigen::Index>(n_users);
    LinearConstraintMatrices out;
    if (std::holds_alternative<Classical>(spec)) {
        const double inv = 1.0 / static_cast<double>(n_users);
        const double off = sign == ClassicalSign::plus ? inv : -inv;
        out.C = Matrix::Constant(N, N, off);
        out.C.diagonal().setConstant(1.0 - inv);
    } else if (const auto* g = std::get_if<Group>(&spec)) {
        validate(spec, n_users);
        out.C = Matrix::Zero(N, N);
        for (Eigen::Index n = 0; n < N; ++n) {
            out.C(n, n) = 1.0;
            for (std::size_t m : g->adjacency[static_cast<std::size_t>(n)]) out.C(n, static_cast<Eigen::Index>(m)) = -1.0;
        }
    } else {
        throw UnsupportedVariant("soft-norm coupling is nonlinear; no linear-constraint matrices");
    }
    out.d_vec = Vector::Zero(out.C.rows());
    out.A = Matrix::Zero(0, N);
    out.b_vec = Vector::Zero(0);

    // Primal block, then equality multipliers, then inequality multipliers. The
    // lower-left blocks are the exact negated transposes of the upper-right ones.
    const Eigen::Index p = N;
    const Eigen::Index e = out.C.rows();
    const Eigen::Index i = out.A.rows();
    out.M2 = Matrix::Zero(p + e + i, p + e + i);
    out.M2.block(0, p, p, e) = out.C.transpose();
    out.M2.block(0, p + e, p, i) = out.A.transpose();
    out.M2.block(p, 0, e, p) = -out.C;
    out.M2.block(p + e, 0, i, p) = -out.A;
    return out;
}

Matrix kron_expand(const Matrix& coefficients, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix out = Matrix::Zero(coefficients.rows() * d, coefficients.cols() * d);
    for (Eigen::Index r = 0; r < coefficients.rows(); ++r)
        for (Eigen::Index c = 0; c < coefficients.cols(); ++c)
            out.block(r * d, c * d, d, d).diagonal().setConstant(coefficients(r, c));
    return out;
}

}  // namespace gadmm
