#include "gadmm/vi_diagnostics.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/LU>

#include "gadmm/consensus_constraints.hpp"
#include "gadmm/errors.hpp"
#include "gadmm/losses.hpp"
#include "gadmm/robust_protection.hpp"

namespace gadmm {

namespace {

constexpr std::size_t kMaxPMatrixSize = 20;

double determinant(const Matrix& a) {
    switch (a.rows()) {
        case 1:
            return a(0, 0);
        case 2:
            return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        case 3:
            return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                   a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
        default:
            return a.partialPivLu().determinant();
    }
}

// Determinants below this are indistinguishable from zero in double precision.
double hadamard_floor(const Matrix& a) {
    double bound = 1.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) bound *= std::max(a.row(i).norm(), std::numeric_limits<double>::min());
    return 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(a.rows()) * bound;
}

std::vector<Vector> sample_points(std::size_t count, const SamplingDomain& domain) {
    if (domain.lower.size() != domain.upper.size()) throw InvalidArgument("sampling box bounds differ in size");
    std::mt19937_64 rng(domain.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vector> pts(count, Vector(domain.lower.size()));
    for (auto& p : pts)
        for (Eigen::Index i = 0; i < p.size(); ++i)
            p(i) = domain.lower(i) + unit(rng) * (domain.upper(i) - domain.lower(i));
    return pts;
}

Vector block(const Vector& stacked, std::size_t n, std::size_t d) {
    return stacked.segment(static_cast<Eigen::Index>(n * d), static_cast<Eigen::Index>(d));
}

}  // namespace

UpsilonMatrix build_upsilon(const Problem& problem, bool include_proximal) {
    const std::size_t n_users = problem.n_users();
    const auto N = static_cast<Eigen::Index>(n_users);
    UpsilonMatrix out;
    out.entries = Matrix::Zero(N, N);
    out.sources.assign(n_users, std::vector<UpsilonSource>(n_users, UpsilonSource::protection_coupling));
    for (std::size_t n = 0; n < n_users; ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        const double alpha = curvature_bounds(problem.loss, problem.datasets[n]).alpha_min;
        out.entries(i, i) = alpha + (include_proximal ? 1.0 : 0.0);
        out.sources[n][n] = include_proximal ? UpsilonSource::curvature_min_plus_prox : UpsilonSource::curvature_min;
        const double beta = protection_cross_coupling(problem.protection, n);
        for (Eigen::Index j = 0; j < N; ++j)
            if (j != i) out.entries(i, j) = -beta;
    }
    return out;
}

bool is_p_matrix(const Matrix& m) {
    if (m.rows() != m.cols()) throw InvalidArgument("P-matrix test needs a square matrix");
    if (!m.allFinite()) throw InvalidArgument("P-matrix test needs finite entries");
    const auto n = static_cast<std::size_t>(m.rows());
    if (n > kMaxPMatrixSize) throw SizeLimitError("P-matrix test is exhaustive and limited to N <= 20");
    if (n == 0) return true;

    std::vector<Eigen::Index> idx;
    idx.reserve(n);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        idx.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) idx.push_back(static_cast<Eigen::Index>(i));
        const Matrix sub = m(idx, idx);
        if (!(determinant(sub) > hadamard_floor(sub))) return false;
    }
    return true;
}

double estimate_strong_monotonicity(const VectorMap& F, std::size_t sample_count, const SamplingDomain& domain) {
    if (sample_count < 2) throw InvalidArgument("need at least two samples");
    const auto pts = sample_points(sample_count, domain);
    std::vector<Vector> values;
    values.reserve(pts.size());
    for (const auto& p : pts) values.push_back(F(p));

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const Vector dx = pts[i] - pts[j];
            const double sq = dx.squaredNorm();
            if (sq == 0.0) continue;
            best = std::min(best, dx.dot(values[i] - values[j]) / sq);
        }
    }
    if (std::isinf(best)) throw InsufficientSamples("every sampled pair was degenerate");
    return best;
}

double estimate_cocoercivity(const VectorMap& phi_at, std::size_t sample_count, const SamplingDomain& domain) {
    if (sample_count < 2) throw InvalidArgument("need at least two samples");
    const auto pts = sample_points(sample_count, domain);
    std::vector<Vector> values;
    values.reserve(pts.size());
    for (const auto& p : pts) values.push_back(phi_at(p));

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const Vector dphi = values[i] - values[j];
            const double sq = dphi.squaredNorm();
            if (sq == 0.0) continue;
            best = std::min(best, (pts[i] - pts[j]).dot(dphi) / sq);
        }
    }
    if (std::isinf(best)) throw InsufficientSamples("phi took the same value at every sampled pair");
    return best;
}

Vector plain_mapping(const Problem& problem, const Vector& stacked_weights) {
    const std::size_t d = problem.dim();
    if (static_cast<std::size_t>(stacked_weights.size()) != d * problem.n_users())
        throw InvalidArgument("stacked weights have the wrong length");
    Vector out(stacked_weights.size());
    for (std::size_t n = 0; n < problem.n_users(); ++n)
        out.segment(static_cast<Eigen::Index>(n * d), static_cast<Eigen::Index>(d)) =
            loss_gradient(problem.loss, block(stacked_weights, n, d), problem.datasets[n]);
    return out;
}

Vector robust_mapping(const Problem& problem, const Vector& stacked_weights) {
    Vector out = plain_mapping(problem, stacked_weights);
    const auto* l2 = std::get_if<L2Protection>(&problem.protection);
    if (l2 == nullptr) return out;
    const std::size_t d = problem.dim();
    double total = 0.0;
    for (double s : l2->varsigma) total += s;
    for (std::size_t n = 0; n < problem.n_users(); ++n) {
        const double others = total - l2->varsigma[n];
        out.segment(static_cast<Eigen::Index>(n * d), static_cast<Eigen::Index>(d)) +=
            2.0 * others * block(stacked_weights, n, d);
    }
    return out;
}

KKTResidual kkt_residual(const SystemState& state, const Problem& problem) {
    const std::size_t N = state.n_users();
    if (N != problem.n_users()) throw InvalidArgument("state and problem disagree on the user count");
    const auto d = static_cast<Eigen::Index>(state.dim());
    const auto& spec = problem.constraint;
    const bool has_server = !std::holds_alternative<Group>(spec);

    KKTResidual out;
    double stationarity_sq = 0.0;
    Vector z_block = Vector::Zero(d);
    double equality_sq = 0.0;

    for (std::size_t n = 0; n < N; ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        const Vector& w = state.weights[n];
        Vector g = loss_gradient(problem.loss, w, problem.datasets[n]);

        if (std::holds_alternative<Classical>(spec)) {
            g.array() += state.mu(i);
            z_block.array() -= state.mu(i);
            equality_sq += (w - state.consensus).squaredNorm();
        } else if (const auto* grp = std::get_if<Group>(&spec)) {
            for (std::size_t m : grp->adjacency[n]) {
                // mu_n sum(w_n - w_m) and mu_m sum(w_m - w_n) both involve w_n.
                g.array() += state.mu(i) - state.mu(static_cast<Eigen::Index>(m));
                if (n < m) equality_sq += (w - state.weights[m]).squaredNorm();
            }
        }

        const double g2 = eval_inequality(spec, n, w, state.consensus);
        if (std::holds_alternative<SoftNorm>(spec)) {
            const auto grad = grad_inequality(spec, n, w, state.consensus);
            g += state.lambda(i) * grad.wrt_weights;
            z_block += state.lambda(i) * grad.wrt_consensus;
        }
        stationarity_sq += g.squaredNorm();
        out.complementarity_gap = std::max(out.complementarity_gap, std::abs(state.lambda(i) * g2));
        out.primal_violation = std::max(out.primal_violation, std::max(0.0, g2));
    }
    if (has_server) stationarity_sq += z_block.squaredNorm();
    out.stationarity_norm = std::sqrt(stationarity_sq);
    out.equality_norm = std::sqrt(equality_sq);
    out.dual_feasibility_violation = N > 0 ? std::max(0.0, -state.lambda.minCoeff()) : 0.0;
    return out;
}

Matrix assemble_vi_matrix(const Matrix& jacobian, const Matrix& m2) {
    if (jacobian.rows() != jacobian.cols() || jacobian.rows() > m2.rows())
        throw InvalidArgument("jacobian block does not fit the coupling matrix");
    Matrix m = m2;
    m.topLeftCorner(jacobian.rows(), jacobian.cols()) += jacobian;
    return m;
}

bool is_skew_symmetric(const Matrix& m) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (m(i, j) + m(j, i) != 0.0) return false;
    return true;
}

}  // namespace gadmm
