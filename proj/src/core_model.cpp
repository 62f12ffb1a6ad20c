#include "gadmm/core_model.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "gadmm/errors.hpp"

namespace gadmm {

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_per_user(const std::vector<double>& values, std::size_t n_users, const char* name) {
    if (values.size() != n_users) {
        std::ostringstream os;
        os << name << " has " << values.size() << " entries, expected " << n_users;
        throw InvalidArgument(os.str());
    }
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " entries must be finite and >= 0");
    }
}

}  // namespace

std::string to_string(LossKind kind) { return kind == LossKind::linear ? "linear" : "logistic"; }

UserDataset::UserDataset(Matrix features, Vector labels) : features_(std::move(features)), labels_(std::move(labels)) {
    if (features_.rows() != labels_.size())
        throw InvalidArgument("feature rows (" + std::to_string(features_.rows()) + ") != label count (" +
                              std::to_string(labels_.size()) + ")");
    if (!features_.allFinite() || !labels_.allFinite()) throw InvalidArgument("dataset has non-finite entries");
}

bool UserDataset::operator==(const UserDataset& other) const {
    return features_.rows() == other.features_.rows() && features_.cols() == other.features_.cols() &&
           features_ == other.features_ && labels_ == other.labels_;
}

void SystemState::check_invariants() const {
    const auto d = consensus.size();
    for (const auto& w : weights) {
        if (w.size() != d) throw InvalidArgument("weight vectors must share the consensus dimension");
        if (!all_finite(w)) throw InvalidArgument("non-finite weight entry");
    }
    if (!all_finite(consensus)) throw InvalidArgument("non-finite consensus entry");
    if (static_cast<std::size_t>(lambda.size()) != weights.size() || static_cast<std::size_t>(mu.size()) != weights.size())
        throw InvalidArgument("multiplier vectors must have one entry per user");
    if (!all_finite(lambda) || !all_finite(mu)) throw InvalidArgument("non-finite multiplier");
    if (lambda.size() > 0 && lambda.minCoeff() < 0.0) throw InvalidArgument("lambda must be non-negative");
}

bool SystemState::operator==(const SystemState& other) const {
    if (iteration != other.iteration || weights.size() != other.weights.size()) return false;
    if (consensus.size() != other.consensus.size() || consensus != other.consensus) return false;
    if (lambda.size() != other.lambda.size() || lambda != other.lambda) return false;
    if (mu.size() != other.mu.size() || mu != other.mu) return false;
    for (std::size_t n = 0; n < weights.size(); ++n)
        if (weights[n].size() != other.weights[n].size() || weights[n] != other.weights[n]) return false;
    return true;
}

void validate(const ConstraintSpec& spec, std::size_t n_users) {
    std::visit(overloaded{
                   [](const Classical&) {},
                   [&](const SoftNorm& s) {
                       if (s.p != 1 && s.p != 2) throw InvalidArgument("soft-norm p must be 1 or 2");
                       check_per_user(s.epsilon, n_users, "epsilon");
                   },
                   [&](const Group& g) {
                       if (g.adjacency.size() != n_users) throw InvalidArgument("adjacency must list every user");
                       for (std::size_t n = 0; n < n_users; ++n) {
                           for (std::size_t m : g.adjacency[n]) {
                               if (m >= n_users) throw InvalidArgument("adjacency index out of range");
                               if (m == n) throw InvalidArgument("adjacency must be irreflexive");
                               const auto& back = g.adjacency[m];
                               if (std::find(back.begin(), back.end(), n) == back.end())
                                   throw InvalidArgument("adjacency must be symmetric");
                           }
                       }
                   },
               },
               spec);
}

std::string constraint_name(const ConstraintSpec& spec) {
    return std::visit(overloaded{
                          [](const Classical&) { return std::string("classical"); },
                          [](const SoftNorm&) { return std::string("soft_norm"); },
                          [](const Group&) { return std::string("group"); },
                      },
                      spec);
}

void validate(const ProtectionSpec& spec, std::size_t n_users) {
    if (const auto* l2 = std::get_if<L2Protection>(&spec)) {
        check_per_user(l2->varsigma, n_users, "varsigma");
        check_per_user(l2->delta, n_users, "delta");
    }
}

void validate(const MultiplierScheme& scheme) {
    std::visit(overloaded{
                   [](const FixedMultipliers& f) {
                       if (!(f.lambda0 >= 0.0)) throw InvalidArgument("fixed lambda must be >= 0");
                   },
                   [](const ProjectionScheme& p) {
                       if (!(p.tau > 0.0)) throw InvalidArgument("projection tau must be > 0");
                   },
                   [](const HyperplaneScheme& h) {
                       if (!(h.delta > 0.0 && h.delta < 1.0)) throw InvalidArgument("hyperplane delta must lie in (0, 1)");
                       if (h.max_backtracks < 1) throw InvalidArgument("max_backtracks must be >= 1");
                   },
                   [](const TikhonovScheme& t) {
                       if (!(t.zeta0 > 0.0)) throw InvalidArgument("tikhonov zeta0 must be > 0");
                       if (!(t.tau_n > 0.0)) throw InvalidArgument("tikhonov tau_n must be > 0");
                       if (t.inner_iters < 1) throw InvalidArgument("tikhonov inner_iters must be >= 1");
                   },
               },
               scheme);
}

std::string scheme_name(const MultiplierScheme& scheme) {
    return std::visit(overloaded{
                          [](const FixedMultipliers&) { return std::string("fixed"); },
                          [](const ProjectionScheme&) { return std::string("projection"); },
                          [](const HyperplaneScheme&) { return std::string("hyperplane"); },
                          [](const TikhonovScheme&) { return std::string("tikhonov"); },
                      },
                      scheme);
}

void RunConfig::validate() const {
    if (n_users < 1) throw InvalidArgument("n_users must be >= 1");
    if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be > 0");
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
    if (inner.step_size && !(*inner.step_size > 0.0)) throw InvalidArgument("inner step size must be > 0");
    if (!(inner.tolerance > 0.0)) throw InvalidArgument("inner tolerance must be > 0");
    if (inner.max_iters < 1) throw InvalidArgument("inner max_iters must be >= 1");
    if (!(inner.box_bound > 0.0)) throw InvalidArgument("box bound must be > 0");
    if (!(mu_step >= 0.0)) throw InvalidArgument("mu_step must be >= 0");
    gadmm::validate(constraint, n_users);
    gadmm::validate(protection, n_users);
    gadmm::validate(scheme);
}

std::size_t Problem::dim() const {
    if (datasets.empty()) throw InvalidArgument("problem has no datasets");
    return datasets.front().dim();
}

SyntheticData generate_synthetic(std::uint64_t seed, std::size_t n_users, std::size_t samples_per_user,
                                 std::size_t dim, double noise_std, LossKind task) {
    if (n_users == 0 || samples_per_user == 0 || dim == 0)
        throw InvalidArgument("n_users, samples_per_user and dim must all be >= 1");
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw InvalidArgument("noise_std must be finite and >= 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&] { return normal(rng); };

    SyntheticData out;
    out.noise_std = noise_std;
    out.ground_truth = Vector(static_cast<Eigen::Index>(dim));
    for (auto& v : out.ground_truth) v = draw();

    out.datasets.reserve(n_users);
    const auto m = static_cast<Eigen::Index>(samples_per_user);
    const auto d = static_cast<Eigen::Index>(dim);
    for (std::size_t n = 0; n < n_users; ++n) {
        Matrix x(m, d);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < d; ++j) x(i, j) = draw();
        Vector y = x * out.ground_truth;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double noise = noise_std > 0.0 ? noise_std * draw() : 0.0;
            y(i) += noise;
            if (task == LossKind::logistic) y(i) = y(i) >= 0.0 ? 1.0 : -1.0;
        }
        out.datasets.emplace_back(std::move(x), std::move(y));
    }
    return out;
}

SystemState init_state(const RunConfig& config, std::size_t dim) {
    if (dim == 0) throw InvalidArgument("dim must be >= 1");
    const auto d = static_cast<Eigen::Index>(dim);
    const auto n = static_cast<Eigen::Index>(config.n_users);
    SystemState s;
    s.weights.assign(config.n_users, Vector::Zero(d));
    s.consensus = Vector::Zero(d);
    s.lambda = Vector::Zero(n);
    s.mu = Vector::Zero(n);
    if (const auto* fixed = std::get_if<FixedMultipliers>(&config.scheme)) {
        s.lambda.setConstant(fixed->lambda0);
        s.mu.setConstant(fixed->mu0);
    }
    s.iteration = 0;
    return s;
}

double state_distance(const SystemState& a, const SystemState& b) {
    if (a.weights.size() != b.weights.size()) throw InvalidArgument("states have different user counts");
    double sq = 0.0;
    for (std::size_t n = 0; n < a.weights.size(); ++n) {
        if (a.weights[n].size() != b.weights[n].size()) throw InvalidArgument("weight dimensions differ");
        sq += (a.weights[n] - b.weights[n]).squaredNorm();
    }
    return std::sqrt(sq);
}

}  // namespace gadmm
