#pragma once

// Domain types shared by every module of the generalized-ADMM solver.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace gadmm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class LossKind { linear, logistic };

std::string to_string(LossKind kind);

/// One user's local data: an m x d feature matrix and m labels.
///
/// Labels are real-valued for regression and in {-1, +1} for
/// classification. Construction validates shape and finiteness.
class UserDataset {
public:
    UserDataset(Matrix features, Vector labels);

    const Matrix& features() const noexcept { return features_; }
    const Vector& labels() const noexcept { return labels_; }
    std::size_t samples() const noexcept { return static_cast<std::size_t>(labels_.size()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(features_.cols()); }

    bool operator==(const UserDataset& other) const;

private:
    Matrix features_;
    Vector labels_;
};

/// Local weights w_n, consensus z, multipliers (lambda, mu) and round counter.
struct SystemState {
    std::vector<Vector> weights;
    Vector consensus;
    Vector lambda;
    Vector mu;
    std::size_t iteration = 0;

    std::size_t n_users() const noexcept { return weights.size(); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(consensus.size()); }

    /// Throws InvalidArgument when shapes disagree, lambda < 0, or entries are non-finite.
    void check_invariants() const;

    bool operator==(const SystemState& other) const;
};

// ---- consensus coupling ---------------------------------------------------

/// w_n = z for every user.
struct Classical {};

/// ||w_n - z||_p^p <= epsilon_n, p in {1, 2}.
struct SoftNorm {
    int p = 2;
    std::vector<double> epsilon;
};

/// w_n = w_m for every neighbour m of n; no server variable.
struct Group {
    std::vector<std::vector<std::size_t>> adjacency;
};

using ConstraintSpec = std::variant<Classical, SoftNorm, Group>;

void validate(const ConstraintSpec& spec, std::size_t n_users);
std::string constraint_name(const ConstraintSpec& spec);

// ---- worst-case protection ------------------------------------------------

struct NoProtection {};

/// varsigma_n * sum_{m != n} ||w_m||^2 + delta_n.
struct L2Protection {
    std::vector<double> varsigma;
    std::vector<double> delta;
};

using ProtectionSpec = std::variant<NoProtection, L2Protection>;

void validate(const ProtectionSpec& spec, std::size_t n_users);

// ---- multiplier schemes ---------------------------------------------------

struct FixedMultipliers {
    double lambda0 = 0.0;
    double mu0 = 0.0;
};

struct ProjectionScheme {
    double tau = 2e-4;
};

struct HyperplaneScheme {
    double delta = 0.5;
    int max_backtracks = 40;
    // The acceptance test compares r^T phi(y) against delta * ||r||^2 (standard
    // hyperplane projection); false uses the unsquared norm instead.
    bool squared_residual = true;
};

struct TikhonovScheme {
    double zeta0 = 0.1;
    double tau_n = 10.0;
    int inner_iters = 1;

    /// zeta_k = zeta0 / (k + 1), k counted from zero.
    double zeta(std::size_t k) const { return zeta0 / static_cast<double>(k + 1); }
};

using MultiplierScheme = std::variant<FixedMultipliers, ProjectionScheme, HyperplaneScheme, TikhonovScheme>;

void validate(const MultiplierScheme& scheme);
std::string scheme_name(const MultiplierScheme& scheme);
inline bool is_fixed(const MultiplierScheme& scheme) { return std::holds_alternative<FixedMultipliers>(scheme); }

// ---- run configuration ----------------------------------------------------

struct InnerSolverConfig {
    // Unset: 1 / (lipschitz + 1 + penalty curvature), derived per user.
    std::optional<double> step_size;
    double tolerance = 1e-9;
    int max_iters = 5000;
    // Iterate box W_n = [-B, B]^d.
    double box_bound = 1e3;
};

struct RunConfig {
    std::size_t n_users = 1;
    LossKind loss = LossKind::linear;
    ConstraintSpec constraint = Classical{};
    ProtectionSpec protection = NoProtection{};
    MultiplierScheme scheme = FixedMultipliers{};
    double tolerance = 1e-4;
    std::size_t max_iterations = 5000;
    InnerSolverConfig inner;
    std::uint64_t seed = 0;
    // Step for the equality multipliers mu under variable schemes.
    double mu_step = 2e-4;

    void validate() const;
};

/// Everything a local solve needs besides the evolving state.
struct Problem {
    LossKind loss = LossKind::linear;
    std::vector<UserDataset> datasets;
    ConstraintSpec constraint = Classical{};
    ProtectionSpec protection = NoProtection{};

    std::size_t n_users() const noexcept { return datasets.size(); }
    std::size_t dim() const;
};

// ---- trace ----------------------------------------------------------------

enum class PayloadKind { weights, consensus, multipliers };

struct Message {
    std::size_t round = 0;
    // nullopt is the server.
    std::optional<std::size_t> sender;
    std::optional<std::size_t> receiver;
    PayloadKind payload_kind = PayloadKind::weights;
    std::size_t payload_size = 0;
};

struct IterationRecord {
    std::size_t iteration = 0;
    std::vector<double> weight_change;  // per user, ||w_n^t - w_n^{t-1}||
    double state_change = 0.0;          // stacked norm used by the stop rule
    double consensus_violation = 0.0;
    std::optional<double> delta_param;
    std::optional<double> delta_objective;
    std::uint64_t messages_sent = 0;  // cumulative
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

struct RunTrace {
    std::vector<IterationRecord> records;
    std::vector<Message> messages;
    bool converged = false;
    std::size_t iterations_used = 0;
};

}  // namespace gadmm
