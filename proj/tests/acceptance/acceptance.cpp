// Runs the acceptance checks and prints one PASS/FAIL line each.
// Exit status is non-zero if any check fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gadmm/centralized_baseline.hpp"
#include "gadmm/consensus_constraints.hpp"
#include "gadmm/core_model.hpp"
#include "gadmm/experiments.hpp"
#include "gadmm/losses.hpp"
#include "gadmm/multiplier_updates.hpp"
#include "gadmm/robust_protection.hpp"
#include "gadmm/simnet_orchestrator.hpp"
#include "gadmm/vi_diagnostics.hpp"
#include "oracles.hpp"

using namespace gadmm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int k, const std::string& title, double limit_s, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream time;
    time.precision(3);
    time << std::fixed << secs << "s";
    if (limit_s > 0.0) {
        time << " of " << limit_s << "s";
        if (secs > limit_s) {
            v.pass = false;
            v.detail += "; over the time limit";
        }
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << title << " [" << v.detail << "; "
              << time.str() << "]" << std::endl;
}

std::string num(double x) { return format_number(x); }

// ---------------------------------------------------------------- 1

Verdict gradients() {
    constexpr int kPoints = 100;
    constexpr double kTol = 1e-5;
    std::mt19937_64 rng(101);
    double worst = 0.0;
    auto track = [&](const Vector& analytic, const Vector& fd) { worst = std::max(worst, oracle::rel_err(analytic, fd)); };

    for (auto kind : {LossKind::linear, LossKind::logistic}) {
        for (int t = 0; t < kPoints; ++t) {
            const Matrix x = oracle::random_matrix(rng, 15, 4);
            Vector y = oracle::random_vector(rng, 15);
            if (kind == LossKind::logistic) y = y.unaryExpr([](double v) { return v >= 0 ? 1.0 : -1.0; });
            const UserDataset data(x, y);
            const Vector w = oracle::random_vector(rng, 4);
            track(loss_gradient(kind, w, data),
                  oracle::fd_gradient([&](const Vector& v) { return loss_value(kind, v, data); }, w));
        }
    }

    for (int p : {1, 2}) {
        const ConstraintSpec spec = SoftNorm{p, {0.3}};
        for (int t = 0; t < kPoints; ++t) {
            const Vector w = oracle::random_vector(rng, 4), z = oracle::random_vector(rng, 4);
            const auto g = grad_inequality(spec, 0, w, z);
            track(g.wrt_weights, oracle::fd_gradient([&](const Vector& v) { return eval_inequality(spec, 0, v, z); }, w));
            track(g.wrt_consensus,
                  oracle::fd_gradient([&](const Vector& v) { return eval_inequality(spec, 0, w, v); }, z));
        }
    }

    // Protection of user 0 as a function of another user's weights.
    for (int t = 0; t < kPoints; ++t) {
        std::uniform_real_distribution<double> vs(0.0, 0.01);
        const L2Protection prot{{vs(rng), vs(rng), vs(rng)}, {0.1, 0.1, 0.1}};
        std::vector<Vector> ws{oracle::random_vector(rng, 4), oracle::random_vector(rng, 4), oracle::random_vector(rng, 4)};
        const std::size_t m = 1 + static_cast<std::size_t>(t % 2);
        const auto f = [&](const Vector& v) {
            auto copy = ws;
            copy[m] = v;
            return protection_value(prot, 0, copy);
        };
        track(Vector(protection_cross_coupling(prot, 0) * ws[m]), oracle::fd_gradient(f, ws[m]));
    }
    return {worst < kTol, "worst relative error " + num(worst) + " over " + std::to_string(7 * kPoints) + " points"};
}

// ---------------------------------------------------------------- 2 and 8

struct ExactInstance {
    SyntheticData data;
    Vector w_star;
    RunOutcome outcome;
};

const ExactInstance& exact_instance() {
    static const ExactInstance inst = [] {
        ExactInstance i;
        i.data = generate_synthetic(7, 5, 20, 10, 0.0, LossKind::linear);
        i.w_star = solve_centralized(LossKind::linear, i.data.datasets);
        RunConfig cfg;
        cfg.n_users = 5;
        cfg.constraint = Classical{};
        cfg.protection = NoProtection{};
        cfg.scheme = FixedMultipliers{0.0, 0.0};
        cfg.max_iterations = 5000;
        i.outcome = run_fixed_multipliers(cfg, i.data.datasets);
        return i;
    }();
    return inst;
}

Verdict distributed_matches_centralized() {
    const auto& inst = exact_instance();
    const double d = delta_param(inst.outcome.state, inst.w_star);
    const auto& t = inst.outcome.trace;
    const bool ok = t.converged && t.iterations_used <= 5000 && d < 1e-3;
    return {ok, "rounds " + std::to_string(t.iterations_used) + (t.converged ? " (converged)" : " (not converged)") +
                    ", delta_param " + num(d)};
}

Verdict kkt_at_convergence() {
    const auto& inst = exact_instance();
    constexpr double zeta = 1e-4;
    const Problem problem{LossKind::linear, inst.data.datasets, Classical{}, NoProtection{}};
    const auto r = kkt_residual(inst.outcome.state, problem);
    const bool ok = inst.outcome.trace.converged && r.stationarity_norm < 100 * zeta && r.complementarity_gap < 10 * zeta;
    return {ok, "stationarity " + num(r.stationarity_norm) + ", complementarity " + num(r.complementarity_gap)};
}

// ---------------------------------------------------------------- 3

json epsilon_sweep_config(std::uint64_t seed) {
    return json{{"seed", seed},
                {"n_users", 5},
                {"samples_per_user", 10},
                {"dim", 10},
                {"noise_std", 0.5},
                {"loss", "linear"},
                {"constraint", {{"kind", "soft_norm"}, {"p", 2}, {"epsilon", 0.05}}},
                {"protection", {{"kind", "none"}}},
                {"scheme", {{"kind", "projection"}, {"tau", 2e-4}}},
                {"max_iterations", 20000},
                {"sweep", {{"parameter", "epsilon"}, {"values", {0.01, 0.05, 0.5}}}}};
}

Verdict epsilon_trend() {
    int good = 0;
    std::string detail;
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto config = parse_config_json(epsilon_sweep_config(seed));
        const auto rows = run_sweep(config, *config.sweep);
        bool ok = true;
        std::ostringstream os;
        os << "seed " << seed << ":";
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (!rows[k].outcome) {
                ok = false;
                os << " error(" << rows[k].error << ")";
                continue;
            }
            os << ' ' << rows[k].outcome->trace.iterations_used << "it/" << num(rows[k].delta.param);
            if (k > 0 && rows[k - 1].outcome) {
                ok = ok && rows[k].outcome->trace.iterations_used < rows[k - 1].outcome->trace.iterations_used;
                ok = ok && rows[k].delta.param > rows[k - 1].delta.param;
            }
        }
        good += ok ? 1 : 0;
        detail += (detail.empty() ? "" : "; ") + os.str();
    }
    return {good == 3, std::to_string(good) + "/3 seeds ordered; " + detail};
}

// ---------------------------------------------------------------- 4

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Verdict varsigma_trend() {
    std::vector<double> d0, d1, d2;
    std::size_t completed_2e3 = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const json doc{{"seed", seed},
                       {"n_users", 5},
                       {"samples_per_user", 100},
                       {"dim", 5},
                       {"noise_std", 2.0},
                       {"loss", "logistic"},
                       {"constraint", {{"kind", "classical"}}},
                       {"protection", {{"kind", "none"}}},
                       {"scheme", {{"kind", "fixed"}, {"lambda0", 0.0}, {"mu0", 0.0}}},
                       {"protection_delta", 0.1},
                       {"sweep", {{"parameter", "varsigma"}, {"values", {0.0, 1e-3, 2e-3}}}}};
        const auto config = parse_config_json(doc);
        const auto rows = run_sweep(config, *config.sweep);
        for (const auto& row : rows)
            if (!row.outcome) throw std::runtime_error("seed " + std::to_string(seed) + ": " + row.error);
        d0.push_back(rows[0].delta.param);
        d1.push_back(rows[1].delta.param);
        d2.push_back(rows[2].delta.param);
        ++completed_2e3;
    }
    const double m0 = median(d0), m1 = median(d1), m2 = median(d2);
    return {m1 <= m0 && completed_2e3 == 5,
            "median delta_param: varsigma=0 " + num(m0) + ", 1e-3 " + num(m1) + ", 2e-3 " + num(m2) +
                " (reported only)"};
}

// ---------------------------------------------------------------- 5

Verdict p_matrix_oracle() {
    std::size_t conclusive = 0, disagreements = 0, p_count = 0;
    Matrix m(3, 3);
    for (int code = 0; code < 19683; ++code) {
        int c = code;
        for (int i = 0; i < 9; ++i, c /= 3) m(i / 3, i % 3) = static_cast<double>(c % 3 - 1);
        const auto verdict = oracle::sign_condition(oracle::to_mat(m), 10000, static_cast<std::uint64_t>(code));
        if (verdict == oracle::SignVerdict::inconclusive) continue;
        ++conclusive;
        const bool lib = is_p_matrix(m);
        p_count += lib ? 1 : 0;
        if (lib != (verdict == oracle::SignVerdict::p)) ++disagreements;
    }
    return {disagreements == 0, std::to_string(disagreements) + " disagreements on " + std::to_string(conclusive) +
                                    " conclusive matrices (" + std::to_string(p_count) + " P-matrices)"};
}

// ---------------------------------------------------------------- 6

Verdict ncp_schemes() {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double worst[3] = {0.0, 0.0, 0.0};
    int solved = 0;
    for (int inst = 0; inst < 20; ++inst) {
        const Eigen::Index d = 1 + inst % 3;
        const Matrix bm = oracle::random_matrix(rng, d, d);
        const Matrix a = bm.transpose() * bm + 0.5 * Matrix::Identity(d, d);
        Vector b(d);
        for (Eigen::Index i = 0; i < d; ++i) b(i) = unif(rng);

        oracle::Vec ref;
        if (!oracle::ncp_bruteforce(oracle::to_mat(a), oracle::to_vec(b), ref)) continue;
        ++solved;
        const Vector star = Eigen::Map<const Vector>(ref.data(), d);
        const PhiEvaluator phi_at = [&](const Vector& l) { return Vector(a * l + b); };
        const double lmax = Eigen::SelfAdjointEigenSolver<Matrix>(a).eigenvalues().maxCoeff();

        // Same round budget for every scheme; sized to stay inside the time limit.
        constexpr int kRounds = 100000;
        Vector lp = Vector::Zero(d);
        for (int k = 0; k < kRounds; ++k) lp = projection_update(lp, phi_at(lp), 1.0 / lmax);

        Vector lh = Vector::Zero(d);
        const HyperplaneScheme hs;
        for (int k = 0; k < kRounds; ++k) lh = hyperplane_update(lh, phi_at, hs);

        Vector lt = Vector::Zero(d);
        const TikhonovScheme ts{0.1, lmax, 1};
        for (std::size_t k = 0; k < kRounds; ++k) lt = tikhonov_update(lt, phi_at, ts.zeta(k), ts.tau_n, ts.inner_iters);

        worst[0] = std::max(worst[0], (lp - star).lpNorm<Eigen::Infinity>());
        worst[1] = std::max(worst[1], (lh - star).lpNorm<Eigen::Infinity>());
        worst[2] = std::max(worst[2], (lt - star).lpNorm<Eigen::Infinity>());
    }
    const bool ok = solved == 20 && worst[0] < 1e-4 && worst[1] < 1e-4 && worst[2] < 1e-4;
    return {ok, std::to_string(solved) + "/20 reference solutions; max error projection " + num(worst[0]) +
                    ", hyperplane " + num(worst[1]) + ", tikhonov " + num(worst[2])};
}

// ---------------------------------------------------------------- 7

bool exactly_skew(const Matrix& m) {
    const Matrix s = m + m.transpose();
    return (s.array() == 0.0).all();
}

Verdict skew_symmetry() {
    int ok = 0, total = 0;
    for (std::size_t n = 2; n <= 8; ++n) {
        ++total;
        ok += exactly_skew(build_linear_matrices(Classical{}, n).M2) ? 1 : 0;
    }
    std::mt19937_64 rng(707);
    for (int seed = 0; seed < 20; ++seed) {
        rng.seed(static_cast<std::uint64_t>(seed));
        const std::size_t n = 2 + static_cast<std::size_t>(rng() % 7);
        std::bernoulli_distribution edge(0.5);
        Group g;
        g.adjacency.assign(n, {});
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (edge(rng)) {
                    g.adjacency[i].push_back(j);
                    g.adjacency[j].push_back(i);
                }
        ++total;
        ok += exactly_skew(build_linear_matrices(g, n).M2) ? 1 : 0;
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " matrices with M2 + M2^T == 0 exactly"};
}

// ---------------------------------------------------------------- 9

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Verdict sweep_determinism() {
    const fs::path root = fs::temp_directory_path() / "gadmm_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path cfg = root / "config.json";
    std::ofstream(cfg) << epsilon_sweep_config(1).dump(2);

    std::vector<fs::path> outs{root / "first", root / "second"};
    for (const auto& out : outs) {
        std::vector<std::string> args{"gadmm", "sweep", "--config", cfg.string(), "--out", out.string()};
        std::vector<char*> argv;
        for (auto& a : args) argv.push_back(a.data());
        const int code = cli_main(static_cast<int>(argv.size()), argv.data());
        if (code != 0) return {false, "sweep exited with " + std::to_string(code)};
    }
    std::size_t files = 0, same = 0;
    for (const auto& entry : fs::directory_iterator(outs[0])) {
        const auto name = entry.path().filename();
        if (name.extension() != ".csv" && name.extension() != ".dat") continue;
        ++files;
        if (fs::exists(outs[1] / name) && slurp(entry.path()) == slurp(outs[1] / name)) ++same;
    }
    std::size_t files_second = 0;
    for (const auto& entry : fs::directory_iterator(outs[1]))
        if (entry.path().extension() == ".csv" || entry.path().extension() == ".dat") ++files_second;
    return {files > 0 && same == files && files_second == files,
            std::to_string(same) + "/" + std::to_string(files) + " CSV and plot-data files byte-identical"};
}

}  // namespace

int main() {
    std::cout.setf(std::ios::unitbuf);
    criterion(1, "analytic gradients match central finite differences", 5, gradients);
    criterion(2, "distributed run matches the centralized solution", 10, distributed_matches_centralized);
    criterion(3, "epsilon sweep: fewer iterations and larger delta as epsilon grows", 60, epsilon_trend);
    criterion(4, "varsigma sweep: median delta with protection does not exceed the unprotected one", 120,
              varsigma_trend);
    criterion(5, "P-matrix test agrees with the sign-condition oracle on all 3x3 {-1,0,1} matrices", 60,
              p_matrix_oracle);
    criterion(6, "projection, hyperplane and Tikhonov reach the enumerated NCP solution", 10, ncp_schemes);
    criterion(7, "M2 is exactly skew-symmetric", 0, skew_symmetry);
    criterion(8, "KKT residual at the converged exact-data state", 0, kkt_at_convergence);
    criterion(9, "sweep output is byte-identical across reruns", 0, sweep_determinism);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
