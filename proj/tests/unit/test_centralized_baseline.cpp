#include <doctest.h>

#include <random>

#include "gadmm/centralized_baseline.hpp"
#include "gadmm/core_model.hpp"
#include "gadmm/errors.hpp"
#include "oracles.hpp"

using namespace gadmm;

namespace {

SystemState with_weights(std::vector<Vector> ws) {
    SystemState s;
    const auto d = ws.front().size();
    const auto n = static_cast<Eigen::Index>(ws.size());
    s.weights = std::move(ws);
    s.consensus = Vector::Zero(d);
    s.lambda = Vector::Zero(n);
    s.mu = Vector::Zero(n);
    return s;
}

}  // namespace

TEST_CASE("square nonsingular zero-noise system recovers w*") {
    const auto syn = generate_synthetic(3, 1, 4, 4, 0.0, LossKind::linear);
    const Vector w = solve_centralized(LossKind::linear, syn.datasets);
    CHECK((w - syn.ground_truth).norm() < 1e-8);
}

TEST_CASE("identical datasets give the single-dataset solution") {
    for (auto kind : {LossKind::linear, LossKind::logistic}) {
        const auto syn = generate_synthetic(4, 1, 40, 3, 1.0, kind);
        const std::vector<UserDataset> copies(5, syn.datasets.front());
        const Vector one = solve_centralized(kind, syn.datasets);
        const Vector five = solve_centralized(kind, copies);
        CHECK((one - five).norm() < 1e-6);
    }
}

TEST_CASE("normal equations match plain gradient descent") {
    std::mt19937_64 rng(50);
    for (int t = 0; t < 5; ++t) {
        const auto syn = generate_synthetic(static_cast<std::uint64_t>(t), 3, 8, 4, 0.3, LossKind::linear);
        oracle::Mat g(4, oracle::Vec(4, 0.0));
        oracle::Vec xty(4, 0.0);
        for (const auto& ds : syn.datasets) {
            const auto gi = oracle::gram(ds.features());
            const Vector r = ds.features().transpose() * ds.labels();
            for (std::size_t i = 0; i < 4; ++i) {
                xty[i] += r(static_cast<Eigen::Index>(i));
                for (std::size_t j = 0; j < 4; ++j) g[i][j] += gi[i][j];
            }
        }
        const auto eig = oracle::jacobi_eigenvalues(g);
        const double step = 1.0 / *std::max_element(eig.begin(), eig.end());
        oracle::Vec w(4, 0.0);
        for (int k = 0; k < 1000000; ++k) {
            oracle::Vec grad = oracle::matvec(g, w);
            for (std::size_t i = 0; i < 4; ++i) grad[i] -= xty[i];
            if (oracle::norm(grad) < 1e-10) break;
            for (std::size_t i = 0; i < 4; ++i) w[i] -= step * grad[i];
        }
        const Vector ref = Eigen::Map<const Vector>(w.data(), 4);
        CHECK((solve_centralized(LossKind::linear, syn.datasets) - ref).norm() < 1e-8);
    }
}

TEST_CASE("logistic non-convergence carries the best iterate") {
    // Separable data: the minimiser is at infinity.
    const UserDataset data((Matrix(2, 1) << 1.0, -1.0).finished(), (Vector(2) << 1.0, -1.0).finished());
    try {
        solve_centralized(LossKind::logistic, {data}, 1e-12, 50);
        FAIL("expected NotConverged");
    } catch (const NotConverged& e) {
        CHECK(e.best_iterate().size() == 1);
        CHECK(e.best_iterate()(0) > 0.0);
    }
}

TEST_CASE("rank-deficient linear systems still solve") {
    Matrix x = Matrix::Zero(3, 2);
    x.col(0) << 1, 2, 3;
    const Vector w = solve_centralized(LossKind::linear, {UserDataset(x, (Vector(3) << 1, 2, 3).finished())});
    CHECK(w.allFinite());
    CHECK(w(0) == doctest::Approx(1.0));
}

TEST_CASE("delta examples") {
    const auto syn = generate_synthetic(5, 2, 6, 3, 0.2, LossKind::linear);
    const Vector w_star = solve_centralized(LossKind::linear, syn.datasets);
    const auto exact = compute_delta(with_weights({w_star, w_star}), w_star, LossKind::linear, syn.datasets);
    CHECK(exact.param == 0.0);
    CHECK(exact.objective == doctest::Approx(0.0).epsilon(1e-12));

    const auto zero = compute_delta(with_weights({Vector::Ones(3)}), Vector::Zero(3), LossKind::linear, {syn.datasets[0]});
    CHECK(std::isfinite(zero.param));
    CHECK(std::isfinite(zero.objective));

    const Vector unit = (Vector(3) << 1, 0, 0).finished();
    CHECK(delta_param(with_weights({Vector(2.0 * unit)}), unit) == doctest::Approx(1.0));
    CHECK_THROWS_AS(delta_param(with_weights({Vector::Zero(2)}), unit), InvalidArgument);
}

TEST_CASE("delta is rotation invariant and non-negative") {
    std::mt19937_64 rng(51);
    for (int t = 0; t < 20; ++t) {
        const auto syn = generate_synthetic(static_cast<std::uint64_t>(t), 2, 6, 3, 0.2, LossKind::linear);
        const Vector w_star = solve_centralized(LossKind::linear, syn.datasets);
        std::vector<Vector> ws{oracle::random_vector(rng, 3), oracle::random_vector(rng, 3)};
        const Eigen::HouseholderQR<Matrix> qr(oracle::random_matrix(rng, 3, 3));
        const Matrix q = qr.householderQ();

        std::vector<UserDataset> rotated;
        for (const auto& ds : syn.datasets) rotated.emplace_back(ds.features() * q.transpose(), ds.labels());
        std::vector<Vector> rws{q * ws[0], q * ws[1]};

        const auto a = compute_delta(with_weights(ws), w_star, LossKind::linear, syn.datasets);
        const auto b = compute_delta(with_weights(rws), q * w_star, LossKind::linear, rotated);
        CHECK(a.param == doctest::Approx(b.param).epsilon(1e-10));
        CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-8));
        CHECK(a.param > 0.0);
        CHECK(a.objective >= -1e-12);
    }
}
