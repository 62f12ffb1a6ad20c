#include <doctest.h>

#include <random>

#include "gadmm/consensus_constraints.hpp"
#include "gadmm/errors.hpp"
#include "oracles.hpp"

using namespace gadmm;

namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

Group random_graph(std::mt19937_64& rng, std::size_t n) {
    std::bernoulli_distribution edge(0.4);
    Group g;
    g.adjacency.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (edge(rng)) {
                g.adjacency[i].push_back(j);
                g.adjacency[j].push_back(i);
            }
    return g;
}

}  // namespace

TEST_CASE("eval_equality") {
    const Vector z = v2(1, 2);
    CHECK(eval_equality(Classical{}, 0, z, z, {}) == Vector::Zero(2));
    CHECK(eval_equality(Classical{}, 0, v2(3, 3), z, {}) == v2(2, 1));

    const Group chain{{{1}, {0, 2}, {1}}};
    const std::vector<Vector> same(3, v2(4, -1));
    const Vector g = eval_equality(chain, 1, same[1], z, same);
    CHECK(g.size() == 4);
    CHECK(g == Vector::Zero(4));
    const std::vector<Vector> ws{v2(1, 0), v2(0, 0), v2(0, 5)};
    CHECK(eval_equality(chain, 1, ws[1], z, ws) == (Vector(4) << -1, 0, 0, -5).finished());

    CHECK(eval_equality(SoftNorm{2, {0.1}}, 0, z, z, {}).size() == 0);
    CHECK_THROWS_AS(eval_equality(chain, 5, z, z, ws), InvalidArgument);
}

TEST_CASE("eval_inequality") {
    const SoftNorm s2{2, {0.1}};
    CHECK(eval_inequality(s2, 0, v2(0.3, 0.4), Vector::Zero(2)) == doctest::Approx(0.15));
    CHECK(eval_inequality(s2, 0, v2(1, 1), v2(1, 1)) == doctest::Approx(-0.1));
    CHECK(eval_inequality(SoftNorm{1, {0.0}}, 0, v2(-2, 1), Vector::Zero(2)) == doctest::Approx(3.0));
    CHECK(eval_inequality(Classical{}, 0, v2(5, 5), Vector::Zero(2)) == 0.0);
    CHECK(eval_inequality(Group{{{}}}, 0, v2(5, 5), Vector::Zero(2)) == 0.0);
    CHECK_THROWS_AS(eval_inequality(SoftNorm{3, {0.1}}, 0, v2(1, 1), v2(0, 0)), InvalidArgument);
}

TEST_CASE("grad_inequality") {
    const SoftNorm s2{2, {0.1}};
    const auto g = grad_inequality(s2, 0, v2(1, -1), Vector::Zero(2));
    CHECK(g.wrt_weights == v2(2, -2));
    CHECK(g.wrt_consensus == v2(-2, 2));
    const auto zero = grad_inequality(s2, 0, v2(1, 1), v2(1, 1));
    CHECK(zero.wrt_weights == Vector::Zero(2));
    CHECK(zero.wrt_consensus == Vector::Zero(2));

    const auto g1 = grad_inequality(SoftNorm{1, {0.0}}, 0, v2(3, 0), v2(1, 0));
    CHECK(g1.wrt_weights == v2(1, 0));
}

TEST_CASE("soft-norm gradients match finite differences") {
    std::mt19937_64 rng(8);
    for (int p : {1, 2}) {
        const SoftNorm s{p, {0.3}};
        for (int t = 0; t < 100; ++t) {
            const Vector w = oracle::random_vector(rng, 4), z = oracle::random_vector(rng, 4);
            const auto g = grad_inequality(s, 0, w, z);
            const auto fw = [&](const Vector& v) { return eval_inequality(s, 0, v, z); };
            const auto fz = [&](const Vector& v) { return eval_inequality(s, 0, w, v); };
            CHECK(oracle::rel_err(g.wrt_weights, oracle::fd_gradient(fw, w)) < 1e-5);
            CHECK(oracle::rel_err(g.wrt_consensus, oracle::fd_gradient(fz, z)) < 1e-5);
        }
    }
}

TEST_CASE("constraint properties") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const Vector a = oracle::random_vector(rng, 3), b = oracle::random_vector(rng, 3), z = oracle::random_vector(rng, 3);
        for (int p : {1, 2}) {
            const SoftNorm s{p, {0.2}};
            CHECK(eval_inequality(s, 0, 0.5 * (a + b), z) <=
                  0.5 * (eval_inequality(s, 0, a, z) + eval_inequality(s, 0, b, z)) + 1e-12);
            const SoftNorm looser{p, {0.2 + unit(rng) + 1e-3}};
            CHECK(eval_inequality(looser, 0, a, z) < eval_inequality(s, 0, a, z));
        }
        // superposition of the classical residual in w for fixed z
        const double x = unit(rng), y = unit(rng);
        const Vector lhs = eval_equality(Classical{}, 0, x * a + y * b, z, {});
        const Vector rhs = x * eval_equality(Classical{}, 0, a, z, {}) + y * eval_equality(Classical{}, 0, b, z, {}) +
                           (x + y - 1.0) * z;
        CHECK((lhs - rhs).norm() < 1e-12);
    }
}

TEST_CASE("equality multiplicity") {
    CHECK(equality_multiplicity(Classical{}, 0) == 1);
    CHECK(equality_multiplicity(SoftNorm{2, {0.1}}, 0) == 0);
    CHECK(equality_multiplicity(Group{{{1, 2}, {0}, {0}}}, 0) == 2);
}

TEST_CASE("linear matrices") {
    const auto c2 = build_linear_matrices(Classical{}, 2);
    CHECK(c2.C == Matrix::Constant(2, 2, 0.5));
    CHECK(c2.A.rows() == 0);
    const auto avg = build_linear_matrices(Classical{}, 4, ClassicalSign::averaging);
    CHECK((avg.C * Vector::Ones(4)).norm() < 1e-15);

    const auto chain = build_linear_matrices(Group{{{1}, {0, 2}, {1}}}, 3);
    CHECK(chain.C.row(0) == (Eigen::RowVectorXd(3) << 1, -1, 0).finished());
    CHECK(chain.C.row(1) == (Eigen::RowVectorXd(3) << -1, 1, -1).finished());

    CHECK_THROWS_AS(build_linear_matrices(SoftNorm{2, {0.1, 0.1}}, 2), UnsupportedVariant);
}

TEST_CASE("M2 is bit-exactly skew-symmetric") {
    for (std::size_t n = 1; n <= 8; ++n)
        for (auto sign : {ClassicalSign::plus, ClassicalSign::averaging}) {
            const Matrix m = build_linear_matrices(Classical{}, n, sign).M2;
            CHECK(Matrix(m + m.transpose()) == Matrix::Zero(m.rows(), m.cols()));
        }
    std::mt19937_64 rng(10);
    for (int s = 0; s < 20; ++s) {
        const Matrix m = build_linear_matrices(random_graph(rng, 6), 6).M2;
        CHECK(Matrix(m + m.transpose()) == Matrix::Zero(m.rows(), m.cols()));
    }
}

TEST_CASE("kron_expand") {
    const Matrix c = (Matrix(2, 2) << 1, 2, 3, 4).finished();
    const Matrix k = kron_expand(c, 2);
    CHECK(k.rows() == 4);
    CHECK(k(0, 0) == 1);
    CHECK(k(1, 1) == 1);
    CHECK(k(0, 1) == 0);
    CHECK(k(2, 0) == 3);
    CHECK(k(3, 3) == 4);
}
