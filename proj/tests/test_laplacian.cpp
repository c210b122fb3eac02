#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "relaxinv/errors.hpp"
#include "relaxinv/laplacian.hpp"
#include "relaxinv/rng.hpp"

using namespace relaxinv;

TEST_CASE("constants lie in the null space") {
    const LaplacianOp op{7, 5};
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(op.size(), 3.25);
    CHECK(apply_laplacian(op, c).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("interior spike reproduces the five-point stencil") {
    const LaplacianOp op{5, 5};
    Eigen::VectorXd f = Eigen::VectorXd::Zero(25);
    f[2 + 2 * 5] = 1.0;  // center pixel (2,2)
    const Eigen::VectorXd lf = apply_laplacian(op, f);
    Eigen::Map<const Eigen::MatrixXd> G(lf.data(), 5, 5);
    CHECK(G(2, 2) == 4.0);
    CHECK(G(1, 2) == -1.0);
    CHECK(G(3, 2) == -1.0);
    CHECK(G(2, 1) == -1.0);
    CHECK(G(2, 3) == -1.0);
    CHECK(G(0, 0) == 0.0);
    CHECK(lf.sum() == 0.0);
}

TEST_CASE("clamped boundary: corner spike") {
    // At (0,0) both out-of-range neighbors clamp to the pixel itself, so the
    // diagonal entry drops from 4 to 2.
    const LaplacianOp op{3, 3};
    Eigen::VectorXd f = Eigen::VectorXd::Zero(9);
    f[0] = 1.0;
    const Eigen::VectorXd lf = apply_laplacian(op, f);
    Eigen::Map<const Eigen::MatrixXd> G(lf.data(), 3, 3);
    CHECK(G(0, 0) == 2.0);
    CHECK(G(1, 0) == -1.0);
    CHECK(G(0, 1) == -1.0);
    CHECK(G(2, 2) == 0.0);
}

TEST_CASE("operator is symmetric") {
    const LaplacianOp op{6, 9};
    for (int trial = 0; trial < 10; ++trial) {
        const auto seed = static_cast<std::uint64_t>(100 + trial);
        const Eigen::VectorXd u = gaussian_vector(seed, op.size());
        const Eigen::VectorXd v = gaussian_vector(seed + 50, op.size());
        const double lhs = apply_laplacian(op, u).dot(v);
        const double rhs = u.dot(apply_laplacian(op, v));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("spectral norm stays below 8") {
    for (const auto [n1, n2] : {std::pair<Eigen::Index, Eigen::Index>{4, 4}, {7, 3}, {12, 9}}) {
        const LaplacianOp op{n1, n2};
        const double lam = oracles::power_lambda_max(
            [&](const Eigen::VectorXd& v) {
                return apply_laplacian(op, apply_laplacian(op, v));  // L^T L = L^2
            },
            op.size(), 3000);
        CHECK(std::sqrt(lam) <= 8.0 + 1e-9);
        CHECK(std::sqrt(lam) > 1.0);
    }
}

TEST_CASE("gradient magnitude against a nested-loop oracle") {
    const Eigen::Index n1 = 6, n2 = 8;
    const Eigen::VectorXd f = gaussian_vector(777, n1 * n2);
    const Eigen::VectorXd p = gradient_magnitude(f, n1, n2);
    Eigen::Map<const Eigen::MatrixXd> F(f.data(), n1, n2);
    for (Eigen::Index j = 0; j < n2; ++j)
        for (Eigen::Index i = 0; i < n1; ++i) {
            const double dx = (i + 1 < n1) ? F(i + 1, j) - F(i, j) : F(i, j) - F(i - 1, j);
            const double dy = (j + 1 < n2) ? F(i, j + 1) - F(i, j) : F(i, j) - F(i, j - 1);
            CHECK(p[i + j * n1] ==
                  doctest::Approx(std::sqrt(dx * dx + dy * dy)).epsilon(1e-14));
        }
}

TEST_CASE("neighborhood max of squares against a brute-force scan") {
    const Eigen::Index n1 = 7, n2 = 5;
    const Eigen::VectorXd v = gaussian_vector(31337, n1 * n2);
    Eigen::Map<const Eigen::MatrixXd> V(v.data(), n1, n2);
    for (const int radius : {1, 2}) {
        const Eigen::VectorXd w = neighborhood_max_sq(v, n1, n2, radius);
        for (Eigen::Index j = 0; j < n2; ++j)
            for (Eigen::Index i = 0; i < n1; ++i) {
                double m = 0.0;
                for (Eigen::Index jj = std::max<Eigen::Index>(0, j - radius);
                     jj <= std::min(n2 - 1, j + radius); ++jj)
                    for (Eigen::Index ii = std::max<Eigen::Index>(0, i - radius);
                         ii <= std::min(n1 - 1, i + radius); ++ii)
                        m = std::max(m, V(ii, jj) * V(ii, jj));
                CHECK(w[i + j * n1] == m);
            }
    }
}

TEST_CASE("local maps bundle both fields") {
    const LaplacianOp op{4, 4};
    const Eigen::VectorXd f = gaussian_vector(5, op.size());
    const LocalMaps maps = local_maps(op, f);
    CHECK(maps.c == apply_laplacian(op, f));
    CHECK(maps.p == gradient_magnitude(f, 4, 4));
}

TEST_CASE("shape validation") {
    const LaplacianOp op{3, 3};
    CHECK_THROWS_AS(apply_laplacian(op, Eigen::VectorXd::Zero(8)), ShapeError);
    CHECK_THROWS_AS(gradient_magnitude(Eigen::VectorXd::Zero(9), 3, 2), ShapeError);
    CHECK_THROWS_AS(neighborhood_max_sq(Eigen::VectorXd::Zero(9), 3, 3, -1), DomainError);
}
