#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "hsc/error.hpp"
#include "hsc/graph.hpp"
#include "hsc/spectral.hpp"
#include "hsc/synthetic.hpp"
#include "support.hpp"

using namespace hsc;

namespace {

SymmetricMatrix sym(const Eigen::MatrixXd& m) { return SymmetricMatrix{m}; }

void check_basis(const SymmetricMatrix& m, const SpectralBasis& b) {
  const Eigen::Index n = m.size();
  const double scale = std::max(1.0, m.values.cwiseAbs().maxCoeff());
  CHECK((b.vectors.transpose() * b.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((m.values * b.vectors - b.vectors * b.values.asDiagonal()).cwiseAbs().maxCoeff() <= 1e-7 * scale);
  for (Eigen::Index i = 1; i < n; ++i) CHECK(b.values[i] >= b.values[i - 1]);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double peak = b.vectors.col(j).cwiseAbs().maxCoeff();
    Eigen::Index first = 0;
    while (std::abs(b.vectors(first, j)) < peak - 1e-12 * peak) ++first;
    CHECK(b.vectors(first, j) > 0);
  }
}

}  // namespace

TEST_CASE("eigendecomposition of small analytic cases") {
  Eigen::Matrix2d two;
  two << 2, -1, -1, 2;
  const auto b = eigendecompose_symmetric(sym(two));
  CHECK(b.values[0] == doctest::Approx(1));
  CHECK(b.values[1] == doctest::Approx(3));

  const auto k3 = combinatorial_laplacian(build_adjacency(test::one_triangle()));
  const auto e = eigendecompose_symmetric(k3);
  CHECK(std::abs(e.values[0]) <= 1e-10);
  CHECK(std::abs(e.values[1] - 3) <= 1e-10);
  CHECK(std::abs(e.values[2] - 3) <= 1e-10);
  for (int i = 0; i < 3; ++i) CHECK(e.vectors(i, 0) == doctest::Approx(1 / std::sqrt(3.0)));

  const auto one = eigendecompose_symmetric(sym(Eigen::MatrixXd::Constant(1, 1, 4.5)));
  CHECK(one.values[0] == 4.5);
  CHECK(one.vectors(0, 0) == 1.0);
}

TEST_CASE("path graph spectrum matches 2 - 2cos(pi k / n)") {
  for (std::size_t n : {2u, 5u, 17u, 64u}) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
    for (std::uint32_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    const auto b = eigendecompose_symmetric(combinatorial_laplacian(graph_from_edges(n, e)));
    for (std::size_t k = 0; k < n; ++k)
      CHECK(std::abs(b.values[k] - (2 - 2 * std::cos(std::numbers::pi * double(k) / double(n)))) <= 1e-10);
  }
}

TEST_CASE("random symmetric matrices against an independent solver") {
  std::mt19937_64 rng(11);
  for (Eigen::Index n : {2, 3, 10, 50, 137}) {
    const auto m = sym(test::random_symmetric(rng, n));
    const auto b = eigendecompose_symmetric(m);
    check_basis(m, b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(m.values, Eigen::EigenvaluesOnly);
    CHECK((b.values - oracle.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, m.values.norm()));
    const Eigen::MatrixXd back = b.vectors * b.values.asDiagonal() * b.vectors.transpose();
    CHECK((back - m.values).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, m.values.norm()));
  }
}

TEST_CASE("QL and Jacobi agree on matrices with a simple spectrum") {
  std::mt19937_64 rng(5);
  for (Eigen::Index n : {4, 20, 60}) {
    const auto m = sym(test::random_symmetric(rng, n));
    const auto ql = eigendecompose_symmetric(m);
    const auto jac = eigendecompose_jacobi(m);
    check_basis(m, jac);
    CHECK((ql.values - jac.values).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((ql.vectors - jac.vectors).cwiseAbs().maxCoeff() <= 1e-7);
  }
}

TEST_CASE("eigendecomposition is deterministic and rejects non-finite input") {
  const auto L = combinatorial_laplacian(build_adjacency(synth::bumpy_sphere(2, 4)));
  const auto a = eigendecompose_symmetric(L);
  const auto b = eigendecompose_symmetric(L);
  CHECK(a.vectors == b.vectors);
  CHECK(a.values == b.values);
  Eigen::Matrix2d bad;
  bad << 1, std::nan(""), std::nan(""), 1;
  CHECK_THROWS_AS(eigendecompose_symmetric(sym(bad)), NumericalError);
}

TEST_CASE("linear potential") {
  CHECK(linear_potential(1).diagonal[0] == 1.0);
  const auto p3 = linear_potential(3);
  for (int i = 0; i < 3; ++i) CHECK(p3.diagonal[i] == doctest::Approx((i + 1) / std::sqrt(14.0)));
  for (std::size_t n : {2u, 10u, 300u, 1000u}) {
    const auto p = linear_potential(n);
    CHECK(std::abs(p.diagonal.squaredNorm() - 1) <= 1e-12);
    for (Eigen::Index i = 1; i < p.diagonal.size(); ++i) CHECK(p.diagonal[i] > p.diagonal[i - 1]);
  }
  CHECK_THROWS_AS(linear_potential(0), ConfigError);
}

TEST_CASE("hamiltonian assembly") {
  const auto k3 = combinatorial_laplacian(build_adjacency(test::one_triangle()));
  CHECK(hamiltonian(k3, linear_potential(3, 0)).values == k3.values);
  const auto h = hamiltonian(k3, linear_potential(3, std::sqrt(14.0)));
  CHECK(h(0, 0) == doctest::Approx(3));
  CHECK(h(1, 1) == doctest::Approx(4));
  CHECK(h(2, 2) == doctest::Approx(5));
  CHECK(h(0, 1) == -1);

  // eigenvalues grow index-wise with a nonnegative potential
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto L = combinatorial_laplacian(build_adjacency(synth::random_mesh(80, seed)));
    const auto lam = eigendecompose_symmetric(L).values;
    for (double mu : {0.1, 1.0, 10.0}) {
      const auto e = eigendecompose_symmetric(hamiltonian(L, linear_potential(L.size(), mu))).values;
      CHECK(((e - lam).array() >= -1e-10).all());
    }
  }
}

TEST_CASE("weighted gradient factorization and truncation bound") {
  const std::size_t n = 64;
  const Eigen::MatrixXd D = dirichlet_difference(n);
  for (double mu : {0.0, 1.0, 10.0}) {
    const auto pot = linear_potential(n, mu);
    const Eigen::MatrixXd wd = weighted_gradient(D, pot);
    const auto H = hamiltonian(chain_laplacian(D), pot);
    CHECK((wd.transpose() * wd - H.values).cwiseAbs().maxCoeff() <= 1e-8);

    // independent evaluation of W through Eigen's matrix square root
    const Eigen::MatrixXd dinv = D.inverse();
    const Eigen::MatrixXd inner = Eigen::MatrixXd::Identity(n, n) + dinv.transpose() * (mu * pot.diagonal).asDiagonal() * dinv;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> root(inner);
    CHECK((root.operatorSqrt() * D - wd).cwiseAbs().maxCoeff() <= 1e-8);
  }

  std::mt19937_64 rng(3);
  const auto pot = linear_potential(n, 1.0);
  const Eigen::VectorXd f = test::random_matrix(rng, n, 1);
  const auto r = verify_weighted_gradient_bound(n, pot, f, 8);
  CHECK(r.residual_sq <= r.bound);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian(chain_laplacian(D), pot).values);
  const Eigen::VectorXd psi0 = es.eigenvectors().col(0);
  CHECK(verify_weighted_gradient_bound(n, pot, psi0, 1).residual_sq <= 1e-20);
  const auto tail = es.eigenvectors().rightCols(n - 8);
  CHECK(r.residual_sq == doctest::Approx((tail.transpose() * f).squaredNorm()).epsilon(1e-10));

  // no potential: the bound is the plain Laplacian one
  const auto zero = verify_weighted_gradient_bound(n, linear_potential(n, 0), f, 8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> lap(chain_laplacian(D).values);
  CHECK(zero.bound == doctest::Approx((D * f).squaredNorm() / lap.eigenvalues()[8]).epsilon(1e-10));

  Eigen::MatrixXd singular = D;
  singular.row(3).setZero();
  CHECK_THROWS_AS(weighted_gradient(singular, pot), NumericalError);
  CHECK_THROWS(verify_weighted_gradient_bound(n, pot, f, 0));
  CHECK_THROWS(verify_weighted_gradient_bound(n, pot, f, n));
}
