#include <doctest.h>

#include <random>

#include <Eigen/QR>

#include "hsc/error.hpp"
#include "hsc/sparse.hpp"
#include "support.hpp"

using namespace hsc;

namespace {

SpectralBasis as_basis(const Eigen::MatrixXd& q) {
  return SpectralBasis{q, Eigen::VectorXd::LinSpaced(q.cols(), 0, double(q.cols() - 1))};
}

Dictionary random_dictionary(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
  Dictionary d;
  d.atoms = test::random_matrix(rng, n, m);
  d.atoms.colwise().normalize();
  d.provenance.resize(static_cast<std::size_t>(m));
  return d;
}

// Least-squares residual of signals on a fixed support, by a separate QR.
double ls_residual(const Dictionary& d, const Eigen::MatrixXd& u, const std::vector<Eigen::Index>& s) {
  Eigen::MatrixXd a(d.n(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t t = 0; t < s.size(); ++t) a.col(static_cast<Eigen::Index>(t)) = d.atoms.col(s[t]);
  const Eigen::MatrixXd x = a.colPivHouseholderQr().solve(u);
  return (u - a * x).squaredNorm();
}

}  // namespace

TEST_CASE("dictionary layout and provenance") {
  std::mt19937_64 rng(1);
  const auto a = as_basis(test::random_orthobasis(rng, 100));
  const auto b = as_basis(test::random_orthobasis(rng, 100));
  const auto one = build_dictionary(a);
  CHECK(one.m() == 100);
  CHECK(one.atoms == a.vectors);
  const std::vector<const SpectralBasis*> list{&a, &b};
  const auto two = build_dictionary(list);
  CHECK(two.m() == 200);
  for (Eigen::Index j = 0; j < two.m(); ++j) {
    CHECK(two.provenance[j].basis == j / 100);
    CHECK(two.provenance[j].index == j % 100);
    CHECK(std::abs(two.atoms.col(j).norm() - 1) <= 1e-10);
  }
  const auto c = as_basis(test::random_orthobasis(rng, 50));
  const std::vector<const SpectralBasis*> bad{&a, &c};
  CHECK_THROWS_AS(build_dictionary(bad), Error);
}

TEST_CASE("somp on an orthobasis") {
  std::mt19937_64 rng(2);
  const Eigen::Index n = 30;
  const auto basis = as_basis(test::random_orthobasis(rng, n));
  const auto dict = build_dictionary(basis);
  const Eigen::MatrixXd u = test::random_matrix(rng, n, 3);
  const auto full = somp(u, dict, n);
  CHECK((reconstruct(dict, full) - u).norm() <= 1e-9 * u.norm());

  Eigen::MatrixXd one = Eigen::MatrixXd::Zero(n, 3);
  one.col(0) = 5 * dict.atoms.col(7);
  const auto c1 = somp(one, dict, 1);
  REQUIRE(c1.k() == 1);
  CHECK(c1.support[0] == 7);
  CHECK(c1.coefficients(0, 0) == doctest::Approx(5));
  CHECK(std::abs(c1.coefficients(0, 1)) <= 1e-12);

  Eigen::MatrixXd two = 2 * dict.atoms.col(3) * Eigen::RowVector3d(1, -1, 0.5) +
                        dict.atoms.col(21) * Eigen::RowVector3d(0.3, 2, -1);
  const auto c2 = somp(two, dict, 2);
  CHECK(((c2.support[0] == 3 && c2.support[1] == 21) || (c2.support[0] == 21 && c2.support[1] == 3)));
  CHECK((reconstruct(dict, c2) - two).norm() <= 1e-10);

  CHECK_THROWS_AS(somp(u, dict, n + 1), ConfigError);
}

TEST_CASE("reconstruct") {
  std::mt19937_64 rng(3);
  const auto dict = random_dictionary(rng, 10, 20);
  SparseCode empty;
  empty.coefficients.resize(0, 3);
  CHECK(reconstruct(dict, empty) == Eigen::MatrixXd::Zero(10, 3));
  SparseCode single;
  single.support = {4};
  single.coefficients = Eigen::RowVector3d(1, 2, 3);
  const auto r = reconstruct(dict, single);
  for (int c = 0; c < 3; ++c) CHECK((r.col(c) - (c + 1) * dict.atoms.col(4)).norm() <= 1e-14);
}

TEST_CASE("somp residual is monotone and orthogonal to the support") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto dict = random_dictionary(rng, 25, 60);
    const Eigen::MatrixXd u = test::random_matrix(rng, 25, 3);
    const auto code = somp(u, dict, 10);
    for (std::size_t i = 1; i < code.residual_history.size(); ++i)
      CHECK(code.residual_history[i] <= code.residual_history[i - 1] * (1 + 1e-12));
    const Eigen::MatrixXd r = u - reconstruct(dict, code);
    for (auto j : code.support) CHECK((dict.atoms.col(j).transpose() * r).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(std::abs(r.squaredNorm() - code.residual_history.back()) <= 1e-9 * u.squaredNorm());
    // each channel shares one support by construction
    CHECK(code.coefficients.rows() == static_cast<Eigen::Index>(code.k()));
  }
}

TEST_CASE("somp matches an exhaustive greedy oracle step by step") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dict = random_dictionary(rng, 30, 60);
    const Eigen::MatrixXd u = test::random_matrix(rng, 30, 3);
    const auto code = somp(u, dict, 3);
    std::vector<Eigen::Index> chosen;
    for (int step = 0; step < 3; ++step) {
      // residual after projecting out the chosen atoms, then the best correlation
      Eigen::MatrixXd r = u;
      if (!chosen.empty()) {
        Eigen::MatrixXd a(30, static_cast<Eigen::Index>(chosen.size()));
        for (std::size_t t = 0; t < chosen.size(); ++t) a.col(static_cast<Eigen::Index>(t)) = dict.atoms.col(chosen[t]);
        r = u - a * a.colPivHouseholderQr().solve(u);
      }
      Eigen::Index best = -1;
      double score = -1;
      for (Eigen::Index j = 0; j < 60; ++j) {
        if (std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
        const double s = (dict.atoms.col(j).transpose() * r).squaredNorm();
        if (s > score) score = s, best = j;
      }
      CHECK(code.support[static_cast<std::size_t>(step)] == best);
      chosen.push_back(best);
    }
  }
}

TEST_CASE("somp against the best 3-subset") {
  std::mt19937_64 rng(6);
  int optimal = 0;
  const int trials = 10;
  for (int trial = 0; trial < trials; ++trial) {
    const auto dict = random_dictionary(rng, 30, 60);
    const Eigen::MatrixXd u = test::random_matrix(rng, 30, 3);
    const auto code = somp(u, dict, 3);
    const double greedy = code.residual_history.back();
    double best = greedy;
    for (Eigen::Index a = 0; a < 60; ++a)
      for (Eigen::Index b = a + 1; b < 60; ++b)
        for (Eigen::Index c = b + 1; c < 60; ++c) best = std::min(best, ls_residual(dict, u, {a, b, c}));
    CHECK(best <= greedy * (1 + 1e-12));
    if (greedy <= best * (1 + 1e-9)) ++optimal;
    // greedy prefixes of its own support never beat the full support
    std::vector<Eigen::Index> prefix;
    for (auto j : code.support) {
      prefix.push_back(j);
      CHECK(greedy <= ls_residual(dict, u, prefix) * (1 + 1e-12));
    }
  }
  MESSAGE("somp optimal in " << optimal << "/" << trials << " trials");
}

TEST_CASE("superset dictionary picks a first atom at least as correlated") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto big = random_dictionary(rng, 20, 80);
    Dictionary small;
    small.atoms = big.atoms.leftCols(40);
    small.provenance.resize(40);
    const Eigen::MatrixXd u = test::random_matrix(rng, 20, 3);
    const auto a = somp(u, big, 1);
    const auto b = somp(u, small, 1);
    CHECK((big.atoms.col(a.support[0]).transpose() * u).norm() >= (small.atoms.col(b.support[0]).transpose() * u).norm());
  }
}

TEST_CASE("somp drops dependent atoms and breaks ties to the lowest index") {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd q = test::random_orthobasis(rng, 6);
  Dictionary d;
  d.atoms.resize(6, 4);
  d.atoms << q.col(0), q.col(1), q.col(0), q.col(1);
  d.provenance.resize(4);
  const Eigen::MatrixXd u = q.leftCols(2) * test::random_matrix(rng, 2, 3);
  const auto code = somp(u, d, 3);
  auto support = code.support;
  auto dropped = code.dropped;
  std::sort(support.begin(), support.end());
  std::sort(dropped.begin(), dropped.end());
  CHECK(support == std::vector<std::uint32_t>{0, 1});
  CHECK(dropped == std::vector<std::uint32_t>{2, 3});
  CHECK((reconstruct(d, code) - u).norm() <= 1e-12 * u.norm());

  Dictionary twin;
  twin.atoms.resize(6, 2);
  twin.atoms << q.col(4), q.col(4);
  twin.provenance.resize(2);
  const Eigen::MatrixXd v = q.col(4) * Eigen::RowVector3d(1, 2, 3);
  CHECK(somp(v, twin, 1).support[0] == 0);
}
