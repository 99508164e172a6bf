#include "hsc/spectral.hpp"

#include <limits>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/LU>

#include "hsc/error.hpp"
#include "hsc/kernels.hpp"

namespace hsc {
namespace {

constexpr int kMaxQlIterations = 60;
constexpr int kMaxJacobiSweeps = 100;

void require_finite(const SymmetricMatrix& m) {
  if (m.values.rows() != m.values.cols()) throw NumericalError("eigendecomposition needs a square matrix");
  if (!m.values.allFinite()) throw NumericalError("eigendecomposition input has non-finite entries");
}

// Sorts eigenpairs ascending (stable on ties) and fixes column signs so the
// largest-magnitude entry is positive.
SpectralBasis finalize(Eigen::MatrixXd vectors, const Eigen::VectorXd& values) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });

  SpectralBasis out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    out.values[j] = values[src];
    auto col = vectors.col(src);
    const double peak = col.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    while (std::abs(col[pivot]) < peak - 1e-12) ++pivot;
    out.vectors.col(j) = col[pivot] < 0 ? Eigen::VectorXd(-col) : Eigen::VectorXd(col);
  }
  return out;
}

// Householder reduction to tridiagonal form (EISPACK tred2 ordering).
// On exit v holds the accumulated orthogonal transform, d the diagonal and
// e the subdiagonal in e[1..n-1].
void tridiagonalize(Eigen::MatrixXd& v, Eigen::VectorXd& d, Eigen::VectorXd& e) {
  const Eigen::Index n = v.rows();
  d = v.row(n - 1).transpose();
  e.setZero(n);

  for (Eigen::Index i = n - 1; i > 0; --i) {
    double scale = 0;
    double h = 0;
    for (Eigen::Index k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (Eigen::Index j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0;
        v(j, i) = 0;
      }
    } else {
      for (Eigen::Index k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (Eigen::Index j = 0; j < i; ++j) e[j] = 0;

      // e = A d on the leading i x i lower triangle.
      for (Eigen::Index j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (Eigen::Index k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0;
      for (Eigen::Index j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (Eigen::Index j = 0; j < i; ++j) e[j] -= hh * d[j];

      kernels::rank2_update(v, d, e, i);
      for (Eigen::Index j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0;
      }
    }
    d[i] = h;
  }

  // Accumulate the transformations.
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (Eigen::Index k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      const Eigen::Index len = i + 1;
      const double* u = v.data() + (i + 1) * n;
#pragma omp parallel for schedule(static) if (len > 96)
      for (Eigen::Index j = 0; j <= i; ++j) {
        double* col = v.data() + j * n;
        double g = 0;
        for (Eigen::Index k = 0; k < len; ++k) g += u[k] * col[k];
        for (Eigen::Index k = 0; k < len; ++k) col[k] -= g * d[k];
      }
    }
    for (Eigen::Index k = 0; k <= i; ++k) v(k, i + 1) = 0;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0;
  }
  v(n - 1, n - 1) = 1;
  e[0] = 0;
}

// Implicit QL on the tridiagonal (d, e); rotations are batched per sweep and
// applied to v through kernels::apply_rotations.
void tridiagonal_ql(Eigen::MatrixXd& v, Eigen::VectorXd& d, Eigen::VectorXd& e) {
  const Eigen::Index n = d.size();
  for (Eigen::Index i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0;

  std::vector<kernels::Rotation> sweep;
  sweep.reserve(static_cast<std::size_t>(n));
  double f = 0;
  double tst1 = 0;
  const double eps = std::ldexp(1.0, -52);
  for (Eigen::Index l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    Eigen::Index m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxQlIterations)
          throw NumericalError("tridiagonal QL did not converge for eigenvalue " + std::to_string(l));
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (Eigen::Index i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1, c2 = 1, c3 = 1;
        const double el1 = e[l + 1];
        double s = 0, s2 = 0;
        sweep.clear();
        for (Eigen::Index i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          sweep.push_back({c, s});
        }
        kernels::apply_rotations(v, sweep, m);
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0;
  }
}

}  // namespace

SpectralBasis eigendecompose_symmetric(const SymmetricMatrix& matrix) {
  require_finite(matrix);
  const Eigen::Index n = matrix.size();
  if (n == 0) return {};
  if (n == 1) return finalize(Eigen::MatrixXd::Ones(1, 1), matrix.values.diagonal());

  Eigen::MatrixXd v = matrix.values;
  Eigen::VectorXd d, e;
  tridiagonalize(v, d, e);
  tridiagonal_ql(v, d, e);
  return finalize(std::move(v), d);
}

SpectralBasis eigendecompose_jacobi(const SymmetricMatrix& matrix) {
  require_finite(matrix);
  const Eigen::Index n = matrix.size();
  Eigen::MatrixXd a = matrix.values;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double total = a.norm();

  for (int sweep = 0;; ++sweep) {
    double off = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2 * off) <= double(n) * std::numeric_limits<double>::epsilon() * total || total == 0) break;
    if (sweep >= kMaxJacobiSweeps) throw NumericalError("Jacobi eigensolver did not converge");

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  return finalize(std::move(v), a.diagonal());
}

SymmetricMatrix hamiltonian(const SymmetricMatrix& laplacian, const Potential& potential) {
  if (potential.diagonal.size() != laplacian.size()) throw Error("potential size does not match operator");
  SymmetricMatrix h = laplacian;
  if (potential.mu != 0.0) h.values.diagonal() += potential.mu * potential.diagonal;
  return h;
}

Potential linear_potential(std::size_t n, double mu) {
  if (n == 0) throw ConfigError("linear potential needs n >= 1");
  Potential p;
  p.mu = mu;
  p.diagonal = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n), 1.0, static_cast<double>(n));
  p.diagonal /= p.diagonal.norm();
  return p;
}

Eigen::MatrixXd dirichlet_difference(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(m, m);
  for (Eigen::Index i = 0; i + 1 < m; ++i) d(i, i + 1) = -1;
  return d;
}

SymmetricMatrix chain_laplacian(const Eigen::MatrixXd& difference) {
  Eigen::MatrixXd l = difference.transpose() * difference;
  return {0.5 * (l + l.transpose())};
}

Eigen::MatrixXd weighted_gradient(const Eigen::MatrixXd& difference, const Potential& potential) {
  const Eigen::Index n = difference.rows();
  if (difference.cols() != n || potential.diagonal.size() != n)
    throw Error("weighted gradient needs a square difference operator matching the potential");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(difference);
  if (!lu.isInvertible()) throw NumericalError("difference operator is singular");
  const Eigen::MatrixXd inv = lu.inverse();

  Eigen::MatrixXd m = inv.transpose() * (potential.mu * potential.diagonal).asDiagonal() * inv;
  m.diagonal().array() += 1.0;
  const SpectralBasis eig = eigendecompose_symmetric({0.5 * (m + m.transpose())});
  const Eigen::VectorXd root = eig.values.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd w = eig.vectors * root.asDiagonal() * eig.vectors.transpose();
  return w * difference;
}

GradientBound verify_weighted_gradient_bound(const Eigen::MatrixXd& difference, const Potential& potential,
                                             const Eigen::VectorXd& f, std::size_t k) {
  const auto n = static_cast<std::size_t>(difference.rows());
  if (k == 0 || k >= n) throw ConfigError("truncation order must satisfy 1 <= k < n");
  if (static_cast<std::size_t>(f.size()) != n) throw Error("function size does not match chain length");

  const Eigen::MatrixXd wd = weighted_gradient(difference, potential);
  const SpectralBasis basis = eigendecompose_symmetric(hamiltonian(chain_laplacian(difference), potential));
  const auto kk = static_cast<Eigen::Index>(k);
  const auto head = basis.vectors.leftCols(kk);
  const Eigen::VectorXd residual = f - head * (head.transpose() * f);

  GradientBound out;
  out.residual_sq = residual.squaredNorm();
  out.bound = (wd * f).squaredNorm() / basis.values[kk];
  return out;
}

GradientBound verify_weighted_gradient_bound(std::size_t n, const Potential& potential, const Eigen::VectorXd& f,
                                             std::size_t k) {
  return verify_weighted_gradient_bound(dirichlet_difference(n), potential, f, k);
}

}  // namespace hsc
