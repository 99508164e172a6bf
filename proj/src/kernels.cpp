#include "hsc/kernels.hpp"

#include <algorithm>
#include <cstdint>

namespace hsc::kernels {

void atom_correlations(const Eigen::MatrixXd& atoms, const Eigen::MatrixXd& signals, Eigen::MatrixXd& corr) {
  const Eigen::Index n = atoms.rows();
  const Eigen::Index m = atoms.cols();
  const Eigen::Index channels = signals.cols();
  corr.resize(m, channels);
  const double* r = signals.data();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < m; ++j) {
    const double* d = atoms.data() + j * n;
    for (Eigen::Index c = 0; c < channels; ++c) {
      const double* rc = r + c * n;
      double dot = 0;
      for (Eigen::Index i = 0; i < n; ++i) dot += d[i] * rc[i];
      corr(j, c) = dot;
    }
  }
}

void atom_correlations_serial(const Eigen::MatrixXd& atoms, const Eigen::MatrixXd& signals, Eigen::MatrixXd& corr) {
  corr.resize(atoms.cols(), signals.cols());
  for (Eigen::Index j = 0; j < atoms.cols(); ++j)
    for (Eigen::Index c = 0; c < signals.cols(); ++c) {
      double dot = 0;
      for (Eigen::Index i = 0; i < atoms.rows(); ++i) dot += atoms(i, j) * signals(i, c);
      corr(j, c) = dot;
    }
}

void apply_rotations(Eigen::MatrixXd& v, std::span<const Rotation> rotations, Eigen::Index top) {
  constexpr Eigen::Index kRowBlock = 64;
  const Eigen::Index rows = v.rows();
  const Eigen::Index nblocks = (rows + kRowBlock - 1) / kRowBlock;
  const auto nrot = static_cast<Eigen::Index>(rotations.size());
  // Rows are independent under column rotations; each thread owns a row slab.
#pragma omp parallel for schedule(static) if (rows * nrot > 32768)
  for (Eigen::Index b = 0; b < nblocks; ++b) {
    const Eigen::Index r0 = b * kRowBlock;
    const Eigen::Index len = std::min(kRowBlock, rows - r0);
    for (Eigen::Index t = 0; t < nrot; ++t) {
      const Eigen::Index i = top - 1 - t;
      const double c = rotations[static_cast<std::size_t>(t)].c;
      const double s = rotations[static_cast<std::size_t>(t)].s;
      double* vi = v.data() + i * rows + r0;
      double* vi1 = vi + rows;
#pragma omp simd
      for (Eigen::Index k = 0; k < len; ++k) {
        const double h = vi1[k];
        vi1[k] = s * vi[k] + c * h;
        vi[k] = c * vi[k] - s * h;
      }
    }
  }
}

void apply_rotations_serial(Eigen::MatrixXd& v, std::span<const Rotation> rotations, Eigen::Index top) {
  for (std::size_t t = 0; t < rotations.size(); ++t) {
    const Eigen::Index i = top - 1 - static_cast<Eigen::Index>(t);
    const auto [c, s] = rotations[t];
    for (Eigen::Index k = 0; k < v.rows(); ++k) {
      const double h = v(k, i + 1);
      v(k, i + 1) = s * v(k, i) + c * h;
      v(k, i) = c * v(k, i) - s * h;
    }
  }
}

void rank2_update(Eigen::MatrixXd& a, const Eigen::VectorXd& d, const Eigen::VectorXd& e, Eigen::Index len) {
  const Eigen::Index ld = a.rows();
#pragma omp parallel for schedule(static) if (len > 96)
  for (Eigen::Index j = 0; j < len; ++j) {
    const double f = d[j];
    const double g = e[j];
    double* col = a.data() + j * ld;
#pragma omp simd
    for (Eigen::Index k = j; k < len; ++k) col[k] -= f * e[k] + g * d[k];
  }
}

void rank2_update_serial(Eigen::MatrixXd& a, const Eigen::VectorXd& d, const Eigen::VectorXd& e, Eigen::Index len) {
  for (Eigen::Index j = 0; j < len; ++j)
    for (Eigen::Index k = j; k < len; ++k) a(k, j) -= d[j] * e[k] + e[j] * d[k];
}

void combine_atoms(const Eigen::MatrixXd& atoms, std::span<const std::uint32_t> support,
                   const Eigen::MatrixXd& coefficients, Eigen::MatrixXd& out) {
  const Eigen::Index n = atoms.rows();
  const Eigen::Index channels = coefficients.cols();
  out.setZero(n, channels);
#pragma omp parallel for schedule(static) if (n * static_cast<Eigen::Index>(support.size()) > 65536)
  for (Eigen::Index c = 0; c < channels; ++c) {
    double* o = out.data() + c * n;
    for (std::size_t t = 0; t < support.size(); ++t) {
      const double w = coefficients(static_cast<Eigen::Index>(t), c);
      const double* d = atoms.data() + static_cast<Eigen::Index>(support[t]) * n;
#pragma omp simd
      for (Eigen::Index i = 0; i < n; ++i) o[i] += w * d[i];
    }
  }
}

void combine_atoms_serial(const Eigen::MatrixXd& atoms, std::span<const std::uint32_t> support,
                          const Eigen::MatrixXd& coefficients, Eigen::MatrixXd& out) {
  out.setZero(atoms.rows(), coefficients.cols());
  for (std::size_t t = 0; t < support.size(); ++t)
    for (Eigen::Index c = 0; c < coefficients.cols(); ++c)
      for (Eigen::Index i = 0; i < atoms.rows(); ++i)
        out(i, c) += coefficients(static_cast<Eigen::Index>(t), c) * atoms(i, static_cast<Eigen::Index>(support[t]));
}

}  // namespace hsc::kernels
