#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version used by the
// codec and a plain serial version kept as the reference in tests and the
// benchmark. Parallel versions partition output elements across threads and
// never split a reduction, so their results do not depend on thread count.

#include <cstdint>
#include <span>

#include <Eigen/Core>

namespace hsc::kernels {

/// corr(j, c) = atoms.col(j) . signals.col(c); corr is resized to m x channels.
void atom_correlations(const Eigen::MatrixXd& atoms, const Eigen::MatrixXd& signals, Eigen::MatrixXd& corr);
void atom_correlations_serial(const Eigen::MatrixXd& atoms, const Eigen::MatrixXd& signals, Eigen::MatrixXd& corr);

struct Rotation {
  double c;
  double s;
};

/// One implicit QL sweep: rotation t acts on columns (top-1-t, top-t) as
///   v(:,i+1) <- s v(:,i) + c v(:,i+1),  v(:,i) <- c v(:,i) - s v(:,i+1).
void apply_rotations(Eigen::MatrixXd& v, std::span<const Rotation> rotations, Eigen::Index top);
void apply_rotations_serial(Eigen::MatrixXd& v, std::span<const Rotation> rotations, Eigen::Index top);

/// Householder rank-2 update of the leading lower triangle of `a`:
///   a(k,j) -= d(j) e(k) + e(j) d(k)  for 0 <= j <= k < len.
void rank2_update(Eigen::MatrixXd& a, const Eigen::VectorXd& d, const Eigen::VectorXd& e, Eigen::Index len);
void rank2_update_serial(Eigen::MatrixXd& a, const Eigen::VectorXd& d, const Eigen::VectorXd& e, Eigen::Index len);

/// out = atoms(:, support) * coefficients, one output row per vertex.
void combine_atoms(const Eigen::MatrixXd& atoms, std::span<const std::uint32_t> support,
                   const Eigen::MatrixXd& coefficients, Eigen::MatrixXd& out);
void combine_atoms_serial(const Eigen::MatrixXd& atoms, std::span<const std::uint32_t> support,
                          const Eigen::MatrixXd& coefficients, Eigen::MatrixXd& out);

}  // namespace hsc::kernels
