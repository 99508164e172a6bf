#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hsc/spectral.hpp"

namespace hsc {

/// Where a dictionary column came from.
struct AtomTag {
  std::uint32_t basis = 0;  ///< position of the source basis in the build list
  std::uint32_t index = 0;  ///< eigen index inside that basis
};

/// Column-stacked unit-norm atoms.
struct Dictionary {
  Eigen::MatrixXd atoms;  // n x m
  std::vector<AtomTag> provenance;

  Eigen::Index n() const noexcept { return atoms.rows(); }
  Eigen::Index m() const noexcept { return atoms.cols(); }
};

/// Concatenates the bases' eigenvectors in list order. Throws on dimension
/// mismatch.
Dictionary build_dictionary(std::span<const SpectralBasis* const> bases);
Dictionary build_dictionary(const SpectralBasis& basis);

/// Shared-support code for several channels (X, Y, Z).
struct SparseCode {
  /// Atom indices in selection order.
  std::vector<std::uint32_t> support;
  /// support.size() x channels; row t belongs to support[t].
  Eigen::MatrixXd coefficients;
  /// Squared Frobenius residual after each selection.
  std::vector<double> residual_history;
  /// Atoms that scored best but were numerically dependent on the support.
  std::vector<std::uint32_t> dropped;

  std::size_t k() const noexcept { return support.size(); }
};

/// Simultaneous orthogonal matching pursuit. Picks, at each step, the unused
/// atom with the largest l2 norm of channel correlations against the
/// residual (lowest index among scores within 1e-12 relative), then refits
/// all coefficients by least squares on the support. Stops early only when
/// every remaining atom is dependent on the support.
SparseCode somp(const Eigen::MatrixXd& signals, const Dictionary& dictionary, std::size_t k);

/// sum_t atoms(:, support[t]) * coefficients(t, :)
Eigen::MatrixXd reconstruct(const Dictionary& dictionary, const SparseCode& code);

}  // namespace hsc
