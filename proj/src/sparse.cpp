#include "hsc/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "hsc/error.hpp"
#include "hsc/kernels.hpp"

namespace hsc {
namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kDependentNorm = 1e-10;

}  // namespace

Dictionary build_dictionary(std::span<const SpectralBasis* const> bases) {
  Dictionary dict;
  if (bases.empty()) return dict;
  const Eigen::Index n = bases.front()->vectors.rows();
  Eigen::Index m = 0;
  for (const auto* b : bases) {
    if (b->vectors.rows() != n) throw Error("dictionary bases have mismatched dimensions");
    m += b->vectors.cols();
  }
  dict.atoms.resize(n, m);
  dict.provenance.reserve(static_cast<std::size_t>(m));
  Eigen::Index col = 0;
  for (std::size_t s = 0; s < bases.size(); ++s) {
    const auto& v = bases[s]->vectors;
    dict.atoms.middleCols(col, v.cols()) = v;
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      dict.provenance.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(j)});
      const double norm = v.col(j).norm();
      if (norm > 0 && std::abs(norm - 1.0) > 1e-14) dict.atoms.col(col + j) /= norm;
    }
    col += v.cols();
  }
  return dict;
}

Dictionary build_dictionary(const SpectralBasis& basis) {
  const SpectralBasis* list[] = {&basis};
  return build_dictionary(list);
}

SparseCode somp(const Eigen::MatrixXd& signals, const Dictionary& dictionary, std::size_t k) {
  const Eigen::Index n = dictionary.n();
  const Eigen::Index m = dictionary.m();
  if (signals.rows() != n) throw Error("signal length does not match dictionary");
  if (k > static_cast<std::size_t>(std::min(n, m)))
    throw ConfigError("sparsity " + std::to_string(k) + " exceeds min(n, m)");

  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd q(n, kk);           // orthonormal basis of the support span
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(kk, kk);  // D_S = Q R
  Eigen::MatrixXd residual = signals;
  Eigen::MatrixXd corr;      // atoms^T residual, kept current by rank-1 updates
  Eigen::MatrixXd step_dots;  // atoms^T q_t
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  Eigen::VectorXd proj(kk), atom(n);
  kernels::atom_correlations(dictionary.atoms, residual, corr);

  SparseCode code;
  code.support.reserve(k);
  Eigen::VectorXd scores = corr.rowwise().squaredNorm();
  while (code.support.size() < k) {
    double best = -1;
    for (Eigen::Index j = 0; j < m; ++j)
      if (!used[static_cast<std::size_t>(j)]) best = std::max(best, scores[j]);
    if (best < 0) break;  // dictionary exhausted
    const double cut = best - kTieTolerance * best;
    Eigen::Index pick = 0;
    while (used[static_cast<std::size_t>(pick)] || scores[pick] < cut) ++pick;
    used[static_cast<std::size_t>(pick)] = 1;

    // Two passes of Gram-Schmidt against the current support.
    const Eigen::Index t = static_cast<Eigen::Index>(code.support.size());
    atom = dictionary.atoms.col(pick);
    proj.head(t).setZero();
    for (int pass = 0; pass < 2 && t > 0; ++pass) {
      const Eigen::VectorXd c = q.leftCols(t).transpose() * atom;
      atom.noalias() -= q.leftCols(t) * c;
      proj.head(t) += c;
    }
    const double norm = atom.norm();
    if (norm < kDependentNorm) {
      code.dropped.push_back(static_cast<std::uint32_t>(pick));
      continue;
    }
    q.col(t) = atom / norm;
    r.col(t).head(t) = proj.head(t);
    r(t, t) = norm;

    const Eigen::RowVectorXd w = q.col(t).transpose() * residual;
    residual.noalias() -= q.col(t) * w;
    kernels::atom_correlations(dictionary.atoms, q.col(t), step_dots);
    corr.noalias() -= step_dots * w;
    scores = corr.rowwise().squaredNorm();
    code.support.push_back(static_cast<std::uint32_t>(pick));
    code.residual_history.push_back(residual.squaredNorm());
  }

  const Eigen::Index s = static_cast<Eigen::Index>(code.support.size());
  const Eigen::MatrixXd qtu = q.leftCols(s).transpose() * signals;
  code.coefficients = r.topLeftCorner(s, s).triangularView<Eigen::Upper>().solve(qtu);
  return code;
}

Eigen::MatrixXd reconstruct(const Dictionary& dictionary, const SparseCode& code) {
  Eigen::MatrixXd out;
  for (auto j : code.support)
    if (j >= dictionary.m()) throw Error("support index out of dictionary range");
  if (code.support.empty()) {
    out.setZero(dictionary.n(), code.coefficients.cols() ? code.coefficients.cols() : 3);
    return out;
  }
  kernels::combine_atoms(dictionary.atoms, code.support, code.coefficients, out);
  return out;
}

}  // namespace hsc
