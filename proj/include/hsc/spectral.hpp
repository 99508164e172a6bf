#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "hsc/graph.hpp"

namespace hsc {

/// Full orthonormal eigenbasis of a symmetric operator. Columns of `vectors`
/// pair with the ascending `values`; each column's largest-magnitude entry
/// (lowest index on ties) is positive.
struct SpectralBasis {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;

  Eigen::Index size() const noexcept { return values.size(); }
};

/// Diagonal potential V with unit Frobenius norm and its weight mu.
struct Potential {
  Eigen::VectorXd diagonal;
  double mu = 0;
};

/// Householder tridiagonalization followed by implicit-shift QL. The
/// data-parallel stages run through hsc::kernels. Throws NumericalError on
/// non-finite input or when an eigenvalue fails to converge.
SpectralBasis eigendecompose_symmetric(const SymmetricMatrix& matrix);

/// Cyclic Jacobi rotations, serial. Independent reference for tests and the
/// benchmark; same output conventions as eigendecompose_symmetric.
SpectralBasis eigendecompose_jacobi(const SymmetricMatrix& matrix);

/// H = L + mu * diag(V). Off-diagonal entries are copied untouched.
SymmetricMatrix hamiltonian(const SymmetricMatrix& laplacian, const Potential& potential);

/// V_ii = i / sqrt(sum_j j^2), i = 1..n.
Potential linear_potential(std::size_t n, double mu = 0);

// --- Weighted-gradient analysis on 1D chains -------------------------------

/// Square forward-difference operator with a fixed (zero) value past the
/// last vertex: D_ii = 1, D_i,i+1 = -1. Always invertible.
Eigen::MatrixXd dirichlet_difference(std::size_t n);

/// D^T D for the operator above.
SymmetricMatrix chain_laplacian(const Eigen::MatrixXd& difference);

/// W D with W = (I + D^-T (mu V) D^-1)^(1/2), so that (WD)^T WD = D^T D + mu V.
/// Throws NumericalError when D is singular.
Eigen::MatrixXd weighted_gradient(const Eigen::MatrixXd& difference, const Potential& potential);

struct GradientBound {
  double residual_sq = 0;  ///< ||f - sum_{i<=k} <f,psi_i> psi_i||^2
  double bound = 0;        ///< ||W D f||^2 / E_{k+1}
};

/// Evaluates both sides of the truncation bound for the Hamiltonian of the
/// `n`-vertex Dirichlet chain. Requires 1 <= k < n.
GradientBound verify_weighted_gradient_bound(std::size_t n, const Potential& potential, const Eigen::VectorXd& f,
                                             std::size_t k);
GradientBound verify_weighted_gradient_bound(const Eigen::MatrixXd& difference, const Potential& potential,
                                             const Eigen::VectorXd& f, std::size_t k);

}  // namespace hsc
