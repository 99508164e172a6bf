#pragma once

#include <vector>

#include <Eigen/Core>

#include "hsc/graph.hpp"
#include "hsc/mesh.hpp"

namespace hsc {

struct ErrorReport {
  /// (|p - p'| + |GL(p) - GL(p')|) / 2n per vertex.
  std::vector<double> per_vertex;
  /// Sum of per_vertex before area normalization.
  double raw_sum = 0;
  /// raw_sum divided by the surface area of the original mesh.
  double global = 0;
  /// sqrt(sum |p - p'|^2 / n)
  double rms = 0;
};

/// Vertex minus the inverse-edge-length weighted average of its neighbors.
/// Isolated vertices give zero; a zero-length edge throws NumericalError.
Eigen::Vector3d gl_term(const Mesh& mesh, const AdjacencyGraph& graph, std::uint32_t vertex);
Eigen::Vector3d gl_term(const Mesh& mesh, std::uint32_t vertex);

/// Karni-Gotsman visual error between a mesh and a reconstruction with the
/// same connectivity. GL is evaluated on each mesh's own edge lengths.
ErrorReport visual_error(const Mesh& original, const Mesh& reconstructed);

}  // namespace hsc
