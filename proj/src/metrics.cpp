#include "hsc/metrics.hpp"

#include <cmath>

#include "hsc/error.hpp"

namespace hsc {

Eigen::Vector3d gl_term(const Mesh& mesh, const AdjacencyGraph& graph, std::uint32_t vertex) {
  const auto& p = mesh.vertices[vertex];
  const auto& nb = graph.neighbors[vertex];
  if (nb.empty()) return Eigen::Vector3d::Zero();
  Eigen::Vector3d weighted = Eigen::Vector3d::Zero();
  double total = 0;
  for (auto j : nb) {
    const double len = (mesh.vertices[j] - p).norm();
    if (len == 0.0)
      throw NumericalError("zero-length edge " + std::to_string(vertex) + "-" + std::to_string(j));
    weighted += mesh.vertices[j] / len;
    total += 1.0 / len;
  }
  return p - weighted / total;
}

Eigen::Vector3d gl_term(const Mesh& mesh, std::uint32_t vertex) {
  return gl_term(mesh, build_adjacency(mesh), vertex);
}

ErrorReport visual_error(const Mesh& original, const Mesh& reconstructed) {
  if (original.num_vertices() != reconstructed.num_vertices() || original.faces != reconstructed.faces)
    throw Error("meshes do not share connectivity");
  const auto graph = build_adjacency(original);
  const std::size_t n = original.num_vertices();

  ErrorReport report;
  report.per_vertex.resize(n);
  double sq = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const Eigen::Vector3d diff = original.vertices[i] - reconstructed.vertices[i];
    const Eigen::Vector3d gl = gl_term(original, graph, i) - gl_term(reconstructed, graph, i);
    report.per_vertex[i] = (diff.norm() + gl.norm()) / (2.0 * static_cast<double>(n));
    report.raw_sum += report.per_vertex[i];
    sq += diff.squaredNorm();
  }
  const double area = surface_area(original);
  report.global = area > 0 ? report.raw_sum / area : report.raw_sum;
  report.rms = n ? std::sqrt(sq / static_cast<double>(n)) : 0.0;
  return report;
}

}  // namespace hsc
