#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hsc/mesh.hpp"

namespace hsc {

/// Undirected, unweighted vertex graph taken from face edges.
struct AdjacencyGraph {
  std::size_t n = 0;
  /// Deduplicated edges with first < second, sorted lexicographically.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  /// Ascending neighbor lists.
  std::vector<std::vector<std::uint32_t>> neighbors;

  std::size_t degree(std::uint32_t v) const { return neighbors[v].size(); }
};

AdjacencyGraph build_adjacency(std::size_t n, std::span<const Face> faces);
AdjacencyGraph build_adjacency(const Mesh& mesh);
/// Graph from an explicit edge list (chains, cycles, test graphs).
AdjacencyGraph graph_from_edges(std::size_t n, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

/// Dense symmetric matrix. Every block operator is small enough (a few
/// hundred rows) that dense storage is the simpler choice.
struct SymmetricMatrix {
  Eigen::MatrixXd values;

  Eigen::Index size() const noexcept { return values.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values(i, j); }
};

/// L = A - W with unit edge weights: L_ii = valence, L_ij = -1 on edges.
SymmetricMatrix combinatorial_laplacian(const AdjacencyGraph& graph);

inline constexpr std::size_t kDefaultBlockSize = 300;

struct PartitionSet {
  /// vertex -> block id
  std::vector<std::uint32_t> assignment;
  /// block id -> ascending global vertex indices
  std::vector<std::vector<std::uint32_t>> blocks;

  std::size_t num_blocks() const noexcept { return blocks.size(); }
};

/// Greedy BFS region growing. Seeds are the lowest-index unassigned vertex,
/// neighbors are visited in ascending order and a region stops at
/// `target_size`. Regions smaller than ceil(target/2) are then merged into
/// the adjacent block sharing the most edges. Depends on connectivity only.
PartitionSet partition(const AdjacencyGraph& graph, std::size_t target_size = kDefaultBlockSize);

struct Submesh {
  Mesh mesh;
  /// local vertex -> global vertex
  std::vector<std::uint32_t> to_global;
};

/// Block vertices (in block order) and the faces whose three vertices all
/// lie in the block.
Submesh extract_submesh(const Mesh& mesh, const PartitionSet& parts, std::size_t block_id);

}  // namespace hsc
