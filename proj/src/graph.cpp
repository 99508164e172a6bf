#include "hsc/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

#include "hsc/error.hpp"

namespace hsc {

AdjacencyGraph graph_from_edges(std::size_t n, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
  AdjacencyGraph g;
  g.n = n;
  g.edges.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a == b) continue;
    if (a >= n || b >= n) throw Error("edge endpoint out of range");
    g.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());

  g.neighbors.assign(n, {});
  for (auto [a, b] : g.edges) {
    g.neighbors[a].push_back(b);
    g.neighbors[b].push_back(a);
  }
  for (auto& nb : g.neighbors) std::sort(nb.begin(), nb.end());
  return g;
}

AdjacencyGraph build_adjacency(std::size_t n, std::span<const Face> faces) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(faces.size() * 3);
  for (const auto& f : faces) {
    edges.emplace_back(f[0], f[1]);
    edges.emplace_back(f[1], f[2]);
    edges.emplace_back(f[2], f[0]);
  }
  return graph_from_edges(n, edges);
}

AdjacencyGraph build_adjacency(const Mesh& mesh) { return build_adjacency(mesh.num_vertices(), mesh.faces); }

SymmetricMatrix combinatorial_laplacian(const AdjacencyGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.n);
  SymmetricMatrix l{Eigen::MatrixXd::Zero(n, n)};
  for (auto [a, b] : graph.edges) {
    l.values(a, b) = -1.0;
    l.values(b, a) = -1.0;
  }
  for (std::size_t i = 0; i < graph.n; ++i)
    l.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = static_cast<double>(graph.degree(static_cast<std::uint32_t>(i)));
  return l;
}

PartitionSet partition(const AdjacencyGraph& graph, std::size_t target_size) {
  if (target_size == 0) throw ConfigError("partition target size must be positive");
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  const std::size_t n = graph.n;

  // Region growing.
  std::vector<std::uint32_t> owner(n, kNone);
  std::vector<std::vector<std::uint32_t>> regions;
  std::deque<std::uint32_t> queue;
  for (std::uint32_t seed = 0; seed < n; ++seed) {
    if (owner[seed] != kNone) continue;
    const auto id = static_cast<std::uint32_t>(regions.size());
    std::vector<std::uint32_t> region;
    queue.clear();
    queue.push_back(seed);
    owner[seed] = id;
    while (!queue.empty() && region.size() < target_size) {
      const auto v = queue.front();
      queue.pop_front();
      region.push_back(v);
      for (auto w : graph.neighbors[v]) {
        if (owner[w] != kNone) continue;
        owner[w] = id;
        queue.push_back(w);
      }
    }
    // Queued but unvisited vertices go back to the pool.
    for (auto v : queue) owner[v] = kNone;
    regions.push_back(std::move(region));
  }

  // Merge undersized regions. Each pass takes the lowest-id small region
  // that has a neighbor and folds it into the neighbor sharing most edges,
  // preferring targets that stay within 2 * target_size.
  const std::size_t min_size = (target_size + 1) / 2;
  const std::size_t max_size = 2 * target_size;
  std::vector<bool> alive(regions.size(), true);
  std::vector<bool> isolated(regions.size(), false);
  for (;;) {
    std::uint32_t small = kNone;
    for (std::uint32_t r = 0; r < regions.size(); ++r) {
      if (alive[r] && !isolated[r] && regions[r].size() < min_size) {
        small = r;
        break;
      }
    }
    if (small == kNone) break;

    std::map<std::uint32_t, std::size_t> shared;
    for (auto v : regions[small])
      for (auto w : graph.neighbors[v])
        if (owner[w] != small) ++shared[owner[w]];
    if (shared.empty()) {
      isolated[small] = true;
      continue;
    }
    std::uint32_t best = kNone;
    std::size_t best_edges = 0;
    bool best_fits = false;
    for (auto [r, count] : shared) {  // ascending id, so ties keep the lower id
      const bool fits = regions[r].size() + regions[small].size() <= max_size;
      if (best == kNone || (fits && !best_fits) || (fits == best_fits && count > best_edges)) {
        best = r;
        best_edges = count;
        best_fits = fits;
      }
    }
    for (auto v : regions[small]) owner[v] = best;
    regions[best].insert(regions[best].end(), regions[small].begin(), regions[small].end());
    regions[small].clear();
    alive[small] = false;
  }

  PartitionSet out;
  out.assignment.assign(n, kNone);
  for (std::uint32_t r = 0; r < regions.size(); ++r) {
    if (!alive[r]) continue;
    auto block = regions[r];
    std::sort(block.begin(), block.end());
    const auto id = static_cast<std::uint32_t>(out.blocks.size());
    for (auto v : block) out.assignment[v] = id;
    out.blocks.push_back(std::move(block));
  }
  return out;
}

Submesh extract_submesh(const Mesh& mesh, const PartitionSet& parts, std::size_t block_id) {
  if (block_id >= parts.blocks.size()) throw Error("block id out of range");
  const auto& block = parts.blocks[block_id];
  return Submesh{relabel(mesh, block), block};
}

}  // namespace hsc
