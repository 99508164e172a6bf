#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "hsc/mesh.hpp"

namespace hsc::synth {

/// Subdivided icosahedron on the unit sphere: 10 * 4^level + 2 vertices.
Mesh icosphere(unsigned level);

/// Unit sphere with a handful of smooth bumps and a fine ripple band.
Mesh bumpy_sphere(unsigned level, std::uint64_t seed);

/// Sphere clipped by planes and grooved, giving flat patches joined along
/// sharp creases (a stand-in for CAD parts such as the fandisk).
Mesh creased_part(unsigned level, std::uint64_t seed);

/// Torus with ridges around the tube plus small random displacement.
Mesh ridged_torus(std::size_t rings, std::size_t sides, std::uint64_t seed);

/// Open height field over [-1, 1]^2 with several noise octaves.
Mesh terrain(std::size_t cells, std::uint64_t seed);

/// Closed blob: sphere with multi-octave radial noise.
Mesh noisy_blob(unsigned level, std::uint64_t seed);

/// Jittered grid with random diagonals, arbitrary scale and offset. Vertex
/// count is close to n (never above it) and at least 4.
Mesh random_mesh(std::size_t n, std::uint64_t seed);

/// Closed planar curve of n samples: a smooth outline with high-frequency
/// wiggles confined to one arc. Rows are (x, y, 0).
Eigen::MatrixXd detailed_curve(std::size_t n, std::uint64_t seed);

/// Edges of the cycle 0-1-...-(n-1)-0.
std::vector<std::pair<std::uint32_t, std::uint32_t>> cycle_edges(std::size_t n);

/// Names accepted by make(): icosphere, bumpy-sphere, creased-part,
/// ridged-torus, terrain, noisy-blob, random.
std::vector<std::string_view> kinds();
/// `size` is a subdivision level for sphere-like kinds, a grid resolution
/// for torus/terrain and a vertex count for random. Throws ConfigError on an
/// unknown kind.
Mesh make(std::string_view kind, std::size_t size, std::uint64_t seed);

}  // namespace hsc::synth
