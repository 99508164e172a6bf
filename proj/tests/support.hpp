#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "hsc/mesh.hpp"

namespace hsc::test {

inline Mesh one_triangle() {
  Mesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.faces = {{0, 1, 2}};
  return m;
}

inline Mesh two_triangles() {
  Mesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  m.faces = {{0, 1, 2}, {2, 1, 3}};
  return m;
}

/// Regular grid patch, w x h vertices, unit spacing in the plane z = 0.
inline Mesh grid(std::size_t w, std::size_t h) {
  Mesh m;
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j) m.vertices.emplace_back(double(j), double(i), 0.0);
  auto id = [&](std::size_t i, std::size_t j) { return static_cast<std::uint32_t>(i * w + j); };
  for (std::size_t i = 0; i + 1 < h; ++i)
    for (std::size_t j = 0; j + 1 < w; ++j) {
      m.faces.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
      m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i + 1, j)});
    }
  return m;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  return a;
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::MatrixXd a = random_matrix(rng, n, n);
  return (a + a.transpose()) / 2;
}

/// Orthonormal n x n matrix from a QR of a Gaussian matrix.
Eigen::MatrixXd random_orthobasis(std::mt19937_64& rng, Eigen::Index n);

}  // namespace hsc::test
