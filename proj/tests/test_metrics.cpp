#include <doctest.h>

#include <cmath>
#include <set>

#include "hsc/error.hpp"
#include "hsc/metrics.hpp"
#include "hsc/synthetic.hpp"
#include "support.hpp"

using namespace hsc;

TEST_CASE("gl term examples") {
  // centre of a regular hexagon fan
  Mesh hex;
  hex.vertices.push_back({0, 0, 0});
  for (int i = 0; i < 6; ++i) hex.vertices.push_back({std::cos(i * M_PI / 3), std::sin(i * M_PI / 3), 0});
  for (std::uint32_t i = 0; i < 6; ++i) hex.faces.push_back({0, i + 1, (i + 1) % 6 + 1});
  CHECK(gl_term(hex, 0).norm() <= 1e-15);

  Mesh path;
  path.vertices = {{0, 0, 0}, {1, 0, 0}, {3, 0, 0}};
  const std::vector<std::pair<std::uint32_t, std::uint32_t>> edges{{0, 1}, {1, 2}};
  const auto g = graph_from_edges(3, edges);
  const Eigen::Vector3d avg = (1.0 * path.vertices[0] + 0.5 * path.vertices[2]) / 1.5;
  CHECK((gl_term(path, g, 1) - (path.vertices[1] - avg)).norm() <= 1e-15);
  CHECK((gl_term(path, g, 0) - (path.vertices[0] - path.vertices[1])).norm() <= 1e-15);

  Mesh lonely = test::one_triangle();
  lonely.vertices.push_back({4, 4, 4});
  CHECK(gl_term(lonely, 3) == Eigen::Vector3d::Zero());

  Mesh collapsed = test::one_triangle();
  collapsed.vertices[1] = collapsed.vertices[0];
  CHECK_THROWS_AS(gl_term(collapsed, 0), NumericalError);
}

TEST_CASE("visual error of identical meshes is zero") {
  const Mesh m = synth::bumpy_sphere(2, 1);
  const auto r = visual_error(m, m);
  CHECK(r.global == 0);
  CHECK(r.rms == 0);
  for (double e : r.per_vertex) CHECK(e == 0);
}

TEST_CASE("uniform translation") {
  const Mesh m = synth::noisy_blob(2, 2);
  Mesh moved = m;
  const Eigen::Vector3d t(0.3, -0.1, 0.2);
  for (auto& v : moved.vertices) v += t;
  const auto r = visual_error(m, moved);
  const double n = double(m.num_vertices());
  for (double e : r.per_vertex) CHECK(e == doctest::Approx(t.norm() / (2 * n)).epsilon(1e-9));
  CHECK(r.rms == doctest::Approx(t.norm()));
  CHECK(r.raw_sum == doctest::Approx(t.norm() / 2));
  CHECK(r.global == doctest::Approx(r.raw_sum / surface_area(m)).epsilon(1e-12));
}

TEST_CASE("translating both meshes leaves the error unchanged") {
  const Mesh a = synth::bumpy_sphere(2, 3);
  Mesh b = a;
  b.vertices[5] += Eigen::Vector3d(0.01, 0.02, 0);
  b.vertices[40] += Eigen::Vector3d(0, -0.03, 0.01);
  const auto before = visual_error(a, b);
  Mesh a2 = a, b2 = b;
  for (auto& v : a2.vertices) v += Eigen::Vector3d(100, -50, 7);
  for (auto& v : b2.vertices) v += Eigen::Vector3d(100, -50, 7);
  const auto after = visual_error(a2, b2);
  for (std::size_t i = 0; i < a.num_vertices(); ++i)
    CHECK(std::abs(after.per_vertex[i] - before.per_vertex[i]) <= 1e-12);
}

TEST_CASE("single-vertex perturbation touches only the one-ring") {
  const Mesh m = test::grid(7, 7);
  Mesh p = m;
  const std::uint32_t v = 24;
  p.vertices[v] += Eigen::Vector3d(0, 0, 0.2);
  const auto r = visual_error(m, p);
  const auto g = build_adjacency(m);
  std::set<std::uint32_t> ring(g.neighbors[v].begin(), g.neighbors[v].end());
  ring.insert(v);
  for (std::uint32_t i = 0; i < m.num_vertices(); ++i) {
    if (ring.count(i)) CHECK(r.per_vertex[i] > 0);
    else CHECK(r.per_vertex[i] == 0);
  }
}

TEST_CASE("visual error rejects mismatched meshes") {
  const Mesh a = test::two_triangles();
  Mesh b = a;
  b.faces[1] = {1, 3, 2};
  CHECK_THROWS_AS(visual_error(a, b), Error);
  CHECK_THROWS_AS(visual_error(a, test::one_triangle()), Error);
}
