#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include <Eigen/Geometry>

#include "hsc/error.hpp"
#include "hsc/mesh.hpp"
#include "hsc/synthetic.hpp"
#include "support.hpp"

using namespace hsc;

TEST_CASE("parse_off reads a single triangle") {
  const Mesh m = parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
  CHECK(m.num_vertices() == 3);
  REQUIRE(m.num_faces() == 1);
  CHECK(m.faces[0] == Face{0, 1, 2});
  CHECK(m.vertices[1].x() == 1.0);
}

TEST_CASE("parse_off fans polygons from the first vertex") {
  const Mesh m = parse_off("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  REQUIRE(m.num_faces() == 2);
  CHECK(m.faces[0] == Face{0, 1, 2});
  CHECK(m.faces[1] == Face{0, 2, 3});
}

TEST_CASE("parse_off accepts counts on the header line and comments") {
  const Mesh m = parse_off("# leading comment\nOFF 3 1 0\n0 0 0 # origin\n\n1 0 0\n0 1 0\n3 2 1 0\n");
  CHECK(m.num_vertices() == 3);
  CHECK(m.faces[0] == Face{2, 1, 0});
}

TEST_CASE("parse_off reports the offending line") {
  try {
    parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 6);
    CHECK(std::string(e.what()).find("line 6") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_off("PLY\n"), ParseError);
  CHECK_THROWS_AS(parse_off(""), ParseError);
  try {
    parse_off("OFF\n3 1 0\n0 0 0\n1 x 0\n0 1 0\n3 0 1 2\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 1\n"), ParseError);
}

TEST_CASE("parse_obj reads v/f records and ignores attributes") {
  const Mesh m = parse_obj(
      "# obj\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvt 0 0\nvn 0 0 1\n"
      "f 1/1/1 2/2/1 3/3/1 4/4/1\nf -4 -2 -1\n");
  CHECK(m.num_vertices() == 4);
  REQUIRE(m.num_faces() == 3);
  CHECK(m.faces[0] == Face{0, 1, 2});
  CHECK(m.faces[1] == Face{0, 2, 3});
  CHECK(m.faces[2] == Face{0, 2, 3});
  CHECK_THROWS_AS(parse_obj("v 0 0 0\nf 1 2 3\n"), ParseError);
}

TEST_CASE("write_off round trip and precision") {
  const Mesh tri = test::one_triangle();
  CHECK(parse_off(write_off(tri, 9)) == tri);

  Mesh third = tri;
  third.vertices[0] = {1.0 / 3.0, 0, 0};
  const std::string text = write_off(third, 3);
  CHECK(text.find("0.333 ") != std::string::npos);
  CHECK(parse_off(text).vertices[0].x() == 0.333);

  const Mesh empty;
  const Mesh back = parse_off(write_off(empty));
  CHECK(back.num_vertices() == 0);
  CHECK(back.num_faces() == 0);
  CHECK(write_off(tri).find('\r') == std::string::npos);
}

TEST_CASE("write_off round trip on random meshes") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Mesh m = synth::random_mesh(40 + 7 * seed, seed);
    const Mesh back = parse_off(write_off(m, 9));
    REQUIRE(back.faces == m.faces);
    for (std::size_t i = 0; i < m.num_vertices(); ++i)
      for (int c = 0; c < 3; ++c) {
        // half a unit in the ninth decimal, plus the rounding of the parsed double
        const double x = m.vertices[i][c];
        CHECK(std::abs(back.vertices[i][c] - x) <= 0.5e-9 + 4 * std::numeric_limits<double>::epsilon() * std::abs(x));
      }
  }
}

TEST_CASE("surface area") {
  CHECK(surface_area(test::one_triangle()) == doctest::Approx(0.5));
  Mesh twice = test::one_triangle();
  twice.faces.push_back({0, 1, 2});
  CHECK(surface_area(twice) == doctest::Approx(1.0));
  Mesh flat = test::one_triangle();
  flat.vertices.push_back({2, 0, 0});
  flat.faces.push_back({0, 1, 3});
  CHECK(surface_area(flat) == doctest::Approx(0.5));
}

TEST_CASE("surface area is invariant under rigid motion") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Mesh m = synth::random_mesh(100, 100 + trial);
    const double before = surface_area(m);
    const Eigen::Quaterniond q(Eigen::Vector4d(test::random_matrix(rng, 4, 1)).normalized());
    const Eigen::Vector3d t = test::random_matrix(rng, 3, 1);
    for (auto& v : m.vertices) v = q * v + t;
    CHECK(std::abs(surface_area(m) - before) <= 1e-9 * before);
  }
}

TEST_CASE("validate and relabel") {
  Mesh bad = test::one_triangle();
  bad.faces[0][2] = 5;
  CHECK_THROWS_AS(validate(bad), ParseError);
  bad = test::one_triangle();
  bad.vertices[0].x() = std::nan("");
  CHECK_THROWS_AS(validate(bad), ParseError);

  const Mesh two = test::two_triangles();
  const std::vector<std::uint32_t> order{3, 2, 1, 0};
  const Mesh r = relabel(two, order);
  CHECK(r.vertices[0] == two.vertices[3]);
  CHECK(r.faces[0] == Face{3, 2, 1});
  const std::vector<std::uint32_t> part{0, 1, 2};
  CHECK(relabel(two, part).num_faces() == 1);
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "hsc_mesh_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "t.off";
  save_off(path, test::one_triangle());
  CHECK(load_mesh(path) == test::one_triangle());
  CHECK_FALSE(std::filesystem::exists(dir / "t.off.part"));
  try {
    load_mesh(dir / "missing.off");
    FAIL("expected an I/O error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("missing.off") != std::string::npos);
  }
  CHECK(bbox_diagonal(test::one_triangle()) == doctest::Approx(std::sqrt(2.0)));
  std::filesystem::remove_all(dir);
}
