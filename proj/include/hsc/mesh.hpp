#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace hsc {

using Face = std::array<std::uint32_t, 3>;

/// Triangle mesh: vertex positions plus 0-based index triples.
struct Mesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Face> faces;

  std::size_t num_vertices() const noexcept { return vertices.size(); }
  std::size_t num_faces() const noexcept { return faces.size(); }

  bool operator==(const Mesh&) const = default;
};

/// Parses ASCII OFF. Polygons are fan-triangulated from their first vertex.
/// Throws ParseError carrying the offending line number.
Mesh parse_off(std::string_view text);

/// Parses the v/f subset of Wavefront OBJ; vt/vn/g/o/s records are skipped.
Mesh parse_obj(std::string_view text);

/// Serializes as ASCII OFF with LF endings and `precision` fixed decimals.
std::string write_off(const Mesh& mesh, int precision = 9);

/// Whole-file read; IoError names the path.
std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames it over `path`, so readers
/// never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

/// Reads .off or .obj by extension (OFF is assumed for anything else).
Mesh load_mesh(const std::filesystem::path& path);
void save_off(const std::filesystem::path& path, const Mesh& mesh, int precision = 9);

/// Throws ParseError(0, ...) if an index is out of range, a face repeats a
/// vertex, or a coordinate is not finite.
void validate(const Mesh& mesh);

double triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c);
double surface_area(const Mesh& mesh);

/// Axis-aligned bounding-box diagonal length.
double bbox_diagonal(const Mesh& mesh);

/// n x 3 coordinate matrix U = [X, Y, Z].
Eigen::MatrixXd coordinates(const Mesh& mesh);
void set_coordinates(Mesh& mesh, const Eigen::MatrixXd& xyz);

/// Mesh whose local vertex i is `mesh` vertex order[i]. Faces with a vertex
/// outside `order` are dropped; surviving faces keep their relative order.
Mesh relabel(const Mesh& mesh, std::span<const std::uint32_t> order);

}  // namespace hsc
