#include "hsc/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hsc/error.hpp"

namespace hsc {
namespace {

// Splits text into lines, strips '#' comments and surrounding blanks, and
// hands non-empty lines out together with their 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view raw = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_no_;
      if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      raw = trim(raw);
      if (!raw.empty()) {
        line = raw;
        return true;
      }
    }
    return false;
  }

  std::size_t line_no() const { return line_no_; }

  static std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double to_real(std::string_view tok, std::size_t line) {
  double v = 0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected a number, got '" + std::string(tok) + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite coordinate '" + std::string(tok) + "'");
  return v;
}

long long to_integer(std::string_view tok, std::size_t line) {
  long long v = 0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  return v;
}

// Fan triangulation anchored at the first listed vertex.
void add_polygon(Mesh& mesh, const std::vector<std::uint32_t>& poly, std::size_t line) {
  if (poly.size() < 3) throw ParseError(line, "face has fewer than 3 vertices");
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    Face f{poly[0], poly[i], poly[i + 1]};
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
      throw ParseError(line, "face repeats a vertex index");
    mesh.faces.push_back(f);
  }
}

}  // namespace

Mesh parse_off(std::string_view text) {
  LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw ParseError(1, "empty input, expected OFF header");

  auto toks = tokens(line);
  if (toks.empty() || toks[0] != "OFF") throw ParseError(reader.line_no(), "missing OFF header");
  toks.erase(toks.begin());
  if (toks.empty()) {
    if (!reader.next(line)) throw ParseError(reader.line_no(), "missing counts line");
    toks = tokens(line);
  }
  if (toks.size() < 2) throw ParseError(reader.line_no(), "counts line needs vertex and face counts");
  const long long nv = to_integer(toks[0], reader.line_no());
  const long long nf = to_integer(toks[1], reader.line_no());
  if (nv < 0 || nf < 0) throw ParseError(reader.line_no(), "negative element count");
  if (nv > std::numeric_limits<std::uint32_t>::max())
    throw ParseError(reader.line_no(), "vertex count exceeds 32-bit index range");

  Mesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(nv));
  for (long long i = 0; i < nv; ++i) {
    if (!reader.next(line)) throw ParseError(reader.line_no(), "unexpected end of file in vertex list");
    auto t = tokens(line);
    if (t.size() < 3) throw ParseError(reader.line_no(), "vertex line needs 3 coordinates");
    const std::size_t ln = reader.line_no();
    mesh.vertices.emplace_back(to_real(t[0], ln), to_real(t[1], ln), to_real(t[2], ln));
  }

  mesh.faces.reserve(static_cast<std::size_t>(nf));
  std::vector<std::uint32_t> poly;
  for (long long i = 0; i < nf; ++i) {
    if (!reader.next(line)) throw ParseError(reader.line_no(), "unexpected end of file in face list");
    auto t = tokens(line);
    const std::size_t ln = reader.line_no();
    const long long k = to_integer(t[0], ln);
    if (k < 3) throw ParseError(ln, "face has fewer than 3 vertices");
    if (static_cast<long long>(t.size()) < k + 1) throw ParseError(ln, "face line is missing indices");
    poly.clear();
    for (long long j = 1; j <= k; ++j) {
      const long long idx = to_integer(t[static_cast<std::size_t>(j)], ln);
      if (idx < 0 || idx >= nv)
        throw ParseError(ln, "vertex index " + std::to_string(idx) + " out of range [0, " +
                                 std::to_string(nv) + ")");
      poly.push_back(static_cast<std::uint32_t>(idx));
    }
    add_polygon(mesh, poly, ln);
  }
  return mesh;
}

Mesh parse_obj(std::string_view text) {
  LineReader reader(text);
  std::string_view line;
  Mesh mesh;
  struct PendingFace {
    std::vector<long long> idx;
    std::size_t line;
  };
  std::vector<PendingFace> pending;

  while (reader.next(line)) {
    auto t = tokens(line);
    const std::size_t ln = reader.line_no();
    if (t[0] == "v") {
      if (t.size() < 4) throw ParseError(ln, "vertex record needs 3 coordinates");
      mesh.vertices.emplace_back(to_real(t[1], ln), to_real(t[2], ln), to_real(t[3], ln));
    } else if (t[0] == "f") {
      PendingFace f{{}, ln};
      for (std::size_t j = 1; j < t.size(); ++j) {
        auto slash = t[j].find('/');
        long long idx = to_integer(t[j].substr(0, slash), ln);
        // Negative indices are relative to the vertices seen so far.
        if (idx < 0) idx = static_cast<long long>(mesh.vertices.size()) + idx;
        else idx -= 1;
        f.idx.push_back(idx);
      }
      pending.push_back(std::move(f));
    }
  }

  const auto nv = static_cast<long long>(mesh.vertices.size());
  std::vector<std::uint32_t> poly;
  for (const auto& f : pending) {
    poly.clear();
    for (long long idx : f.idx) {
      if (idx < 0 || idx >= nv)
        throw ParseError(f.line, "vertex index " + std::to_string(idx + 1) + " out of range");
      poly.push_back(static_cast<std::uint32_t>(idx));
    }
    add_polygon(mesh, poly, f.line);
  }
  return mesh;
}

std::string write_off(const Mesh& mesh, int precision) {
  std::string out;
  out.reserve(32 + mesh.vertices.size() * (3 * (precision + 6)) + mesh.faces.size() * 24);
  out += "OFF\n";
  out += std::to_string(mesh.vertices.size()) + " " + std::to_string(mesh.faces.size()) + " 0\n";
  char buf[128];
  for (const auto& v : mesh.vertices) {
    for (int c = 0; c < 3; ++c) {
      double x = v[c];
      std::snprintf(buf, sizeof buf, "%.*f", precision, x);
      // Avoid emitting "-0.000" for values that round to zero.
      std::string_view s(buf);
      if (s.front() == '-' && s.find_first_not_of("-0.") == std::string_view::npos) s.remove_prefix(1);
      out += s;
      out += c < 2 ? ' ' : '\n';
    }
  }
  for (const auto& f : mesh.faces) {
    out += "3 " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " + std::to_string(f[2]) + "\n";
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return std::move(ss).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed for '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot replace '" + path.string() + "'");
  }
}

Mesh load_mesh(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".obj" ? parse_obj(text) : parse_off(text);
}

void save_off(const std::filesystem::path& path, const Mesh& mesh, int precision) {
  write_file_atomic(path, write_off(mesh, precision));
}

void validate(const Mesh& mesh) {
  const auto n = mesh.vertices.size();
  for (const auto& v : mesh.vertices)
    if (!v.allFinite()) throw ParseError(0, "non-finite vertex coordinate");
  for (const auto& f : mesh.faces) {
    for (auto i : f)
      if (i >= n) throw ParseError(0, "face index " + std::to_string(i) + " out of range");
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) throw ParseError(0, "face repeats a vertex index");
  }
}

double triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

double surface_area(const Mesh& mesh) {
  double area = 0;
  for (const auto& f : mesh.faces)
    area += triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
  return area;
}

double bbox_diagonal(const Mesh& mesh) {
  if (mesh.vertices.empty()) return 0;
  Eigen::Vector3d lo = mesh.vertices.front(), hi = lo;
  for (const auto& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

Eigen::MatrixXd coordinates(const Mesh& mesh) {
  Eigen::MatrixXd u(mesh.vertices.size(), 3);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) u.row(static_cast<Eigen::Index>(i)) = mesh.vertices[i];
  return u;
}

void set_coordinates(Mesh& mesh, const Eigen::MatrixXd& xyz) {
  mesh.vertices.resize(static_cast<std::size_t>(xyz.rows()));
  for (Eigen::Index i = 0; i < xyz.rows(); ++i) mesh.vertices[static_cast<std::size_t>(i)] = xyz.row(i).transpose();
}

Mesh relabel(const Mesh& mesh, std::span<const std::uint32_t> order) {
  constexpr auto kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> local(mesh.vertices.size(), kAbsent);
  Mesh out;
  out.vertices.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    local[order[i]] = static_cast<std::uint32_t>(i);
    out.vertices.push_back(mesh.vertices[order[i]]);
  }
  for (const auto& f : mesh.faces) {
    Face g{local[f[0]], local[f[1]], local[f[2]]};
    if (g[0] != kAbsent && g[1] != kAbsent && g[2] != kAbsent) out.faces.push_back(g);
  }
  return out;
}

}  // namespace hsc
