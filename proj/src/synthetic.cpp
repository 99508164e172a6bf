#include "hsc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>

#include "hsc/error.hpp"

namespace hsc::synth {
namespace {

constexpr double kPi = std::numbers::pi;

// Portable uniform draws; the standard distributions are not specified
// bit-for-bit across library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Eigen::Vector3d direction() {
    const double z = uniform(-1, 1);
    const double phi = uniform(0, 2 * kPi);
    const double s = std::sqrt(std::max(0.0, 1 - z * z));
    return {s * std::cos(phi), s * std::sin(phi), z};
  }

 private:
  std::mt19937_64 engine_;
};

// Sum of plane waves in random directions; one octave per frequency.
struct WaveNoise {
  struct Wave {
    Eigen::Vector3d dir;
    double freq, phase, amp;
  };
  std::vector<Wave> waves;

  WaveNoise(Rng& rng, std::initializer_list<double> freqs, double base_amp, double falloff, int per_octave) {
    double amp = base_amp;
    for (double f : freqs) {
      for (int i = 0; i < per_octave; ++i) waves.push_back({rng.direction(), f, rng.uniform(0, 2 * kPi), amp / per_octave});
      amp *= falloff;
    }
  }

  double operator()(const Eigen::Vector3d& p) const {
    double v = 0;
    for (const auto& w : waves) v += w.amp * std::sin(w.freq * w.dir.dot(p) + w.phase);
    return v;
  }
};

template <typename Fn>
Mesh displace_sphere(unsigned level, Fn&& radius) {
  Mesh m = icosphere(level);
  for (auto& v : m.vertices) v *= radius(Eigen::Vector3d(v));
  return m;
}

void add_quad(std::vector<Face>& faces, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d, bool flip) {
  // a-b-c-d counter-clockwise
  if (flip) {
    faces.push_back({a, b, d});
    faces.push_back({b, c, d});
  } else {
    faces.push_back({a, b, c});
    faces.push_back({a, c, d});
  }
}

}  // namespace

Mesh icosphere(unsigned level) {
  const double t = (1 + std::sqrt(5.0)) / 2;
  Mesh m;
  for (auto [x, y, z] : std::initializer_list<std::array<double, 3>>{
           {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
           {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}})
    m.vertices.push_back(Eigen::Vector3d(x, y, z).normalized());
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (unsigned l = 0; l < level; ++l) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto [it, fresh] = mid.try_emplace({key.first, key.second}, static_cast<std::uint32_t>(m.vertices.size()));
      if (fresh) m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      return it->second;
    };
    std::vector<Face> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      const auto ab = midpoint(f[0], f[1]);
      const auto bc = midpoint(f[1], f[2]);
      const auto ca = midpoint(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.faces = std::move(next);
  }
  return m;
}

Mesh bumpy_sphere(unsigned level, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<Eigen::Vector3d, double>> bumps;
  for (int i = 0; i < 6; ++i) bumps.emplace_back(rng.direction(), rng.uniform(0.08, 0.2));
  const Eigen::Vector3d axis = rng.direction();
  return displace_sphere(level, [&](const Eigen::Vector3d& d) {
    double r = 1;
    for (const auto& [c, h] : bumps) {
      const double a = std::acos(std::clamp(d.dot(c), -1.0, 1.0));
      r += h * std::exp(-a * a / (2 * 0.25 * 0.25));
    }
    const double band = d.dot(axis);
    if (std::abs(band) < 0.35) r += 0.02 * std::cos(band / 0.35 * kPi / 2) * std::sin(30 * std::atan2(d.y(), d.x()));
    return r;
  });
}

Mesh creased_part(unsigned level, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<Eigen::Vector3d, double>> planes;
  const Eigen::Vector3d axes[] = {Eigen::Vector3d::UnitX(), -Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(),
                                  -Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()};
  for (const auto& a : axes) planes.emplace_back((a + 0.25 * rng.direction()).normalized(), rng.uniform(0.7, 0.85));
  planes.emplace_back(Eigen::Vector3d(1, 1, 1).normalized(), 0.8);
  const Eigen::Vector3d groove = Eigen::Vector3d(0.3, -0.2, 1).normalized().cross(Eigen::Vector3d::UnitX()).normalized();
  return displace_sphere(level, [&](const Eigen::Vector3d& d) {
    double r = 1;
    for (const auto& [nrm, h] : planes) {
      const double c = d.dot(nrm);
      if (c > 1e-9) r = std::min(r, h / c);
    }
    const double g = std::abs(d.dot(groove));
    if (g < 0.12) r -= 0.08 * (1 - g / 0.12);
    return r;
  });
}

Mesh ridged_torus(std::size_t rings, std::size_t sides, std::uint64_t seed) {
  if (rings < 3 || sides < 3) throw ConfigError("torus needs at least 3 rings and 3 sides");
  Rng rng(seed);
  Mesh m;
  const double big = 1.0;
  const double small = 0.35;
  for (std::size_t i = 0; i < rings; ++i) {
    const double u = 2 * kPi * static_cast<double>(i) / static_cast<double>(rings);
    for (std::size_t j = 0; j < sides; ++j) {
      const double v = 2 * kPi * static_cast<double>(j) / static_cast<double>(sides);
      const double r = small * (1 + 0.12 * std::sin(12 * u) + 0.05 * std::cos(5 * v)) + rng.uniform(-0.004, 0.004);
      m.vertices.emplace_back((big + r * std::cos(v)) * std::cos(u), (big + r * std::cos(v)) * std::sin(u), r * std::sin(v));
    }
  }
  auto id = [&](std::size_t i, std::size_t j) { return static_cast<std::uint32_t>((i % rings) * sides + j % sides); };
  for (std::size_t i = 0; i < rings; ++i)
    for (std::size_t j = 0; j < sides; ++j) add_quad(m.faces, id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1), (i + j) % 2);
  return m;
}

Mesh terrain(std::size_t cells, std::uint64_t seed) {
  if (cells < 1) throw ConfigError("terrain needs at least one cell");
  Rng rng(seed);
  const WaveNoise noise(rng, {2, 5, 11, 23}, 0.25, 0.45, 3);
  Mesh m;
  const std::size_t side = cells + 1;
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j) {
      const double x = -1 + 2 * static_cast<double>(j) / static_cast<double>(cells);
      const double y = -1 + 2 * static_cast<double>(i) / static_cast<double>(cells);
      m.vertices.emplace_back(x, y, noise(Eigen::Vector3d(x, y, 0)));
    }
  auto id = [&](std::size_t i, std::size_t j) { return static_cast<std::uint32_t>(i * side + j); };
  for (std::size_t i = 0; i < cells; ++i)
    for (std::size_t j = 0; j < cells; ++j) add_quad(m.faces, id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j), (i + j) % 2);
  return m;
}

Mesh noisy_blob(unsigned level, std::uint64_t seed) {
  Rng rng(seed);
  const WaveNoise noise(rng, {1.5, 3.5, 8, 17}, 0.3, 0.4, 4);
  return displace_sphere(level, [&](const Eigen::Vector3d& d) { return 1 + noise(d); });
}

Mesh random_mesh(std::size_t n, std::uint64_t seed) {
  if (n < 4) throw ConfigError("random mesh needs n >= 4");
  Rng rng(seed);
  const double root = std::sqrt(static_cast<double>(n));
  const auto w = std::clamp<std::size_t>(static_cast<std::size_t>(root * rng.uniform(0.5, 1.5)), 2, n / 2);
  const std::size_t h = std::max<std::size_t>(2, n / w);
  const double scale = std::pow(10.0, rng.uniform(-2, 3));
  const Eigen::Vector3d offset = scale * Eigen::Vector3d(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
  const WaveNoise relief(rng, {1, 3, 7}, 0.4, 0.5, 2);

  Mesh m;
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j) {
      const double x = static_cast<double>(j) + rng.uniform(-0.3, 0.3);
      const double y = static_cast<double>(i) + rng.uniform(-0.3, 0.3);
      const Eigen::Vector3d p(x / static_cast<double>(w), y / static_cast<double>(h), 0);
      m.vertices.push_back(offset + scale * Eigen::Vector3d(p.x(), p.y(), relief(p) + rng.uniform(-0.02, 0.02)));
    }
  auto id = [&](std::size_t i, std::size_t j) { return static_cast<std::uint32_t>(i * w + j); };
  for (std::size_t i = 0; i + 1 < h; ++i)
    for (std::size_t j = 0; j + 1 < w; ++j) add_quad(m.faces, id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j), rng.uniform() < 0.5);
  return m;
}

Eigen::MatrixXd detailed_curve(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const double p2 = rng.uniform(0, 2 * kPi);
  const double p3 = rng.uniform(0, 2 * kPi);
  const double centre = rng.uniform(0, 2 * kPi);
  Eigen::MatrixXd xy = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), 3);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2 * kPi * static_cast<double>(i) / static_cast<double>(n);
    double r = 1 + 0.2 * std::cos(2 * t + p2) + 0.1 * std::sin(3 * t + p3);
    // wiggles on a quarter of the outline, tapered at both ends
    const double a = std::remainder(t - centre, 2 * kPi);
    if (std::abs(a) < kPi / 4) r += 0.05 * std::pow(std::cos(2 * a), 2) * std::sin(static_cast<double>(n) / 6 * t);
    xy(static_cast<Eigen::Index>(i), 0) = r * std::cos(t);
    xy(static_cast<Eigen::Index>(i), 1) = r * std::sin(t);
  }
  return xy;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> cycle_edges(std::size_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>((i + 1) % n));
  return e;
}

std::vector<std::string_view> kinds() {
  return {"icosphere", "bumpy-sphere", "creased-part", "ridged-torus", "terrain", "noisy-blob", "random"};
}

Mesh make(std::string_view kind, std::size_t size, std::uint64_t seed) {
  const auto level = static_cast<unsigned>(size);
  if (kind == "icosphere") return icosphere(level);
  if (kind == "bumpy-sphere") return bumpy_sphere(level, seed);
  if (kind == "creased-part") return creased_part(level, seed);
  if (kind == "ridged-torus") return ridged_torus(size * 2, size, seed);
  if (kind == "terrain") return terrain(size, seed);
  if (kind == "noisy-blob") return noisy_blob(level, seed);
  if (kind == "random") return random_mesh(size, seed);
  throw ConfigError("unknown synthetic kind '" + std::string(kind) + "'");
}

}  // namespace hsc::synth
