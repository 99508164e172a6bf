#include "hsc/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <string>

#include "hsc/bitstream.hpp"
#include "hsc/error.hpp"
#include "hsc/kernels.hpp"

namespace hsc {
namespace {

constexpr std::size_t kDefaultGridPoints = 12;

double round_to_float(double v) { return static_cast<double>(static_cast<float>(v)); }

double frobenius_residual(const Eigen::MatrixXd& signals, const Dictionary& dict, const SparseCode& code) {
  return (signals - reconstruct(dict, code)).norm();
}

SymmetricMatrix block_laplacian(const Mesh& block) { return combinatorial_laplacian(build_adjacency(block)); }

std::vector<double> effective_grid(const EncoderConfig& config, const SymmetricMatrix& laplacian) {
  if (config.mu_grid.empty()) return default_mu_grid(laplacian);
  std::vector<double> grid;
  for (double mu : config.mu_grid) grid.push_back(round_to_float(mu));
  return grid;
}

// Coding order -> partition-local identity, used when a block keeps its
// partition order.
std::vector<std::uint32_t> identity_order(std::size_t n) {
  std::vector<std::uint32_t> id(n);
  std::iota(id.begin(), id.end(), 0u);
  return id;
}

struct BlockResult {
  CompressedBlock block;
  BlockReport report;
};

void pack_coefficients(CompressedBlock& block, const SparseCode& code, const EncoderConfig& config, bool truncation) {
  const auto k = code.support.size();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(k), 3);
  if (truncation) {
    rows = code.coefficients;
  } else {
    // Wire order is ascending atom index.
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return code.support[a] < code.support[b]; });
    block.support.resize(k);
    for (std::size_t t = 0; t < k; ++t) {
      block.support[t] = code.support[idx[t]];
      rows.row(static_cast<Eigen::Index>(t)) = code.coefficients.row(static_cast<Eigen::Index>(idx[t]));
    }
    block.support_encoding = choose_support_encoding(block.atom_count(), k);
  }
  block.k = static_cast<std::uint32_t>(k);
  auto q = quantize(rows, config.coefficient_bits);
  block.codes = std::move(q.codes);
  block.ranges = q.ranges;
}

[[noreturn]] void ratio_too_small(std::size_t n) {
  throw ConfigError("target ratio leaves no coefficients for a block of " + std::to_string(n) +
                    " vertices; raise --ratio or --block-size");
}

BlockResult encode_sparse_block(const Mesh& block, const EncoderConfig& config) {
  const std::size_t n = block.num_vertices();
  const Eigen::MatrixXd signals = coordinates(block);
  const SymmetricMatrix laplacian = block_laplacian(block);
  const SpectralBasis phi = eigendecompose_symmetric(laplacian);
  const Dictionary phi_dict = build_dictionary(phi);

  const bool full_rate = config.target_ratio >= 1.0;
  const std::size_t k0 = full_rate ? n : atoms_for_ratio(config.target_ratio, n, n, 0, config);
  if (k0 == 0) ratio_too_small(n);

  BlockResult out;
  out.block.vertex_count = static_cast<std::uint32_t>(n);
  SparseCode best = somp(signals, phi_dict, k0);
  double best_residual = frobenius_residual(signals, phi_dict, best);
  out.report.laplacian_residual = best_residual;

  const std::vector<double> grid = full_rate ? std::vector<double>{} : effective_grid(config, laplacian);
  const std::size_t subdicts = grid.empty() ? 0 : config.max_subdicts;
  const std::size_t k_search = subdicts ? atoms_for_ratio(config.target_ratio, n, (1 + subdicts) * n, subdicts, config) : 0;

  if (k_search > 0) {
    // Coding order from the Laplacian-only reconstruction error.
    const SparseCode probe = somp(signals, phi_dict, k_search);
    const Eigen::VectorXd errors = (signals - reconstruct(phi_dict, probe)).rowwise().norm();
    const auto order = error_order(errors, signals);
    const Mesh sorted = relabel(block, order);
    const Eigen::MatrixXd sorted_signals = coordinates(sorted);

    HamiltonianFamily family(block_laplacian(sorted), linear_potential(n).diagonal);
    std::vector<const SpectralBasis*> bases{&family.basis(0.0)};
    const Dictionary sorted_phi = build_dictionary(bases);
    double previous = frobenius_residual(sorted_signals, sorted_phi, somp(sorted_signals, sorted_phi, k_search));
    std::vector<float> mus;
    while (mus.size() < subdicts && previous > 0) {
      const auto found = search_mu(sorted_signals, family, bases, k_search, grid);
      if (previous - found.residual <= config.improvement_tolerance * previous) break;
      mus.push_back(static_cast<float>(found.mu));
      bases.push_back(&family.basis(found.mu));
      previous = found.residual;
    }

    // Each prefix of the mu list is re-coded at the sparsity its own rate
    // allows; the smallest residual wins, fewer mu values on ties.
    std::size_t chosen = 0;
    for (std::size_t j = 1; j <= mus.size(); ++j) {
      const std::size_t kj = atoms_for_ratio(config.target_ratio, n, (1 + j) * n, j, config);
      if (kj == 0) continue;
      const Dictionary dict = build_dictionary(std::span(bases).first(j + 1));
      SparseCode code = somp(sorted_signals, dict, kj);
      const double residual = frobenius_residual(sorted_signals, dict, code);
      if (residual < best_residual) {
        best = std::move(code);
        best_residual = residual;
        chosen = j;
      }
    }
    if (chosen > 0) {
      out.block.mu.assign(mus.begin(), mus.begin() + static_cast<std::ptrdiff_t>(chosen));
      out.block.order = order;
    }
  }

  pack_coefficients(out.block, best, config, false);
  out.report.vertices = n;
  out.report.atoms = best.k();
  out.report.n_mu = out.block.mu.size();
  out.report.final_residual = best_residual;
  return out;
}

BlockResult encode_truncation_block(const Mesh& block, const EncoderConfig& config) {
  const std::size_t n = block.num_vertices();
  const Eigen::MatrixXd signals = coordinates(block);
  const SymmetricMatrix laplacian = block_laplacian(block);
  const SpectralBasis phi = eigendecompose_symmetric(laplacian);

  const bool full_rate = config.target_ratio >= 1.0;
  const std::size_t nd0 = full_rate ? n : atoms_for_ratio(config.target_ratio, n, 0, 0, config);
  if (nd0 == 0) ratio_too_small(n);

  BlockResult out;
  out.block.vertex_count = static_cast<std::uint32_t>(n);
  SparseCode best = truncation_code(signals, phi, nd0);
  double best_residual = frobenius_residual(signals, build_dictionary(phi), best);
  out.report.laplacian_residual = best_residual;

  if (!full_rate && config.max_subdicts > 0) {
    const auto grid = effective_grid(config, laplacian);
    const std::size_t nd1 = atoms_for_ratio(config.target_ratio, n, 0, 1, config);
    if (!grid.empty() && nd1 > 0) {
      auto choice = hamiltonian_truncation(laplacian, signals, nd1, grid);
      if (choice.mu && choice.residual < best_residual) {
        best = std::move(choice.code);
        best_residual = choice.residual;
        out.block.mu = {static_cast<float>(*choice.mu)};
        out.block.order = std::move(choice.order);
      }
    }
  }

  pack_coefficients(out.block, best, config, true);
  out.report.vertices = n;
  out.report.atoms = best.k();
  out.report.n_mu = out.block.mu.size();
  out.report.final_residual = best_residual;
  return out;
}

template <typename Fn>
void for_each_block(std::size_t count, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t b = 0; b < count; ++b) {
    try {
      fn(b);
    } catch (...) {
      errors[b] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::MhbTrunc: return "mhb-trunc";
    case Method::HamTrunc: return "ham-trunc";
    case Method::MhbSomp: return "mhb-somp";
    case Method::HamSomp: return "ham-somp";
  }
  return "?";
}

Method parse_method(std::string_view id) {
  for (Method m : {Method::MhbTrunc, Method::HamTrunc, Method::MhbSomp, Method::HamSomp})
    if (method_name(m) == id) return m;
  throw ConfigError("unknown method '" + std::string(id) + "' (expected mhb-trunc, ham-trunc, mhb-somp or ham-somp)");
}

void EncoderConfig::validate() const {
  if (!(target_ratio > 0 && target_ratio <= 1)) throw ConfigError("target ratio must lie in (0, 1]");
  if (block_size == 0 || block_size > 32767) throw ConfigError("block size must lie in [1, 32767]");
  if (coefficient_bits < 2 || coefficient_bits > 32) throw ConfigError("coefficient bits must lie in [2, 32]");
  if (coordinate_bits < 1) throw ConfigError("coordinate bits must be positive");
  if (mu_bits != static_cast<int>(kMuBits)) throw ConfigError("mu values are stored as 32-bit floats");
  if (max_subdicts > 255) throw ConfigError("at most 255 Hamiltonian sub-dictionaries");
  if (!(improvement_tolerance >= 0)) throw ConfigError("improvement tolerance must be non-negative");
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    if (!std::isfinite(mu_grid[i]) || mu_grid[i] < 0) throw ConfigError("mu grid values must be finite and >= 0");
    if (i > 0 && !(mu_grid[i] > mu_grid[i - 1])) throw ConfigError("mu grid must be strictly increasing");
  }
}

EncoderConfig config_for(Method method, double target_ratio, EncoderConfig base) {
  base.target_ratio = target_ratio;
  switch (method) {
    case Method::MhbTrunc:
      base.truncation = true;
      base.max_subdicts = 0;
      break;
    case Method::HamTrunc:
      base.truncation = true;
      base.max_subdicts = std::min<std::size_t>(base.max_subdicts, 1);
      break;
    case Method::MhbSomp:
      base.truncation = false;
      base.max_subdicts = 0;
      break;
    case Method::HamSomp:
      base.truncation = false;
      break;
  }
  return base;
}

std::uint64_t budget_numerator(const CompressionBudget& b) {
  std::uint64_t bits = 3 * b.n_d * b.k_d + b.n_mu * b.k_mu;
  if (b.m > 0) bits += support_bits(b.m, b.n_d);
  return bits;
}

double compression_ratio(const CompressionBudget& b) {
  return static_cast<double>(budget_numerator(b)) / static_cast<double>(3 * b.n * b.k);
}

std::size_t atoms_for_ratio(double target_ratio, std::size_t n, std::size_t m, std::size_t n_mu,
                            const EncoderConfig& config) {
  const double budget = target_ratio * 3.0 * static_cast<double>(n) * config.coordinate_bits;
  CompressionBudget b;
  b.n = n;
  b.k = static_cast<std::uint64_t>(config.coordinate_bits);
  b.k_d = static_cast<std::uint64_t>(config.coefficient_bits);
  b.m = m;
  b.n_mu = n_mu;
  b.k_mu = static_cast<std::uint64_t>(config.mu_bits);
  std::size_t limit = m > 0 ? std::min(n, m) : n;
  for (std::size_t k = limit;; --k) {
    b.n_d = k;
    if (static_cast<double>(budget_numerator(b)) <= budget * (1 + 1e-12)) return k;
    if (k == 0) return 0;
  }
}

std::vector<CompressionBudget> block_budgets(const CompressedMesh& stream, int coordinate_bits) {
  std::vector<CompressionBudget> out;
  for (const auto& b : stream.blocks) {
    CompressionBudget budget;
    budget.n = b.vertex_count;
    budget.k = static_cast<std::uint64_t>(coordinate_bits);
    budget.n_d = b.k;
    budget.k_d = stream.coefficient_bits;
    budget.m = stream.truncation() ? 0 : b.atom_count();
    budget.n_mu = b.mu.size();
    budget.k_mu = kMuBits;
    out.push_back(budget);
  }
  return out;
}

double achieved_ratio(const CompressedMesh& stream, int coordinate_bits) {
  std::uint64_t bits = 0;
  for (const auto& b : block_budgets(stream, coordinate_bits)) bits += budget_numerator(b);
  return static_cast<double>(bits) / (3.0 * stream.num_vertices * coordinate_bits);
}

QuantizedCoefficients quantize(const Eigen::MatrixXd& coefficients, int bits) {
  if (bits < 2 || bits > 32) throw ConfigError("quantizer bits must lie in [2, 32]");
  const Eigen::Index rows = coefficients.rows();
  QuantizedCoefficients q;
  q.codes.resize(static_cast<std::size_t>(rows) * 3);
  for (Eigen::Index c = 0; c < 3; ++c) {
    if (rows == 0) continue;
    const double lo = coefficients.col(c).minCoeff();
    const double hi = coefficients.col(c).maxCoeff();
    // Single-precision range that still contains every value.
    float flo = static_cast<float>(lo);
    if (static_cast<double>(flo) > lo) flo = std::nextafter(flo, -std::numeric_limits<float>::infinity());
    float fhi = static_cast<float>(hi);
    if (static_cast<double>(fhi) < hi) fhi = std::nextafter(fhi, std::numeric_limits<float>::infinity());
    q.ranges[2 * c] = flo;
    q.ranges[2 * c + 1] = fhi;

    const double width = static_cast<double>(fhi) - static_cast<double>(flo);
    const std::uint64_t levels = std::uint64_t{1} << bits;
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double x = coefficients(i, c);
      std::uint32_t code = 0;
      if (bits == 32) {
        code = std::bit_cast<std::uint32_t>(static_cast<float>(x));
      } else if (width > 0) {
        const double cell = std::floor((x - flo) / width * static_cast<double>(levels));
        code = static_cast<std::uint32_t>(std::clamp(cell, 0.0, static_cast<double>(levels - 1)));
      }
      q.codes[static_cast<std::size_t>(i * 3 + c)] = code;
    }
  }
  return q;
}

Eigen::MatrixXd dequantize(const QuantizedCoefficients& q, std::size_t rows, int bits) {
  if (q.codes.size() != rows * 3) throw FormatError("coefficient count does not match k");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), 3);
  const std::uint64_t levels = std::uint64_t{1} << std::min(bits, 32);
  for (Eigen::Index c = 0; c < 3; ++c) {
    const double lo = q.ranges[2 * c];
    const double width = static_cast<double>(q.ranges[2 * c + 1]) - lo;
    for (std::size_t i = 0; i < rows; ++i) {
      const std::uint32_t code = q.codes[i * 3 + static_cast<std::size_t>(c)];
      double v;
      if (bits == 32) v = std::bit_cast<float>(code);
      else if (width > 0) v = lo + (static_cast<double>(code) + 0.5) * width / static_cast<double>(levels);
      else v = lo;
      out(static_cast<Eigen::Index>(i), c) = v;
    }
  }
  return out;
}

SparseCode truncation_code(const Eigen::MatrixXd& signals, const SpectralBasis& basis, std::size_t n_d) {
  if (n_d > static_cast<std::size_t>(basis.size())) throw ConfigError("truncation order exceeds basis size");
  SparseCode code;
  code.support.resize(n_d);
  std::iota(code.support.begin(), code.support.end(), 0u);
  code.coefficients = basis.vectors.leftCols(static_cast<Eigen::Index>(n_d)).transpose() * signals;
  return code;
}

std::vector<std::uint32_t> error_order(const Eigen::VectorXd& errors, const Eigen::MatrixXd& signals) {
  const Eigen::Index n = errors.size();
  const double scale = n > 0 ? signals.norm() / std::sqrt(static_cast<double>(n)) : 0.0;
  const double floor = 1e-12 * scale;
  Eigen::VectorXd e = errors;
  for (Eigen::Index i = 0; i < n; ++i)
    if (e[i] < floor) e[i] = 0;
  auto order = identity_order(static_cast<std::size_t>(n));
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return e[a] < e[b]; });
  return order;
}

std::vector<std::uint32_t> vertex_error_permutation(const Mesh& block, const SpectralBasis& basis, std::size_t k) {
  const Eigen::MatrixXd signals = coordinates(block);
  const Dictionary dict = build_dictionary(basis);
  const SparseCode code = somp(signals, dict, k);
  const Eigen::VectorXd errors = (signals - reconstruct(dict, code)).rowwise().norm();
  return error_order(errors, signals);
}

HamiltonianFamily::HamiltonianFamily(SymmetricMatrix laplacian, Eigen::VectorXd potential_diagonal)
    : laplacian_(std::move(laplacian)), potential_(std::move(potential_diagonal)) {}

const SpectralBasis& HamiltonianFamily::basis(double mu) {
  auto it = cache_.find(mu);
  if (it == cache_.end())
    it = cache_.emplace(mu, eigendecompose_symmetric(hamiltonian(laplacian_, Potential{potential_, mu}))).first;
  return it->second;
}

MuSearchResult search_mu(const Eigen::MatrixXd& signals, HamiltonianFamily& family,
                         std::span<const SpectralBasis* const> existing, std::size_t k, std::span<const double> mu_grid) {
  if (mu_grid.empty()) throw ConfigError("mu grid is empty");
  MuSearchResult best{0, std::numeric_limits<double>::infinity()};
  std::vector<const SpectralBasis*> bases(existing.begin(), existing.end());
  bases.push_back(nullptr);
  for (double mu : mu_grid) {
    bases.back() = &family.basis(mu);
    const Dictionary dict = build_dictionary(bases);
    const double residual = frobenius_residual(signals, dict, somp(signals, dict, k));
    if (residual < best.residual) best = {mu, residual};
  }
  return best;
}

std::vector<double> default_mu_grid(const SymmetricMatrix& laplacian) {
  const Eigen::Index n = laplacian.size();
  if (n == 0) return {};
  const double mean = laplacian.values.trace() / static_cast<double>(n);
  if (mean <= 0) return {};
  std::vector<double> grid;
  for (std::size_t i = 0; i < kDefaultGridPoints; ++i) {
    const double exponent = -2.0 + 5.0 * static_cast<double>(i) / static_cast<double>(kDefaultGridPoints - 1);
    grid.push_back(round_to_float(mean * std::pow(10.0, exponent)));
  }
  return grid;
}

TruncationChoice hamiltonian_truncation(const SymmetricMatrix& laplacian, const Eigen::MatrixXd& signals,
                                        std::size_t n_d, std::span<const double> mu_grid) {
  const Eigen::Index n = laplacian.size();
  const SpectralBasis phi = eigendecompose_symmetric(laplacian);
  TruncationChoice out;
  out.code = truncation_code(signals, phi, n_d);
  const Dictionary phi_dict = build_dictionary(phi);
  out.residual = frobenius_residual(signals, phi_dict, out.code);
  if (mu_grid.empty() || n == 0) return out;

  const Eigen::VectorXd errors = (signals - reconstruct(phi_dict, out.code)).rowwise().norm();
  auto order = error_order(errors, signals);
  SymmetricMatrix sorted{Eigen::MatrixXd(n, n)};
  Eigen::MatrixXd sorted_signals(n, signals.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    sorted_signals.row(i) = signals.row(order[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < n; ++j)
      sorted.values(i, j) = laplacian.values(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }

  HamiltonianFamily family(std::move(sorted), linear_potential(static_cast<std::size_t>(n)).diagonal);
  double best = std::numeric_limits<double>::infinity();
  double best_mu = 0;
  for (double mu : mu_grid) {
    const auto& psi = family.basis(mu);
    const auto head = psi.vectors.leftCols(static_cast<Eigen::Index>(n_d));
    const double residual = (sorted_signals - head * (head.transpose() * sorted_signals)).norm();
    if (residual < best) {
      best = residual;
      best_mu = mu;
    }
  }
  out.code = truncation_code(sorted_signals, family.basis(best_mu), n_d);
  out.mu = best_mu;
  out.order = std::move(order);
  out.residual = best;
  return out;
}

Dictionary block_dictionary(const Mesh& block, std::span<const float> mus, bool truncation) {
  const std::size_t n = block.num_vertices();
  if (n == 0) throw FormatError("empty block");
  HamiltonianFamily family(block_laplacian(block), linear_potential(n).diagonal);
  if (truncation) return build_dictionary(family.basis(mus.empty() ? 0.0 : static_cast<double>(mus.back())));
  std::vector<const SpectralBasis*> bases{&family.basis(0.0)};
  for (float mu : mus) bases.push_back(&family.basis(static_cast<double>(mu)));
  return build_dictionary(bases);
}

CompressedMesh encode(const Mesh& mesh, const EncoderConfig& config, std::vector<BlockReport>* report) {
  config.validate();
  validate(mesh);
  if (mesh.num_vertices() == 0) throw ConfigError("cannot encode an empty mesh");

  const auto parts = partition(build_adjacency(mesh), config.block_size);
  std::vector<BlockResult> results(parts.num_blocks());
  for_each_block(parts.num_blocks(), [&](std::size_t b) {
    const Submesh sub = extract_submesh(mesh, parts, b);
    results[b] = config.truncation ? encode_truncation_block(sub.mesh, config) : encode_sparse_block(sub.mesh, config);
  });

  CompressedMesh out;
  out.num_vertices = static_cast<std::uint32_t>(mesh.num_vertices());
  out.block_size = static_cast<std::uint16_t>(config.block_size);
  out.coefficient_bits = static_cast<std::uint8_t>(config.coefficient_bits);
  out.flags = static_cast<std::uint8_t>((config.reorder_in_place ? kFlagReorderInPlace : 0) |
                                        (config.mu_grid.empty() ? 0 : kFlagCustomMuGrid) |
                                        (config.truncation ? kFlagTruncation : 0));

  if (config.reorder_in_place) {
    out.vertex_order.reserve(mesh.num_vertices());
    for (std::size_t b = 0; b < results.size(); ++b) {
      auto& block = results[b].block;
      const auto& globals = parts.blocks[b];
      for (std::size_t i = 0; i < globals.size(); ++i)
        out.vertex_order.push_back(globals[block.order.empty() ? i : block.order[i]]);
      if (!block.order.empty()) block.order = identity_order(block.order.size());
    }
    out.faces = relabel(mesh, out.vertex_order).faces;
  } else {
    out.vertex_order = identity_order(mesh.num_vertices());
    out.faces = mesh.faces;
  }

  out.blocks.reserve(results.size());
  if (report) report->clear();
  for (auto& r : results) {
    out.blocks.push_back(std::move(r.block));
    if (report) report->push_back(r.report);
  }
  return out;
}

Mesh decode(const CompressedMesh& stream) {
  if (stream.version != kFormatVersion) throw FormatError("unsupported version " + std::to_string(stream.version));
  Mesh topology;
  topology.vertices.assign(stream.num_vertices, Eigen::Vector3d::Zero());
  topology.faces = stream.faces;

  // Global vertex lists per block, in partition order.
  std::vector<std::vector<std::uint32_t>> blocks;
  if (stream.reorder_in_place()) {
    std::uint32_t offset = 0;
    for (const auto& b : stream.blocks) {
      if (offset + static_cast<std::uint64_t>(b.vertex_count) > stream.num_vertices)
        throw FormatError("block sizes exceed the vertex count");
      std::vector<std::uint32_t> range(b.vertex_count);
      std::iota(range.begin(), range.end(), offset);
      offset += b.vertex_count;
      blocks.push_back(std::move(range));
    }
    if (offset != stream.num_vertices) throw FormatError("block sizes do not cover the vertex count");
  } else {
    blocks = partition(build_adjacency(topology), stream.block_size).blocks;
  }
  if (blocks.size() != stream.blocks.size()) throw FormatError("block count does not match connectivity");

  Mesh out = topology;
  const bool trunc = stream.truncation();
  for_each_block(blocks.size(), [&](std::size_t bi) {
    const auto& record = stream.blocks[bi];
    std::vector<std::uint32_t> globals = blocks[bi];
    if (record.vertex_count != globals.size()) throw FormatError("block size does not match connectivity");
    if (!record.mu.empty()) {
      if (record.order.size() != globals.size()) throw FormatError("missing vertex order record");
      std::vector<std::uint32_t> reordered(globals.size());
      for (std::size_t i = 0; i < globals.size(); ++i) {
        if (record.order[i] >= globals.size()) throw FormatError("invalid vertex order record");
        reordered[i] = globals[record.order[i]];
      }
      globals = std::move(reordered);
    }
    const Mesh local = relabel(topology, globals);
    const Dictionary dict = block_dictionary(local, record.mu, trunc);

    SparseCode code;
    if (trunc) {
      if (record.k > globals.size()) throw FormatError("truncation order exceeds block size");
      code.support = identity_order(record.k);
    } else {
      if (record.support.size() != record.k) throw FormatError("support size differs from k");
      for (auto j : record.support)
        if (j >= dict.m()) throw FormatError("support index " + std::to_string(j) + " out of range");
      code.support = record.support;
    }
    QuantizedCoefficients q{record.codes, record.ranges};
    code.coefficients = dequantize(q, record.k, stream.coefficient_bits);
    const Eigen::MatrixXd xyz = reconstruct(dict, code);
    for (std::size_t i = 0; i < globals.size(); ++i) out.vertices[globals[i]] = xyz.row(static_cast<Eigen::Index>(i)).transpose();
  });
  return out;
}

Mesh reference_for(const Mesh& original, const CompressedMesh& stream) {
  if (stream.vertex_order.size() != original.num_vertices()) throw Error("stream was not encoded from this mesh");
  return relabel(original, stream.vertex_order);
}

}  // namespace hsc
