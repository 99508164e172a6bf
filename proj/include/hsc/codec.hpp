#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "hsc/container.hpp"
#include "hsc/graph.hpp"
#include "hsc/mesh.hpp"
#include "hsc/sparse.hpp"
#include "hsc/spectral.hpp"

namespace hsc {

/// The four spectral coders compared in rate-distortion sweeps.
enum class Method { MhbTrunc, HamTrunc, MhbSomp, HamSomp };

std::string_view method_name(Method m);
/// Throws ConfigError for unknown ids.
Method parse_method(std::string_view id);

struct EncoderConfig {
  double target_ratio = 0.1;
  std::size_t block_size = kDefaultBlockSize;
  /// Absolute mu values, strictly increasing. Empty selects the per-block
  /// default grid (12 log-spaced points over [1e-2, 1e3] x mean eigenvalue).
  std::vector<double> mu_grid;
  std::size_t max_subdicts = 4;
  double improvement_tolerance = 1e-3;
  int coefficient_bits = 32;
  int coordinate_bits = 32;
  int mu_bits = 32;
  /// Keep the leading eigen-coefficients instead of running S-OMP.
  bool truncation = false;
  /// Store vertices block-contiguous in coding order instead of writing a
  /// per-block order record. The decoded mesh is then a relabeling.
  bool reorder_in_place = false;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

EncoderConfig config_for(Method method, double target_ratio, EncoderConfig base = {});

/// Rate bookkeeping for one block (or a whole mesh when summed).
struct CompressionBudget {
  std::uint64_t n = 0;      ///< vertices
  std::uint64_t k = 32;     ///< bits per raw coordinate
  std::uint64_t n_d = 0;    ///< selected atoms / kept coefficients
  std::uint64_t k_d = 32;   ///< bits per coefficient
  std::uint64_t m = 0;      ///< dictionary size; 0 for truncation coding
  std::uint64_t n_mu = 0;
  std::uint64_t k_mu = 32;
};

/// 3 n_d k_d + min(m, n_d ceil(log2 m)) + n_mu k_mu; the support term is
/// absent when m == 0.
std::uint64_t budget_numerator(const CompressionBudget& b);
/// budget_numerator / (3 n k). For truncation with k_d == k this is n_d / n.
double compression_ratio(const CompressionBudget& b);

/// Largest atom count whose rate fits `target_ratio` for a block of n
/// vertices, m atoms (0 for truncation) and n_mu stored mu values. Never
/// exceeds n (or m when m > 0).
std::size_t atoms_for_ratio(double target_ratio, std::size_t n, std::size_t m, std::size_t n_mu,
                            const EncoderConfig& config);

std::vector<CompressionBudget> block_budgets(const CompressedMesh& stream, int coordinate_bits = 32);
/// Sum of block numerators over 3 n k for the whole mesh.
double achieved_ratio(const CompressedMesh& stream, int coordinate_bits = 32);

// --- Quantization ----------------------------------------------------------

struct QuantizedCoefficients {
  std::vector<std::uint32_t> codes;  ///< rows x 3, row-major
  std::array<float, 6> ranges{};     ///< (min, max) per channel
};

/// Uniform per-channel quantizer with 2^bits levels over [min, max] and
/// midpoint reconstruction. bits == 32 stores raw single-precision values.
QuantizedCoefficients quantize(const Eigen::MatrixXd& coefficients, int bits);
Eigen::MatrixXd dequantize(const QuantizedCoefficients& q, std::size_t rows, int bits);

// --- Block coding steps ----------------------------------------------------

/// Leading n_d eigen-coefficients <u, phi_i>.
SparseCode truncation_code(const Eigen::MatrixXd& signals, const SpectralBasis& basis, std::size_t n_d);

/// Stable ascending sort of per-vertex errors. Errors below 1e-12 times the
/// signal RMS count as exact ties.
std::vector<std::uint32_t> error_order(const Eigen::VectorXd& errors, const Eigen::MatrixXd& signals);

/// Coding order for a block: reconstruct with S-OMP on the Laplacian basis
/// at sparsity k and sort vertices by ascending error.
std::vector<std::uint32_t> vertex_error_permutation(const Mesh& block, const SpectralBasis& basis, std::size_t k);

/// Eigenbases of L + mu V for one block, cached per mu.
class HamiltonianFamily {
 public:
  HamiltonianFamily(SymmetricMatrix laplacian, Eigen::VectorXd potential_diagonal);

  const SpectralBasis& basis(double mu);
  const SymmetricMatrix& laplacian() const noexcept { return laplacian_; }

 private:
  SymmetricMatrix laplacian_;
  Eigen::VectorXd potential_;
  std::map<double, SpectralBasis> cache_;
};

struct MuSearchResult {
  double mu = 0;
  double residual = 0;  ///< Frobenius norm of the S-OMP residual
};

/// Direct search over the grid: for each mu, S-OMP at sparsity k on
/// [existing, Psi_mu]; the smallest residual wins (ties keep the smaller mu).
MuSearchResult search_mu(const Eigen::MatrixXd& signals, HamiltonianFamily& family,
                         std::span<const SpectralBasis* const> existing, std::size_t k, std::span<const double> mu_grid);

/// 12 log-spaced values over [1e-2, 1e3] x mean Laplacian eigenvalue,
/// rounded to single precision. Empty when the block has no edges.
std::vector<double> default_mu_grid(const SymmetricMatrix& laplacian);

struct TruncationChoice {
  SparseCode code;
  std::optional<double> mu;
  std::vector<std::uint32_t> order;  ///< coding order when mu is set
  double residual = 0;
};

/// Truncation in the Hamiltonian basis: order vertices by Laplacian
/// truncation error at n_d, then pick the grid mu whose first n_d
/// eigenvectors leave the smallest residual. Signals are in input order;
/// the returned code refers to the reordered block.
TruncationChoice hamiltonian_truncation(const SymmetricMatrix& laplacian, const Eigen::MatrixXd& signals,
                                        std::size_t n_d, std::span<const double> mu_grid);

/// Dictionary the decoder rebuilds for a block already in coding order:
/// [Phi, Psi_mu1, ...] for sparse blocks, the last basis alone for
/// truncation blocks.
Dictionary block_dictionary(const Mesh& block, std::span<const float> mus, bool truncation);

// --- Whole-mesh codec ------------------------------------------------------

/// Per-block diagnostics from the most recent encode.
struct BlockReport {
  std::size_t vertices = 0;
  std::size_t atoms = 0;
  std::size_t n_mu = 0;
  double laplacian_residual = 0;  ///< S-OMP (or truncation) residual on Phi alone
  double final_residual = 0;
};

CompressedMesh encode(const Mesh& mesh, const EncoderConfig& config, std::vector<BlockReport>* report = nullptr);

/// Rebuilds geometry. In reorder-in-place streams the result uses the
/// stream's vertex labeling.
Mesh decode(const CompressedMesh& stream);

/// Encoded mesh expressed in the decoder's labeling (identity unless the
/// stream reorders in place).
Mesh reference_for(const Mesh& original, const CompressedMesh& stream);

}  // namespace hsc
