#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hsc/mesh.hpp"

namespace hsc {

inline constexpr std::array<char, 4> kMagic = {'H', 'S', 'C', '1'};
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr unsigned kMuBits = 32;

/// Header flag bits.
enum : std::uint8_t {
  kFlagReorderInPlace = 1u << 0,  ///< vertices are stored block-contiguous in coding order
  kFlagCustomMuGrid = 1u << 1,    ///< encoder ran with an explicit mu grid
  kFlagTruncation = 1u << 2,      ///< blocks hold leading coefficients, support implicit
};

enum class SupportEncoding : std::uint8_t { Indices = 0, BitVector = 1 };

struct CompressedBlock {
  std::uint32_t vertex_count = 0;
  std::vector<float> mu;
  /// Coding order, position -> partition-local vertex. Present iff mu is
  /// non-empty; serialized only in side-record mode.
  std::vector<std::uint32_t> order;
  /// Ascending atom indices. Empty in truncation mode (first k atoms).
  std::vector<std::uint32_t> support;
  std::uint32_t k = 0;
  SupportEncoding support_encoding = SupportEncoding::Indices;
  /// (min, max) per channel.
  std::array<float, 6> ranges{};
  /// k x 3, atom-major, coefficient_bits each.
  std::vector<std::uint32_t> codes;

  /// Dictionary size the support indexes into.
  std::uint64_t atom_count() const noexcept { return static_cast<std::uint64_t>(vertex_count) * (1 + mu.size()); }

  bool operator==(const CompressedBlock&) const = default;
};

struct CompressedMesh {
  std::uint16_t version = kFormatVersion;
  std::uint32_t num_vertices = 0;
  std::vector<Face> faces;
  std::uint16_t block_size = 0;
  std::uint8_t coefficient_bits = 32;
  std::uint8_t flags = 0;
  std::vector<CompressedBlock> blocks;

  /// Encoder side only, never serialized: decoded vertex i corresponds to
  /// input vertex vertex_order[i]. Identity unless reordering in place.
  std::vector<std::uint32_t> vertex_order;

  bool reorder_in_place() const noexcept { return flags & kFlagReorderInPlace; }
  bool truncation() const noexcept { return flags & kFlagTruncation; }
};

/// Bit accounting by section.
struct StreamTally {
  std::uint64_t header_bits = 0;
  std::uint64_t connectivity_bits = 0;
  /// mu values, support payloads and packed coefficients.
  std::uint64_t payload_bits = 0;
  /// Everything else in block records: counts, selectors, ranges, vertex
  /// order records, byte padding.
  std::uint64_t side_bits = 0;

  std::uint64_t total() const noexcept { return header_bits + connectivity_bits + payload_bits + side_bits; }
};

/// Support payload width: min(m, k * ceil(log2 m)).
std::uint64_t support_bits(std::uint64_t m, std::uint64_t k);
SupportEncoding choose_support_encoding(std::uint64_t m, std::uint64_t k);

std::vector<std::uint8_t> serialize(const CompressedMesh& stream, StreamTally* tally = nullptr);

/// Throws FormatError on bad magic, unsupported version, truncation or
/// inconsistent block records (support index >= m, invalid order record).
CompressedMesh deserialize(std::span<const std::uint8_t> bytes, StreamTally* tally = nullptr);

}  // namespace hsc
