#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "hsc/error.hpp"

namespace hsc {

/// LSB-first bit packer. Multi-byte fields written on a byte boundary come
/// out little-endian.
class BitWriter {
 public:
  void write(std::uint64_t value, unsigned bits) {
    for (unsigned i = 0; i < bits; ++i) {
      if (fill_ == 0) bytes_.push_back(0);
      if ((value >> i) & 1u) bytes_.back() |= static_cast<std::uint8_t>(1u << fill_);
      fill_ = (fill_ + 1) & 7u;
    }
    bit_count_ += bits;
  }

  void write_f32(float v) { write(std::bit_cast<std::uint32_t>(v), 32); }

  /// LEB128, one byte group at a time.
  void write_varint(std::uint32_t v) {
    do {
      std::uint32_t group = v & 0x7fu;
      v >>= 7;
      write(group | (v ? 0x80u : 0u), 8);
    } while (v);
  }

  /// Pads with zero bits to the next byte boundary; returns the pad width.
  unsigned align() {
    const unsigned pad = fill_ ? 8 - fill_ : 0;
    write(0, pad);
    return pad;
  }

  std::uint64_t bit_count() const noexcept { return bit_count_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
  std::vector<std::uint8_t> take() && { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  unsigned fill_ = 0;
  std::uint64_t bit_count_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t read(unsigned bits) {
    if (pos_ + bits > bytes_.size() * 8) throw FormatError("truncated stream");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < bits; ++i, ++pos_) {
      const auto bit = (bytes_[pos_ >> 3] >> (pos_ & 7u)) & 1u;
      v |= static_cast<std::uint64_t>(bit) << i;
    }
    return v;
  }

  float read_f32() { return std::bit_cast<float>(static_cast<std::uint32_t>(read(32))); }

  std::uint32_t read_varint() {
    std::uint64_t v = 0;
    for (unsigned shift = 0;; shift += 7) {
      if (shift > 28) throw FormatError("varint too long");
      const auto group = read(8);
      v |= (group & 0x7fu) << shift;
      if (!(group & 0x80u)) break;
    }
    if (v > 0xffffffffu) throw FormatError("varint overflows 32 bits");
    return static_cast<std::uint32_t>(v);
  }

  unsigned align() {
    const unsigned pad = (8 - (pos_ & 7u)) & 7u;
    read(pad);
    return pad;
  }

  std::uint64_t position() const noexcept { return pos_; }
  std::uint64_t remaining() const noexcept { return bytes_.size() * 8 - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t pos_ = 0;
};

/// Smallest b with 2^b >= m (0 for m <= 1).
constexpr unsigned ceil_log2(std::uint64_t m) {
  return m <= 1 ? 0u : static_cast<unsigned>(std::bit_width(m - 1));
}

}  // namespace hsc
