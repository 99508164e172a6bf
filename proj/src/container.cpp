#include "hsc/container.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hsc/bitstream.hpp"
#include "hsc/error.hpp"
#include "hsc/graph.hpp"

namespace hsc {

std::uint64_t support_bits(std::uint64_t m, std::uint64_t k) { return std::min(m, k * ceil_log2(m)); }

SupportEncoding choose_support_encoding(std::uint64_t m, std::uint64_t k) {
  return m < k * ceil_log2(m) ? SupportEncoding::BitVector : SupportEncoding::Indices;
}

std::vector<std::uint8_t> serialize(const CompressedMesh& s, StreamTally* tally) {
  BitWriter out;
  StreamTally t;

  for (char c : kMagic) out.write(static_cast<std::uint8_t>(c), 8);
  out.write(s.version, 16);
  out.write(s.num_vertices, 32);
  out.write(s.faces.size(), 32);
  out.write(s.block_size, 16);
  out.write(s.coefficient_bits, 8);
  out.write(s.flags, 8);
  t.header_bits = out.bit_count();

  for (const auto& f : s.faces)
    for (auto i : f) out.write_varint(i);
  t.connectivity_bits = out.bit_count() - t.header_bits;

  const unsigned kd = s.coefficient_bits;
  const bool in_place = s.reorder_in_place();
  const bool trunc = s.truncation();
  for (const auto& b : s.blocks) {
    std::uint64_t payload = 0;
    const std::uint64_t start = out.bit_count();
    if (b.vertex_count > 0xffffu || b.k > 0xffffu || b.mu.size() > 0xffu)
      throw ConfigError("block record field exceeds its wire width");
    if (in_place) out.write(b.vertex_count, 16);
    out.write(b.k, 16);
    out.write(b.mu.size(), 8);
    for (float mu : b.mu) out.write_f32(mu);
    payload += kMuBits * b.mu.size();

    if (!b.mu.empty() && !in_place) {
      std::uint32_t prev = 0;
      for (auto v : b.order) {
        out.write((v - prev) & 0xffffu, 16);
        prev = v;
      }
    }

    if (!trunc) {
      const std::uint64_t m = b.atom_count();
      const auto enc = choose_support_encoding(m, b.k);
      out.write(static_cast<std::uint8_t>(enc), 1);
      if (enc == SupportEncoding::BitVector) {
        std::size_t next = 0;
        for (std::uint64_t j = 0; j < m; ++j) {
          const bool on = next < b.support.size() && b.support[next] == j;
          out.write(on ? 1 : 0, 1);
          if (on) ++next;
        }
      } else {
        const unsigned w = ceil_log2(m);
        for (auto j : b.support) out.write(j, w);
      }
      payload += support_bits(m, b.k);
    }

    for (float r : b.ranges) out.write_f32(r);
    for (auto c : b.codes) out.write(c, kd);
    payload += static_cast<std::uint64_t>(b.codes.size()) * kd;
    out.align();

    t.payload_bits += payload;
    t.side_bits += out.bit_count() - start - payload;
  }

  if (tally) *tally = t;
  return std::move(out).take();
}

CompressedMesh deserialize(std::span<const std::uint8_t> bytes, StreamTally* tally) {
  BitReader in(bytes);
  StreamTally t;
  CompressedMesh s;

  std::array<char, 4> magic{};
  if (bytes.size() < 4) throw FormatError("truncated stream");
  for (auto& c : magic) c = static_cast<char>(in.read(8));
  if (magic[0] != 'H' || magic[1] != 'S' || magic[2] != 'C') throw FormatError("not an HSC stream (bad magic)");
  if (magic[3] != kMagic[3])
    throw FormatError(std::string("unsupported version: container magic 'HSC") + magic[3] + "'");
  s.version = static_cast<std::uint16_t>(in.read(16));
  if (s.version != kFormatVersion) throw FormatError("unsupported version " + std::to_string(s.version));
  s.num_vertices = static_cast<std::uint32_t>(in.read(32));
  const auto nf = in.read(32);
  s.block_size = static_cast<std::uint16_t>(in.read(16));
  s.coefficient_bits = static_cast<std::uint8_t>(in.read(8));
  s.flags = static_cast<std::uint8_t>(in.read(8));
  t.header_bits = in.position();
  if (s.coefficient_bits < 2 || s.coefficient_bits > 32) throw FormatError("coefficient width out of range");
  if (s.block_size == 0) throw FormatError("zero block size");
  if (nf * 3 * 8 > in.remaining()) throw FormatError("truncated stream");

  s.faces.resize(nf);
  for (auto& f : s.faces) {
    for (auto& i : f) {
      i = in.read_varint();
      if (i >= s.num_vertices) throw FormatError("face index out of range");
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) throw FormatError("degenerate face record");
  }
  t.connectivity_bits = in.position() - t.header_bits;

  const bool in_place = s.reorder_in_place();
  const bool trunc = s.truncation();
  std::vector<std::uint32_t> sizes;
  if (!in_place) {
    const auto parts = partition(build_adjacency(s.num_vertices, s.faces), s.block_size);
    for (const auto& b : parts.blocks) sizes.push_back(static_cast<std::uint32_t>(b.size()));
  }

  const unsigned kd = s.coefficient_bits;
  std::uint64_t covered = 0;
  for (std::size_t bi = 0; in_place ? covered < s.num_vertices : bi < sizes.size(); ++bi) {
    CompressedBlock b;
    std::uint64_t payload = 0;
    const std::uint64_t start = in.position();
    if (in_place) {
      b.vertex_count = static_cast<std::uint32_t>(in.read(16));
      if (b.vertex_count == 0 || covered + b.vertex_count > s.num_vertices)
        throw FormatError("block sizes do not tile the vertex range");
    } else {
      b.vertex_count = sizes[bi];
    }
    covered += b.vertex_count;
    b.k = static_cast<std::uint32_t>(in.read(16));
    const auto n_mu = in.read(8);
    for (std::uint64_t j = 0; j < n_mu; ++j) {
      const float mu = in.read_f32();
      if (!std::isfinite(mu) || mu < 0) throw FormatError("invalid mu value");
      b.mu.push_back(mu);
    }
    payload += kMuBits * n_mu;

    if (n_mu > 0 && !in_place) {
      std::vector<char> seen(b.vertex_count, 0);
      std::uint32_t prev = 0;
      for (std::uint32_t i = 0; i < b.vertex_count; ++i) {
        const auto v = static_cast<std::uint32_t>((prev + in.read(16)) & 0xffffu);
        if (v >= b.vertex_count || seen[v]) throw FormatError("invalid vertex order record");
        seen[v] = 1;
        b.order.push_back(v);
        prev = v;
      }
    } else if (n_mu > 0) {
      b.order.resize(b.vertex_count);
      for (std::uint32_t i = 0; i < b.vertex_count; ++i) b.order[i] = i;
    }

    const std::uint64_t m = b.atom_count();
    if (b.k > (trunc ? b.vertex_count : std::min<std::uint64_t>(m, b.vertex_count)))
      throw FormatError("block sparsity exceeds dictionary size");
    if (!trunc) {
      const auto enc = static_cast<SupportEncoding>(in.read(1));
      if (enc != choose_support_encoding(m, b.k)) throw FormatError("support selector disagrees with block sizes");
      b.support_encoding = enc;
      if (enc == SupportEncoding::BitVector) {
        for (std::uint64_t j = 0; j < m; ++j)
          if (in.read(1)) b.support.push_back(static_cast<std::uint32_t>(j));
        if (b.support.size() != b.k) throw FormatError("support bit vector population differs from k");
      } else {
        const unsigned w = ceil_log2(m);
        for (std::uint32_t i = 0; i < b.k; ++i) {
          const auto j = in.read(w);
          if (j >= m) throw FormatError("support index " + std::to_string(j) + " out of range");
          if (!b.support.empty() && j <= b.support.back()) throw FormatError("support indices not ascending");
          b.support.push_back(static_cast<std::uint32_t>(j));
        }
      }
      payload += support_bits(m, b.k);
    }

    for (auto& r : b.ranges) r = in.read_f32();
    b.codes.resize(static_cast<std::size_t>(b.k) * 3);
    for (auto& c : b.codes) c = static_cast<std::uint32_t>(in.read(kd));
    payload += static_cast<std::uint64_t>(b.codes.size()) * kd;
    in.align();

    t.payload_bits += payload;
    t.side_bits += in.position() - start - payload;
    s.blocks.push_back(std::move(b));
  }
  if (in.remaining() != 0) throw FormatError("trailing bytes after last block");

  if (tally) *tally = t;
  return s;
}

}  // namespace hsc
