#pragma once

#include <span>
#include <string>
#include <vector>

#include "hsc/codec.hpp"
#include "hsc/container.hpp"
#include "hsc/metrics.hpp"

namespace hsc {

struct SweepRow {
  Method method = Method::MhbTrunc;
  double target_ratio = 0;
  double achieved_ratio = 0;
  double visual_error = 0;
  double rms = 0;
  double wall_ms = 0;  ///< 0 when timing is off
};

/// Everything one encode/serialize/decode pass produced.
struct CellResult {
  SweepRow row;
  CompressedMesh stream;  ///< as read back from the serialized bytes
  std::vector<std::uint8_t> bytes;
  StreamTally tally;
  ErrorReport error;
};

/// Encodes, serializes, parses the bytes back, decodes and scores against
/// the original. The achieved ratio is recomputed from the parsed stream and
/// must agree with the serialized payload bit count (Error otherwise).
CellResult run_cell(const Mesh& mesh, Method method, double target_ratio, const EncoderConfig& base = {},
                    bool timing = true);

/// One row per (method, ratio), methods outermost. Cells run in parallel;
/// row order does not depend on scheduling.
std::vector<SweepRow> run_sweep(const Mesh& mesh, std::span<const Method> methods, std::span<const double> ratios,
                                const EncoderConfig& base = {}, bool timing = true);

std::string sweep_csv(std::span<const SweepRow> rows);
std::string per_vertex_csv(const ErrorReport& report);

}  // namespace hsc
