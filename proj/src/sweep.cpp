#include "hsc/sweep.hpp"

#include <chrono>
#include <cstdio>
#include <exception>

#include "hsc/error.hpp"

namespace hsc {

CellResult run_cell(const Mesh& mesh, Method method, double target_ratio, const EncoderConfig& base, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  const EncoderConfig config = config_for(method, target_ratio, base);

  CellResult out;
  const CompressedMesh encoded = encode(mesh, config);
  out.bytes = serialize(encoded, &out.tally);
  out.stream = deserialize(out.bytes);
  out.stream.vertex_order = encoded.vertex_order;
  const Mesh decoded = decode(out.stream);
  out.error = visual_error(reference_for(mesh, out.stream), decoded);

  std::uint64_t expected = 0;
  for (const auto& b : block_budgets(out.stream, config.coordinate_bits)) expected += budget_numerator(b);
  if (expected != out.tally.payload_bits)
    throw Error("rate accounting mismatch: " + std::to_string(out.tally.payload_bits) + " payload bits, formula gives " +
                std::to_string(expected));

  out.row.method = method;
  out.row.target_ratio = target_ratio;
  out.row.achieved_ratio = achieved_ratio(out.stream, config.coordinate_bits);
  out.row.visual_error = out.error.global;
  out.row.rms = out.error.rms;
  if (timing)
    out.row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<SweepRow> run_sweep(const Mesh& mesh, std::span<const Method> methods, std::span<const double> ratios,
                                const EncoderConfig& base, bool timing) {
  const std::size_t cells = methods.size() * ratios.size();
  std::vector<SweepRow> rows(cells);
  std::vector<std::exception_ptr> errors(cells);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t c = 0; c < cells; ++c) {
    try {
      rows[c] = run_cell(mesh, methods[c / ratios.size()], ratios[c % ratios.size()], base, timing).row;
    } catch (...) {
      errors[c] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

namespace {
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}
}  // namespace

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "method,target_ratio,achieved_ratio,visual_error,rms,wall_ms\n";
  for (const auto& r : rows) {
    out += method_name(r.method);
    for (double v : {r.target_ratio, r.achieved_ratio, r.visual_error, r.rms, r.wall_ms}) out += "," + fmt(v);
    out += '\n';
  }
  return out;
}

std::string per_vertex_csv(const ErrorReport& report) {
  std::string out = "vertex_id,error\n";
  for (std::size_t i = 0; i < report.per_vertex.size(); ++i) out += std::to_string(i) + "," + fmt(report.per_vertex[i]) + "\n";
  return out;
}

}  // namespace hsc
