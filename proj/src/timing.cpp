#include "lexi/timing.hpp"

#include <cmath>
#include <limits>

#include "lexi/error.hpp"

namespace lexi {

namespace {

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

CodebookLatency finish(std::uint64_t histogram_cycles, const LinkModel& link) {
  CodebookLatency l;
  l.histogram_phase_cycles = histogram_cycles;
  l.pipeline_cycles = kSortCycles + kTreeCycles + kLutProgramCycles;
  l.total_ns = static_cast<double>(l.histogram_phase_cycles + l.pipeline_cycles) * link.cycle_ns;
  return l;
}

}  // namespace

CodebookLatency codebook_latency(const CycleReport& report, const LinkModel& link) {
  return finish(report.histogram_cycles, link);
}

CodebookLatency codebook_latency(const EncoderConfig& cfg, std::size_t sample_size, const LinkModel& link) {
  cfg.validate();
  return finish(ceil_div(sample_size, cfg.lanes), link);
}

CodebookLatency codebook_latency(const EncoderConfig& cfg, std::span<const std::uint8_t> sample,
                                 const LinkModel& link) {
  return finish(run_histogram(sample, cfg).cycles.histogram_cycles, link);
}

TransferCost transfer_time(std::uint64_t value_count, Encoding encoding, double exponent_cr, const LinkModel& link,
                           std::size_t coded_symbols) {
  TransferCost cost;
  const std::uint64_t payload = link.payload_bits();
  if (encoding == Encoding::Raw) {
    cost.data_flits = ceil_div(16 * value_count, payload);
  } else {
    if (!(exponent_cr >= 1.0)) throw ContractViolation("transfer_time: compressed modes need CR >= 1");
    const double bits = static_cast<double>(value_count) * (8.0 + 8.0 / exponent_cr);
    cost.data_flits = static_cast<std::uint64_t>(std::ceil(bits / static_cast<double>(payload)));
    const std::uint64_t header_bytes = 1 + 2 * coded_symbols + 8;
    cost.overhead_flits = ceil_div(header_bytes, kFlitBytes - 1) + 1;
  }
  cost.flits = cost.data_flits + cost.overhead_flits;
  cost.ns = static_cast<double>(cost.flits) * link.cycle_ns;
  return cost;
}

double analytic_reduction(double exponent_cr) noexcept {
  return 1.0 - (8.0 + 8.0 / exponent_cr) / 16.0;
}

std::uint64_t link_transfer_cycles(const EncodedLayer& layer, const LinkModel&) {
  // The packer never stalls the link, so every cycle carries exactly one flit.
  return layer.header.size() + layer.data.size() + 1;
}

DecodeLatency decode_latency(const std::array<std::uint64_t, 4>& stage_hits, std::uint64_t data_flits,
                             const LinkModel& link) {
  DecodeLatency d;
  std::uint64_t symbols = 0;
  std::uint64_t cycles = 0;
  for (std::size_t s = 0; s < stage_hits.size(); ++s) {
    symbols += stage_hits[s];
    cycles += stage_hits[s] * (s + 1);
  }
  if (symbols == 0 || data_flits == 0) return d;
  d.mean_cycles_per_exponent = static_cast<double>(cycles) / static_cast<double>(symbols);
  d.ns_per_10_exponents = 10.0 * d.mean_cycles_per_exponent * link.cycle_ns;
  d.mean_cycles_per_flit = static_cast<double>(cycles) / static_cast<double>(data_flits);
  d.sustains_line_rate = d.mean_cycles_per_flit <= static_cast<double>(link.decode_lanes);
  return d;
}

}  // namespace lexi
