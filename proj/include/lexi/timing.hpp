#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "lexi/flit_codec.hpp"
#include "lexi/histogram.hpp"

namespace lexi {

// Inter-chiplet link: 100 Gbps, 1 GHz, one 128-bit flit per cycle. Every
// flit, compressed or not, spends its first 8 bits on the header.
struct LinkModel {
  double bandwidth_bits_per_ns = 100.0;
  std::uint32_t flit_bits = static_cast<std::uint32_t>(kFlitBits);
  std::uint32_t flit_header_bits = static_cast<std::uint32_t>(kFlitHeaderBits);
  double cycle_ns = 1.0;
  std::uint32_t decode_lanes = 10;

  std::uint32_t payload_bits() const noexcept { return flit_bits - flit_header_bits; }
  // One flit per cycle keeps the link busy.
  bool flit_rate_saturates_link() const noexcept {
    return static_cast<double>(payload_bits()) >= bandwidth_bits_per_ns * cycle_ns;
  }
};

struct CodebookLatency {
  std::uint64_t histogram_phase_cycles = 0;
  std::uint64_t pipeline_cycles = 0;
  double total_ns = 0.0;
};

// From a measured histogram run (ingest beats + arbiter stalls) plus the fixed pipeline.
CodebookLatency codebook_latency(const CycleReport& report, const LinkModel& link = {});
// Lower bound without data: ceil(sample / lanes) beats, no stalls.
CodebookLatency codebook_latency(const EncoderConfig& cfg, std::size_t sample_size, const LinkModel& link = {});
// Runs the lane model over `sample` to include arbiter stalls.
CodebookLatency codebook_latency(const EncoderConfig& cfg, std::span<const std::uint8_t> sample,
                                 const LinkModel& link = {});

enum class Encoding { Raw, Lexi };

struct TransferCost {
  std::uint64_t data_flits = 0;
  std::uint64_t overhead_flits = 0;  // codebook header + trailer flits
  std::uint64_t flits = 0;
  double ns = 0.0;
};

// Raw: 16 bits/value. LEXI: 8 sign+mantissa bits + 8/CR exponent bits per
// value, plus codebook header and trailer flits. Flits are ceil(bits /
// payload); one flit per cycle. Throws ContractViolation for CR < 1.
TransferCost transfer_time(std::uint64_t value_count, Encoding encoding, double exponent_cr,
                           const LinkModel& link = {},
                           std::size_t coded_symbols = EncoderConfig::max_coded_symbols);

// Closed form 1 - (8 + 8/CR)/16, no framing.
double analytic_reduction(double exponent_cr) noexcept;

// Cycles the link spends on an encoded layer at one flit per cycle.
std::uint64_t link_transfer_cycles(const EncodedLayer& layer, const LinkModel& link = {});

struct DecodeLatency {
  double mean_cycles_per_exponent = 0.0;
  double ns_per_10_exponents = 0.0;
  double mean_cycles_per_flit = 0.0;
  bool sustains_line_rate = false;  // round-robin lanes keep up with one flit per cycle
};

// Stage k (0-based) costs k+1 cycles per exponent.
DecodeLatency decode_latency(const std::array<std::uint64_t, 4>& stage_hits, std::uint64_t data_flits,
                             const LinkModel& link = {});

}  // namespace lexi
