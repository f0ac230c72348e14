#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lexi/histogram.hpp"
#include "lexi/timing.hpp"

namespace lexi {

enum class TransferKind { Weight, Activation, HybridCache };

TransferKind parse_transfer_kind(std::string_view name);
std::string_view transfer_kind_name(TransferKind kind) noexcept;

struct TransferRecord {
  std::string layer_id;
  TransferKind kind = TransferKind::Activation;
  std::uint64_t value_count = 0;
  std::string source;
  std::string destination;
  std::filesystem::path data_file;  // optional .bf16 slice used to measure the CR
};

// CSV rows `layerId,kind,valueCount,src,dst[,dataFile]`; an optional header
// row starting with "layerId" is skipped, relative data paths resolve against
// `base_dir`. Throws DataError on malformed rows or unknown kinds.
std::vector<TransferRecord> parse_trace_csv(std::istream& in, const std::filesystem::path& base_dir = {});
std::vector<TransferRecord> read_trace_csv(const std::filesystem::path& path);

enum class SimMode { Uncompressed = 0, WeightsOnly = 1, Lexi = 2 };
inline constexpr std::size_t kSimModes = 3;

SimMode parse_sim_mode(std::string_view name);
std::string_view sim_mode_name(SimMode mode) noexcept;

struct SimulationOptions {
  LinkModel link;
  EncoderConfig encoder;
  // Used for records without a data file.
  std::optional<double> default_exponent_cr;
};

struct TransferTiming {
  std::string layer_id;
  TransferKind kind;
  std::uint64_t value_count;
  double exponent_cr;
  bool measured;
  std::array<double, kSimModes> ns{};
};

struct SimulationReport {
  SimMode mode = SimMode::Lexi;
  std::vector<TransferTiming> transfers;
  std::array<double, kSimModes> total_ns{};
  std::array<double, kSimModes> reduction_percent{};
  std::uint64_t startup_cycles_per_layer = 0;
  std::uint64_t startup_layers = 0;
  double startup_ns = 0.0;  // included in the LEXI total
  // From decoding the attached data files; absent without data.
  std::optional<DecodeLatency> decoder;

  double selected_total_ns() const noexcept { return total_ns[static_cast<std::size_t>(mode)]; }
  double selected_reduction_percent() const noexcept {
    return reduction_percent[static_cast<std::size_t>(mode)];
  }
};

// Evaluates all three modes; `mode` picks the headline figures. Weights-only
// compresses Weight records; LEXI compresses every record and pays the
// codebook pipeline once per distinct on-the-fly (activation/hybrid-cache) layer.
SimulationReport simulate_trace(std::span<const TransferRecord> trace, SimMode mode,
                                const SimulationOptions& options = {});

}  // namespace lexi
