#include "lexi/trace.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "lexi/error.hpp"
#include "lexi/layer_codebook.hpp"

namespace lexi {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

struct Measurement {
  double exponent_cr;
  std::array<std::uint64_t, 4> stage_hits{};
  std::uint64_t data_flits = 0;
};

Measurement measure(const TransferRecord& r, const EncoderConfig& cfg) {
  const auto values = read_bf16_file(r.data_file);
  if (values.empty()) throw DataError("trace data file " + r.data_file.string() + " is empty");
  // Offline weights get a codebook from the whole slice; on-the-fly data from
  // the first sample window only.
  const auto layer = r.kind == TransferKind::Weight
                         ? build_codebook_from_histogram(ExponentHistogram::count(exponent_plane(values)))
                         : build_layer_codebook(std::span<const Bf16Bits>(values), cfg);
  const auto encoded = encode_layer(values, layer.codebook);
  const auto decoded = decode_layer(encoded.transmission_order());
  return {encoded.stats.exponent_cr, decoded.stage_hits, decoded.data_flits};
}

}  // namespace

TransferKind parse_transfer_kind(std::string_view name) {
  if (name == "Weight" || name == "weight") return TransferKind::Weight;
  if (name == "Activation" || name == "activation") return TransferKind::Activation;
  if (name == "HybridCache" || name == "hybrid_cache" || name == "hybridcache") return TransferKind::HybridCache;
  throw DataError("unknown transfer kind '" + std::string(name) + "'");
}

std::string_view transfer_kind_name(TransferKind kind) noexcept {
  switch (kind) {
    case TransferKind::Weight: return "Weight";
    case TransferKind::Activation: return "Activation";
    case TransferKind::HybridCache: return "HybridCache";
  }
  return "?";
}

std::vector<TransferRecord> parse_trace_csv(std::istream& in, const std::filesystem::path& base_dir) {
  std::vector<TransferRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    auto fields = split_csv_row(stripped);
    if (out.empty() && !fields.empty() && fields[0] == "layerId") continue;
    const auto where = "trace line " + std::to_string(line_no) + ": ";
    if (fields.size() < 5 || fields.size() > 6) throw DataError(where + "expected 5 or 6 fields");

    TransferRecord r;
    r.layer_id = fields[0];
    r.kind = parse_transfer_kind(fields[1]);
    try {
      std::size_t used = 0;
      const long long count = std::stoll(fields[2], &used);
      if (used != fields[2].size() || count < 1) throw std::invalid_argument("count");
      r.value_count = static_cast<std::uint64_t>(count);
    } catch (const std::exception&) {
      throw DataError(where + "valueCount must be a positive integer");
    }
    r.source = fields[3];
    r.destination = fields[4];
    if (fields.size() == 6 && !fields[5].empty()) {
      r.data_file = fields[5];
      if (r.data_file.is_relative()) r.data_file = base_dir / r.data_file;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TransferRecord> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open trace " + path.string());
  return parse_trace_csv(in, path.parent_path());
}

SimMode parse_sim_mode(std::string_view name) {
  if (name == "uncompressed") return SimMode::Uncompressed;
  if (name == "weights") return SimMode::WeightsOnly;
  if (name == "lexi") return SimMode::Lexi;
  throw ContractViolation("unknown simulation mode '" + std::string(name) + "'");
}

std::string_view sim_mode_name(SimMode mode) noexcept {
  switch (mode) {
    case SimMode::Uncompressed: return "uncompressed";
    case SimMode::WeightsOnly: return "weights";
    case SimMode::Lexi: return "lexi";
  }
  return "?";
}

SimulationReport simulate_trace(std::span<const TransferRecord> trace, SimMode mode,
                                const SimulationOptions& options) {
  if (trace.empty()) throw DataError("simulate: trace is empty");
  const auto& link = options.link;

  SimulationReport report;
  report.mode = mode;
  report.startup_cycles_per_layer = kSortCycles + kTreeCycles + kLutProgramCycles;

  std::map<std::filesystem::path, Measurement> measured;
  std::set<std::string> startup_layers;
  std::array<std::uint64_t, 4> stage_hits{};
  std::uint64_t decoded_flits = 0;

  for (const auto& r : trace) {
    TransferTiming t{r.layer_id, r.kind, r.value_count, 0.0, false, {}};
    if (!r.data_file.empty()) {
      auto it = measured.find(r.data_file);
      if (it == measured.end()) {
        it = measured.emplace(r.data_file, measure(r, options.encoder)).first;
        for (std::size_t s = 0; s < 4; ++s) stage_hits[s] += it->second.stage_hits[s];
        decoded_flits += it->second.data_flits;
      }
      t.exponent_cr = it->second.exponent_cr;
      t.measured = true;
    } else if (options.default_exponent_cr) {
      t.exponent_cr = *options.default_exponent_cr;
    } else {
      throw DataError("simulate: record for layer '" + r.layer_id + "' has no data file and no default CR");
    }

    const double raw = transfer_time(r.value_count, Encoding::Raw, 1.0, link).ns;
    const double packed = transfer_time(r.value_count, Encoding::Lexi, t.exponent_cr, link).ns;
    t.ns[static_cast<std::size_t>(SimMode::Uncompressed)] = raw;
    t.ns[static_cast<std::size_t>(SimMode::WeightsOnly)] = r.kind == TransferKind::Weight ? packed : raw;
    t.ns[static_cast<std::size_t>(SimMode::Lexi)] = packed;
    for (std::size_t m = 0; m < kSimModes; ++m) report.total_ns[m] += t.ns[m];
    if (r.kind != TransferKind::Weight) startup_layers.insert(r.layer_id);
    report.transfers.push_back(std::move(t));
  }

  report.startup_layers = startup_layers.size();
  report.startup_ns =
      static_cast<double>(report.startup_layers * report.startup_cycles_per_layer) * link.cycle_ns;
  report.total_ns[static_cast<std::size_t>(SimMode::Lexi)] += report.startup_ns;

  const double base = report.total_ns[static_cast<std::size_t>(SimMode::Uncompressed)];
  for (std::size_t m = 0; m < kSimModes; ++m) report.reduction_percent[m] = 100.0 * (1.0 - report.total_ns[m] / base);
  if (decoded_flits != 0) report.decoder = decode_latency(stage_hits, decoded_flits, link);
  return report;
}

}  // namespace lexi
