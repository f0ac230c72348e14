#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lexi/baselines.hpp"
#include "lexi/bf16.hpp"
#include "lexi/container.hpp"
#include "lexi/error.hpp"
#include "lexi/flit_codec.hpp"
#include "lexi/layer_codebook.hpp"
#include "lexi/synth.hpp"
#include "lexi/timing.hpp"
#include "lexi/trace.hpp"

namespace lexi::cli {

namespace {

using json = nlohmann::ordered_json;

struct RunConfig {
  std::string input;
  std::string output;
  std::string report;
  std::size_t lanes = 10;
  std::size_t depth = 8;
  std::size_t sample = 512;
  std::string codec = "lexi";
  std::string mode = "lexi";
  std::string trace;
  std::optional<double> default_cr;
  std::string flit_dump;
  std::string lane_list = "1,2,4,8,16,32";
  std::string depth_list = "4,8,16";
  // gen
  std::string distribution = "geometric";
  unsigned distinct = 32;
  std::uint64_t count = 65536;
  std::uint64_t seed = 1;
  std::optional<double> parameter;
  std::optional<double> entropy;
};

EncoderConfig encoder_config(const RunConfig& rc) {
  EncoderConfig cfg;
  cfg.lanes = rc.lanes;
  cfg.lane_cache_depth = rc.depth;
  cfg.tree_sample_size = rc.sample;
  cfg.validate();
  return cfg;
}

json encoder_json(const EncoderConfig& cfg) {
  return {{"lanes", cfg.lanes}, {"cacheDepth", cfg.lane_cache_depth}, {"sampleSize", cfg.tree_sample_size}};
}

json cycles_json(const CycleReport& c) {
  return {{"histogramCycles", c.histogram_cycles},
          {"arbiterStallCycles", c.arbiter_stall_cycles},
          {"sortCycles", c.sort_cycles},
          {"treeCycles", c.tree_cycles},
          {"lutProgramCycles", c.lut_program_cycles},
          {"totalPipelineCycles", c.total_pipeline_cycles},
          {"laneHitRate", c.lane_hit_rate}};
}

json codebook_json(const Codebook& cb) {
  json entries = json::array();
  for (const auto& e : cb.entries()) {
    std::string code;
    for (int b = e.length - 1; b >= 0; --b) code.push_back(((e.code >> b) & 1u) ? '1' : '0');
    entries.push_back({{"symbol", e.symbol == kEscapeSymbol ? json("escape") : json(e.symbol)},
                       {"length", e.length},
                       {"code", code}});
  }
  return entries;
}

std::vector<std::size_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoul(item, &used);
      if (used != item.size() || v == 0) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ContractViolation(std::string("bad ") + what + " list entry '" + item + "'");
    }
  }
  if (out.empty()) throw ContractViolation(std::string("empty ") + what + " list");
  return out;
}

void emit(const RunConfig& rc, const std::string& text, std::ostream& out) {
  if (rc.report.empty()) {
    out << text;
    return;
  }
  std::ofstream f(rc.report, std::ios::trunc);
  if (!f) throw DataError("cannot write report " + rc.report);
  f << text;
}

void emit_json(const RunConfig& rc, const json& j, std::ostream& out) { emit(rc, j.dump(2) + "\n", out); }

// ---- commands ---------------------------------------------------------------

void cmd_profile(const RunConfig& rc, std::ostream& out) {
  const auto values = read_bf16_file(rc.input);
  const auto r = profile_stream(values);
  emit_json(rc,
            {{"command", "profile"},
             {"config", {{"input", rc.input}}},
             {"totalValues", r.total_values},
             {"signEntropyBits", r.sign_entropy_bits},
             {"exponentEntropyBits", r.exponent_entropy_bits},
             {"mantissaEntropyBits", r.mantissa_entropy_bits},
             {"distinctExponents", r.distinct_exponents},
             {"exponentHistogram", r.exponent_histogram}},
            out);
}

void cmd_compress(const RunConfig& rc, std::ostream& out) {
  const auto s = compress_weights_file(rc.input, rc.output);
  emit_json(rc,
            {{"command", "compress"},
             {"config", {{"input", rc.input}, {"output", rc.output}}},
             {"valueCount", s.value_count},
             {"codedSymbols", s.coded_symbols},
             {"escapedValues", s.escaped_values},
             {"exponentCodeBits", s.exponent_code_bits},
             {"exponentCR", s.exponent_cr},
             {"totalCR", s.total_cr},
             {"bytesIn", s.bytes_in},
             {"bytesOut", s.bytes_out}},
            out);
}

void cmd_decompress(const RunConfig& rc, std::ostream& out) {
  const auto n = decompress_weights_file(rc.input, rc.output);
  emit_json(rc,
            {{"command", "decompress"},
             {"config", {{"input", rc.input}, {"output", rc.output}}},
             {"valueCount", n},
             {"bytesOut", 2 * n}},
            out);
}

void cmd_encode_stream(const RunConfig& rc, std::ostream& out) {
  const auto cfg = encoder_config(rc);
  const auto values = read_bf16_file(rc.input);
  const auto layer = build_layer_codebook(std::span<const Bf16Bits>(values), cfg);
  const auto encoded = encode_layer(values, layer.codebook);
  const auto flits = encoded.transmission_order();
  const std::string dump = rc.flit_dump.empty() ? rc.input + ".flits" : rc.flit_dump;
  write_file_bytes(dump, flits_to_bytes(flits));

  const auto decoded = decode_layer(flits);
  const auto latency = codebook_latency(layer.cycles);
  const auto dec = decode_latency(decoded.stage_hits, decoded.data_flits);
  const auto& s = encoded.stats;
  emit_json(rc,
            {{"command", "encode-stream"},
             {"config", {{"input", rc.input}, {"flitDump", dump}, {"encoder", encoder_json(cfg)}}},
             {"valueCount", s.value_count},
             {"headerFlits", s.header_flits},
             {"dataFlits", s.data_flits},
             {"totalFlits", s.total_flits},
             {"valuesPerFlitMean", s.values_per_flit_mean},
             {"escapedValues", s.escaped_values},
             {"exponentCodeBits", s.exponent_code_bits},
             {"compressionRatioExponent", s.exponent_cr},
             {"compressionRatioTotal", s.total_cr},
             {"cycles", cycles_json(layer.cycles)},
             {"codebookLatencyNs", latency.total_ns},
             {"decoderStageHits", decoded.stage_hits},
             {"decoderNsPer10Exponents", dec.ns_per_10_exponents},
             {"codebook", codebook_json(layer.codebook)},
             {"lengthLimited", layer.length_limited}},
            out);
}

void cmd_bench(const RunConfig& rc, std::ostream& out) {
  const auto codec = parse_codec(rc.codec);
  const auto values = read_bf16_file(rc.input);
  const auto r = bench_codec(codec, values);
  emit_json(rc,
            {{"codec", codec_name(codec)},
             {"exponentCR", r.exponent_cr},
             {"totalCR", r.total_cr},
             {"bytesIn", r.bytes_in},
             {"bytesOut", r.bytes_out},
             {"config", {{"input", rc.input}}}},
            out);
}

void cmd_sweep(const RunConfig& rc, std::ostream& out) {
  const auto lanes = parse_list(rc.lane_list, "lanes");
  const auto depths = parse_list(rc.depth_list, "depth");
  const auto values = read_bf16_file(rc.input);
  if (values.empty()) throw DataError("sweep: input is empty");
  const std::size_t n = rc.sample == 0 ? values.size() : std::min(values.size(), rc.sample);
  const auto plane = exponent_plane(std::span<const Bf16Bits>(values).first(n));

  struct Point {
    std::size_t lanes, depth;
    std::future<CycleReport> result;
  };
  std::vector<Point> grid;
  for (auto m : lanes) {
    for (auto d : depths) {
      EncoderConfig cfg{m, d, n};
      grid.push_back({m, d, std::async(std::launch::async, [&plane, cfg] {
                        return run_histogram(plane, cfg).cycles;
                      })});
    }
  }
  std::ostringstream csv;
  csv << "# input=" << rc.input << " sample=" << n << "\n";
  csv << "lanes,depth,hitRate,histogramCycles,arbiterStallCycles,codebookNs\n";
  for (auto& p : grid) {
    const auto c = p.result.get();
    csv << p.lanes << ',' << p.depth << ',' << c.lane_hit_rate << ',' << c.histogram_cycles << ','
        << c.arbiter_stall_cycles << ',' << codebook_latency(c).total_ns << '\n';
  }
  emit(rc, csv.str(), out);
}

void cmd_simulate(const RunConfig& rc, std::ostream& out) {
  const auto mode = parse_sim_mode(rc.mode);
  SimulationOptions opt;
  opt.encoder = encoder_config(rc);
  opt.default_exponent_cr = rc.default_cr;
  const auto trace = read_trace_csv(rc.trace);
  const auto r = simulate_trace(trace, mode, opt);

  auto per_mode = [&](const auto& arr) {
    json j;
    for (std::size_t m = 0; m < kSimModes; ++m) j[std::string(sim_mode_name(static_cast<SimMode>(m)))] = arr[m];
    return j;
  };
  json transfers = json::array();
  for (const auto& t : r.transfers) {
    transfers.push_back({{"layerId", t.layer_id},
                         {"kind", transfer_kind_name(t.kind)},
                         {"valueCount", t.value_count},
                         {"exponentCR", t.exponent_cr},
                         {"measured", t.measured},
                         {"ns", per_mode(t.ns)}});
  }
  json report{{"command", "simulate"},
              {"config",
               {{"trace", rc.trace},
                {"mode", sim_mode_name(mode)},
                {"defaultCR", rc.default_cr ? json(*rc.default_cr) : json(nullptr)},
                {"encoder", encoder_json(opt.encoder)},
                {"link",
                 {{"bandwidthBitsPerNs", opt.link.bandwidth_bits_per_ns},
                  {"flitBits", opt.link.flit_bits},
                  {"flitHeaderBits", opt.link.flit_header_bits},
                  {"cycleNs", opt.link.cycle_ns},
                  {"decodeLanes", opt.link.decode_lanes}}}}},
              {"mode", sim_mode_name(mode)},
              {"totalNs", r.selected_total_ns()},
              {"reductionPercent", r.selected_reduction_percent()},
              {"totalsNs", per_mode(r.total_ns)},
              {"reductionPercentByMode", per_mode(r.reduction_percent)},
              {"startupCyclesPerLayer", r.startup_cycles_per_layer},
              {"startupLayers", r.startup_layers},
              {"startupNs", r.startup_ns},
              {"transfers", transfers}};
  if (r.decoder) {
    report["decoder"] = {{"meanCyclesPerExponent", r.decoder->mean_cycles_per_exponent},
                         {"nsPer10Exponents", r.decoder->ns_per_10_exponents},
                         {"meanCyclesPerFlit", r.decoder->mean_cycles_per_flit},
                         {"sustainsLineRate", r.decoder->sustains_line_rate}};
  }
  emit_json(rc, report, out);
}

void cmd_gen(const RunConfig& rc, std::ostream& out) {
  SynthConfig cfg;
  cfg.distribution = parse_distribution(rc.distribution);
  cfg.distinct = rc.distinct;
  cfg.count = rc.count;
  cfg.seed = rc.seed;
  cfg.parameter = rc.parameter;
  cfg.target_entropy = rc.entropy;
  const auto values = generate(cfg);
  write_bf16_file(rc.output, values);
  const auto prof = values.empty() ? FieldEntropyReport{} : profile_stream(values);
  emit_json(rc,
            {{"command", "gen"},
             {"config",
              {{"output", rc.output},
               {"distribution", distribution_name(cfg.distribution)},
               {"distinct", cfg.distinct},
               {"count", cfg.count},
               {"seed", cfg.seed},
               {"parameter", effective_parameter(cfg)},
               {"targetEntropy", rc.entropy ? json(*rc.entropy) : json(nullptr)}}},
             {"modelEntropyBits", cfg.distribution == Distribution::Uniform
                                      ? std::log2(static_cast<double>(cfg.distinct))
                                      : rank_entropy(cfg.distribution, cfg.distinct, effective_parameter(cfg))},
             {"exponentEntropyBits", prof.exponent_entropy_bits},
             {"distinctExponents", prof.distinct_exponents}},
            out);
}

void add_report_option(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--report", rc.report, "Write the report to this file instead of stdout");
}

void add_encoder_options(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--lanes", rc.lanes, "Histogram lanes M")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--depth", rc.depth, "Per-lane cache depth")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--sample", rc.sample, "Values that feed the per-layer tree")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"lexi: lossless BF16 exponent coding toolkit"};
  app.require_subcommand(1);
  RunConfig rc;

  auto* profile = app.add_subcommand("profile", "Per-field entropy and exponent histogram of a .bf16 file");
  profile->add_option("input", rc.input, "Raw little-endian BF16 file")->required()->check(CLI::ExistingFile);
  add_report_option(profile, rc);

  auto* compress = app.add_subcommand("compress", "Compress a .bf16 file into a .lexi container");
  compress->add_option("input", rc.input)->required()->check(CLI::ExistingFile);
  compress->add_option("output", rc.output)->required();
  add_report_option(compress, rc);

  auto* decompress = app.add_subcommand("decompress", "Restore a .bf16 file from a .lexi container");
  decompress->add_option("input", rc.input)->required()->check(CLI::ExistingFile);
  decompress->add_option("output", rc.output)->required();
  add_report_option(decompress, rc);

  auto* encode = app.add_subcommand("encode-stream", "Encode a .bf16 file as one on-the-fly layer of flits");
  encode->add_option("input", rc.input)->required()->check(CLI::ExistingFile);
  encode->add_option("--flits", rc.flit_dump, "Flit dump path (default: <input>.flits)");
  add_encoder_options(encode, rc);
  add_report_option(encode, rc);

  auto* bench = app.add_subcommand("bench", "Exponent-plane compression ratio of one codec");
  bench->add_option("--codec", rc.codec, "Codec")->capture_default_str()->check(CLI::IsMember({"lexi", "rle", "bdi"}));
  bench->add_option("input", rc.input)->required()->check(CLI::ExistingFile);
  add_report_option(bench, rc);

  auto* sweep = app.add_subcommand("sweep", "Lane-count x cache-depth sweep of the histogram model (CSV)");
  sweep->add_option("input", rc.input)->required()->check(CLI::ExistingFile);
  sweep->add_option("--lanes", rc.lane_list, "Comma-separated lane counts")->capture_default_str();
  sweep->add_option("--depth", rc.depth_list, "Comma-separated cache depths")->capture_default_str();
  sweep->add_option("--sample", rc.sample, "Leading values to histogram (0 = all)")->capture_default_str();
  add_report_option(sweep, rc);

  auto* simulate = app.add_subcommand("simulate", "Trace-driven link latency for one transfer mode");
  simulate->add_option("--mode", rc.mode, "Mode")
      ->capture_default_str()
      ->check(CLI::IsMember({"uncompressed", "weights", "lexi"}));
  simulate->add_option("--trace", rc.trace, "Trace CSV")->required()->check(CLI::ExistingFile);
  simulate->add_option("--cr", rc.default_cr, "Exponent CR for records without a data file")
      ->check(CLI::Range(1.0, 1e9));
  add_encoder_options(simulate, rc);
  add_report_option(simulate, rc);

  auto* gen = app.add_subcommand("gen", "Write a synthetic BF16 stream");
  gen->add_option("output", rc.output)->required();
  gen->add_option("--distribution", rc.distribution, "zipf | geometric | uniform")
      ->capture_default_str()
      ->check(CLI::IsMember({"zipf", "geometric", "uniform"}));
  gen->add_option("--distinct", rc.distinct, "Distinct exponent count")->capture_default_str()->check(CLI::Range(1, 256));
  gen->add_option("--count", rc.count, "Value count")->capture_default_str();
  gen->add_option("--seed", rc.seed, "RNG seed")->capture_default_str();
  gen->add_option("--param", rc.parameter, "Zipf exponent s or geometric ratio q");
  gen->add_option("--entropy", rc.entropy, "Target exponent entropy in bits (overrides --param)");
  add_report_option(gen, rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "lexi: " << e.what() << "\n" << "Run with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (*profile) cmd_profile(rc, out);
    if (*compress) cmd_compress(rc, out);
    if (*decompress) cmd_decompress(rc, out);
    if (*encode) cmd_encode_stream(rc, out);
    if (*bench) cmd_bench(rc, out);
    if (*sweep) cmd_sweep(rc, out);
    if (*simulate) cmd_simulate(rc, out);
    if (*gen) cmd_gen(rc, out);
  } catch (const ContractViolation& e) {
    err << "lexi: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "lexi: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace lexi::cli
