#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>

#include "lexi/baselines.hpp"
#include "lexi/container.hpp"
#include "lexi/error.hpp"
#include "lexi/flit_codec.hpp"
#include "lexi/layer_codebook.hpp"
#include "lexi/synth.hpp"
#include "lexi/timing.hpp"
#include "lexi/trace.hpp"

namespace py = pybind11;
using namespace lexi;

namespace {

using Values = std::vector<Bf16Bits>;

py::bytes to_py(const std::vector<std::uint8_t>& b) {
  return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

std::vector<std::uint8_t> from_py(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

EncoderConfig encoder(std::size_t lanes, std::size_t depth, std::size_t sample) {
  EncoderConfig cfg;
  cfg.lanes = lanes;
  cfg.lane_cache_depth = depth;
  cfg.tree_sample_size = sample;
  return cfg;
}

py::dict cycles_dict(const CycleReport& c) {
  py::dict d;
  d["histogram_cycles"] = c.histogram_cycles;
  d["arbiter_stall_cycles"] = c.arbiter_stall_cycles;
  d["sort_cycles"] = c.sort_cycles;
  d["tree_cycles"] = c.tree_cycles;
  d["lut_program_cycles"] = c.lut_program_cycles;
  d["total_pipeline_cycles"] = c.total_pipeline_cycles;
  d["lane_hit_rate"] = c.lane_hit_rate;
  return d;
}

py::dict codebook_dict(const LayerCodebook& layer) {
  py::list entries;
  for (const auto& e : layer.codebook.entries()) {
    py::object sym = e.symbol == kEscapeSymbol ? py::object(py::none()) : py::object(py::int_(e.symbol));
    entries.append(py::make_tuple(sym, e.length, e.code));
  }
  py::dict d;
  d["entries"] = entries;
  d["wire_header"] = to_py(layer.codebook.wire_header());
  d["cycles"] = cycles_dict(layer.cycles);
  d["length_limited"] = layer.length_limited;
  return d;
}

py::dict layer_stats_dict(const LayerStats& s) {
  py::dict d;
  d["value_count"] = s.value_count;
  d["header_flits"] = s.header_flits;
  d["data_flits"] = s.data_flits;
  d["total_flits"] = s.total_flits;
  d["escaped_values"] = s.escaped_values;
  d["exponent_code_bits"] = s.exponent_code_bits;
  d["values_per_flit_mean"] = s.values_per_flit_mean;
  d["exponent_cr"] = s.exponent_cr;
  d["total_cr"] = s.total_cr;
  return d;
}

}  // namespace

PYBIND11_MODULE(_lexi, m) {
  m.doc() = "Lossless BF16 exponent codec";

  auto data_error = py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  auto corrupt = py::register_exception<CorruptStream>(m, "CorruptStream", data_error.ptr());
  py::register_exception<FramingError>(m, "FramingError", corrupt.ptr());
  py::register_exception<UnsupportedVersion>(m, "UnsupportedVersion", data_error.ptr());
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);

  m.def("split", [](Bf16Bits bits) {
    const auto t = split(bits);
    return py::make_tuple(t.sign, t.exponent, t.mantissa);
  }, py::arg("bits"));
  m.def("join", [](unsigned sign, unsigned exponent, unsigned mantissa) {
    if (sign > 0xFF || exponent > 0xFF || mantissa > 0xFF) throw ContractViolation("field out of range");
    return join({static_cast<std::uint8_t>(sign), static_cast<std::uint8_t>(exponent),
                 static_cast<std::uint8_t>(mantissa)});
  }, py::arg("sign"), py::arg("exponent"), py::arg("mantissa"));

  m.def("from_bytes", [](const py::bytes& b) { return bf16_from_bytes(from_py(b)); }, py::arg("data"),
        "Little-endian BF16 words from raw bytes");
  m.def("to_bytes", [](const Values& v) { return to_py(bf16_to_bytes(v)); }, py::arg("values"));

  m.def("profile", [](const Values& v) {
    const auto r = profile_stream(v);
    py::dict d;
    d["sign_entropy_bits"] = r.sign_entropy_bits;
    d["exponent_entropy_bits"] = r.exponent_entropy_bits;
    d["mantissa_entropy_bits"] = r.mantissa_entropy_bits;
    d["distinct_exponents"] = r.distinct_exponents;
    d["total_values"] = r.total_values;
    d["exponent_histogram"] = std::vector<std::uint64_t>(r.exponent_histogram.begin(), r.exponent_histogram.end());
    return d;
  }, py::arg("values"));

  m.def("build_codebook", [](const Values& v, std::size_t lanes, std::size_t depth, std::size_t sample) {
    return codebook_dict(build_layer_codebook(std::span<const Bf16Bits>(v), encoder(lanes, depth, sample)));
  }, py::arg("values"), py::arg("lanes") = 10, py::arg("depth") = 8, py::arg("sample") = 512);

  m.def("encode_layer", [](const Values& v, std::size_t lanes, std::size_t depth, std::size_t sample) {
    const auto layer = build_layer_codebook(std::span<const Bf16Bits>(v), encoder(lanes, depth, sample));
    const auto enc = encode_layer(v, layer.codebook);
    return py::make_tuple(to_py(flits_to_bytes(enc.transmission_order())), layer_stats_dict(enc.stats));
  }, py::arg("values"), py::arg("lanes") = 10, py::arg("depth") = 8, py::arg("sample") = 512,
     "Flit stream (16-byte records in link order) and its stats");
  m.def("decode_layer", [](const py::bytes& flits) {
    return decode_layer(flits_from_bytes(from_py(flits))).values;
  }, py::arg("flits"));

  m.def("compress", [](const Values& v) {
    const auto c = compress_weights(v);
    py::dict s;
    s["value_count"] = c.stats.value_count;
    s["exponent_cr"] = c.stats.exponent_cr;
    s["total_cr"] = c.stats.total_cr;
    s["escaped_values"] = c.stats.escaped_values;
    return py::make_tuple(to_py(c.bytes), s);
  }, py::arg("values"));
  m.def("decompress", [](const py::bytes& b) { return decompress_weights(from_py(b)); }, py::arg("container"));

  m.def("bench", [](const std::string& codec, const Values& v) {
    const auto r = bench_codec(parse_codec(codec), v);
    py::dict d;
    d["codec"] = std::string(codec_name(r.codec));
    d["exponent_cr"] = r.exponent_cr;
    d["total_cr"] = r.total_cr;
    d["bytes_in"] = r.bytes_in;
    d["bytes_out"] = r.bytes_out;
    return d;
  }, py::arg("codec"), py::arg("values"));

  m.def("transfer_time", [](std::uint64_t count, bool compressed, double cr) {
    const auto t = transfer_time(count, compressed ? Encoding::Lexi : Encoding::Raw, cr);
    py::dict d;
    d["data_flits"] = t.data_flits;
    d["overhead_flits"] = t.overhead_flits;
    d["flits"] = t.flits;
    d["ns"] = t.ns;
    return d;
  }, py::arg("value_count"), py::arg("compressed"), py::arg("exponent_cr") = 1.0);
  m.def("analytic_reduction", &analytic_reduction, py::arg("exponent_cr"));

  m.def("simulate", [](const std::filesystem::path& trace, const std::string& mode, std::optional<double> cr) {
    SimulationOptions opt;
    opt.default_exponent_cr = cr;
    const auto r = simulate_trace(read_trace_csv(trace), parse_sim_mode(mode), opt);
    py::dict totals, reductions;
    for (std::size_t k = 0; k < kSimModes; ++k) {
      const std::string name(sim_mode_name(static_cast<SimMode>(k)));
      totals[name.c_str()] = r.total_ns[k];
      reductions[name.c_str()] = r.reduction_percent[k];
    }
    py::dict d;
    d["mode"] = mode;
    d["total_ns"] = r.selected_total_ns();
    d["reduction_percent"] = r.selected_reduction_percent();
    d["totals_ns"] = totals;
    d["reduction_percent_by_mode"] = reductions;
    d["startup_layers"] = r.startup_layers;
    d["startup_ns"] = r.startup_ns;
    return d;
  }, py::arg("trace"), py::arg("mode") = "lexi", py::arg("exponent_cr") = py::none());

  m.def("generate", [](const std::string& distribution, unsigned distinct, std::uint64_t count, std::uint64_t seed,
                       std::optional<double> parameter, std::optional<double> entropy) {
    SynthConfig cfg;
    cfg.distribution = parse_distribution(distribution);
    cfg.distinct = distinct;
    cfg.count = count;
    cfg.seed = seed;
    cfg.parameter = parameter;
    cfg.target_entropy = entropy;
    return generate(cfg);
  }, py::arg("distribution") = "geometric", py::arg("distinct") = 32, py::arg("count") = 65536, py::arg("seed") = 1,
     py::arg("parameter") = py::none(), py::arg("entropy") = py::none());
}
