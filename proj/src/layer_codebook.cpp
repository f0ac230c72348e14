#include "lexi/layer_codebook.hpp"

#include <algorithm>

#include "lexi/error.hpp"

namespace lexi {

std::vector<SymbolCount> select_coded_symbols(const ExponentHistogram& h) {
  std::vector<SymbolCount> present;
  for (std::size_t e = 0; e < h.counts.size(); ++e) {
    if (h.counts[e] != 0) present.push_back({static_cast<Symbol>(e), h.counts[e]});
  }
  std::sort(present.begin(), present.end(), ranks_before);
  if (present.size() > EncoderConfig::max_coded_symbols) present.resize(EncoderConfig::max_coded_symbols);
  return present;
}

LayerCodebook build_codebook_from_histogram(const ExponentHistogram& h, std::uint32_t layer_id) {
  const auto coded = select_coded_symbols(h);
  if (coded.empty()) throw DataError("codebook: histogram has no exponents");

  auto sorted = bitonic_sort_desc(coded);
  std::vector<SymbolCount> leaves = std::move(sorted.sorted);
  leaves.push_back({kEscapeSymbol, 1});
  auto tree = build_huffman(leaves);
  const bool limited = !fits_decoder_stages(tree.lengths);
  if (limited) {
    std::vector<std::uint8_t> caps(leaves.size());
    for (std::size_t r = 0; r < caps.size(); ++r) caps[r] = static_cast<std::uint8_t>(decoder_length_cap(r));
    tree = build_length_limited(leaves, caps);
  }
  auto canonical = assign_canonical(tree.lengths, layer_id);
  auto tables = DecoderTables::build(canonical.codebook);

  CycleReport cycles;
  cycles.sort_cycles = sorted.cycles;
  cycles.tree_cycles = tree.tree_cycles;
  cycles.lut_program_cycles = canonical.lut_program_cycles;
  cycles.total_pipeline_cycles = cycles.sort_cycles + cycles.tree_cycles + cycles.lut_program_cycles;
  return {std::move(canonical.codebook), std::move(tables), cycles, h, limited};
}

LayerCodebook build_layer_codebook(std::span<const std::uint8_t> exponents, const EncoderConfig& cfg,
                                   std::uint32_t layer_id) {
  cfg.validate();
  if (exponents.empty()) throw DataError("layer codebook: no values");
  const auto sample = exponents.first(std::min(exponents.size(), cfg.tree_sample_size));
  auto run = run_histogram(sample, cfg);
  auto layer = build_codebook_from_histogram(run.histogram, layer_id);
  layer.cycles.histogram_cycles = run.cycles.histogram_cycles;
  layer.cycles.arbiter_stall_cycles = run.cycles.arbiter_stall_cycles;
  layer.cycles.lane_hit_rate = run.cycles.lane_hit_rate;
  layer.cycles.lane_hits = run.cycles.lane_hits;
  layer.cycles.lane_misses = run.cycles.lane_misses;
  layer.cycles.global_writes = run.cycles.global_writes;
  return layer;
}

LayerCodebook build_layer_codebook(std::span<const Bf16Bits> values, const EncoderConfig& cfg,
                                   std::uint32_t layer_id) {
  const auto n = std::min(values.size(), cfg.tree_sample_size);
  const auto plane = exponent_plane(values.first(n));
  return build_layer_codebook(std::span<const std::uint8_t>(plane), cfg, layer_id);
}

}  // namespace lexi
