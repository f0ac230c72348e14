#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lexi/bf16.hpp"
#include "lexi/codebook.hpp"
#include "lexi/decoder_tables.hpp"
#include "lexi/histogram.hpp"
#include "lexi/huffman.hpp"

namespace lexi {

struct LayerCodebook {
  Codebook codebook;
  DecoderTables tables;
  CycleReport cycles;
  ExponentHistogram histogram;  // the histogram the code was built from
  // Plain Huffman lengths overflowed a decoder stage and were re-derived
  // under per-rank caps.
  bool length_limited = false;
};

// Top-32 exponents by (count desc, exponent asc); everything else escapes.
std::vector<SymbolCount> select_coded_symbols(const ExponentHistogram& h);

// sort -> tree -> canonical codes -> decoder tables. Fills the pipeline part
// of the cycle report. Throws DataError on an empty histogram.
LayerCodebook build_codebook_from_histogram(const ExponentHistogram& h, std::uint32_t layer_id = 0);

// On-the-fly path: only the first cfg.tree_sample_size exponents are
// histogrammed through the lane model.
LayerCodebook build_layer_codebook(std::span<const std::uint8_t> exponents, const EncoderConfig& cfg,
                                   std::uint32_t layer_id = 0);
LayerCodebook build_layer_codebook(std::span<const Bf16Bits> values, const EncoderConfig& cfg,
                                   std::uint32_t layer_id = 0);

}  // namespace lexi
