#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lexi {

// Exponent values 0..255, plus one pseudo-symbol for the escape path.
using Symbol = std::uint16_t;
inline constexpr Symbol kEscapeSymbol = 256;
inline constexpr std::size_t kMaxCodeLength = 32;

struct SymbolCount {
  Symbol symbol;
  std::uint64_t count;
  friend bool operator==(const SymbolCount&, const SymbolCount&) = default;
};

struct SymbolLength {
  Symbol symbol;
  std::uint8_t length;
  friend bool operator==(const SymbolLength&, const SymbolLength&) = default;
};

// Rank order used everywhere: count descending, then symbol ascending.
constexpr bool ranks_before(const SymbolCount& a, const SymbolCount& b) noexcept {
  return a.count != b.count ? a.count > b.count : a.symbol < b.symbol;
}

struct SortResult {
  std::vector<SymbolCount> sorted;
  std::uint32_t cycles = 0;  // one cycle per network stage
};

// 32-input bitonic network. Inputs are padded with zero-count sentinels that
// are dropped from the output. Throws ContractViolation for more than 32 items.
SortResult bitonic_sort_desc(std::span<const SymbolCount> items);

struct HuffmanResult {
  std::vector<SymbolLength> lengths;  // same order as the input
  std::uint32_t tree_cycles = 0;
};

// Code lengths by repeated merging of the two lightest nodes (two-queue
// construction over the sorted list). The escape pseudo-symbol, when present,
// loses every weight tie so it sits at the deepest level.
// Requires 2..33 symbols, at least one of which is not the escape.
HuffmanResult build_huffman(std::span<const SymbolCount> freqs);

// Longest code the multi-stage decoder can hold at 0-based canonical rank
// `rank`: ranks 0-7 sit in the 8-bit stage, 8-15 in the 16-bit stage, 16-23
// in the 24-bit stage and 24-32 in the 32-bit stage.
constexpr unsigned decoder_length_cap(std::size_t rank) noexcept {
  return rank >= 24 ? 32u : static_cast<unsigned>(8 * (rank / 8 + 1));
}

// True when the lengths, taken shortest first, respect decoder_length_cap.
// Plain Huffman can break this on very skewed inputs (e.g. lengths
// 1,2,...,7,9,9,9,9 put rank 8 at 9 bits).
bool fits_decoder_stages(std::span<const SymbolLength> lengths);

// Optimal lengths subject to per-symbol caps (package-merge with a separate
// coin range per symbol). Lengths are then re-dealt shortest-first in rank
// order, so heavier symbols never get longer codes. Same input rules as
// build_huffman; throws ContractViolation when the caps admit no complete code.
HuffmanResult build_length_limited(std::span<const SymbolCount> freqs, std::span<const std::uint8_t> max_lengths);

// Σ 2^-len scaled by 2^32; equals 2^32 exactly for a complete code.
std::uint64_t kraft_sum_scaled(std::span<const SymbolLength> lengths);

}  // namespace lexi
