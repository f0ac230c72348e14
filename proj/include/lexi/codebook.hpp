#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "lexi/histogram.hpp"
#include "lexi/huffman.hpp"

namespace lexi {

struct CodeEntry {
  Symbol symbol;
  std::uint8_t length;  // 1..32
  std::uint32_t code;   // right-aligned, `length` significant bits
  friend bool operator==(const CodeEntry&, const CodeEntry&) = default;
};

// Canonical prefix code over up to 32 exponents plus the escape pseudo-symbol.
// Canonical order is (length asc, exponent asc) with the escape last within
// its length class. Escaped exponents travel as escape code + 8 raw bits.
class Codebook {
 public:
  // Canonical assignment from code lengths. Throws DataError unless the
  // lengths are a complete code (Kraft sum exactly 1) containing exactly one
  // escape and 1..32 distinct exponents, and fits the decoder stages.
  static Codebook from_lengths(std::span<const SymbolLength> lengths, std::uint32_t layer_id = 0);

  // Wire header: [n][n x (exponent, length)] in canonical order; the escape
  // length is implied by the Kraft remainder. Throws CorruptStream on any
  // inconsistency. `consumed` receives the header size in bytes.
  static Codebook from_wire_header(std::span<const std::uint8_t> bytes, std::size_t* consumed = nullptr,
                                   std::uint32_t layer_id = 0);
  std::vector<std::uint8_t> wire_header() const;

  std::span<const CodeEntry> entries() const noexcept { return entries_; }
  const CodeEntry& escape() const noexcept { return entries_[escape_index_]; }
  // nullptr for exponents that must take the escape path.
  const CodeEntry* find(std::uint8_t exponent) const noexcept {
    const auto idx = index_[exponent];
    return idx < 0 ? nullptr : &entries_[static_cast<std::size_t>(idx)];
  }
  std::size_t coded_symbol_count() const noexcept { return entries_.size() - 1; }
  std::uint32_t layer_id() const noexcept { return layer_id_; }

  // Bits needed for one exponent: codeword, or escape + 8 raw bits.
  std::uint32_t cost_bits(std::uint8_t exponent) const noexcept {
    const auto* e = find(exponent);
    return e ? e->length : escape().length + 8u;
  }
  std::uint64_t encoded_bits(const ExponentHistogram& h) const noexcept;
  double mean_code_bits(const ExponentHistogram& h) const noexcept;

  friend bool operator==(const Codebook& a, const Codebook& b) { return a.entries_ == b.entries_; }

 private:
  Codebook() { index_.fill(-1); }

  std::vector<CodeEntry> entries_;
  std::array<std::int16_t, 256> index_{};
  std::size_t escape_index_ = 0;
  std::uint32_t layer_id_ = 0;
};

struct CanonicalResult {
  Codebook codebook;
  std::uint32_t lut_program_cycles = 0;
};

CanonicalResult assign_canonical(std::span<const SymbolLength> lengths, std::uint32_t layer_id = 0);

}  // namespace lexi
