#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "lexi/codebook.hpp"

namespace lexi {

// Four-stage prefix decoder. Stage k holds codewords of rank 8k+1..8k+8 in
// canonical (shortest-first) order and matches them against the first
// kStageWidths[k] bits of the stream; the last stage takes a ninth entry so
// a full 32-symbol book plus escape fits.
class DecoderTables {
 public:
  static constexpr std::array<std::uint8_t, 4> kStageWidths{8, 16, 24, 32};
  static constexpr std::size_t kStageEntries = 8;
  static constexpr std::size_t kLastStageEntries = 9;

  struct Entry {
    std::uint32_t code;
    std::uint8_t length;
    Symbol symbol;  // kEscapeSymbol marks the escape
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  struct Match {
    Symbol symbol;
    std::uint8_t length;
    std::uint8_t stage;  // 0-based
  };

  // Throws ContractViolation if a rank lands in a stage narrower than its
  // code (cannot happen for complete codes of at most 33 words).
  static DecoderTables build(const Codebook& cb);

  // `window` holds the next 32 stream bits, left-aligned.
  std::optional<Match> lookup(std::uint32_t window) const noexcept;

  const std::array<std::vector<Entry>, 4>& stages() const noexcept { return stages_; }
  // Whether the exponent has its own codeword (otherwise it must be escaped).
  bool is_coded(std::uint8_t exponent) const noexcept { return coded_[exponent]; }
  friend bool operator==(const DecoderTables&, const DecoderTables&) = default;

 private:
  std::array<std::vector<Entry>, 4> stages_;
  std::array<bool, 256> coded_{};
};

}  // namespace lexi
