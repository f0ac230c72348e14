#pragma once

#include <array>
#include <cstdint>

#include "lexi/bitio.hpp"
#include "lexi/codebook.hpp"
#include "lexi/decoder_tables.hpp"
#include "lexi/error.hpp"

namespace lexi::detail {

inline void put_exponent(BitWriter& w, const Codebook& cb, std::uint8_t exponent) {
  if (const auto* e = cb.find(exponent)) {
    w.put(e->code, e->length);
    return;
  }
  w.put(cb.escape().code, cb.escape().length);
  w.put(exponent, 8);
}

// Multi-stage lookup of one exponent code unit. Stage index of the match is
// tallied in `stage_hits`.
inline std::uint8_t get_exponent(BitReader& r, const DecoderTables& tables,
                                 std::array<std::uint64_t, 4>& stage_hits) {
  const auto match = tables.lookup(r.peek32());
  if (!match) throw CorruptStream("exponent code matches no decoder stage");
  if (match->length > r.remaining()) throw FramingError("exponent codeword runs past the end of its frame");
  r.skip(match->length);
  ++stage_hits[match->stage];
  if (match->symbol != kEscapeSymbol) return static_cast<std::uint8_t>(match->symbol);
  const auto raw = static_cast<std::uint8_t>(r.get(8));
  if (tables.is_coded(raw)) throw CorruptStream("escaped exponent has its own codeword");
  return raw;
}

}  // namespace lexi::detail
