#include "lexi/decoder_tables.hpp"

#include <algorithm>
#include <string>

#include "lexi/error.hpp"

namespace lexi {

DecoderTables DecoderTables::build(const Codebook& cb) {
  const auto entries = cb.entries();
  if (entries.size() > 3 * kStageEntries + kLastStageEntries) {
    throw ContractViolation("decoder tables: more than 33 codewords");
  }
  DecoderTables t;
  for (std::size_t rank = 0; rank < entries.size(); ++rank) {
    const std::size_t stage = std::min<std::size_t>(rank / kStageEntries, 3);
    const auto& e = entries[rank];
    if (e.length > kStageWidths[stage]) {
      throw ContractViolation("decoder tables: rank " + std::to_string(rank + 1) + " has length " +
                              std::to_string(e.length) + " beyond stage width " +
                              std::to_string(kStageWidths[stage]));
    }
    t.stages_[stage].push_back({e.code, e.length, e.symbol});
    if (e.symbol != kEscapeSymbol) t.coded_[e.symbol] = true;
  }
  return t;
}

std::optional<DecoderTables::Match> DecoderTables::lookup(std::uint32_t window) const noexcept {
  for (std::size_t stage = 0; stage < stages_.size(); ++stage) {
    const std::uint32_t prefix = window >> (32 - kStageWidths[stage]);
    for (const auto& e : stages_[stage]) {
      if ((prefix >> (kStageWidths[stage] - e.length)) == e.code) {
        return Match{e.symbol, e.length, static_cast<std::uint8_t>(stage)};
      }
    }
  }
  return std::nullopt;
}

}  // namespace lexi
