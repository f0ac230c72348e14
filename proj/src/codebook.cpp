#include "lexi/codebook.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "lexi/error.hpp"

namespace lexi {

namespace {

constexpr std::uint64_t kKraftOne = std::uint64_t{1} << kMaxCodeLength;

bool canonical_before(const SymbolLength& a, const SymbolLength& b) {
  if (a.length != b.length) return a.length < b.length;
  if ((a.symbol == kEscapeSymbol) != (b.symbol == kEscapeSymbol)) return b.symbol == kEscapeSymbol;
  return a.symbol < b.symbol;
}

}  // namespace

Codebook Codebook::from_lengths(std::span<const SymbolLength> lengths, std::uint32_t layer_id) {
  std::vector<SymbolLength> sorted(lengths.begin(), lengths.end());
  std::sort(sorted.begin(), sorted.end(), canonical_before);

  std::size_t escapes = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& s = sorted[i];
    if (s.symbol > kEscapeSymbol) throw DataError("codebook: symbol out of range");
    if (s.length == 0 || s.length > kMaxCodeLength) throw DataError("codebook: code length outside 1..32");
    escapes += s.symbol == kEscapeSymbol;
    if (i > 0 && sorted[i - 1].symbol == s.symbol) throw DataError("codebook: duplicate symbol");
  }
  if (escapes != 1) throw DataError("codebook: exactly one escape entry is required");
  if (sorted.size() < 2 || sorted.size() > EncoderConfig::max_coded_symbols + 1) {
    throw DataError("codebook: 1..32 coded exponents are required");
  }
  // Duplicate check above only sees neighbours in canonical order.
  std::array<bool, 257> seen{};
  for (const auto& s : sorted) {
    if (seen[s.symbol]) throw DataError("codebook: duplicate symbol");
    seen[s.symbol] = true;
  }
  if (kraft_sum_scaled(sorted) != kKraftOne) throw DataError("codebook: code lengths violate Kraft equality");
  if (!fits_decoder_stages(sorted)) throw DataError("codebook: code lengths do not fit the decoder stages");

  Codebook cb;
  cb.layer_id_ = layer_id;
  cb.entries_.reserve(sorted.size());
  std::uint64_t code = 0;
  std::uint8_t prev_len = sorted.front().length;
  for (const auto& s : sorted) {
    code <<= (s.length - prev_len);
    prev_len = s.length;
    const auto index = static_cast<std::int16_t>(cb.entries_.size());
    cb.entries_.push_back({s.symbol, s.length, static_cast<std::uint32_t>(code)});
    if (s.symbol == kEscapeSymbol) {
      cb.escape_index_ = static_cast<std::size_t>(index);
    } else {
      cb.index_[s.symbol] = index;
    }
    ++code;
  }
  return cb;
}

CanonicalResult assign_canonical(std::span<const SymbolLength> lengths, std::uint32_t layer_id) {
  return {Codebook::from_lengths(lengths, layer_id), kLutProgramCycles};
}

std::vector<std::uint8_t> Codebook::wire_header() const {
  std::vector<std::uint8_t> out;
  out.reserve(1 + 2 * coded_symbol_count());
  out.push_back(static_cast<std::uint8_t>(coded_symbol_count()));
  for (const auto& e : entries_) {
    if (e.symbol == kEscapeSymbol) continue;
    out.push_back(static_cast<std::uint8_t>(e.symbol));
    out.push_back(e.length);
  }
  return out;
}

Codebook Codebook::from_wire_header(std::span<const std::uint8_t> bytes, std::size_t* consumed,
                                    std::uint32_t layer_id) {
  if (bytes.empty()) throw CorruptStream("codebook header: missing symbol count");
  const std::size_t n = bytes[0];
  if (n == 0 || n > EncoderConfig::max_coded_symbols) {
    throw CorruptStream("codebook header: symbol count " + std::to_string(n) + " outside 1..32");
  }
  if (bytes.size() < 1 + 2 * n) throw CorruptStream("codebook header: truncated records");

  std::vector<SymbolLength> lengths;
  lengths.reserve(n + 1);
  std::uint64_t kraft = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const SymbolLength rec{bytes[1 + 2 * i], bytes[2 + 2 * i]};
    if (rec.length == 0 || rec.length > kMaxCodeLength) throw CorruptStream("codebook header: bad code length");
    if (!lengths.empty()) {
      const auto& prev = lengths.back();
      if (rec.length < prev.length || (rec.length == prev.length && rec.symbol <= prev.symbol)) {
        throw CorruptStream("codebook header: records not in canonical order");
      }
    }
    kraft += std::uint64_t{1} << (kMaxCodeLength - rec.length);
    lengths.push_back(rec);
  }
  if (kraft >= kKraftOne) throw CorruptStream("codebook header: no code space left for the escape");
  const std::uint64_t remainder = kKraftOne - kraft;
  if (!std::has_single_bit(remainder)) throw CorruptStream("codebook header: incomplete code");
  const auto escape_len = static_cast<std::uint8_t>(kMaxCodeLength - static_cast<unsigned>(std::countr_zero(remainder)));
  lengths.push_back({kEscapeSymbol, escape_len});

  if (consumed) *consumed = 1 + 2 * n;
  try {
    return from_lengths(lengths, layer_id);
  } catch (const DataError& e) {
    throw CorruptStream(std::string("codebook header: ") + e.what());
  }
}

std::uint64_t Codebook::encoded_bits(const ExponentHistogram& h) const noexcept {
  std::uint64_t bits = 0;
  for (std::size_t e = 0; e < 256; ++e) {
    if (h.counts[e] != 0) bits += h.counts[e] * cost_bits(static_cast<std::uint8_t>(e));
  }
  return bits;
}

double Codebook::mean_code_bits(const ExponentHistogram& h) const noexcept {
  if (h.total == 0) return 0.0;
  return static_cast<double>(encoded_bits(h)) / static_cast<double>(h.total);
}

}  // namespace lexi
