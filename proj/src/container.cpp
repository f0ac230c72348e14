#include "lexi/container.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "exponent_code.hpp"
#include "lexi/bitio.hpp"
#include "lexi/error.hpp"
#include "lexi/layer_codebook.hpp"

namespace lexi {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'L', 'E', 'X', 'C'};
constexpr std::size_t kPreambleBytes = 4 + 1 + 8;
constexpr std::size_t kCrcBytes = 4;

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, std::size_t bytes) {
  for (std::size_t i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t bytes) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bytes; ++i) v |= std::uint64_t{in[i]} << (8 * i);
  return v;
}

void append(std::vector<std::uint8_t>& out, const std::vector<std::uint8_t>& bytes) {
  out.insert(out.end(), bytes.begin(), bytes.end());
}

}  // namespace

CompressedWeights compress_weights(std::span<const Bf16Bits> values) {
  CompressedWeights result;
  auto& out = result.bytes;
  auto& stats = result.stats;
  const std::uint64_t n = values.size();

  out.insert(out.end(), kMagic.begin(), kMagic.end());
  out.push_back(kContainerVersion);
  put_le(out, n, 8);

  if (n == 0) {
    out.push_back(0);
  } else {
    const auto plane = exponent_plane(values);
    const auto layer = build_codebook_from_histogram(ExponentHistogram::count(plane));
    const auto& cb = layer.codebook;
    append(out, cb.wire_header());

    BitWriter signs;
    BitWriter mantissas;
    BitWriter codes;
    for (auto v : values) {
      const auto t = split(v);
      signs.put(t.sign, 1);
      mantissas.put(t.mantissa, 7);
      detail::put_exponent(codes, cb, t.exponent);
      stats.escaped_values += cb.find(t.exponent) == nullptr;
    }
    append(out, signs.bytes());
    append(out, mantissas.bytes());
    append(out, codes.bytes());

    stats.exponent_code_bits = codes.bit_size();
    stats.coded_symbols = cb.coded_symbol_count();
    stats.exponent_cr = 8.0 * static_cast<double>(n) / static_cast<double>(stats.exponent_code_bits);
  }
  put_le(out, crc32_of(out), kCrcBytes);

  stats.value_count = n;
  stats.bytes_in = 2 * n;
  stats.bytes_out = out.size();
  stats.total_cr = static_cast<double>(stats.bytes_in) / static_cast<double>(stats.bytes_out);
  return result;
}

std::vector<Bf16Bits> decompress_weights(std::span<const std::uint8_t> container) {
  if (container.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), container.begin())) {
    throw DataError("not a LEXC container (bad magic)");
  }
  if (container.size() < kPreambleBytes + 1 + kCrcBytes) throw CorruptStream("container truncated");
  if (container[4] != kContainerVersion) {
    throw UnsupportedVersion("unsupported container version " + std::to_string(container[4]));
  }
  const std::uint64_t n = get_le(container.subspan(5), 8);
  const auto body = container.first(container.size() - kCrcBytes);
  const auto stored_crc = static_cast<std::uint32_t>(get_le(container.subspan(body.size()), kCrcBytes));

  auto rest = body.subspan(kPreambleBytes);
  if (n == 0) {
    if (rest.size() != 1 || rest[0] != 0) throw FramingError("empty container carries payload bytes");
    if (stored_crc != crc32_of(body)) throw CorruptStream("container checksum mismatch");
    return {};
  }

  std::size_t header_len = 0;
  const auto cb = Codebook::from_wire_header(rest, &header_len);
  rest = rest.subspan(header_len);

  // Every value needs at least 9 bits; reject counts the file cannot hold
  // before sizing any buffer from them.
  if (n > rest.size() * 8 / 9) throw CorruptStream("container truncated: value count exceeds payload");
  const std::size_t sign_bytes = static_cast<std::size_t>((n + 7) / 8);
  const std::size_t mant_bytes = static_cast<std::size_t>((7 * n + 7) / 8);
  if (rest.size() < sign_bytes + mant_bytes) throw CorruptStream("container truncated in sign/mantissa planes");
  if (stored_crc != crc32_of(body)) throw CorruptStream("container checksum mismatch");

  BitReader signs(rest.first(sign_bytes));
  BitReader mantissas(rest.subspan(sign_bytes, mant_bytes));
  const auto code_bytes = rest.subspan(sign_bytes + mant_bytes);
  BitReader codes(code_bytes);
  const auto tables = DecoderTables::build(cb);

  std::vector<Bf16Bits> out;
  out.reserve(static_cast<std::size_t>(n));
  std::array<std::uint64_t, 4> stage_hits{};
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto sign = static_cast<std::uint8_t>(signs.get(1));
    const auto mantissa = static_cast<std::uint8_t>(mantissas.get(7));
    const auto exponent = detail::get_exponent(codes, tables, stage_hits);
    out.push_back(join({sign, exponent, mantissa}));
  }
  if (!signs.rest_is_zero() || !mantissas.rest_is_zero()) throw FramingError("plane padding is not zero");
  if (codes.remaining() >= 8) throw FramingError("trailing bytes after the exponent stream");
  if (!codes.rest_is_zero()) throw FramingError("exponent stream padding is not zero");
  return out;
}

ContainerStats compress_weights_file(const std::filesystem::path& in, const std::filesystem::path& out) {
  const auto values = read_bf16_file(in);
  auto compressed = compress_weights(values);
  write_file_bytes(out, compressed.bytes);
  return compressed.stats;
}

std::uint64_t decompress_weights_file(const std::filesystem::path& in, const std::filesystem::path& out) {
  const auto values = decompress_weights(read_file_bytes(in));
  write_bf16_file(out, values);
  return values.size();
}

}  // namespace lexi
