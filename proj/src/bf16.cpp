#include "lexi/bf16.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

#include "lexi/error.hpp"

namespace lexi {

Bf16Bits join(const Bf16Triple& t) {
  if (t.sign > 1 || t.mantissa > 0x7F) {
    throw ContractViolation("join: sign must be 0/1 and mantissa must fit in 7 bits");
  }
  return static_cast<Bf16Bits>((t.sign << 15) | (t.exponent << 7) | t.mantissa);
}

Bf16Bits bf16_from_float(float value) noexcept {
  auto bits = std::bit_cast<std::uint32_t>(value);
  if (std::isnan(value)) {
    return static_cast<Bf16Bits>((bits >> 16) | 0x0040u);
  }
  const std::uint32_t rounding = 0x7FFFu + ((bits >> 16) & 1u);
  return static_cast<Bf16Bits>((bits + rounding) >> 16);
}

float bf16_to_float(Bf16Bits bits) noexcept {
  return std::bit_cast<float>(static_cast<std::uint32_t>(bits) << 16);
}

std::vector<std::uint8_t> exponent_plane(std::span<const Bf16Bits> values) {
  std::vector<std::uint8_t> out;
  out.reserve(values.size());
  for (auto v : values) out.push_back(exponent_of(v));
  return out;
}

double shannon_entropy(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return 0.0;
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h < 0.0 ? 0.0 : h;
}

FieldEntropyReport profile_stream(std::span<const Bf16Bits> values) {
  if (values.empty()) throw DataError("profile: input stream is empty");

  std::array<std::uint64_t, 2> signs{};
  std::array<std::uint64_t, 128> mantissas{};
  FieldEntropyReport report;
  for (auto v : values) {
    const auto t = split(v);
    ++signs[t.sign];
    ++report.exponent_histogram[t.exponent];
    ++mantissas[t.mantissa];
  }
  report.total_values = values.size();
  report.sign_entropy_bits = shannon_entropy(signs);
  report.exponent_entropy_bits = shannon_entropy(report.exponent_histogram);
  report.mantissa_entropy_bits = shannon_entropy(mantissas);
  for (auto c : report.exponent_histogram) report.distinct_exponents += c != 0;
  return report;
}

std::vector<Bf16Bits> bf16_from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 2 != 0) {
    throw DataError("bf16 input has odd length " + std::to_string(bytes.size()) +
                    " bytes; expected whole 16-bit words");
  }
  std::vector<Bf16Bits> out(bytes.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<Bf16Bits>(bytes[2 * i] | (bytes[2 * i + 1] << 8));
  }
  return out;
}

std::vector<std::uint8_t> bf16_to_bytes(std::span<const Bf16Bits> values) {
  std::vector<std::uint8_t> out(values.size() * 2);
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[2 * i] = static_cast<std::uint8_t>(values[i] & 0xFF);
    out[2 * i + 1] = static_cast<std::uint8_t>(values[i] >> 8);
  }
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for " + path.string());
}

std::vector<Bf16Bits> read_bf16_file(const std::filesystem::path& path) {
  return bf16_from_bytes(read_file_bytes(path));
}

void write_bf16_file(const std::filesystem::path& path, std::span<const Bf16Bits> values) {
  write_file_bytes(path, bf16_to_bytes(values));
}

}  // namespace lexi
