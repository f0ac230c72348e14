#include <doctest.h>

#include <random>

#include "lexi/error.hpp"
#include "lexi/flit_codec.hpp"
#include "lexi/layer_codebook.hpp"
#include "test_support.hpp"

using namespace lexi;

namespace {

// Three exponents at 2 bits each, escape takes the fourth 2-bit word.
Codebook two_bit_book() {
  const std::vector<SymbolLength> lens{{0x7C, 2}, {0x7D, 2}, {0x7E, 2}, {kEscapeSymbol, 2}};
  return Codebook::from_lengths(lens);
}

std::vector<Bf16Bits> round_trip(const std::vector<Bf16Bits>& v, const Codebook& cb) {
  const auto enc = encode_layer(v, cb);
  return decode_layer(enc.transmission_order()).values;
}

}  // namespace

TEST_CASE("ten 2-bit values fit one flit") {
  const auto cb = two_bit_book();
  std::vector<Bf16Bits> v;
  for (int i = 0; i < 10; ++i) v.push_back(join({static_cast<std::uint8_t>(i & 1), static_cast<std::uint8_t>(0x7C + i % 3),
                                                static_cast<std::uint8_t>(i * 11)}));
  const auto enc = encode_layer(v, cb);
  REQUIRE(enc.data.size() == 1);
  const auto& f = enc.data[0];
  CHECK(f.header() == 10);
  // 8 + 10 + 70 + 20 = 108 bits used; the last 20 bits are zero.
  const std::vector<std::uint8_t> tail(f.bytes.begin() + 14, f.bytes.end());
  CHECK(tail == std::vector<std::uint8_t>{0, 0});
  CHECK((f.bytes[13] & 0x0F) == 0);
  const auto tables = DecoderTables::build(cb);
  const auto d = decode_flit(f, tables);
  CHECK(d.values == v);
  CHECK(d.stage_hits[0] == 10);
  CHECK(enc.stats.exponent_cr == doctest::Approx(4.0));
}

TEST_CASE("packing is greedy up to the 13-value ceiling") {
  const std::vector<SymbolLength> lens{{0x7F, 1}, {kEscapeSymbol, 1}};
  const auto cb = Codebook::from_lengths(lens);
  const std::vector<Bf16Bits> v(100, 0x3F80);
  const auto enc = encode_layer(v, cb);
  // 9 bits per value: 13 values use 117 of 120 payload bits.
  CHECK(enc.data.size() == 8);
  CHECK(enc.data[0].header() == 13);
  CHECK(enc.data.back().header() == 100 - 7 * 13);
  CHECK(round_trip(v, cb) == v);
}

TEST_CASE("single value uses 16 payload bits and zero padding") {
  const auto cb = two_bit_book();
  const std::vector<Bf16Bits> v{join({1, 0x7D, 0x55})};
  const auto enc = encode_layer(v, cb);
  REQUIRE(enc.data.size() == 1);
  const auto& f = enc.data[0];
  CHECK(f.header() == 1);
  // sign 1, mantissa 1010101, code 01 -> 1101 0101 01
  CHECK(f.bytes[1] == 0b11010101);
  CHECK(f.bytes[2] == 0b01000000);
  for (std::size_t i = 3; i < 16; ++i) CHECK(f.bytes[i] == 0);
}

TEST_CASE("escaped exponent resolves in the last stage of a full book") {
  std::vector<Bf16Bits> v;
  for (int i = 0; i < 40; ++i) {
    for (int k = 0; k < 1000 - 20 * i; ++k) v.push_back(join({0, static_cast<std::uint8_t>(80 + i), 3}));
  }
  const auto layer = build_codebook_from_histogram(ExponentHistogram::count(exponent_plane(v)));
  REQUIRE(layer.codebook.coded_symbol_count() == 32);
  const std::vector<Bf16Bits> one{join({1, static_cast<std::uint8_t>(80 + 39), 0x11})};
  const auto enc = encode_layer(one, layer.codebook);
  CHECK(enc.stats.escaped_values == 1);
  const auto d = decode_flit(enc.data[0], layer.tables);
  CHECK(d.values == one);
  CHECK(d.stage_hits[3] == 1);
  CHECK(d.stage_hits[0] + d.stage_hits[1] + d.stage_hits[2] == 0);
  CHECK(round_trip(v, layer.codebook) == v);
}

TEST_CASE("random streams round-trip and conserve the value count") {
  std::mt19937_64 rng(61);
  const std::vector<std::size_t> lengths{1, 2, 12, 13, 14, 100, 511, 512, 513, 4096, 100000};
  for (auto n : lengths) {
    const auto v = testing::random_values(rng, n, 1 + static_cast<unsigned>(rng() % 48));
    const auto layer = build_layer_codebook(std::span<const Bf16Bits>(v), EncoderConfig{});
    const auto enc = encode_layer(v, layer.codebook);
    std::uint64_t sum = 0;
    for (const auto& f : enc.data) {
      REQUIRE(f.header() >= 1);
      REQUIRE(f.header() <= kMaxValuesPerFlit);
      sum += f.header();
    }
    CHECK(sum == n);
    const auto dec = decode_layer(enc.transmission_order());
    REQUIRE(dec.values == v);
    CHECK(dec.data_flits == enc.data.size());
  }
}

TEST_CASE("each data flit decodes on its own") {
  std::mt19937_64 rng(67);
  const auto v = testing::random_values(rng, 3000, 36);
  const auto layer = build_layer_codebook(std::span<const Bf16Bits>(v), EncoderConfig{});
  const auto enc = encode_layer(v, layer.codebook);
  std::size_t offset = 0;
  // Decode flits in reverse order to show there is no state between them.
  std::vector<std::size_t> starts;
  for (const auto& f : enc.data) {
    starts.push_back(offset);
    offset += f.header();
  }
  for (std::size_t i = enc.data.size(); i-- > 0;) {
    const auto d = decode_flit(enc.data[i], layer.tables);
    for (std::size_t k = 0; k < d.values.size(); ++k) REQUIRE(d.values[k] == v[starts[i] + k]);
  }
}

TEST_CASE("stage of resolution matches code length class") {
  std::mt19937_64 rng(71);
  const auto v = testing::random_values(rng, 20000, 32);
  const auto layer = build_codebook_from_histogram(ExponentHistogram::count(exponent_plane(v)));
  const auto entries = layer.codebook.entries();
  for (std::size_t rank = 0; rank < entries.size(); ++rank) {
    const auto& e = entries[rank];
    const std::uint32_t window = e.length == 32 ? e.code : e.code << (32 - e.length);
    const auto m = layer.tables.lookup(window);
    REQUIRE(m);
    CHECK(m->symbol == e.symbol);
    if (rank < 8) CHECK(m->stage == 0);
    CHECK(e.length <= DecoderTables::kStageWidths[m->stage]);
    if (m->stage > 0) CHECK(rank >= 8 * m->stage);
  }
}

TEST_CASE("empty layer: header and trailer only") {
  const auto cb = two_bit_book();
  const auto enc = encode_layer({}, cb);
  CHECK(enc.data.empty());
  const auto dec = decode_layer(enc.transmission_order());
  CHECK(dec.values.empty());
}

TEST_CASE("structural corruption is detected") {
  std::mt19937_64 rng(73);
  const auto v = testing::random_values(rng, 500, 20);
  const auto layer = build_layer_codebook(std::span<const Bf16Bits>(v), EncoderConfig{});
  const auto flits = encode_layer(v, layer.codebook).transmission_order();

  SUBCASE("extra zero flit after the trailer") {
    auto f = flits;
    f.push_back(Flit{});
    CHECK_THROWS_AS(decode_layer(f), FramingError);
  }
  SUBCASE("missing trailer") {
    auto f = flits;
    f.pop_back();
    CHECK_THROWS_AS(decode_layer(f), DataError);
  }
  SUBCASE("dropped data flit") {
    auto f = flits;
    f.erase(f.begin() + 3);
    CHECK_THROWS_AS(decode_layer(f), DataError);
  }
  SUBCASE("codebook count byte") {
    auto f = flits;
    f[0].bytes[1] ^= 0x01;
    CHECK_THROWS_AS(decode_layer(f), DataError);
  }
  SUBCASE("flit header count") {
    auto f = flits;
    f[3].bytes[0] = static_cast<std::uint8_t>(f[3].bytes[0] - 1);
    CHECK_THROWS_AS(decode_layer(f), DataError);
  }
  SUBCASE("no header flits") {
    std::vector<Flit> f(flits.begin() + 3, flits.end());
    CHECK_THROWS_AS(decode_layer(f), FramingError);
  }
  SUBCASE("every single-bit flip is detected") {
    for (std::size_t i = 0; i < flits.size(); ++i) {
      for (std::size_t bit = 0; bit < kFlitBits; bit += 7) {
        auto f = flits;
        f[i].bytes[bit / 8] ^= static_cast<std::uint8_t>(0x80 >> (bit % 8));
        REQUIRE_THROWS_AS(decode_layer(f), DataError);
      }
    }
  }
}

TEST_CASE("data flit framing errors") {
  const auto cb = two_bit_book();
  const auto tables = DecoderTables::build(cb);
  const std::vector<Bf16Bits> v(5, 0x3E00);
  auto f = encode_layer(v, cb).data[0];
  auto bad = f;
  bad.bytes[0] = 0;
  CHECK_THROWS_AS(decode_flit(bad, tables), FramingError);
  bad = f;
  bad.bytes[0] = 14;
  CHECK_THROWS_AS(decode_flit(bad, tables), FramingError);
  bad = f;
  bad.bytes[15] = 1;
  CHECK_THROWS_AS(decode_flit(bad, tables), FramingError);
}

TEST_CASE("flit dump helpers") {
  const auto cb = two_bit_book();
  const std::vector<Bf16Bits> v(30, 0x3E80);
  const auto flits = encode_layer(v, cb).transmission_order();
  const auto bytes = flits_to_bytes(flits);
  CHECK(bytes.size() == 16 * flits.size());
  CHECK(flits_from_bytes(bytes) == flits);
  const std::vector<std::uint8_t> odd(17, 0);
  CHECK_THROWS_AS(flits_from_bytes(odd), FramingError);
}
