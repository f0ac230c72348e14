#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "lexi/bf16.hpp"
#include "lexi/error.hpp"
#include "test_support.hpp"

using namespace lexi;

TEST_CASE("split decomposes IEEE fields") {
  CHECK(split(0x3F80) == Bf16Triple{0, 0x7F, 0x00});
  CHECK(split(0xBFC0) == Bf16Triple{1, 0x7F, 0x40});
  CHECK(split(0x0000) == Bf16Triple{0, 0x00, 0x00});
  CHECK(exponent_of(0xBFC0) == 0x7F);
}

TEST_CASE("join recomposes and rejects out-of-range fields") {
  CHECK(join({0, 0x7F, 0x00}) == 0x3F80);
  CHECK(join({1, 0xFF, 0x00}) == 0xFF80);
  CHECK_THROWS_AS(join({2, 0, 0}), ContractViolation);
  CHECK_THROWS_AS(join({0, 0, 0x80}), ContractViolation);
}

TEST_CASE("split/join round-trips all 65536 patterns") {
  for (std::uint32_t x = 0; x <= 0xFFFF; ++x) {
    const auto t = split(static_cast<Bf16Bits>(x));
    REQUIRE(t.sign <= 1);
    REQUIRE(t.mantissa <= 127);
    REQUIRE(join(t) == x);
  }
}

TEST_CASE("float conversion rounds to nearest even and keeps NaN") {
  CHECK(bf16_from_float(1.0f) == 0x3F80);
  CHECK(bf16_from_float(-1.5f) == 0xBFC0);
  CHECK(bf16_to_float(0x3F80) == 1.0f);
  const auto nan = bf16_from_float(std::nanf(""));
  CHECK(split(nan).exponent == 0xFF);
  CHECK(split(nan).mantissa != 0);
}

TEST_CASE("profile: single symbol has zero exponent entropy") {
  const std::vector<Bf16Bits> v(1000, 0x3F80);
  const auto r = profile_stream(v);
  CHECK(r.exponent_entropy_bits == 0.0);
  CHECK(r.distinct_exponents == 1);
  CHECK(r.total_values == 1000);
  CHECK(r.exponent_histogram[0x7F] == 1000);
}

TEST_CASE("profile: uniform over 8 exponents is 3 bits") {
  std::vector<Bf16Bits> v;
  for (int i = 0; i < 800; ++i) v.push_back(join({0, static_cast<std::uint8_t>(0x78 + i % 8), 0}));
  const auto r = profile_stream(v);
  CHECK(r.exponent_entropy_bits == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(r.distinct_exponents == 8);
  CHECK(r.sign_entropy_bits == 0.0);
}

TEST_CASE("profile: mixed stream matches a long-double recomputation") {
  std::mt19937_64 rng(11);
  const auto v = testing::random_values(rng, 5000, 20);
  const auto r = profile_stream(v);

  auto oracle = [&](auto field, int slots) {
    std::vector<long double> counts(static_cast<std::size_t>(slots), 0.0L);
    for (auto x : v) counts[field(x)] += 1.0L;
    long double h = 0.0L;
    for (auto c : counts) {
      if (c > 0) h -= (c / v.size()) * std::log2(c / v.size());
    }
    return static_cast<double>(h);
  };
  CHECK(std::abs(r.exponent_entropy_bits - oracle([](Bf16Bits x) { return (x >> 7) & 0xFF; }, 256)) < 1e-12);
  CHECK(std::abs(r.sign_entropy_bits - oracle([](Bf16Bits x) { return x >> 15; }, 2)) < 1e-12);
  CHECK(std::abs(r.mantissa_entropy_bits - oracle([](Bf16Bits x) { return x & 0x7F; }, 128)) < 1e-12);
  CHECK(r.distinct_exponents == 20);
  CHECK(r.exponent_entropy_bits <= std::log2(20.0) + 1e-12);
}

TEST_CASE("profile: entropy is permutation invariant and bounded by field widths") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto v = testing::random_values(rng, 2000, 1 + trial % 32);
    const auto a = profile_stream(v);
    std::shuffle(v.begin(), v.end(), rng);
    const auto b = profile_stream(v);
    CHECK(a.exponent_entropy_bits == doctest::Approx(b.exponent_entropy_bits).epsilon(1e-12));
    CHECK(a.mantissa_entropy_bits == doctest::Approx(b.mantissa_entropy_bits).epsilon(1e-12));
    CHECK(a.sign_entropy_bits <= 1.0 + 1e-12);
    CHECK(a.mantissa_entropy_bits <= 7.0 + 1e-12);
    // At most 32 distinct exponents -> at most 5 bits.
    CHECK(a.exponent_entropy_bits <= 5.0 + 1e-12);
  }
}

TEST_CASE("profile: empty input is an error") {
  CHECK_THROWS_AS(profile_stream({}), DataError);
}

TEST_CASE("raw files are little-endian words") {
  const std::vector<std::uint8_t> bytes{0x80, 0x3F, 0xC0, 0xBF};
  const auto v = bf16_from_bytes(bytes);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == 0x3F80);
  CHECK(v[1] == 0xBFC0);
  CHECK(bf16_to_bytes(v) == bytes);
  const std::vector<std::uint8_t> odd{1, 2, 3};
  CHECK_THROWS_AS(bf16_from_bytes(odd), DataError);

  testing::TempDir dir;
  write_bf16_file(dir / "x.bf16", v);
  CHECK(read_bf16_file(dir / "x.bf16") == v);
  CHECK_THROWS_AS(read_bf16_file(dir / "missing.bf16"), DataError);
}
