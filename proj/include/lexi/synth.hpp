#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "lexi/bf16.hpp"

namespace lexi {

// Synthetic BF16 streams with a controlled exponent distribution. Rank r
// (0 = most frequent) maps to exponent top_exponent - r (mod 256); signs and
// mantissas are uniform.
enum class Distribution { Zipf, Geometric, Uniform };

Distribution parse_distribution(std::string_view name);
std::string_view distribution_name(Distribution d) noexcept;

struct SynthConfig {
  Distribution distribution = Distribution::Geometric;
  unsigned distinct = 32;  // 1..256
  std::uint64_t count = 65536;
  std::uint64_t seed = 1;
  // Zipf exponent s (default 1) or geometric ratio q in (0,1) (default 0.5).
  std::optional<double> parameter;
  // Overrides `parameter`: solve for the parameter whose rank entropy hits this.
  std::optional<double> target_entropy;
  std::uint8_t top_exponent = 0x7E;
};

std::vector<double> rank_probabilities(Distribution d, unsigned distinct, double parameter);
double rank_entropy(Distribution d, unsigned distinct, double parameter);
// Bisection on the distribution parameter. Throws ContractViolation for
// targets outside (0, log2(distinct)) or for the uniform distribution.
double solve_parameter_for_entropy(Distribution d, unsigned distinct, double target_bits);

double effective_parameter(const SynthConfig& cfg);
std::vector<Bf16Bits> generate(const SynthConfig& cfg);

}  // namespace lexi
