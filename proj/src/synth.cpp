#include "lexi/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "lexi/error.hpp"

namespace lexi {

Distribution parse_distribution(std::string_view name) {
  if (name == "zipf") return Distribution::Zipf;
  if (name == "geometric") return Distribution::Geometric;
  if (name == "uniform") return Distribution::Uniform;
  throw ContractViolation("unknown distribution '" + std::string(name) + "'");
}

std::string_view distribution_name(Distribution d) noexcept {
  switch (d) {
    case Distribution::Zipf: return "zipf";
    case Distribution::Geometric: return "geometric";
    case Distribution::Uniform: return "uniform";
  }
  return "?";
}

std::vector<double> rank_probabilities(Distribution d, unsigned distinct, double parameter) {
  if (distinct == 0 || distinct > 256) throw ContractViolation("distinct exponent count must be 1..256");
  std::vector<double> p(distinct);
  for (unsigned r = 0; r < distinct; ++r) {
    switch (d) {
      case Distribution::Zipf: p[r] = std::pow(static_cast<double>(r + 1), -parameter); break;
      case Distribution::Geometric: p[r] = std::pow(parameter, static_cast<double>(r)); break;
      case Distribution::Uniform: p[r] = 1.0; break;
    }
  }
  double sum = 0.0;
  for (auto v : p) sum += v;
  for (auto& v : p) v /= sum;
  return p;
}

double rank_entropy(Distribution d, unsigned distinct, double parameter) {
  double h = 0.0;
  for (auto p : rank_probabilities(d, distinct, parameter)) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double solve_parameter_for_entropy(Distribution d, unsigned distinct, double target_bits) {
  if (d == Distribution::Uniform) throw ContractViolation("uniform distribution has no shape parameter");
  const double max_bits = std::log2(static_cast<double>(distinct));
  if (!(target_bits > 0.0 && target_bits < max_bits)) {
    throw ContractViolation("target entropy must lie in (0, log2(distinct))");
  }
  // Zipf entropy falls as s grows; geometric entropy rises with q.
  double lo = d == Distribution::Zipf ? 0.0 : 1e-9;
  double hi = d == Distribution::Zipf ? 64.0 : 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const bool too_high = rank_entropy(d, distinct, mid) > target_bits;
    if ((d == Distribution::Zipf) == too_high) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double effective_parameter(const SynthConfig& cfg) {
  if (cfg.target_entropy) return solve_parameter_for_entropy(cfg.distribution, cfg.distinct, *cfg.target_entropy);
  if (cfg.parameter) return *cfg.parameter;
  return cfg.distribution == Distribution::Zipf ? 1.0 : 0.5;
}

std::vector<Bf16Bits> generate(const SynthConfig& cfg) {
  const double param = effective_parameter(cfg);
  if (cfg.distribution == Distribution::Geometric && !(param > 0.0 && param < 1.0)) {
    throw ContractViolation("geometric ratio must lie in (0,1)");
  }
  const auto p = rank_probabilities(cfg.distribution, cfg.distinct, param);
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) cdf[i] = acc += p[i];
  cdf.back() = 1.0;

  std::mt19937_64 rng(cfg.seed);
  std::vector<Bf16Bits> out;
  out.reserve(cfg.count);
  for (std::uint64_t i = 0; i < cfg.count; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto rank = static_cast<unsigned>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    const auto bits = rng();
    const auto exponent = static_cast<std::uint8_t>(cfg.top_exponent - std::min<unsigned>(rank, cfg.distinct - 1));
    out.push_back(join({static_cast<std::uint8_t>(bits & 1u), exponent, static_cast<std::uint8_t>((bits >> 1) & 0x7Fu)}));
  }
  return out;
}

}  // namespace lexi
