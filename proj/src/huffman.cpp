#include "lexi/huffman.hpp"

#include <algorithm>
#include <iterator>
#include <array>
#include <numeric>

#include "lexi/error.hpp"
#include "lexi/histogram.hpp"

namespace lexi {

namespace {

constexpr std::size_t kSorterWidth = 32;
constexpr Symbol kSentinel = 0xFFFF;

}  // namespace

SortResult bitonic_sort_desc(std::span<const SymbolCount> items) {
  if (items.size() > kSorterWidth) {
    throw ContractViolation("bitonic sorter takes at most 32 items; truncate to the top 32 first");
  }
  std::array<SymbolCount, kSorterWidth> lanes;
  lanes.fill({kSentinel, 0});
  std::copy(items.begin(), items.end(), lanes.begin());

  SortResult result;
  for (std::size_t k = 2; k <= kSorterWidth; k <<= 1) {
    for (std::size_t j = k >> 1; j > 0; j >>= 1) {
      for (std::size_t i = 0; i < kSorterWidth; ++i) {
        const std::size_t partner = i ^ j;
        if (partner <= i) continue;
        const bool forward = (i & k) == 0;
        const bool out_of_order =
            forward ? ranks_before(lanes[partner], lanes[i]) : ranks_before(lanes[i], lanes[partner]);
        if (out_of_order) std::swap(lanes[i], lanes[partner]);
      }
      ++result.cycles;
    }
  }
  result.sorted.assign(lanes.begin(), lanes.begin() + static_cast<std::ptrdiff_t>(items.size()));
  return result;
}

HuffmanResult build_huffman(std::span<const SymbolCount> freqs) {
  const std::size_t n = freqs.size();
  const bool has_coded = std::any_of(freqs.begin(), freqs.end(), [](auto& f) { return f.symbol != kEscapeSymbol; });
  if (!has_coded) throw DataError("huffman: no coded symbols");
  if (n < 2) throw ContractViolation("huffman: need at least two leaves (add the escape symbol)");
  if (n > EncoderConfig::max_coded_symbols + 1) throw ContractViolation("huffman: more than 33 symbols");

  // Leaves in ascending weight; escape first among equal weights, then
  // descending symbol so the reverse of rank order is preserved.
  std::vector<std::size_t> leaves(n);
  std::iota(leaves.begin(), leaves.end(), 0);
  std::sort(leaves.begin(), leaves.end(), [&](std::size_t a, std::size_t b) {
    const auto& fa = freqs[a];
    const auto& fb = freqs[b];
    if (fa.count != fb.count) return fa.count < fb.count;
    if ((fa.symbol == kEscapeSymbol) != (fb.symbol == kEscapeSymbol)) return fa.symbol == kEscapeSymbol;
    return fa.symbol > fb.symbol;
  });

  // Nodes 0..n-1 are leaves (input index), n.. are internal in creation order.
  std::vector<std::uint64_t> weight(2 * n - 1);
  std::vector<std::size_t> parent(2 * n - 1, 0);
  for (std::size_t i = 0; i < n; ++i) weight[i] = freqs[i].count;

  std::size_t leaf_pos = 0;
  std::size_t internal_pos = n;
  std::size_t next_internal = n;
  auto pop_lightest = [&]() {
    const bool leaf_ready = leaf_pos < n;
    const bool internal_ready = internal_pos < next_internal;
    if (leaf_ready && (!internal_ready || weight[leaves[leaf_pos]] <= weight[internal_pos])) {
      return leaves[leaf_pos++];
    }
    return internal_pos++;
  };
  while (next_internal < 2 * n - 1) {
    const auto a = pop_lightest();
    const auto b = pop_lightest();
    weight[next_internal] = weight[a] + weight[b];
    parent[a] = parent[b] = next_internal;
    ++next_internal;
  }

  std::vector<std::uint32_t> depth(2 * n - 1, 0);
  for (std::size_t node = 2 * n - 2; node-- > 0;) depth[node] = depth[parent[node]] + 1;

  HuffmanResult result;
  result.tree_cycles = kTreeCycles;
  result.lengths.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    result.lengths.push_back({freqs[i].symbol, static_cast<std::uint8_t>(depth[i])});
  }
  return result;
}

bool fits_decoder_stages(std::span<const SymbolLength> lengths) {
  std::vector<std::uint8_t> sorted;
  sorted.reserve(lengths.size());
  for (const auto& l : lengths) sorted.push_back(l.length);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    if (sorted[r] > decoder_length_cap(r)) return false;
  }
  return true;
}

HuffmanResult build_length_limited(std::span<const SymbolCount> freqs, std::span<const std::uint8_t> max_lengths) {
  const std::size_t n = freqs.size();
  if (max_lengths.size() != n) throw ContractViolation("length caps must match the symbol list");
  const bool has_coded = std::any_of(freqs.begin(), freqs.end(), [](auto& f) { return f.symbol != kEscapeSymbol; });
  if (!has_coded) throw DataError("huffman: no coded symbols");
  if (n < 2) throw ContractViolation("huffman: need at least two leaves (add the escape symbol)");
  if (n > EncoderConfig::max_coded_symbols + 1) throw ContractViolation("huffman: more than 33 symbols");

  // Rank order: count desc, escape last among equals, symbol asc.
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    const auto& fa = freqs[a];
    const auto& fb = freqs[b];
    if (fa.count != fb.count) return fa.count > fb.count;
    if ((fa.symbol == kEscapeSymbol) != (fb.symbol == kEscapeSymbol)) return fb.symbol == kEscapeSymbol;
    return fa.symbol < fb.symbol;
  });

  // A coin (or package) records how many coins of each symbol it holds.
  struct Coin {
    std::uint64_t weight;
    std::vector<std::uint8_t> uses;
  };
  unsigned deepest = 0;
  for (auto m : max_lengths) {
    if (m == 0 || m > kMaxCodeLength) throw ContractViolation("length caps must lie in 1..32");
    deepest = std::max<unsigned>(deepest, m);
  }
  auto coins_at = [&](unsigned level) {
    std::vector<Coin> out;
    for (std::size_t k = n; k-- > 0;) {  // lightest first
      const auto i = rank[k];
      if (max_lengths[i] < level) continue;
      Coin c{freqs[i].count, std::vector<std::uint8_t>(n, 0)};
      c.uses[i] = 1;
      out.push_back(std::move(c));
    }
    return out;
  };
  auto by_weight = [](const Coin& a, const Coin& b) { return a.weight < b.weight; };

  std::vector<Coin> list = coins_at(deepest);
  for (unsigned level = deepest; level > 1; --level) {
    std::vector<Coin> packages;
    for (std::size_t i = 0; i + 1 < list.size(); i += 2) {
      Coin p{list[i].weight + list[i + 1].weight, list[i].uses};
      for (std::size_t s = 0; s < n; ++s) p.uses[s] = static_cast<std::uint8_t>(p.uses[s] + list[i + 1].uses[s]);
      packages.push_back(std::move(p));
    }
    auto items = coins_at(level - 1);
    std::vector<Coin> merged;
    merged.reserve(items.size() + packages.size());
    std::merge(std::make_move_iterator(items.begin()), std::make_move_iterator(items.end()),
               std::make_move_iterator(packages.begin()), std::make_move_iterator(packages.end()),
               std::back_inserter(merged), by_weight);
    list = std::move(merged);
  }
  if (list.size() < 2 * n - 2) throw ContractViolation("length caps admit no complete code");

  std::vector<std::uint8_t> length(n, 0);
  for (std::size_t k = 0; k < 2 * n - 2; ++k) {
    for (std::size_t s = 0; s < n; ++s) length[s] = static_cast<std::uint8_t>(length[s] + list[k].uses[s]);
  }
  std::vector<std::uint8_t> sorted = length;
  std::sort(sorted.begin(), sorted.end());

  // Re-deal unless that would break a cap (only possible with caps that are
  // not monotone in rank order).
  bool redeal = true;
  for (std::size_t k = 0; k < n; ++k) redeal = redeal && sorted[k] <= max_lengths[rank[k]];

  HuffmanResult result;
  result.tree_cycles = kTreeCycles;
  result.lengths.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = rank[k];
    result.lengths[i] = {freqs[i].symbol, redeal ? sorted[k] : length[i]};
  }
  return result;
}

std::uint64_t kraft_sum_scaled(std::span<const SymbolLength> lengths) {
  std::uint64_t sum = 0;
  for (const auto& l : lengths) {
    if (l.length == 0 || l.length > kMaxCodeLength) return ~std::uint64_t{0};
    sum += std::uint64_t{1} << (kMaxCodeLength - l.length);
  }
  return sum;
}

}  // namespace lexi
