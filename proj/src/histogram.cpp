#include "lexi/histogram.hpp"

#include <algorithm>

#include "lexi/error.hpp"

namespace lexi {

void EncoderConfig::validate() const {
  if (lanes == 0) throw ContractViolation("encoder config: lanes must be positive");
  if (lane_cache_depth == 0) throw ContractViolation("encoder config: cache depth must be positive");
  if (tree_sample_size == 0) throw ContractViolation("encoder config: tree sample size must be positive");
}

LaneCache::LaneCache(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ContractViolation("lane cache capacity must be positive");
  entries_.reserve(capacity);
}

LaneCache::Event LaneCache::ingest(std::uint8_t exponent) {
  for (auto& e : entries_) {
    if (e.exponent == exponent) {
      ++e.count;
      return {EventKind::Hit};
    }
  }
  Event event{EventKind::Insert};
  if (entries_.size() == capacity_) {
    event = {EventKind::Evict, entries_.front().exponent, entries_.front().count};
    entries_.erase(entries_.begin());
  }
  entries_.push_back({exponent, 1, next_index_++});
  return event;
}

std::vector<LaneCache::Entry> LaneCache::drain() {
  std::vector<Entry> out;
  out.swap(entries_);
  entries_.reserve(capacity_);
  return out;
}

std::size_t ExponentHistogram::distinct() const noexcept {
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c != 0; }));
}

ExponentHistogram ExponentHistogram::count(std::span<const std::uint8_t> exponents) {
  ExponentHistogram h;
  for (auto e : exponents) h.add(e);
  return h;
}

HistogramRun run_histogram(std::span<const std::uint8_t> exponents, const EncoderConfig& cfg) {
  cfg.validate();
  if (exponents.empty()) throw DataError("histogram: exponent sequence is empty");

  const std::size_t lanes = cfg.lanes;
  std::vector<LaneCache> caches(lanes, LaneCache(cfg.lane_cache_depth));
  HistogramRun run;
  auto& cyc = run.cycles;

  // Lock-step beats: every lane takes one exponent per beat. An eviction
  // requests the single global-histogram port; the arbiter grants requests in
  // arrival order (lane index breaks same-beat ties) and each grant holds the
  // port for kArbiterHoldCycles. The distributor cannot issue the next beat
  // until every request of the current beat has been granted.
  std::uint64_t cycle = 0;
  std::uint64_t port_free = 0;
  for (std::size_t base = 0; base < exponents.size(); base += lanes) {
    const std::uint64_t start = cycle;
    std::uint64_t next = start + 1;
    const std::size_t end = std::min(exponents.size(), base + lanes);
    for (std::size_t i = base; i < end; ++i) {
      const auto ev = caches[i - base].ingest(exponents[i]);
      if (ev.kind == LaneCache::EventKind::Hit) {
        ++cyc.lane_hits;
        continue;
      }
      ++cyc.lane_misses;
      if (ev.kind == LaneCache::EventKind::Evict) {
        run.histogram.add(ev.evicted_exponent, ev.evicted_count);
        const std::uint64_t grant = std::max(start, port_free);
        port_free = grant + kArbiterHoldCycles;
        next = std::max(next, grant + 1);
        ++cyc.global_writes;
      }
    }
    cyc.arbiter_stall_cycles += next - (start + 1);
    cycle = next;
  }
  cyc.histogram_cycles = cycle;

  for (auto& cache : caches) {
    for (const auto& e : cache.drain()) run.histogram.add(e.exponent, e.count);
  }
  cyc.lane_hit_rate = static_cast<double>(cyc.lane_hits) / static_cast<double>(cyc.lane_hits + cyc.lane_misses);
  return run;
}

}  // namespace lexi
