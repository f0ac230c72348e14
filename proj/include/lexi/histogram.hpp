#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lexi {

// Encoder design point. Defaults: 10 lanes, 8-entry lane caches, 512-sample trees.
struct EncoderConfig {
  std::size_t lanes = 10;
  std::size_t lane_cache_depth = 8;
  std::size_t tree_sample_size = 512;
  static constexpr std::size_t max_coded_symbols = 32;

  // Throws ContractViolation on zero-valued fields.
  void validate() const;
};

inline constexpr std::uint32_t kArbiterHoldCycles = 3;
inline constexpr std::uint32_t kSortCycles = 15;
inline constexpr std::uint32_t kTreeCycles = 31;
inline constexpr std::uint32_t kLutProgramCycles = 32;

struct CycleReport {
  std::uint64_t histogram_cycles = 0;
  std::uint64_t arbiter_stall_cycles = 0;
  std::uint64_t sort_cycles = 0;
  std::uint64_t tree_cycles = 0;
  std::uint64_t lut_program_cycles = 0;
  std::uint64_t total_pipeline_cycles = 0;
  double lane_hit_rate = 0.0;

  std::uint64_t lane_hits = 0;
  std::uint64_t lane_misses = 0;
  std::uint64_t global_writes = 0;  // eviction writes through the arbiter
};

// Per-lane exponent cache with FIFO (insertion-order) eviction.
class LaneCache {
 public:
  struct Entry {
    std::uint8_t exponent;
    std::uint64_t count;
    std::uint64_t insertion_index;
  };

  enum class EventKind { Hit, Insert, Evict };

  struct Event {
    EventKind kind;
    std::uint8_t evicted_exponent = 0;
    std::uint64_t evicted_count = 0;
  };

  explicit LaneCache(std::size_t capacity);

  Event ingest(std::uint8_t exponent);
  // Removes and returns all resident entries, oldest first.
  std::vector<Entry> drain();

  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t capacity() const noexcept { return capacity_; }

 private:
  std::size_t capacity_;
  std::vector<Entry> entries_;  // oldest first
  std::uint64_t next_index_ = 0;
};

struct ExponentHistogram {
  std::array<std::uint64_t, 256> counts{};
  std::uint64_t total = 0;

  void add(std::uint8_t exponent, std::uint64_t n = 1) {
    counts[exponent] += n;
    total += n;
  }
  std::size_t distinct() const noexcept;

  static ExponentHistogram count(std::span<const std::uint8_t> exponents);
  friend bool operator==(const ExponentHistogram&, const ExponentHistogram&) = default;
};

struct HistogramRun {
  ExponentHistogram histogram;
  // Only histogram_cycles, arbiter_stall_cycles, lane_hit_rate and the raw
  // hit/miss/write counters are populated.
  CycleReport cycles;
};

// Deals exponents round-robin to cfg.lanes lane caches and merges evictions
// plus a final drain into an exact global histogram. Throws DataError on empty input.
HistogramRun run_histogram(std::span<const std::uint8_t> exponents, const EncoderConfig& cfg);

}  // namespace lexi
