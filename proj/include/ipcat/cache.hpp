/*
 *    Copyright 2026 The ipcat-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef IPCAT_CACHE_HPP
#define IPCAT_CACHE_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "ipcat/common.hpp"
#include "ipcat/mshr.hpp"
#include "ipcat/repl.hpp"
#include "ipcat/stats.hpp"

namespace ipcat
{

enum class AccessClass : std::uint8_t { DemandCode, DemandData, PrefetchCode, Translation, Writeback };

constexpr bool is_prefetch(AccessClass c) { return c == AccessClass::PrefetchCode; }

struct MemRequest {
  std::uint64_t line = 0; // physical line address
  AccessClass cls = AccessClass::DemandCode;
  bool pb = false;
  bool page_cross = false;
  Cycle cycle = 0;
};

enum class AccessOutcome { Hit, MissStarted, MergedInFlight, Dropped };

struct AccessResult {
  AccessOutcome outcome = AccessOutcome::Hit;
  Cycle ready = 0;
};

class MemoryLevel
{
public:
  virtual ~MemoryLevel() = default;
  virtual AccessResult access(const MemRequest& req) = 0;
};

class FixedLatencyMemory final : public MemoryLevel
{
public:
  explicit FixedLatencyMemory(Cycle latency) : latency_(latency) {}
  AccessResult access(const MemRequest& req) override
  {
    ++accesses_;
    return {AccessOutcome::MissStarted, req.cycle + latency_};
  }
  [[nodiscard]] Cycle latency() const { return latency_; }
  [[nodiscard]] std::uint64_t accesses() const { return accesses_; }
  void reset_stats() { accesses_ = 0; }

private:
  Cycle latency_;
  std::uint64_t accesses_ = 0;
};

/// Lines fetched by an L1I prefetch kept out of the L2C and served from an
/// unbounded side buffer on the first demand miss.
enum class IdealMode { None, PageCross, All };

struct CacheConfig {
  std::string name;
  std::uint64_t size_bytes = 0;
  std::uint32_t ways = 1;
  Cycle latency = 1;
  std::size_t mshr_entries = 1;
  ReplacementKind replacement = ReplacementKind::Lru;
  bool fill_on_prefetch = true;
  IdealMode ideal = IdealMode::None;

  [[nodiscard]] std::size_t sets() const { return static_cast<std::size_t>(size_bytes / (std::uint64_t{ways} * kLineSize)); }
};

void validate(const CacheConfig& cfg);

/// Demand L2C accesses served per prefetched line: {0, 1-8, 9-128, >128}.
struct ReuseHistogram {
  std::array<std::uint64_t, 4> buckets{};

  void add(std::uint32_t served)
  {
    buckets[served == 0 ? 0 : served <= 8 ? 1 : served <= 128 ? 2 : 3] += 1;
  }
  [[nodiscard]] std::uint64_t total() const { return buckets[0] + buckets[1] + buckets[2] + buckets[3]; }
};

struct CacheStats {
  StructureStats demand;
  std::uint64_t translation_accesses = 0;
  std::uint64_t fills = 0;
  std::uint64_t pb_fills = 0;
  std::uint64_t bypasses = 0;
  std::uint64_t evictions = 0;
  std::uint64_t pb_evictions = 0;
  std::uint64_t pb_evictions_unused = 0;
  std::uint64_t side_buffer_hits = 0;
  std::uint64_t prefetched_line_misses = 0; // demand misses on lines a prefetch once brought in
  ReuseHistogram reuse;
};

/*
 * Non-inclusive set-associative cache. A miss installs its line (subject to
 * the replacement policy's insertion verdict) when the request is issued and
 * records the fill's completion cycle in an MSHR; later requests to the line
 * merge with that entry until it retires. The prefetch bit travels with the
 * request and is stored in the line.
 */
class Cache final : public MemoryLevel
{
public:
  Cache(CacheConfig cfg, MemoryLevel* next, const TiprpConfig& tiprp = {});

  AccessResult access(const MemRequest& req) override;

  /// Resident or in flight.
  [[nodiscard]] bool contains(std::uint64_t line) const;
  [[nodiscard]] const CacheLine* find_line(std::uint64_t line) const;
  [[nodiscard]] bool in_flight(std::uint64_t line) const;

  /// Way a fill into `set_index` would use: an invalid way if any, else
  /// the policy's victim.
  std::size_t evict_victim(std::size_t set_index);

  [[nodiscard]] std::size_t set_index(std::uint64_t line) const { return static_cast<std::size_t>(line & (sets_ - 1)); }
  [[nodiscard]] std::size_t num_sets() const { return sets_; }
  [[nodiscard]] std::span<const CacheLine> set_lines(std::size_t set) const
  {
    return {lines_.data() + set * cfg_.ways, cfg_.ways};
  }
  [[nodiscard]] const CacheConfig& config() const { return cfg_; }
  [[nodiscard]] const CacheStats& stats() const { return stats_; }
  [[nodiscard]] ReplacementPolicy& policy() { return *policy_; }
  [[nodiscard]] const ReplacementPolicy& policy() const { return *policy_; }
  [[nodiscard]] const MshrFile<bool>& mshr() const { return mshr_; }

  /// Clears counters (warmup boundary). Per-line reuse counts span the
  /// line's whole residency.
  void reset_stats();
  void drain() { mshr_.retire_all(); }
  /// Moves still-resident prefetched lines into the reuse histogram.
  void flush_reuse();

private:
  std::span<CacheLine> set_span(std::size_t set) { return {lines_.data() + set * cfg_.ways, cfg_.ways}; }
  CacheLine* lookup(std::uint64_t line);
  void install(std::uint64_t line, bool pb, bool force, Cycle ready);

  CacheConfig cfg_;
  MemoryLevel* next_;
  std::size_t sets_;
  std::vector<CacheLine> lines_;
  std::unique_ptr<ReplacementPolicy> policy_;
  MshrFile<bool> mshr_;
  CacheStats stats_;
  std::uint64_t clock_ = 0;
  std::unordered_set<std::uint64_t> side_buffer_;
  std::unordered_set<std::uint64_t> ever_prefetched_;
};

} // namespace ipcat

#endif
