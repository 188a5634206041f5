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


#ifndef IPCAT_ENGINE_HPP
#define IPCAT_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ipcat/config.hpp"
#include "ipcat/system.hpp"
#include "ipcat/trace.hpp"

namespace ipcat
{

/// Bit cost of the added hardware for a configuration's geometry.
struct StorageBreakdown {
  std::uint64_t tpb_entry_bits = 0;
  std::uint64_t tpb_bits = 0;
  std::uint64_t cb_bits = 0;
  std::uint64_t psel_bits = 0;
  /// Bits of the mechanisms the configuration enables.
  std::uint64_t enabled_bits = 0;
};

inline constexpr std::uint64_t kReferenceTpbBits = 6452; // 64-entry tPB as published

/// tPB entry: vpn tag (45 bits less the set index), ppn (40), attributes (8),
/// valid, page size, and LRU position bits.
StorageBreakdown storage_overhead(const SimConfig& cfg);

struct LevelSummary {
  std::uint64_t accesses = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  double mpki = 0.0;
  double avg_miss_latency = 0.0; // mean over misses
};

struct StatsReport {
  std::uint64_t records = 0;
  std::uint64_t instructions = 0; // measured IFetch records
  std::uint64_t instruction_lines = 0;
  std::uint64_t cycles = 0;
  double ipc_proxy = 0.0;

  LevelSummary itlb, dtlb, stlb, l1i, l1d, l2c, llc;
  double stlb_effective_mpki = 0.0;

  TranslationStats translation;
  WalkerStats walker;
  CacheStats l2c_detail;
  PrefetchStats prefetch;
  std::uint64_t prefetch_translation_drops = 0;
  std::uint64_t prefetch_cache_drops = 0;
  std::uint64_t prefetch_fills_issued = 0;
  std::uint64_t memory_accesses = 0;

  ReuseHistogram reuse;
  SelectionHistogram selections;
  std::uint32_t psel1 = 0;
  std::uint32_t psel2 = 0;

  StorageBreakdown storage;

  /// Flat JSON object, keys in csv_columns() order.
  [[nodiscard]] std::string to_json(int indent = 2) const;
  [[nodiscard]] static std::vector<std::string> csv_columns();
  [[nodiscard]] static std::string csv_header();
  [[nodiscard]] std::string csv_row() const;
};

/*
 * Serial fetch model over one trace. Every new instruction line costs one
 * cycle; a demand line that is not ready adds its remaining latency. Data
 * records add data_overlap times their latency beyond an L1D hit. Prefetch
 * translations resolve at the trigger and their L1I accesses are replayed
 * from an event queue once the translation completes.
 */
class Simulator
{
public:
  Simulator(const SimConfig& cfg, std::span<const TraceRecord> trace);

  /// Processes record position(). Resets counters on reaching the warmup
  /// boundary.
  void step();
  [[nodiscard]] bool done() const { return pos_ >= end_; }
  [[nodiscard]] std::size_t position() const { return pos_; }
  [[nodiscard]] Cycle now() const { return now_; }

  /// Runs the remaining records, replays pending prefetches, and drains.
  StatsReport finish();

  MemorySystem& system() { return *sys_; }
  PrefetchEngine& prefetcher() { return prefetcher_; }

private:
  struct Event {
    Cycle at;
    std::uint64_t seq;
    PendingPrefetch fill;
    bool operator>(const Event& o) const { return at != o.at ? at > o.at : seq > o.seq; }
  };

  void replay_until(Cycle t);
  void fetch(const TraceRecord& r);
  void data(const TraceRecord& r);
  void start_measurement();
  [[nodiscard]] StatsReport report() const;

  SimConfig cfg_;
  std::span<const TraceRecord> trace_;
  std::unique_ptr<MemorySystem> sys_;
  PrefetchEngine prefetcher_;
  std::size_t pos_ = 0;
  std::size_t warmup_ = 0;
  std::size_t end_ = 0;
  Cycle now_ = 0;
  Cycle measure_start_ = 0;
  bool measuring_ = false;
  std::uint64_t instructions_ = 0;
  std::uint64_t instruction_lines_ = 0;
  std::uint64_t prefetch_translation_drops_ = 0;
  std::uint64_t prefetch_cache_drops_ = 0;
  std::uint64_t prefetch_fills_issued_ = 0;
  std::uint64_t last_line_ = ~0ull;
  std::vector<std::uint64_t> lines_;     // instruction line addresses, consecutive repeats removed
  std::vector<std::uint32_t> line_pos_;  // record index -> index into lines_
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::uint64_t seq_ = 0;
};

StatsReport run(const SimConfig& cfg, std::span<const TraceRecord> trace);
/// Reads cfg.trace.
StatsReport run(const SimConfig& cfg);

struct Comparison {
  StatsReport base;
  StatsReport variant;
  double speedup = 1.0; // cycles(base) / cycles(variant)
};

/// Throws ConfigError when both configs name different trace files.
Comparison compare(const SimConfig& base, const SimConfig& variant, std::span<const TraceRecord> trace);

double geomean(std::span<const double> values);

struct SweepRow {
  std::string value;
  StatsReport report;
};

/// One run per value of `key`, in input order.
std::vector<SweepRow> sweep(const SimConfig& cfg, std::string_view key, std::span<const std::string> values,
                            std::span<const TraceRecord> trace);

/// Worker count for independent runs: IPCAT_THREADS if set, else the
/// hardware concurrency.
std::size_t worker_threads();

/// Runs the jobs on worker_threads() threads. Results keep input order; the
/// first failing job's exception is rethrown.
std::vector<StatsReport> run_all(const std::vector<std::function<StatsReport()>>& jobs);

} // namespace ipcat

#endif
