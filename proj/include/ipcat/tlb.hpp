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


#ifndef IPCAT_TLB_HPP
#define IPCAT_TLB_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ipcat/common.hpp"
#include "ipcat/mshr.hpp"
#include "ipcat/stats.hpp"
#include "ipcat/vm.hpp"

namespace ipcat
{

struct TlbEntry {
  std::uint64_t vpn = 0;
  std::uint64_t ppn = 0;
  PageSize page_size = PageSize::k4K;
  std::uint8_t attr = 0;
  std::uint64_t lru_stamp = 0;
  bool valid = false;
  Cycle ready = 0; // completion of the fill that installed it
};

TlbEntry make_tlb_entry(const PageMapping& m);

/// Set-associative LRU translation array holding mixed page sizes. A lookup
/// probes the 4KB indexing, then the 2MB one.
class SetAssocTlb
{
public:
  SetAssocTlb(std::string name, std::size_t entries, std::size_t ways);

  /// Hit updates LRU.
  const TlbEntry* lookup(std::uint64_t vaddr);
  [[nodiscard]] const TlbEntry* probe(std::uint64_t vaddr) const;
  [[nodiscard]] bool contains(std::uint64_t vpn, PageSize ps) const;
  bool touch(std::uint64_t vpn, PageSize ps);

  /// Returns the evicted entry, if a valid one was displaced.
  std::optional<TlbEntry> insert(const TlbEntry& entry);
  bool invalidate(std::uint64_t vpn, PageSize ps);

  [[nodiscard]] std::size_t occupancy() const;
  [[nodiscard]] std::size_t capacity() const { return entries_.size(); }
  [[nodiscard]] std::size_t sets() const { return sets_; }
  [[nodiscard]] std::size_t ways() const { return ways_; }
  [[nodiscard]] const std::string& name() const { return name_; }

  /// Valid (vpn, page size) pairs, sorted.
  [[nodiscard]] std::vector<std::pair<std::uint64_t, PageSize>> contents() const;

private:
  [[nodiscard]] std::size_t set_of(std::uint64_t vpn) const { return static_cast<std::size_t>(vpn % sets_); }
  TlbEntry* find(std::uint64_t vpn, PageSize ps);
  [[nodiscard]] const TlbEntry* find(std::uint64_t vpn, PageSize ps) const;

  std::string name_;
  std::size_t sets_;
  std::size_t ways_;
  std::vector<TlbEntry> entries_;
  std::uint64_t clock_ = 0;
};

struct TlbGeometry {
  std::size_t entries;
  std::size_t ways;
  Cycle latency;
  std::size_t mshr;
};

enum class TpbOrganization { Standalone, IntegratedInStlb };

struct TpbConfig {
  bool enabled = false;
  TpbOrganization organization = TpbOrganization::Standalone;
  std::size_t entries = 64; // standalone
  std::size_t ways = 64;    // standalone; == entries means fully associative
  std::size_t extra_sets = 4; // integrated, ways follow the sTLB

  [[nodiscard]] std::size_t capacity(std::size_t stlb_ways) const
  {
    return organization == TpbOrganization::Standalone ? entries : extra_sets * stlb_ways;
  }
  [[nodiscard]] std::size_t associativity(std::size_t stlb_ways) const
  {
    return organization == TpbOrganization::Standalone ? ways : stlb_ways;
  }
  /// Extra lookup cycles after an sTLB miss.
  [[nodiscard]] Cycle probe_latency() const { return organization == TpbOrganization::Standalone ? 1 : 0; }
};

struct TlbConfig {
  TlbGeometry itlb{64, 4, 1, 8};
  TlbGeometry dtlb{64, 4, 1, 8};
  TlbGeometry stlb{1536, 12, 8, 16};
  TpbConfig tpb;
};

void validate(const TlbConfig& cfg);

enum class Requester { DemandIFetch, DemandData, L1IPrefetch };

struct TranslationRequest {
  std::uint64_t vaddr = 0;
  Requester requester = Requester::DemandIFetch;
  bool page_cross = false;       // L1I prefetch whose target leaves the trigger's page
  bool free_translation = false; // page-cross prefetch sTLB misses resolve as hits
  Cycle cycle = 0;
};

enum class TranslationPath { FirstLevelHit, FirstLevelMerge, StlbHit, StlbMerge, TpbHit, FreeFill, Walk, Dropped };

struct TranslationResult {
  PageMapping mapping;
  Cycle latency = 0;
  TranslationPath path = TranslationPath::FirstLevelHit;

  [[nodiscard]] bool dropped() const { return path == TranslationPath::Dropped; }
};

struct StlbMshrPayload {
  std::uint64_t vpn;
  PageSize page_size;
  bool cb; // set only for L1I page-cross prefetch translations
  bool demand;
};

struct TranslationStats {
  StructureStats itlb, dtlb, stlb;
  std::uint64_t demand_walks = 0;
  std::uint64_t prefetch_walks = 0;
  std::uint64_t demand_walk_cycles = 0;
  std::uint64_t tpb_lookups = 0;
  std::uint64_t tpb_lookups_demand = 0;
  std::uint64_t tpb_hits_demand = 0;
  std::uint64_t tpb_hits_prefetch = 0;
  std::uint64_t tpb_fills = 0;
  std::uint64_t tpb_fills_without_cb = 0;
  std::uint64_t tpb_evictions = 0;
  std::uint64_t stlb_effective_misses = 0; // demand misses escaping sTLB and tPB
  std::uint64_t free_fills = 0;
  std::uint64_t cb_entries = 0;
  std::uint64_t prefetch_drops = 0;
  std::uint64_t demand_stall_cycles = 0;

  [[nodiscard]] double tpb_hit_rate() const
  {
    return tpb_lookups == 0 ? 0.0 : static_cast<double>(tpb_hits_demand + tpb_hits_prefetch) / static_cast<double>(tpb_lookups);
  }
};

/*
 * iTLB/dTLB in front of a shared sTLB, with the translation prefetch buffer
 * beside the sTLB. Translations are installed when a miss is issued; the
 * MSHRs carry the completion cycle so later requests to an in-flight page
 * merge and wait for it. Page-cross prefetch walks (cb=1) fill the tPB and
 * iTLB and leave the sTLB untouched; a tPB hit promotes the entry into the
 * sTLB and frees it from the tPB.
 */
class TranslationUnit
{
public:
  TranslationUnit(TlbConfig cfg, PageTable& table, PageWalker& walker, PageWalker::MemoryPort port);

  TranslationResult resolve(const TranslationRequest& req);

  enum class Structure { Itlb, Dtlb, Stlb };
  /// Plain array lookup, no stats and no fills.
  std::optional<TlbEntry> tlb_lookup(Structure s, std::uint64_t vaddr);

  /// Probe after both iTLB and sTLB missed. A hit moves the entry into the
  /// sTLB and invalidates it in the tPB.
  std::optional<TlbEntry> tpb_lookup(std::uint64_t vaddr, Requester requester);

  /// Completion of a prefetch-initiated walk with cb=1: tPB and iTLB only.
  void tpb_fill(const TlbEntry& entry, bool cb);

  void stlb_fill(const TlbEntry& entry) { stlb_.insert(entry); }

  [[nodiscard]] const SetAssocTlb& itlb() const { return itlb_; }
  [[nodiscard]] const SetAssocTlb& dtlb() const { return dtlb_; }
  [[nodiscard]] const SetAssocTlb& stlb() const { return stlb_; }
  [[nodiscard]] const SetAssocTlb& tpb() const { return tpb_; }
  [[nodiscard]] const MshrFile<StlbMshrPayload>& stlb_mshr() const { return stlb_mshr_; }
  [[nodiscard]] const TlbConfig& config() const { return cfg_; }
  [[nodiscard]] bool tpb_enabled() const { return cfg_.tpb.enabled; }

  [[nodiscard]] const TranslationStats& stats() const { return stats_; }
  void reset_stats();
  void drain();

  /// No vpn valid in both the tPB and the sTLB.
  [[nodiscard]] bool exclusive() const;

private:
  PageTable& table_;
  PageWalker& walker_;
  PageWalker::MemoryPort port_;
  TlbConfig cfg_;
  SetAssocTlb itlb_, dtlb_, stlb_, tpb_;
  struct FirstLevelPayload {};
  MshrFile<FirstLevelPayload> itlb_mshr_, dtlb_mshr_;
  MshrFile<StlbMshrPayload> stlb_mshr_;
  TranslationStats stats_;
};

} // namespace ipcat

#endif
