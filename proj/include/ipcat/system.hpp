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


#ifndef IPCAT_SYSTEM_HPP
#define IPCAT_SYSTEM_HPP

#include <memory>
#include <optional>

#include "ipcat/cache.hpp"
#include "ipcat/prefetch.hpp"
#include "ipcat/tlb.hpp"
#include "ipcat/vm.hpp"

namespace ipcat
{

struct HierarchyConfig {
  VmConfig vm;
  TlbConfig tlb;
  CacheConfig l1i{"l1i", 32 * 1024, 8, 4, 8};
  CacheConfig l1d{"l1d", 48 * 1024, 12, 5, 16};
  CacheConfig l2c{"l2c", 1024 * 1024, 16, 10, 32};
  CacheConfig llc{"llc", 1441792, 11, 36, 64}; // 1.375MB
  Cycle memory_latency = 100;
  TiprpConfig tiprp;
};

/// A prefetch whose translation resolved; its L1I access is due at `at`.
struct PendingPrefetch {
  std::uint64_t paddr_line = 0;
  bool page_cross = false;
  Cycle at = 0;
};

/*
 * Page table, walker, translation unit and the L1I/L1D/L2C/LLC chain over a
 * fixed-latency memory. Page walk reads enter the L2C as translation-class
 * demand accesses.
 */
class MemorySystem
{
public:
  explicit MemorySystem(const HierarchyConfig& cfg);
  MemorySystem(const MemorySystem&) = delete;
  MemorySystem& operator=(const MemorySystem&) = delete;

  PageTable& page_table() { return table_; }
  PscSet& psc() { return psc_; }
  PageWalker& walker() { return walker_; }
  TranslationUnit& translation() { return *tlbs_; }
  Cache& l1i() { return *l1i_; }
  Cache& l1d() { return *l1d_; }
  Cache& l2c() { return *l2c_; }
  Cache& llc() { return *llc_; }
  FixedLatencyMemory& memory() { return memory_; }
  [[nodiscard]] const HierarchyConfig& config() const { return cfg_; }

  /// Translation half of a prefetch. Empty when a TLB MSHR dropped it.
  std::optional<PendingPrefetch> translate_prefetch(const PrefetchRequest& req, PageCrossMode mode);
  /// Cache half: a PrefetchCode access into the L1I with pb=1.
  AccessResult fill_prefetch(const PendingPrefetch& p);
  /// Both halves back to back. Returns the completion cycle, empty if
  /// dropped at any level.
  std::optional<Cycle> issue_prefetch(const PrefetchRequest& req, PageCrossMode mode);

  void reset_stats();
  void drain();

private:
  HierarchyConfig cfg_;
  PageTable table_;
  PscSet psc_;
  PageWalker walker_;
  FixedLatencyMemory memory_;
  std::unique_ptr<Cache> llc_, l2c_, l1i_, l1d_;
  std::unique_ptr<TranslationUnit> tlbs_;
};

} // namespace ipcat

#endif
