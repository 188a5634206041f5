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


#ifndef IPCAT_VM_HPP
#define IPCAT_VM_HPP

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "ipcat/common.hpp"

namespace ipcat
{

struct PageMapping {
  PageSize page_size = PageSize::k4K;
  std::uint64_t vpn = 0; // vaddr >> page_shift(page_size)
  std::uint64_t ppn = 0; // in units of page_size

  [[nodiscard]] std::uint64_t paddr(std::uint64_t vaddr) const
  {
    return (ppn << page_shift(page_size)) | (vaddr & (page_bytes(page_size) - 1));
  }

  friend bool operator==(const PageMapping&, const PageMapping&) = default;
};

struct VmConfig {
  unsigned levels = 5;
  double large_page_fraction = 0.0;
  std::vector<std::size_t> psc_sizes{1, 2, 8, 32}; // top non-leaf level first
  std::uint64_t seed = 1;
};

void validate(const VmConfig& cfg);

/*
 * Synthetic radix page table. The page size of each 2MB-aligned virtual
 * region is fixed by a seeded hash against large_page_fraction; physical
 * frames are handed out in first-touch order. Page-table nodes are allocated
 * lazily in a physical region disjoint from data frames.
 */
class PageTable
{
public:
  explicit PageTable(VmConfig cfg);

  /// Allocate-on-first-touch; stable thereafter.
  PageMapping translate(std::uint64_t vaddr);

  [[nodiscard]] PageSize region_page_size(std::uint64_t vaddr) const;
  [[nodiscard]] unsigned levels() const { return cfg_.levels; }
  [[nodiscard]] static unsigned leaf_level(PageSize ps) { return ps == PageSize::k4K ? 1u : 2u; }

  /// Physical byte address of the entry at `level` (levels..1) on the path
  /// to vaddr. Allocates missing nodes.
  std::uint64_t entry_paddr(std::uint64_t vaddr, unsigned level);

  [[nodiscard]] std::size_t mapped_pages(PageSize ps) const { return ps == PageSize::k4K ? small_.size() : large_.size(); }
  [[nodiscard]] const VmConfig& config() const { return cfg_; }

private:
  VmConfig cfg_;
  std::unordered_map<std::uint64_t, std::uint64_t> small_; // 4KB vpn -> ppn
  std::unordered_map<std::uint64_t, std::uint64_t> large_; // 2MB vpn -> ppn
  std::unordered_map<std::uint64_t, std::uint64_t> nodes_; // (level, prefix) -> frame
  std::uint64_t next_frame_ = 1;
  std::uint64_t next_node_frame_;
};

/// Split paging-structure caches, one per non-leaf level, probed in
/// parallel. Each level is a small fully-associative LRU array.
class PscSet
{
public:
  PscSet(unsigned levels, std::vector<std::size_t> sizes);

  /// Returns the level at which the walk must start reading. A hit at level
  /// L means the entries of levels >= L are known. Without hits the walk
  /// starts at the root.
  unsigned probe(std::uint64_t vaddr, unsigned leaf_level);
  void install(std::uint64_t vaddr, unsigned level);

  [[nodiscard]] std::size_t occupancy(unsigned level) const;
  [[nodiscard]] std::size_t capacity(unsigned level) const;
  [[nodiscard]] bool enabled() const;

private:
  struct Slot {
    std::uint64_t tag;
    std::uint64_t stamp;
  };
  [[nodiscard]] static std::uint64_t tag_for(std::uint64_t vaddr, unsigned level) { return vaddr >> (12 + 9 * (level - 1)); }
  std::vector<Slot>& slots(unsigned level) { return per_level_[levels_ - level]; }
  [[nodiscard]] const std::vector<Slot>& slots(unsigned level) const { return per_level_[levels_ - level]; }

  unsigned levels_;
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<Slot>> per_level_; // index 0 = top level
  std::uint64_t clock_ = 0;
};

struct WalkResult {
  PageMapping mapping;
  Cycle latency = 0;
  std::vector<std::uint64_t> memory_refs; // physical line addresses, root first
};

struct WalkerStats {
  std::uint64_t walks = 0;
  std::uint64_t memory_refs = 0;
  std::uint64_t levels_skipped = 0;
};

/// Issues one read per remaining level through the cache hierarchy.
class PageWalker
{
public:
  /// Returns the latency of one page-table read issued at `at`.
  using MemoryPort = std::function<Cycle(std::uint64_t line_addr, Cycle at)>;

  static constexpr Cycle kPscLatency = 1;

  PageWalker(PageTable& table, PscSet& psc) : table_(table), psc_(psc) {}

  WalkResult walk(std::uint64_t vaddr, Cycle start, const MemoryPort& port);

  [[nodiscard]] const WalkerStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

private:
  PageTable& table_;
  PscSet& psc_;
  WalkerStats stats_;
};

} // namespace ipcat

#endif
