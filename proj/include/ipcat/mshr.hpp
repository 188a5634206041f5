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

#ifndef IPCAT_MSHR_HPP
#define IPCAT_MSHR_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "ipcat/common.hpp"

namespace ipcat
{

struct MshrCounters {
  std::uint64_t allocations = 0; // requests that needed a new entry
  std::uint64_t completions = 0;
  std::uint64_t drops = 0;
  std::uint64_t merges = 0;
  std::uint64_t stalls = 0;      // demand waits on a full file
};

/*
 * Miss status holding registers keyed by an address-like key. Each entry
 * records the cycle its fill completes; entries whose ready cycle has passed
 * are retired lazily on the next access. The payload carries per-structure
 * metadata (the cross-bit for the sTLB, the prefetch bit for caches).
 */
template <typename Payload>
class MshrFile
{
public:
  struct Entry {
    std::uint64_t key;
    Cycle ready;
    Payload payload;
  };

  explicit MshrFile(std::size_t capacity) : capacity_(capacity) { entries_.reserve(capacity); }

  [[nodiscard]] std::size_t capacity() const { return capacity_; }
  [[nodiscard]] std::size_t occupancy() const { return entries_.size(); }
  [[nodiscard]] bool full() const { return entries_.size() >= capacity_; }

  Entry* find(std::uint64_t key)
  {
    auto it = std::find_if(entries_.begin(), entries_.end(), [key](const Entry& e) { return e.key == key; });
    return it == entries_.end() ? nullptr : &*it;
  }

  [[nodiscard]] Cycle earliest_ready() const
  {
    Cycle best = std::numeric_limits<Cycle>::max();
    for (const auto& e : entries_)
      best = std::min(best, e.ready);
    return best;
  }

  /// Drops every entry whose fill has completed by `now`.
  void retire(Cycle now)
  {
    auto keep = std::remove_if(entries_.begin(), entries_.end(), [now](const Entry& e) { return e.ready <= now; });
    counters_.completions += static_cast<std::uint64_t>(std::distance(keep, entries_.end()));
    entries_.erase(keep, entries_.end());
  }

  void retire_all() { retire(std::numeric_limits<Cycle>::max()); }

  /// Caller checks full() first.
  Entry& allocate(std::uint64_t key, Cycle ready, Payload payload)
  {
    ++counters_.allocations;
    entries_.push_back(Entry{key, ready, std::move(payload)});
    return entries_.back();
  }

  void note_drop()
  {
    ++counters_.allocations;
    ++counters_.drops;
  }
  void note_merge() { ++counters_.merges; }
  void note_stall() { ++counters_.stalls; }

  [[nodiscard]] const MshrCounters& counters() const { return counters_; }

  /// Counter reset at the warmup boundary. In-flight entries stay accounted
  /// as allocations so allocations == completions + drops after a drain.
  void reset_counters()
  {
    counters_ = MshrCounters{};
    counters_.allocations = entries_.size();
  }

  [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }

private:
  std::size_t capacity_;
  std::vector<Entry> entries_;
  MshrCounters counters_;
};

} // namespace ipcat

#endif
