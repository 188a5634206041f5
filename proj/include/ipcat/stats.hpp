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


#ifndef IPCAT_STATS_HPP
#define IPCAT_STATS_HPP

#include <cstdint>

namespace ipcat
{

/// Demand-side counters of one lookup structure. merges are a subset of
/// misses (requests that found their line/translation already in flight).
struct StructureStats {
  std::uint64_t accesses = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t merges = 0;
  std::uint64_t miss_latency = 0; // summed over misses

  std::uint64_t prefetch_accesses = 0;
  std::uint64_t prefetch_hits = 0;
  std::uint64_t prefetch_misses = 0;
  std::uint64_t prefetch_drops = 0;

  void demand_hit()
  {
    ++accesses;
    ++hits;
  }
  void demand_miss(std::uint64_t latency, bool merged = false)
  {
    ++accesses;
    ++misses;
    merges += merged ? 1 : 0;
    miss_latency += latency;
  }

  [[nodiscard]] double avg_miss_latency() const
  {
    return misses == 0 ? 0.0 : static_cast<double>(miss_latency) / static_cast<double>(misses);
  }
};

} // namespace ipcat

#endif
