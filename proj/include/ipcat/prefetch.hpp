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


#ifndef IPCAT_PREFETCH_HPP
#define IPCAT_PREFETCH_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ipcat/common.hpp"

namespace ipcat
{

enum class PageCrossMode { NoPageCross, PermitPageCross, FreeTranslation };

PageCrossMode parse_page_cross_mode(std::string_view s);
std::string_view to_string(PageCrossMode m);

struct PrefetchConfig {
  bool enabled = true;
  std::size_t lookahead = 32; // FTQ-like run-ahead window, in distinct lines
  std::size_t next_n = 4;
  PageCrossMode mode = PageCrossMode::PermitPageCross;
  double inaccuracy = 0.0; // probability a request targets a wrong line
  bool fill_llc = true;
  std::size_t ftq_entries = 128; // duplicate-suppression horizon
  std::uint64_t seed = 1;
};

void validate(const PrefetchConfig& cfg);

struct PrefetchRequest {
  std::uint64_t line_vaddr = 0; // byte address of the target line
  std::uint64_t trigger_vaddr = 0;
  bool is_page_cross = false;
  Cycle issue_cycle = 0;
};

struct PrefetchStats {
  std::uint64_t triggers = 0;
  std::uint64_t candidates = 0;
  std::uint64_t suppressed_duplicate = 0;
  std::uint64_t filtered_resident = 0;
  std::uint64_t discarded_page_cross = 0;
  std::uint64_t emitted = 0;
  std::uint64_t page_cross = 0;
  std::uint64_t wrong = 0;
};

/// True when the line (virtual byte address) is already in L1I or in flight.
using ResidencyFilter = std::function<bool(std::uint64_t line_vaddr)>;

/*
 * Fetch-directed prefetcher: every window line not requested within the last
 * ftq_entries requests, then next_n sequential lines after the trigger.
 * Page-cross status is judged at the trigger's page size.
 */
class PrefetchEngine
{
public:
  explicit PrefetchEngine(PrefetchConfig cfg);

  /// `window` holds upcoming instruction line addresses (byte addresses).
  std::vector<PrefetchRequest> emit(std::span<const std::uint64_t> window, std::uint64_t current_vaddr, PageSize trigger_page,
                                    Cycle now, const ResidencyFilter& resident = {});

  [[nodiscard]] const PrefetchConfig& config() const { return cfg_; }
  [[nodiscard]] const PrefetchStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

private:
  bool remember(std::uint64_t line);

  PrefetchConfig cfg_;
  PrefetchStats stats_;
  std::deque<std::uint64_t> fifo_;
  std::unordered_set<std::uint64_t> requested_;
  std::mt19937_64 rng_;
};

} // namespace ipcat

#endif
