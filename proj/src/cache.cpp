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


#include "ipcat/cache.hpp"

#include <algorithm>
#include <bit>

namespace ipcat
{

void validate(const CacheConfig& cfg)
{
  if (cfg.ways == 0 || cfg.size_bytes == 0 || cfg.size_bytes % (std::uint64_t{cfg.ways} * kLineSize) != 0)
    throw ConfigError(cfg.name + ": size must be a multiple of ways x 64B");
  if (!std::has_single_bit(cfg.sets()))
    throw ConfigError(cfg.name + ": set count " + std::to_string(cfg.sets()) + " is not a power of two");
  if (cfg.mshr_entries == 0)
    throw ConfigError(cfg.name + ": mshr must be >= 1");
}

Cache::Cache(CacheConfig cfg, MemoryLevel* next, const TiprpConfig& tiprp)
    : cfg_((validate(cfg), std::move(cfg))), next_(next), sets_(cfg_.sets()), lines_(sets_ * cfg_.ways),
      policy_(make_policy(cfg_.replacement, sets_, tiprp)), mshr_(cfg_.mshr_entries)
{
}

CacheLine* Cache::lookup(std::uint64_t line)
{
  for (auto& l : set_span(set_index(line)))
    if (l.valid && l.tag == line)
      return &l;
  return nullptr;
}

const CacheLine* Cache::find_line(std::uint64_t line) const
{
  for (const auto& l : set_lines(set_index(line)))
    if (l.valid && l.tag == line)
      return &l;
  return nullptr;
}

bool Cache::in_flight(std::uint64_t line) const
{
  const auto& es = mshr_.entries();
  return std::any_of(es.begin(), es.end(), [line](const auto& e) { return e.key == line; });
}

bool Cache::contains(std::uint64_t line) const { return find_line(line) != nullptr || in_flight(line); }

std::size_t Cache::evict_victim(std::size_t set_index)
{
  auto lines = set_span(set_index);
  for (std::size_t w = 0; w < lines.size(); ++w)
    if (!lines[w].valid)
      return w;
  return policy_->victim(set_index, lines);
}

void Cache::install(std::uint64_t line, bool pb, bool force, Cycle ready)
{
  const std::size_t set = set_index(line);
  FillVerdict verdict = policy_->on_fill(set, pb);
  if (verdict.bypass && !force) {
    ++stats_.bypasses;
    return;
  }
  auto lines = set_span(set);
  const std::size_t way = evict_victim(set);
  CacheLine& slot = lines[way];
  if (slot.valid) {
    policy_->on_evict(set, slot);
    ++stats_.evictions;
    if (slot.pb) {
      ++stats_.pb_evictions;
      stats_.pb_evictions_unused += slot.demand_served == 0 ? 1 : 0;
      stats_.reuse.add(slot.demand_served);
    }
  }
  slot = CacheLine{line, true, pb, verdict.bypass ? kLongRrpv : verdict.rrpv, ++clock_, 0, ready};
  ++stats_.fills;
  stats_.pb_fills += pb ? 1 : 0;
}

AccessResult Cache::access(const MemRequest& req)
{
  Cycle t = req.cycle;
  mshr_.retire(t);
  const std::size_t set = set_index(req.line);
  const bool demand = !is_prefetch(req.cls);
  policy_->on_access(set);
  if (req.cls == AccessClass::Translation)
    ++stats_.translation_accesses;
  if (!demand)
    ++stats_.demand.prefetch_accesses;

  if (auto* e = mshr_.find(req.line)) {
    mshr_.note_merge();
    const Cycle ready = std::max(e->ready, t + cfg_.latency);
    if (CacheLine* l = lookup(req.line)) {
      l->lru_stamp = ++clock_;
      policy_->on_hit(set, *l, false);
      if (demand && l->pb)
        ++l->demand_served;
    }
    if (demand)
      stats_.demand.demand_miss(ready - t, true);
    else
      ++stats_.demand.prefetch_hits;
    return {AccessOutcome::MergedInFlight, ready};
  }

  if (CacheLine* l = lookup(req.line)) {
    l->lru_stamp = ++clock_;
    if (l->ready > t + cfg_.latency) {
      // Fill still in flight past its MSHR entry's lazy retirement.
      mshr_.note_merge();
      policy_->on_hit(set, *l, false);
      if (demand) {
        stats_.demand.demand_miss(l->ready - t, true);
        if (l->pb)
          ++l->demand_served;
      } else {
        ++stats_.demand.prefetch_hits;
      }
      return {AccessOutcome::MergedInFlight, l->ready};
    }
    policy_->on_hit(set, *l, demand);
    if (demand) {
      stats_.demand.demand_hit();
      if (l->pb)
        ++l->demand_served;
    } else {
      ++stats_.demand.prefetch_hits;
    }
    return {AccessOutcome::Hit, t + cfg_.latency};
  }

  if (demand && cfg_.ideal != IdealMode::None && side_buffer_.count(req.line) != 0) {
    install(req.line, true, true, t + cfg_.latency);
    if (CacheLine* l = lookup(req.line))
      l->demand_served = 1;
    ++stats_.side_buffer_hits;
    stats_.demand.demand_hit();
    return {AccessOutcome::Hit, t + cfg_.latency};
  }

  if (demand && ever_prefetched_.count(req.line) != 0)
    ++stats_.prefetched_line_misses;

  if (mshr_.full()) {
    if (!demand) {
      mshr_.note_drop();
      ++stats_.demand.prefetch_drops;
      return {AccessOutcome::Dropped, t};
    }
    mshr_.note_stall();
    t = std::max(t, mshr_.earliest_ready());
    mshr_.retire(t);
  }

  MemRequest down = req;
  down.cycle = t + cfg_.latency;
  const AccessResult below = next_->access(down);
  if (below.outcome == AccessOutcome::Dropped) {
    mshr_.note_drop();
    ++stats_.demand.prefetch_drops;
    return {AccessOutcome::Dropped, t};
  }

  const bool pb = req.pb && is_prefetch(req.cls);
  if (pb)
    ever_prefetched_.insert(req.line);
  const bool to_side_buffer = pb && (cfg_.ideal == IdealMode::All || (cfg_.ideal == IdealMode::PageCross && req.page_cross));
  if (to_side_buffer)
    side_buffer_.insert(req.line);
  else if (!(is_prefetch(req.cls) && !cfg_.fill_on_prefetch))
    install(req.line, pb, false, below.ready);

  mshr_.allocate(req.line, below.ready, pb);
  if (demand)
    stats_.demand.demand_miss(below.ready - req.cycle);
  else
    ++stats_.demand.prefetch_misses;
  return {AccessOutcome::MissStarted, below.ready};
}

void Cache::reset_stats()
{
  stats_ = CacheStats{};
  mshr_.reset_counters();
  if (auto* t = dynamic_cast<TiprpPolicy*>(policy_.get()))
    t->reset_selections();
}

void Cache::flush_reuse()
{
  for (auto& l : lines_)
    if (l.valid && l.pb)
      stats_.reuse.add(l.demand_served);
}

} // namespace ipcat
