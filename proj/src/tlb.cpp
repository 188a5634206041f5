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


#include "ipcat/tlb.hpp"

#include <algorithm>
#include <cassert>

namespace ipcat
{

TlbEntry make_tlb_entry(const PageMapping& m)
{
  // attr: present | user | (large ? PS : 0)
  const std::uint8_t attr = m.page_size == PageSize::k2M ? 0x85 : 0x05;
  return TlbEntry{m.vpn, m.ppn, m.page_size, attr, 0, true};
}

SetAssocTlb::SetAssocTlb(std::string name, std::size_t entries, std::size_t ways)
    : name_(std::move(name)), sets_(ways == 0 ? 0 : entries / ways), ways_(ways), entries_(entries)
{
  if (ways == 0 || entries == 0 || entries % ways != 0)
    throw ConfigError(name_ + ": entries must be a positive multiple of ways");
}

TlbEntry* SetAssocTlb::find(std::uint64_t vpn, PageSize ps)
{
  return const_cast<TlbEntry*>(std::as_const(*this).find(vpn, ps));
}

const TlbEntry* SetAssocTlb::find(std::uint64_t vpn, PageSize ps) const
{
  const std::size_t base = set_of(vpn) * ways_;
  for (std::size_t w = 0; w < ways_; ++w) {
    const auto& e = entries_[base + w];
    if (e.valid && e.vpn == vpn && e.page_size == ps)
      return &e;
  }
  return nullptr;
}

const TlbEntry* SetAssocTlb::probe(std::uint64_t vaddr) const
{
  if (const auto* e = find(vaddr >> page_shift(PageSize::k4K), PageSize::k4K))
    return e;
  return find(vaddr >> page_shift(PageSize::k2M), PageSize::k2M);
}

const TlbEntry* SetAssocTlb::lookup(std::uint64_t vaddr)
{
  const TlbEntry* hit = probe(vaddr);
  if (hit != nullptr)
    const_cast<TlbEntry*>(hit)->lru_stamp = ++clock_;
  return hit;
}

bool SetAssocTlb::contains(std::uint64_t vpn, PageSize ps) const { return find(vpn, ps) != nullptr; }

bool SetAssocTlb::touch(std::uint64_t vpn, PageSize ps)
{
  if (auto* e = find(vpn, ps)) {
    e->lru_stamp = ++clock_;
    return true;
  }
  return false;
}

std::optional<TlbEntry> SetAssocTlb::insert(const TlbEntry& entry)
{
  if (auto* e = find(entry.vpn, entry.page_size)) {
    *e = entry;
    e->valid = true;
    e->lru_stamp = ++clock_;
    return std::nullopt;
  }
  const std::size_t base = set_of(entry.vpn) * ways_;
  TlbEntry* slot = nullptr;
  for (std::size_t w = 0; w < ways_; ++w) {
    auto& e = entries_[base + w];
    if (!e.valid) {
      slot = &e;
      break;
    }
    if (slot == nullptr || e.lru_stamp < slot->lru_stamp)
      slot = &e;
  }
  std::optional<TlbEntry> victim;
  if (slot->valid)
    victim = *slot;
  *slot = entry;
  slot->valid = true;
  slot->lru_stamp = ++clock_;
  return victim;
}

bool SetAssocTlb::invalidate(std::uint64_t vpn, PageSize ps)
{
  if (auto* e = find(vpn, ps)) {
    e->valid = false;
    return true;
  }
  return false;
}

std::size_t SetAssocTlb::occupancy() const
{
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const TlbEntry& e) { return e.valid; }));
}

std::vector<std::pair<std::uint64_t, PageSize>> SetAssocTlb::contents() const
{
  std::vector<std::pair<std::uint64_t, PageSize>> out;
  for (const auto& e : entries_)
    if (e.valid)
      out.emplace_back(e.vpn, e.page_size);
  std::sort(out.begin(), out.end());
  return out;
}

void validate(const TlbConfig& cfg)
{
  auto check = [](const char* name, const TlbGeometry& g) {
    if (g.entries == 0 || g.ways == 0 || g.entries % g.ways != 0)
      throw ConfigError(std::string(name) + ": entries must be a positive multiple of ways");
    if (g.mshr == 0)
      throw ConfigError(std::string(name) + ": mshr must be >= 1");
  };
  check("tlb.itlb", cfg.itlb);
  check("tlb.dtlb", cfg.dtlb);
  check("tlb.stlb", cfg.stlb);
  const auto& t = cfg.tpb;
  if (t.organization == TpbOrganization::Standalone) {
    if (t.entries < 8 || t.entries > 128)
      throw ConfigError("tpb.entries must be in [8,128]");
    if (t.ways == 0 || t.entries % t.ways != 0)
      throw ConfigError("tpb.ways must divide tpb.entries");
  } else if (t.extra_sets != 4 && t.extra_sets != 8) {
    throw ConfigError("tpb.extra_sets must be 4 or 8");
  }
}

namespace
{

std::uint64_t mshr_key(const PageMapping& m) { return (m.vpn << 1) | (m.page_size == PageSize::k2M ? 1u : 0u); }

} // namespace

TranslationUnit::TranslationUnit(TlbConfig cfg, PageTable& table, PageWalker& walker, PageWalker::MemoryPort port)
    : table_(table), walker_(walker), port_(std::move(port)), cfg_((validate(cfg), cfg)),
      itlb_("itlb", cfg_.itlb.entries, cfg_.itlb.ways), dtlb_("dtlb", cfg_.dtlb.entries, cfg_.dtlb.ways),
      stlb_("stlb", cfg_.stlb.entries, cfg_.stlb.ways),
      tpb_("tpb", cfg_.tpb.capacity(cfg_.stlb.ways), cfg_.tpb.associativity(cfg_.stlb.ways)), itlb_mshr_(cfg_.itlb.mshr),
      dtlb_mshr_(cfg_.dtlb.mshr), stlb_mshr_(cfg_.stlb.mshr)
{
}

std::optional<TlbEntry> TranslationUnit::tlb_lookup(Structure s, std::uint64_t vaddr)
{
  SetAssocTlb& t = s == Structure::Itlb ? itlb_ : s == Structure::Dtlb ? dtlb_ : stlb_;
  if (const auto* e = t.lookup(vaddr))
    return *e;
  return std::nullopt;
}

std::optional<TlbEntry> TranslationUnit::tpb_lookup(std::uint64_t vaddr, Requester requester)
{
  ++stats_.tpb_lookups;
  if (requester != Requester::L1IPrefetch)
    ++stats_.tpb_lookups_demand;
  const TlbEntry* hit = tpb_.lookup(vaddr);
  if (hit == nullptr)
    return std::nullopt;
  TlbEntry e = *hit;
  tpb_.invalidate(e.vpn, e.page_size);
  stlb_.insert(e);
  if (requester == Requester::L1IPrefetch)
    ++stats_.tpb_hits_prefetch;
  else
    ++stats_.tpb_hits_demand;
  return e;
}

void TranslationUnit::tpb_fill(const TlbEntry& entry, bool cb)
{
  assert(cb && "tPB fills must originate from cb=1 walks");
  if (!cb) {
    ++stats_.tpb_fills_without_cb;
    return;
  }
  ++stats_.tpb_fills;
  if (tpb_.insert(entry))
    ++stats_.tpb_evictions;
  itlb_.insert(entry);
}

TranslationResult TranslationUnit::resolve(const TranslationRequest& req)
{
  const bool instr = req.requester != Requester::DemandData;
  const bool demand = req.requester != Requester::L1IPrefetch;
  SetAssocTlb& first = instr ? itlb_ : dtlb_;
  auto& first_mshr = instr ? itlb_mshr_ : dtlb_mshr_;
  const TlbGeometry& first_geo = instr ? cfg_.itlb : cfg_.dtlb;
  StructureStats& first_stats = instr ? stats_.itlb : stats_.dtlb;

  TranslationResult out;
  out.mapping = table_.translate(req.vaddr);
  const std::uint64_t key = mshr_key(out.mapping);
  TlbEntry entry = make_tlb_entry(out.mapping);

  Cycle t = req.cycle;
  first_mshr.retire(t);
  stlb_mshr_.retire(t);

  auto finish = [&](Cycle ready, TranslationPath path) {
    out.latency = ready - req.cycle;
    out.path = path;
    return out;
  };
  auto first_miss = [&](Cycle latency, bool merged) {
    if (demand)
      first_stats.demand_miss(latency, merged);
    else
      ++first_stats.prefetch_misses;
  };
  auto stlb_miss = [&](Cycle latency, bool merged) {
    if (demand)
      stats_.stlb.demand_miss(latency, merged);
    else
      ++stats_.stlb.prefetch_misses;
  };

  if (!demand)
    ++first_stats.prefetch_accesses;

  // First level: in-flight merge, then array lookup.
  if (auto* e = first_mshr.find(key)) {
    first_mshr.note_merge();
    first.touch(entry.vpn, entry.page_size);
    const Cycle ready = std::max(e->ready, t + first_geo.latency);
    first_miss(ready - t, true);
    return finish(ready, TranslationPath::FirstLevelMerge);
  }
  if (const auto* hit = first.lookup(req.vaddr)) {
    if (demand)
      first_stats.demand_hit();
    else
      ++first_stats.prefetch_hits;
    return finish(std::max(t + first_geo.latency, hit->ready), TranslationPath::FirstLevelHit);
  }
  if (first_mshr.full()) {
    if (!demand) {
      first_mshr.note_drop();
      ++first_stats.prefetch_drops;
      ++stats_.prefetch_drops;
      out.path = TranslationPath::Dropped;
      return out;
    }
    first_mshr.note_stall();
    t = std::max(t, first_mshr.earliest_ready());
    first_mshr.retire(t);
    stlb_mshr_.retire(t);
  }

  const Cycle at_stlb = t + first_geo.latency;
  const Cycle stlb_done = at_stlb + cfg_.stlb.latency;
  if (!demand)
    ++stats_.stlb.prefetch_accesses;

  auto complete = [&](Cycle ready, TranslationPath path) {
    entry.ready = ready;
    first.insert(entry);
    first_mshr.allocate(key, ready, {});
    first_miss(ready - req.cycle, false);
    return finish(ready, path);
  };

  if (auto* e = stlb_mshr_.find(key)) {
    stlb_mshr_.note_merge();
    stlb_.touch(entry.vpn, entry.page_size);
    const Cycle ready = std::max(e->ready, stlb_done);
    stlb_miss(ready - at_stlb, true);
    if (demand)
      ++stats_.stlb_effective_misses;
    return complete(ready, TranslationPath::StlbMerge);
  }
  if (const auto* hit = stlb_.lookup(req.vaddr)) {
    if (demand)
      stats_.stlb.demand_hit();
    else
      ++stats_.stlb.prefetch_hits;
    return complete(std::max(stlb_done, hit->ready), TranslationPath::StlbHit);
  }

  Cycle walk_start = stlb_done;
  if (instr && cfg_.tpb.enabled) {
    walk_start += cfg_.tpb.probe_latency();
    if (auto hit = tpb_lookup(req.vaddr, req.requester)) {
      const Cycle ready = std::max(walk_start, hit->ready);
      stlb_miss(ready - at_stlb, false);
      return complete(ready, TranslationPath::TpbHit);
    }
  }

  if (req.free_translation && req.page_cross && req.requester == Requester::L1IPrefetch) {
    ++stats_.free_fills;
    entry.ready = stlb_done;
    stlb_.insert(entry);
    stlb_miss(stlb_done - at_stlb, false);
    return complete(stlb_done, TranslationPath::FreeFill);
  }

  if (stlb_mshr_.full()) {
    if (!demand) {
      stlb_mshr_.note_drop();
      ++stats_.stlb.prefetch_drops;
      ++stats_.prefetch_drops;
      out.path = TranslationPath::Dropped;
      return out;
    }
    stlb_mshr_.note_stall();
    const Cycle freed = stlb_mshr_.earliest_ready();
    if (freed > walk_start) {
      stats_.demand_stall_cycles += freed - walk_start;
      walk_start = freed;
    }
    stlb_mshr_.retire(walk_start);
  }

  const bool cb = req.requester == Requester::L1IPrefetch && req.page_cross;
  const WalkResult walk = walker_.walk(req.vaddr, walk_start, port_);
  const Cycle ready = walk_start + walk.latency;
  stlb_mshr_.allocate(key, ready, StlbMshrPayload{entry.vpn, entry.page_size, cb, demand});
  if (cb)
    ++stats_.cb_entries;
  if (demand) {
    ++stats_.demand_walks;
    stats_.demand_walk_cycles += walk.latency;
    ++stats_.stlb_effective_misses;
  } else {
    ++stats_.prefetch_walks;
  }
  stlb_miss(ready - at_stlb, false);

  entry.ready = ready;
  if (cb && cfg_.tpb.enabled)
    tpb_fill(entry, cb);
  else
    stlb_.insert(entry);
  return complete(ready, TranslationPath::Walk);
}

void TranslationUnit::reset_stats()
{
  stats_ = {};
  itlb_mshr_.reset_counters();
  dtlb_mshr_.reset_counters();
  stlb_mshr_.reset_counters();
  walker_.reset_stats();
}

void TranslationUnit::drain()
{
  itlb_mshr_.retire_all();
  dtlb_mshr_.retire_all();
  stlb_mshr_.retire_all();
}

bool TranslationUnit::exclusive() const
{
  for (const auto& [vpn, ps] : tpb_.contents())
    if (stlb_.contains(vpn, ps))
      return false;
  return true;
}

} // namespace ipcat
