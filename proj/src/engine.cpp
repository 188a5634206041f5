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


#include "ipcat/engine.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace ipcat
{

namespace
{

unsigned log2_ceil(std::uint64_t n) { return n <= 1 ? 0u : static_cast<unsigned>(std::bit_width(n - 1)); }

LevelSummary summarize(const StructureStats& s, std::uint64_t instructions)
{
  LevelSummary out{s.accesses, s.hits, s.misses, 0.0, s.avg_miss_latency()};
  if (instructions > 0)
    out.mpki = 1000.0 * static_cast<double>(s.misses) / static_cast<double>(instructions);
  return out;
}

nlohmann::ordered_json to_ordered(const StatsReport& r)
{
  nlohmann::ordered_json j;
  j["records"] = r.records;
  j["instructions"] = r.instructions;
  j["instruction_lines"] = r.instruction_lines;
  j["cycles"] = r.cycles;
  j["ipc_proxy"] = r.ipc_proxy;
  const std::pair<const char*, const LevelSummary*> levels[] = {{"itlb", &r.itlb}, {"dtlb", &r.dtlb}, {"stlb", &r.stlb}, {"l1i", &r.l1i},
                                                               {"l1d", &r.l1d},   {"l2c", &r.l2c},   {"llc", &r.llc}};
  for (const auto& [name, s] : levels) {
    const std::string p(name);
    j[p + "_accesses"] = s->accesses;
    j[p + "_hits"] = s->hits;
    j[p + "_misses"] = s->misses;
    j[p + "_mpki"] = s->mpki;
    j[p + "_avg_miss_latency"] = s->avg_miss_latency;
  }
  const TranslationStats& t = r.translation;
  j["stlb_effective_misses"] = t.stlb_effective_misses;
  j["stlb_effective_mpki"] = r.stlb_effective_mpki;
  j["demand_walks"] = t.demand_walks;
  j["prefetch_walks"] = t.prefetch_walks;
  j["demand_walk_cycles"] = t.demand_walk_cycles;
  j["walk_memory_refs"] = r.walker.memory_refs;
  j["tpb_lookups"] = t.tpb_lookups;
  j["tpb_hits_demand"] = t.tpb_hits_demand;
  j["tpb_hits_prefetch"] = t.tpb_hits_prefetch;
  j["tpb_hit_rate"] = t.tpb_hit_rate();
  j["tpb_fills"] = t.tpb_fills;
  j["tpb_fills_without_cb"] = t.tpb_fills_without_cb;
  j["tpb_evictions"] = t.tpb_evictions;
  j["free_translation_fills"] = t.free_fills;
  j["cb_walks"] = t.cb_entries;
  j["translation_stall_cycles"] = t.demand_stall_cycles;
  const PrefetchStats& p = r.prefetch;
  j["prefetch_triggers"] = p.triggers;
  j["prefetch_emitted"] = p.emitted;
  j["prefetch_page_cross"] = p.page_cross;
  j["prefetch_discarded_page_cross"] = p.discarded_page_cross;
  j["prefetch_filtered_resident"] = p.filtered_resident;
  j["prefetch_suppressed_duplicate"] = p.suppressed_duplicate;
  j["prefetch_wrong"] = p.wrong;
  j["prefetch_translation_drops"] = r.prefetch_translation_drops;
  j["prefetch_cache_drops"] = r.prefetch_cache_drops;
  j["prefetch_fills_issued"] = r.prefetch_fills_issued;
  const CacheStats& c = r.l2c_detail;
  j["l2c_translation_accesses"] = c.translation_accesses;
  j["l2c_pb_fills"] = c.pb_fills;
  j["l2c_bypasses"] = c.bypasses;
  j["l2c_pb_evictions"] = c.pb_evictions;
  j["l2c_side_buffer_hits"] = c.side_buffer_hits;
  j["l2c_prefetched_line_misses"] = c.prefetched_line_misses;
  j["memory_accesses"] = r.memory_accesses;
  j["prefetched_line_reuse_histogram_0"] = r.reuse.buckets[0];
  j["prefetched_line_reuse_histogram_1_8"] = r.reuse.buckets[1];
  j["prefetched_line_reuse_histogram_9_128"] = r.reuse.buckets[2];
  j["prefetched_line_reuse_histogram_gt128"] = r.reuse.buckets[3];
  j["policy_selection_histogram_pip"] = r.selections.pip;
  j["policy_selection_histogram_npip"] = r.selections.npip;
  j["policy_selection_histogram_bip"] = r.selections.bip;
  j["psel1"] = r.psel1;
  j["psel2"] = r.psel2;
  j["storage_tpb_bits"] = r.storage.tpb_bits;
  j["storage_cb_bits"] = r.storage.cb_bits;
  j["storage_psel_bits"] = r.storage.psel_bits;
  j["storage_overhead_bits"] = r.storage.enabled_bits;
  return j;
}

} // namespace

StorageBreakdown storage_overhead(const SimConfig& cfg)
{
  const TlbConfig& tlb = cfg.hierarchy.tlb;
  const std::uint64_t entries = tlb.tpb.capacity(tlb.stlb.ways);
  const std::uint64_t ways = tlb.tpb.associativity(tlb.stlb.ways);
  const std::uint64_t sets = ways == 0 ? 1 : entries / ways;
  const unsigned vpn_bits = kVaddrBits - page_shift(PageSize::k4K);
  const unsigned ppn_bits = kPaddrBits - page_shift(PageSize::k4K);
  StorageBreakdown s;
  s.tpb_entry_bits = (vpn_bits - log2_ceil(sets)) + ppn_bits + 8 + 1 + 1 + log2_ceil(ways);
  s.tpb_bits = s.tpb_entry_bits * entries;
  s.cb_bits = tlb.stlb.mshr;
  s.psel_bits = 2ull * cfg.hierarchy.tiprp.psel_bits;
  if (tlb.tpb.enabled)
    s.enabled_bits += s.tpb_bits + s.cb_bits;
  if (cfg.hierarchy.l2c.replacement == ReplacementKind::Tiprp)
    s.enabled_bits += s.psel_bits;
  return s;
}

std::string StatsReport::to_json(int indent) const { return to_ordered(*this).dump(indent); }

std::vector<std::string> StatsReport::csv_columns()
{
  std::vector<std::string> out;
  const auto j = to_ordered(StatsReport{});
  for (const auto& item : j.items())
    out.push_back(item.key());
  return out;
}

std::string StatsReport::csv_header()
{
  std::string out;
  for (const auto& c : csv_columns())
    out += (out.empty() ? "" : ",") + c;
  return out;
}

std::string StatsReport::csv_row() const
{
  std::string out;
  bool first = true;
  const auto j = to_ordered(*this);
  for (const auto& item : j.items()) {
    out += (first ? "" : ",") + item.value().dump();
    first = false;
  }
  return out;
}

namespace
{

HierarchyConfig hierarchy_for(const SimConfig& cfg)
{
  HierarchyConfig h = cfg.hierarchy;
  h.llc.fill_on_prefetch = cfg.prefetch.fill_llc;
  return h;
}

} // namespace

Simulator::Simulator(const SimConfig& cfg, std::span<const TraceRecord> trace)
    : cfg_((validate(cfg), cfg)), trace_(trace), sys_(std::make_unique<MemorySystem>(hierarchy_for(cfg_))), prefetcher_(cfg_.prefetch)
{
  const auto [warm, measure] = record_window(cfg_, trace.size());
  warmup_ = warm;
  end_ = warm + measure;
  line_pos_.assign(trace.size(), 0);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].kind == RecordKind::IFetch) {
      const std::uint64_t line = trace[i].vaddr & ~(kLineSize - 1);
      if (lines_.empty() || lines_.back() != line)
        lines_.push_back(line);
    }
    line_pos_[i] = static_cast<std::uint32_t>(lines_.empty() ? 0 : lines_.size() - 1);
  }
  if (warmup_ == 0)
    start_measurement();
}

void Simulator::start_measurement()
{
  sys_->reset_stats();
  prefetcher_.reset_stats();
  measuring_ = true;
  measure_start_ = now_;
  instructions_ = instruction_lines_ = 0;
  prefetch_translation_drops_ = prefetch_cache_drops_ = prefetch_fills_issued_ = 0;
}

void Simulator::replay_until(Cycle t)
{
  while (!events_.empty() && events_.top().at <= t) {
    const PendingPrefetch fill = events_.top().fill;
    events_.pop();
    ++prefetch_fills_issued_;
    if (sys_->fill_prefetch(fill).outcome == AccessOutcome::Dropped)
      ++prefetch_cache_drops_;
  }
}

void Simulator::fetch(const TraceRecord& r)
{
  ++instructions_;
  const std::uint64_t line = r.vaddr & ~(kLineSize - 1);
  if (line == last_line_)
    return;
  last_line_ = line;
  ++instruction_lines_;
  now_ += 1;

  TranslationUnit& tlbs = sys_->translation();
  const TranslationResult tr = tlbs.resolve(TranslationRequest{r.vaddr, Requester::DemandIFetch, false, false, now_});
  const Cycle t = now_ + tr.latency - std::min<Cycle>(tr.latency, cfg_.hierarchy.tlb.itlb.latency);
  const AccessResult a = sys_->l1i().access(MemRequest{line_of(tr.mapping.paddr(r.vaddr)), AccessClass::DemandCode, false, false, t});
  const Cycle done = a.outcome == AccessOutcome::Hit ? t : a.ready;
  now_ = std::max(now_, done);

  if (!cfg_.prefetch.enabled)
    return;
  const std::size_t idx = line_pos_[pos_] + 1;
  const std::size_t take = std::min(cfg_.prefetch.lookahead, lines_.size() - std::min(idx, lines_.size()));
  const std::span<const std::uint64_t> window(lines_.data() + std::min(idx, lines_.size()), take);
  PageTable& table = sys_->page_table();
  Cache& l1i = sys_->l1i();
  auto resident = [&](std::uint64_t vaddr) { return l1i.contains(line_of(table.translate(vaddr).paddr(vaddr))); };
  for (const PrefetchRequest& req : prefetcher_.emit(window, r.vaddr, tr.mapping.page_size, now_, resident)) {
    const auto pending = sys_->translate_prefetch(req, cfg_.prefetch.mode);
    if (!pending) {
      ++prefetch_translation_drops_;
      continue;
    }
    events_.push(Event{pending->at, seq_++, *pending});
  }
}

void Simulator::data(const TraceRecord& r)
{
  const Requester who = Requester::DemandData;
  const TranslationResult tr = sys_->translation().resolve(TranslationRequest{r.vaddr, who, false, false, now_});
  const Cycle t = now_ + tr.latency - std::min<Cycle>(tr.latency, cfg_.hierarchy.tlb.dtlb.latency);
  const AccessResult a = sys_->l1d().access(MemRequest{line_of(tr.mapping.paddr(r.vaddr)), AccessClass::DemandData, false, false, t});
  const Cycle total = a.ready - now_;
  const Cycle hidden = cfg_.hierarchy.l1d.latency;
  if (total > hidden)
    now_ += static_cast<Cycle>(std::llround(cfg_.data_overlap * static_cast<double>(total - hidden)));
}

void Simulator::step()
{
  if (done())
    return;
  if (pos_ == warmup_ && !measuring_)
    start_measurement();
  replay_until(now_);
  const TraceRecord& r = trace_[pos_];
  if (r.kind == RecordKind::IFetch)
    fetch(r);
  else
    data(r);
  ++pos_;
}

StatsReport Simulator::finish()
{
  while (!done())
    step();
  if (!measuring_)
    start_measurement();
  const Cycle end = now_;
  replay_until(std::numeric_limits<Cycle>::max());
  sys_->drain();
  sys_->l2c().flush_reuse();
  StatsReport r = report();
  r.cycles = end - measure_start_;
  r.ipc_proxy = r.cycles == 0 ? 0.0 : static_cast<double>(r.instructions) / static_cast<double>(r.cycles);
  return r;
}

StatsReport Simulator::report() const
{
  StatsReport r;
  MemorySystem& s = *sys_;
  r.records = end_ - warmup_;
  r.instructions = instructions_;
  r.instruction_lines = instruction_lines_;
  const TranslationStats& t = s.translation().stats();
  r.translation = t;
  r.walker = s.walker().stats();
  r.itlb = summarize(t.itlb, instructions_);
  r.dtlb = summarize(t.dtlb, instructions_);
  r.stlb = summarize(t.stlb, instructions_);
  r.stlb_effective_mpki = instructions_ == 0 ? 0.0 : 1000.0 * static_cast<double>(t.stlb_effective_misses) / static_cast<double>(instructions_);
  r.l1i = summarize(s.l1i().stats().demand, instructions_);
  r.l1d = summarize(s.l1d().stats().demand, instructions_);
  r.l2c = summarize(s.l2c().stats().demand, instructions_);
  r.llc = summarize(s.llc().stats().demand, instructions_);
  r.l2c_detail = s.l2c().stats();
  r.reuse = r.l2c_detail.reuse;
  r.prefetch = prefetcher_.stats();
  r.prefetch_translation_drops = prefetch_translation_drops_;
  r.prefetch_cache_drops = prefetch_cache_drops_;
  r.prefetch_fills_issued = prefetch_fills_issued_;
  r.memory_accesses = s.memory().accesses();
  if (const auto* tiprp = dynamic_cast<const TiprpPolicy*>(&s.l2c().policy())) {
    r.selections = tiprp->selections();
    r.psel1 = tiprp->state().psel1();
    r.psel2 = tiprp->state().psel2();
  }
  r.storage = storage_overhead(cfg_);
  return r;
}

StatsReport run(const SimConfig& cfg, std::span<const TraceRecord> trace)
{
  Simulator sim(cfg, trace);
  return sim.finish();
}

StatsReport run(const SimConfig& cfg)
{
  if (cfg.trace.empty())
    throw ConfigError("sim.trace is not set");
  const auto records = read_trace(cfg.trace);
  return run(cfg, records);
}

Comparison compare(const SimConfig& base, const SimConfig& variant, std::span<const TraceRecord> trace)
{
  if (!base.trace.empty() && !variant.trace.empty() && base.trace != variant.trace)
    throw ConfigError("compare: configs reference different traces (" + base.trace + ", " + variant.trace + ")");
  auto reports = run_all({[&] { return run(base, trace); }, [&] { return run(variant, trace); }});
  Comparison c{std::move(reports[0]), std::move(reports[1]), 1.0};
  if (c.variant.cycles > 0)
    c.speedup = static_cast<double>(c.base.cycles) / static_cast<double>(c.variant.cycles);
  return c;
}

double geomean(std::span<const double> values)
{
  if (values.empty())
    return 0.0;
  double log_sum = 0.0;
  for (double v : values)
    log_sum += std::log(v);
  return std::exp(log_sum / static_cast<double>(values.size()));
}

std::vector<SweepRow> sweep(const SimConfig& cfg, std::string_view key, std::span<const std::string> values,
                            std::span<const TraceRecord> trace)
{
  std::vector<SimConfig> configs;
  for (const auto& v : values) {
    SimConfig c = cfg;
    apply_setting(c, key, v);
    validate(c);
    configs.push_back(std::move(c));
  }
  std::vector<std::function<StatsReport()>> jobs;
  for (const auto& c : configs)
    jobs.emplace_back([&c, trace] { return run(c, trace); });
  auto reports = run_all(jobs);
  std::vector<SweepRow> out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out.push_back(SweepRow{values[i], std::move(reports[i])});
  return out;
}

std::size_t worker_threads()
{
  if (const char* env = std::getenv("IPCAT_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1)
      return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<StatsReport> run_all(const std::vector<std::function<StatsReport()>>& jobs)
{
  std::vector<StatsReport> out(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        out[i] = jobs[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min(worker_threads(), jobs.size());
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n; ++i)
      pool.emplace_back(worker);
    for (auto& th : pool)
      th.join();
  }
  for (const auto& e : errors)
    if (e)
      std::rethrow_exception(e);
  return out;
}

} // namespace ipcat
