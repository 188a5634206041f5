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


#include <set>

#include <gtest/gtest.h>

#include "ipcat/prefetch.hpp"
#include "ipcat/system.hpp"

using namespace ipcat;

namespace
{

std::vector<std::uint64_t> targets(const std::vector<PrefetchRequest>& v)
{
  std::vector<std::uint64_t> out;
  for (const auto& r : v)
    out.push_back(r.line_vaddr);
  return out;
}

} // namespace

TEST(Prefetcher, WindowThenNextLinesWithoutDuplicates)
{
  PrefetchEngine p({});
  const std::vector<std::uint64_t> window{0x1040, 0x1080};
  const auto out = p.emit(window, 0x1000, PageSize::k4K, 7);
  EXPECT_EQ(targets(out), (std::vector<std::uint64_t>{0x1040, 0x1080, 0x10c0, 0x1100}));
  for (const auto& r : out) {
    EXPECT_FALSE(r.is_page_cross);
    EXPECT_EQ(r.issue_cycle, 7u);
    EXPECT_EQ(r.trigger_vaddr, 0x1000u);
  }
  EXPECT_EQ(p.stats().candidates, 6u);
  EXPECT_EQ(p.stats().suppressed_duplicate, 2u);
}

TEST(Prefetcher, PageCrossModes)
{
  PrefetchConfig cfg;
  cfg.next_n = 1;
  const std::uint64_t last_line = 0x1fc0;

  cfg.mode = PageCrossMode::NoPageCross;
  PrefetchEngine none(cfg);
  EXPECT_TRUE(none.emit({}, last_line, PageSize::k4K, 0).empty());
  EXPECT_EQ(none.stats().discarded_page_cross, 1u);

  for (auto mode : {PageCrossMode::PermitPageCross, PageCrossMode::FreeTranslation}) {
    cfg.mode = mode;
    PrefetchEngine p(cfg);
    const auto out = p.emit({}, last_line, PageSize::k4K, 0);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].line_vaddr, 0x2000u);
    EXPECT_TRUE(out[0].is_page_cross);
  }

  cfg.mode = PageCrossMode::NoPageCross;
  PrefetchEngine large(cfg);
  const auto out = large.emit({}, last_line, PageSize::k2M, 0);
  ASSERT_EQ(out.size(), 1u); // same 2MB page
  EXPECT_FALSE(out[0].is_page_cross);
}

TEST(Prefetcher, ResidentLinesFiltered)
{
  PrefetchEngine p({});
  const std::set<std::uint64_t> resident{0x1080, 0x10c0};
  const auto out = p.emit({}, 0x1000, PageSize::k4K, 0, [&](std::uint64_t v) { return resident.count(v) != 0; });
  EXPECT_EQ(targets(out), (std::vector<std::uint64_t>{0x1040, 0x1100}));
  EXPECT_EQ(p.stats().filtered_resident, 2u);
}

TEST(Prefetcher, DuplicateHorizonIsFtqDepth)
{
  PrefetchConfig cfg;
  cfg.next_n = 0;
  cfg.ftq_entries = 2;
  PrefetchEngine p(cfg);
  const std::vector<std::uint64_t> a{0x1000}, b{0x2000}, c{0x3000};
  EXPECT_EQ(p.emit(a, 0, PageSize::k4K, 0).size(), 1u);
  EXPECT_EQ(p.emit(a, 0, PageSize::k4K, 0).size(), 0u);
  p.emit(b, 0, PageSize::k4K, 0);
  p.emit(c, 0, PageSize::k4K, 0);
  EXPECT_EQ(p.emit(a, 0, PageSize::k4K, 0).size(), 1u);
}

TEST(Prefetcher, LookaheadBoundsWindow)
{
  PrefetchConfig cfg;
  cfg.lookahead = 2;
  cfg.next_n = 0;
  PrefetchEngine p(cfg);
  const std::vector<std::uint64_t> w{0x1000, 0x2000, 0x3000};
  EXPECT_EQ(p.emit(w, 0, PageSize::k4K, 0).size(), 2u);
}

TEST(Prefetcher, WrongTargetsLandAhead)
{
  PrefetchConfig cfg;
  cfg.inaccuracy = 1.0;
  cfg.next_n = 8;
  PrefetchEngine p(cfg);
  const std::uint64_t cur = 0x40000;
  for (const auto& r : p.emit({}, cur, PageSize::k4K, 0)) {
    const std::uint64_t ahead = (r.line_vaddr >> 12) - (cur >> 12);
    EXPECT_GE(ahead, 1u);
    EXPECT_LE(ahead, 64u);
    EXPECT_EQ(r.line_vaddr % 64, 0u);
    EXPECT_TRUE(r.is_page_cross);
  }
  EXPECT_EQ(p.stats().wrong, 8u);
}

TEST(Prefetcher, SeededAndDisableable)
{
  PrefetchConfig cfg;
  cfg.inaccuracy = 0.5;
  cfg.next_n = 16;
  PrefetchEngine a(cfg), b(cfg);
  EXPECT_EQ(targets(a.emit({}, 0x40000, PageSize::k4K, 0)), targets(b.emit({}, 0x40000, PageSize::k4K, 0)));
  cfg.enabled = false;
  PrefetchEngine off(cfg);
  EXPECT_TRUE(off.emit({}, 0x40000, PageSize::k4K, 0).empty());
  EXPECT_EQ(off.stats().triggers, 0u);
}

TEST(Prefetcher, ModeNames)
{
  for (auto m : {PageCrossMode::NoPageCross, PageCrossMode::PermitPageCross, PageCrossMode::FreeTranslation})
    EXPECT_EQ(parse_page_cross_mode(to_string(m)), m);
  EXPECT_THROW(parse_page_cross_mode("sometimes"), ConfigError);
  PrefetchConfig cfg;
  cfg.inaccuracy = 1.5;
  EXPECT_THROW(validate(cfg), ConfigError);
}

TEST(IssuePrefetch, InPageTranslatedResidentLine)
{
  const HierarchyConfig h;
  MemorySystem sys(h);
  const std::uint64_t va = 0x401040;
  const auto tr = sys.translation().resolve({va, Requester::DemandIFetch, false, false, 0});
  sys.l1i().access({line_of(tr.mapping.paddr(va)), AccessClass::DemandCode, false, false, 0});

  const Cycle issue = 100000;
  const auto done = sys.issue_prefetch({va, 0x401000, false, issue}, PageCrossMode::PermitPageCross);
  ASSERT_TRUE(done);
  EXPECT_EQ(*done, issue + h.tlb.itlb.latency + h.l1i.latency);
}

TEST(IssuePrefetch, FreeTranslationSkipsWalk)
{
  const HierarchyConfig h;
  MemorySystem sys(h);
  const Cycle issue = 10;
  const auto done = sys.issue_prefetch({0x801000, 0x800fc0, true, issue}, PageCrossMode::FreeTranslation);
  ASSERT_TRUE(done);
  const Cycle translate = h.tlb.itlb.latency + h.tlb.stlb.latency;
  const Cycle fill = h.l1i.latency + h.l2c.latency + h.llc.latency + h.memory_latency;
  EXPECT_EQ(*done, issue + translate + fill);
  EXPECT_EQ(sys.walker().stats().walks, 0u);
  EXPECT_TRUE(sys.l1i().find_line(line_of(sys.page_table().translate(0x801000).paddr(0x801000)))->pb);
  EXPECT_TRUE(sys.l2c().find_line(line_of(sys.page_table().translate(0x801000).paddr(0x801000)))->pb);
}

TEST(IssuePrefetch, PageCrossWalkGoesToTpb)
{
  HierarchyConfig h;
  h.tlb.tpb.enabled = true;
  MemorySystem sys(h);
  const auto pending = sys.translate_prefetch({0x801000, 0x800fc0, true, 0}, PageCrossMode::PermitPageCross);
  ASSERT_TRUE(pending);
  EXPECT_TRUE(pending->page_cross);
  EXPECT_EQ(sys.translation().tpb().occupancy(), 1u);
  EXPECT_EQ(sys.translation().stlb().occupancy(), 0u);
  // Walk reads entered the L2C as translation traffic.
  EXPECT_EQ(sys.l2c().stats().translation_accesses, 5u);
}
