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


#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "ipcat/config.hpp"

using namespace ipcat;

namespace
{

std::string error_of(const std::function<void()>& f)
{
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST(Config, DefaultsMatchBaselineHierarchy)
{
  const SimConfig c;
  const HierarchyConfig& h = c.hierarchy;
  EXPECT_EQ(h.l1i.sets(), 64u);
  EXPECT_EQ(h.l2c.sets(), 1024u);
  EXPECT_EQ(h.llc.sets(), 2048u);
  EXPECT_EQ(h.tlb.stlb.entries, 1536u);
  EXPECT_EQ(h.tlb.stlb.ways, 12u);
  EXPECT_EQ(h.tlb.stlb.mshr, 16u);
  EXPECT_EQ(h.tlb.tpb.entries, 64u);
  EXPECT_EQ(h.tiprp.psel_bits, 10u);
  EXPECT_EQ(h.l2c.replacement, ReplacementKind::Lru);
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, ParsesKeysAndForms)
{
  const auto c = parse_config(R"(
# comment line
tpb.enabled = true
tpb.entries = 32         # stays fully associative
l2c.replacement = TIPRP
cache.l2c = {size: 512KB, ways: 8, latency: 12cc, mshr: 48}
tlb.stlb = {2048, 16, 9, 20}
vm.psc_sizes = [2, 4, 16, 64]
vm.large_page_fraction = 0.5
tiprp.leaders = [16, 8, 8]
tiprp.t1 = 600
tiprp.t2 = auto
prefetch.mode = no-page-cross
prefetch.inaccuracy = 0.1
sim.warmup_records = 10
sim.measure_records = 20
)");
  const auto& h = c.hierarchy;
  EXPECT_TRUE(h.tlb.tpb.enabled);
  EXPECT_EQ(h.tlb.tpb.entries, 32u);
  EXPECT_EQ(h.tlb.tpb.ways, 32u);
  EXPECT_EQ(h.l2c.replacement, ReplacementKind::Tiprp);
  EXPECT_EQ(h.l2c.size_bytes, 512u * 1024u);
  EXPECT_EQ(h.l2c.ways, 8u);
  EXPECT_EQ(h.l2c.latency, 12u);
  EXPECT_EQ(h.l2c.mshr_entries, 48u);
  EXPECT_EQ(h.tlb.stlb.entries, 2048u);
  EXPECT_EQ(h.tlb.stlb.latency, 9u);
  EXPECT_EQ(h.vm.psc_sizes, (std::vector<std::size_t>{2, 4, 16, 64}));
  EXPECT_EQ(h.vm.large_page_fraction, 0.5);
  EXPECT_EQ(h.tiprp.leaders, (std::array<std::uint32_t, 3>{16, 8, 8}));
  EXPECT_EQ(h.tiprp.t1, 600);
  EXPECT_EQ(h.tiprp.t2, -1);
  EXPECT_EQ(c.prefetch.mode, PageCrossMode::NoPageCross);
  EXPECT_EQ(c.warmup_records, 10u);
  EXPECT_EQ(c.measure_records, 20u);
}

TEST(Config, SubKeysEditOneField)
{
  SimConfig c;
  apply_setting(c, "cache.l1i.ways", "4");
  apply_setting(c, "tlb.itlb.lat", "2");
  EXPECT_EQ(c.hierarchy.l1i.ways, 4u);
  EXPECT_EQ(c.hierarchy.l1i.size_bytes, 32u * 1024u);
  EXPECT_EQ(c.hierarchy.tlb.itlb.latency, 2u);
  EXPECT_EQ(get_setting(c, "cache.l1i.ways"), "4");
  EXPECT_EQ(get_setting(c, "cache.l1i.size"), "32768");
  EXPECT_EQ(get_setting(c, "tlb.itlb.lat"), "2");
}

TEST(Config, ErrorsCarrySourceAndLine)
{
  const std::string text = "tpb.enabled = true\n\nl2c.replacement = ship\n";
  const std::string msg = error_of([&] { parse_config(text, "exp.cfg"); });
  EXPECT_NE(msg.find("exp.cfg:3:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("l2c.replacement"), std::string::npos) << msg;

  EXPECT_NE(error_of([] { parse_config("just words\n", "a.cfg"); }).find("a.cfg:1:"), std::string::npos);
  EXPECT_NE(error_of([] { parse_config("cache.l1i = {size: 32KB, colour: 3}\n"); }).find("colour"), std::string::npos);
  EXPECT_NE(error_of([] { parse_config("cache.l1i = {size: 32KB\n"); }).find("unbalanced"), std::string::npos);
  EXPECT_NE(error_of([] { parse_config("tpb.entries = many\n"); }).find("tpb.entries"), std::string::npos);
}

TEST(Config, UnknownKeyListsValidKeys)
{
  const std::string msg = error_of([] { parse_config("tpb.size = 64\n"); });
  EXPECT_NE(msg.find("unknown config key 'tpb.size'"), std::string::npos) << msg;
  for (const auto& key : config_keys())
    EXPECT_NE(msg.find(key), std::string::npos) << key;
}

TEST(Config, ValidationAfterParse)
{
  EXPECT_THROW(parse_config("tpb.entries = 256\n"), ConfigError);
  EXPECT_THROW(parse_config("cache.l2c.size = 1000\n"), ConfigError);
  EXPECT_THROW(parse_config("vm.levels = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("tiprp.t1 = 5000\n"), ConfigError);
  EXPECT_THROW(parse_config("sim.data_overlap = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("prefetch.inaccuracy = -0.1\n"), ConfigError);
  EXPECT_THROW(parse_config("sim.measure_records = 0\n"), ConfigError);
}

TEST(Config, FormatRoundTrips)
{
  SimConfig c;
  c.hierarchy.tlb.tpb.enabled = true;
  c.hierarchy.l2c.replacement = ReplacementKind::Tiprp;
  c.hierarchy.l2c.ideal = IdealMode::PageCross;
  c.prefetch.inaccuracy = 0.125;
  c.warmup_records = 7;
  const auto back = parse_config(format_config(c));
  EXPECT_EQ(format_config(back), format_config(c));
  EXPECT_TRUE(back.hierarchy.tlb.tpb.enabled);
  EXPECT_EQ(back.hierarchy.l2c.ideal, IdealMode::PageCross);
  EXPECT_EQ(back.warmup_records, 7u);
  EXPECT_FALSE(back.measure_records);
}

TEST(Config, LoadFromFile)
{
  const auto p = std::filesystem::temp_directory_path() / ("ipcat_cfg_" + std::to_string(::getpid()) + ".cfg");
  std::ofstream(p) << "tpb.enabled = yes\n";
  EXPECT_TRUE(load_config(p).hierarchy.tlb.tpb.enabled);
  EXPECT_THROW(load_config("/nonexistent/x.cfg"), std::ios_base::failure);
}

TEST(Scenarios, PresetsApply)
{
  for (const auto& name : scenario_names())
    EXPECT_NO_THROW(apply_overlay(SimConfig{}, scenario_overlay(name))) << name;
  const auto c = apply_overlay(SimConfig{}, scenario_overlay("ipcat"));
  EXPECT_TRUE(c.hierarchy.tlb.tpb.enabled);
  EXPECT_EQ(c.hierarchy.l2c.replacement, ReplacementKind::Tiprp);
  EXPECT_EQ(apply_overlay(SimConfig{}, scenario_overlay("ideal-l2c-all")).hierarchy.l2c.ideal, IdealMode::All);
  EXPECT_EQ(apply_overlay(SimConfig{}, scenario_overlay("free-translation")).prefetch.mode, PageCrossMode::FreeTranslation);
  const std::string msg = error_of([] { (void)scenario_overlay("turbo"); });
  EXPECT_NE(msg.find("turbo"), std::string::npos);
  EXPECT_NE(msg.find("tpb-only"), std::string::npos);
}
