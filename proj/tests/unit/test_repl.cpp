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


#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "ipcat/cache.hpp"
#include "ipcat/repl.hpp"
#include "reference_models.hpp"

using namespace ipcat;

namespace
{

std::vector<CacheLine> make_set(std::initializer_list<std::pair<bool, int>> pb_rrpv)
{
  std::vector<CacheLine> v;
  std::uint64_t tag = 100;
  for (auto [pb, rrpv] : pb_rrpv)
    v.push_back(CacheLine{tag++, true, pb, static_cast<std::uint8_t>(rrpv)});
  return v;
}

std::vector<int> rrpvs(const std::vector<CacheLine>& set)
{
  std::vector<int> out;
  for (const auto& l : set)
    out.push_back(l.rrpv);
  return out;
}

} // namespace

TEST(Srrip, AgesUntilDistant)
{
  auto set = make_set({{false, 0}, {false, 1}, {false, 2}, {false, 2}});
  EXPECT_EQ(srrip_policy().on_evict(set), 2u);
  EXPECT_EQ(rrpvs(set), (std::vector<int>{1, 2, 3, 3}));
}

TEST(Srrip, PicksLeftmostDistantWithoutAgeing)
{
  auto set = make_set({{false, 0}, {false, 3}, {false, 3}, {false, 1}});
  EXPECT_EQ(srrip_policy().on_evict(set), 1u);
  EXPECT_EQ(rrpvs(set), (std::vector<int>{0, 3, 3, 1}));
}

TEST(Srrip, InsertAndPromote)
{
  EXPECT_EQ(srrip_policy().on_fill(true).rrpv, kLongRrpv);
  EXPECT_FALSE(srrip_policy().on_fill(true).bypass);
  CacheLine l{1, true, false, 2};
  srrip_policy().on_hit(l);
  EXPECT_EQ(l.rrpv, 0);
}

TEST(Srrip, CacheMatchesReference)
{
  FixedLatencyMemory mem(100);
  Cache c({"c", 1024, 4, 1, 8, ReplacementKind::Srrip}, &mem);
  ASSERT_EQ(c.num_sets(), 4u);
  oracle::SrripReference ref(4, 4);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20000; ++i) {
    const std::uint64_t line = rng() % 40;
    const auto r = c.access({line, AccessClass::DemandData, false, false, Cycle(i) * 1000});
    ASSERT_EQ(r.outcome == AccessOutcome::Hit, ref.access(line)) << "op " << i;
  }
  for (std::size_t s = 0; s < 4; ++s) {
    const auto lines = c.set_lines(s);
    const auto& expect = ref.set(s);
    for (std::size_t w = 0; w < 4; ++w) {
      EXPECT_EQ(lines[w].valid, expect[w].valid);
      EXPECT_EQ(lines[w].tag, expect[w].tag);
      EXPECT_EQ(lines[w].rrpv, expect[w].rrpv);
    }
  }
}

TEST(Pip, EvictsOnlyDemandLines)
{
  auto set = make_set({{true, 3}, {false, 0}, {false, 1}, {true, 3}});
  EXPECT_EQ(pip_policy().on_evict(set), 2u);
  EXPECT_EQ(rrpvs(set), (std::vector<int>{3, 2, 3, 3}));
}

TEST(Pip, FallsBackWhenEveryLineIsPrefetched)
{
  auto set = make_set({{true, 1}, {true, 0}, {true, 2}, {true, 1}});
  EXPECT_EQ(pip_policy().on_evict(set), 2u);
  EXPECT_EQ(rrpvs(set), (std::vector<int>{2, 1, 3, 2}));
}

TEST(Pip, NeverEvictsPrefetchedLineWhileDemandLineExists)
{
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20000; ++trial) {
    std::vector<CacheLine> set(16);
    bool any_demand = false;
    for (auto& l : set) {
      l.valid = true;
      l.pb = rng() % 2;
      l.rrpv = static_cast<std::uint8_t>(rng() % 4);
      any_demand |= !l.pb;
    }
    const auto before = set;
    const std::size_t v = pip_policy().on_evict(set);
    if (any_demand) {
      ASSERT_FALSE(set[v].pb);
      for (std::size_t w = 0; w < set.size(); ++w) {
        if (set[w].pb) {
          ASSERT_EQ(set[w].rrpv, before[w].rrpv);
        }
      }
    }
    ASSERT_EQ(set[v].rrpv, kMaxRrpv);
  }
}

TEST(Npip, PrefetchedFillsInsertDistant)
{
  EXPECT_EQ(npip_policy().on_fill(true).rrpv, kMaxRrpv);
  EXPECT_FALSE(npip_policy().on_fill(true).bypass);
  EXPECT_EQ(npip_policy().on_fill(false).rrpv, kLongRrpv);
}

TEST(Npip, PrefetchedFillIsNextVictim)
{
  FixedLatencyMemory mem(100);
  Cache c({"c", 256, 4, 1, 8, ReplacementKind::Npip}, &mem); // one set
  for (std::uint64_t l = 0; l < 3; ++l)
    c.access({l, AccessClass::DemandData, false, false, l * 1000});
  c.access({9, AccessClass::PrefetchCode, true, false, 5000});
  c.access({10, AccessClass::DemandData, false, false, 9000});
  EXPECT_EQ(c.find_line(9), nullptr);
  for (std::uint64_t l = 0; l < 3; ++l)
    EXPECT_NE(c.find_line(l), nullptr);
}

TEST(Bip, PrefetchedFillsBypass)
{
  EXPECT_TRUE(bip_policy().on_fill(true).bypass);
  EXPECT_FALSE(bip_policy().on_fill(false).bypass);
}

TEST(Bip, ExcludesPrefetchedLines)
{
  FixedLatencyMemory mem(100);
  Cache c({"c", 64 * 1024, 16, 10, 32, ReplacementKind::Bip}, &mem);
  std::mt19937_64 rng(2);
  Cycle t = 0;
  for (int i = 0; i < 20000; ++i) {
    t += 200;
    const std::uint64_t line = rng() % 5000;
    const bool pf = rng() % 2;
    c.access({line, pf ? AccessClass::PrefetchCode : AccessClass::DemandCode, pf, false, t});
  }
  std::size_t pb_lines = 0;
  for (std::size_t s = 0; s < c.num_sets(); ++s)
    for (const auto& l : c.set_lines(s))
      pb_lines += l.valid && l.pb ? 1 : 0;
  EXPECT_EQ(pb_lines, 0u);
  EXPECT_EQ(c.stats().pb_fills, 0u);
  EXPECT_GT(c.stats().bypasses, 0u);
}

TEST(LeaderSets, DefaultMapOnL2cGeometry)
{
  const auto roles = assign_leader_sets(1024, {32, 16, 16});
  EXPECT_EQ(std::count(roles.begin(), roles.end(), SetRole::PipLeader), 32);
  EXPECT_EQ(std::count(roles.begin(), roles.end(), SetRole::NpipLeader), 16);
  EXPECT_EQ(std::count(roles.begin(), roles.end(), SetRole::BipLeader), 16);
  EXPECT_EQ(std::count(roles.begin(), roles.end(), SetRole::Follower), 960);
  for (std::size_t k = 0; k < 32; ++k)
    EXPECT_EQ(roles[k * 32], SetRole::PipLeader);
  EXPECT_EQ(roles, assign_leader_sets(1024, {32, 16, 16}));
}

TEST(LeaderSets, TooFewSetsIsAnError)
{
  EXPECT_THROW(assign_leader_sets(32, {32, 16, 16}), ConfigError);
  EXPECT_NO_THROW(assign_leader_sets(64, {32, 16, 16}));
  const auto roles = assign_leader_sets(64, {32, 16, 16});
  EXPECT_EQ(std::count(roles.begin(), roles.end(), SetRole::Follower), 0);
}

TEST(Tiprp, SelectionTree)
{
  TiprpState s(1024, {});
  ASSERT_EQ(s.t1(), 512u);
  ASSERT_EQ(s.t2(), 512u);
  const std::size_t follower = 5;
  ASSERT_EQ(s.role(follower), SetRole::Follower);

  s.set_counters(513, 0);
  EXPECT_EQ(s.select(follower), RripMode::Pip);
  s.set_counters(512, 511);
  EXPECT_EQ(s.select(follower), RripMode::Bip);
  s.set_counters(512, 512);
  EXPECT_EQ(s.select(follower), RripMode::Npip);
  s.set_counters(0, 1023);
  EXPECT_EQ(s.select(follower), RripMode::Npip);
  EXPECT_EQ(s.select(0), RripMode::Pip);
  EXPECT_EQ(s.select(1), RripMode::Npip);
}

TEST(Tiprp, AsymmetricTraining)
{
  TiprpState s(1024, {});
  auto at = [&](TrainingEvent e, SetRole r, bool pb) {
    s.set_counters(512, 512);
    s.train(e, r, pb);
    return std::pair<int, int>(static_cast<int>(s.psel1()) - 512, static_cast<int>(s.psel2()) - 512);
  };
  using P = std::pair<int, int>;
  EXPECT_EQ(at(TrainingEvent::DemandHit, SetRole::PipLeader, true), P(+1, -1));
  EXPECT_EQ(at(TrainingEvent::Eviction, SetRole::PipLeader, true), P(-1, -1));
  EXPECT_EQ(at(TrainingEvent::DemandHit, SetRole::PipLeader, false), P(0, 0));
  EXPECT_EQ(at(TrainingEvent::DemandHit, SetRole::NpipLeader, false), P(-1, +1));
  EXPECT_EQ(at(TrainingEvent::Eviction, SetRole::NpipLeader, false), P(+1, -1));
  EXPECT_EQ(at(TrainingEvent::Eviction, SetRole::NpipLeader, true), P(0, 0));
  EXPECT_EQ(at(TrainingEvent::DemandHit, SetRole::BipLeader, false), P(-1, -1));
  EXPECT_EQ(at(TrainingEvent::Eviction, SetRole::BipLeader, false), P(+1, +1));
  EXPECT_EQ(at(TrainingEvent::Eviction, SetRole::BipLeader, true), P(0, 0));
  for (bool pb : {false, true})
    for (auto e : {TrainingEvent::DemandHit, TrainingEvent::Eviction})
      EXPECT_EQ(at(e, SetRole::Follower, pb), P(0, 0));
}

TEST(Tiprp, AllEventsTrainingCountsOtherProvenance)
{
  TiprpConfig cfg;
  cfg.training = TiprpTraining::AllEvents;
  cfg.bip_training = BipTraining::LikeNpip;
  TiprpState s(1024, cfg);
  s.train(TrainingEvent::DemandHit, SetRole::PipLeader, false);
  EXPECT_EQ(s.psel1(), 513u);
  s.set_counters(512, 512);
  s.train(TrainingEvent::DemandHit, SetRole::BipLeader, true);
  EXPECT_EQ(s.psel1(), 511u);
  EXPECT_EQ(s.psel2(), 513u);
}

TEST(Tiprp, CountersSaturate)
{
  TiprpState s(1024, {});
  s.set_counters(1023, 0);
  s.train(TrainingEvent::DemandHit, SetRole::PipLeader, true);
  EXPECT_EQ(s.psel1(), 1023u);
  EXPECT_EQ(s.psel2(), 0u);
  s.set_counters(0, 1023);
  s.train(TrainingEvent::DemandHit, SetRole::NpipLeader, false);
  EXPECT_EQ(s.psel1(), 0u);
  EXPECT_EQ(s.psel2(), 1023u);
  s.set_counters(5000, 5000);
  EXPECT_EQ(s.psel1(), 1023u);
}

TEST(Tiprp, ThresholdsValidated)
{
  TiprpConfig cfg;
  cfg.t1 = 2000;
  EXPECT_THROW(TiprpState(1024, cfg), ConfigError);
  cfg = {};
  cfg.psel_bits = 0;
  EXPECT_THROW(TiprpState(1024, cfg), ConfigError);
  cfg = {};
  cfg.t1 = 100;
  cfg.t2 = 900;
  TiprpState s(1024, cfg);
  EXPECT_EQ(s.t1(), 100u);
  EXPECT_EQ(s.t2(), 900u);
}

TEST(Tiprp, FollowerTrafficNeverTrains)
{
  FixedLatencyMemory mem(100);
  Cache c({"l2c", 1024 * 1024, 16, 10, 32, ReplacementKind::Tiprp}, &mem);
  auto& policy = dynamic_cast<TiprpPolicy&>(c.policy());
  std::vector<std::size_t> followers;
  for (std::size_t s = 0; s < c.num_sets(); ++s)
    if (policy.state().role(s) == SetRole::Follower)
      followers.push_back(s);
  std::mt19937_64 rng(4);
  Cycle t = 0;
  for (int i = 0; i < 50000; ++i) {
    t += 300;
    const std::uint64_t set = followers[rng() % 8];
    const std::uint64_t line = (rng() % 64) * c.num_sets() + set;
    const bool pf = rng() % 2;
    c.access({line, pf ? AccessClass::PrefetchCode : AccessClass::DemandCode, pf, false, t});
  }
  EXPECT_GT(c.stats().evictions, 0u);
  EXPECT_EQ(policy.state().psel1(), 512u);
  EXPECT_EQ(policy.state().psel2(), 512u);
  EXPECT_EQ(policy.selections().total(), 50000u);
}

TEST(Tiprp, FollowersUseSelectedPolicy)
{
  FixedLatencyMemory mem(100);
  Cache c({"l2c", 1024 * 1024, 16, 10, 32, ReplacementKind::Tiprp}, &mem);
  auto& policy = dynamic_cast<TiprpPolicy&>(c.policy());
  const std::uint64_t follower_line = 5;
  policy.state().set_counters(0, 0); // BIP
  c.access({follower_line, AccessClass::PrefetchCode, true, false, 0});
  EXPECT_EQ(c.find_line(follower_line), nullptr);
  EXPECT_EQ(policy.selections().bip, 1u);
  policy.state().set_counters(1023, 0); // PIP
  c.access({follower_line + 1024, AccessClass::PrefetchCode, true, false, 1000});
  ASSERT_NE(c.find_line(follower_line + 1024), nullptr);
  EXPECT_EQ(c.find_line(follower_line + 1024)->rrpv, kLongRrpv);
}

TEST(Replacement, ParseNames)
{
  for (auto k : {ReplacementKind::Lru, ReplacementKind::Srrip, ReplacementKind::Pip, ReplacementKind::Npip, ReplacementKind::Bip,
                 ReplacementKind::Tiprp})
    EXPECT_EQ(parse_replacement(to_string(k)), k);
  EXPECT_THROW(parse_replacement("ship"), ConfigError);
}
