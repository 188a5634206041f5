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


#include "ipcat/repl.hpp"

#include <algorithm>
#include <string>

#include "ipcat/common.hpp"

namespace ipcat
{

std::string_view to_string(RripMode m)
{
  switch (m) {
  case RripMode::Srrip:
    return "srrip";
  case RripMode::Pip:
    return "pip";
  case RripMode::Npip:
    return "npip";
  case RripMode::Bip:
    return "bip";
  }
  return "?";
}

namespace
{

// Ages the lines selected by `eligible` until one reaches kMaxRrpv and
// returns the leftmost such way.
template <typename Pred>
std::size_t age_and_pick(std::span<CacheLine> set, Pred eligible)
{
  std::uint8_t oldest = 0;
  for (const auto& l : set)
    if (eligible(l))
      oldest = std::max(oldest, l.rrpv);
  const std::uint8_t step = kMaxRrpv - oldest;
  if (step > 0)
    for (auto& l : set)
      if (eligible(l))
        l.rrpv = static_cast<std::uint8_t>(l.rrpv + step);
  for (std::size_t w = 0; w < set.size(); ++w)
    if (eligible(set[w]) && set[w].rrpv == kMaxRrpv)
      return w;
  return 0;
}

} // namespace

FillVerdict PolicyVerdicts::on_fill(bool pb) const
{
  if (pb && mode == RripMode::Npip)
    return {false, kMaxRrpv};
  if (pb && mode == RripMode::Bip)
    return {true, kMaxRrpv};
  return {false, kLongRrpv};
}

std::size_t PolicyVerdicts::on_evict(std::span<CacheLine> set) const
{
  if (mode == RripMode::Pip) {
    const bool any_demand_line = std::any_of(set.begin(), set.end(), [](const CacheLine& l) { return !l.pb; });
    if (any_demand_line)
      return age_and_pick(set, [](const CacheLine& l) { return !l.pb; });
  }
  return age_and_pick(set, [](const CacheLine&) { return true; });
}

PolicyVerdicts srrip_policy() { return {RripMode::Srrip}; }
PolicyVerdicts pip_policy() { return {RripMode::Pip}; }
PolicyVerdicts npip_policy() { return {RripMode::Npip}; }
PolicyVerdicts bip_policy() { return {RripMode::Bip}; }

std::vector<SetRole> assign_leader_sets(std::size_t num_sets, std::array<std::uint32_t, 3> counts)
{
  const auto [n_pip, n_npip, n_bip] = counts;
  const std::size_t total = std::size_t{n_pip} + n_npip + n_bip;
  if (total > num_sets)
    throw ConfigError("tiprp: " + std::to_string(total) + " leader sets do not fit in " + std::to_string(num_sets) + " sets");
  if (n_pip == 0 && total > 0)
    throw ConfigError("tiprp: leader counts need at least one PIP leader");

  std::vector<SetRole> roles(num_sets, SetRole::Follower);
  auto place = [&](std::size_t idx, SetRole r) {
    idx %= num_sets;
    while (roles[idx] != SetRole::Follower)
      idx = (idx + 1) % num_sets;
    roles[idx] = r;
  };

  std::vector<std::size_t> base(n_pip);
  for (std::uint32_t k = 0; k < n_pip; ++k) {
    base[k] = static_cast<std::size_t>(std::uint64_t{k} * num_sets / n_pip);
    place(base[k], SetRole::PipLeader);
  }
  std::uint32_t npip_left = n_npip;
  std::uint32_t bip_left = n_bip;
  for (std::uint32_t k = 0; k < n_pip && (npip_left > 0 || bip_left > 0); ++k) {
    const bool even = (k % 2) == 0;
    if ((even && npip_left > 0) || bip_left == 0) {
      place(base[k] + 1, SetRole::NpipLeader);
      --npip_left;
    } else {
      place(base[k] + 2, SetRole::BipLeader);
      --bip_left;
    }
  }
  // Counts beyond the PIP stride wrap around the same pattern.
  for (std::size_t k = 0; npip_left > 0; ++k, --npip_left)
    place(base[k % n_pip] + 1, SetRole::NpipLeader);
  for (std::size_t k = 0; bip_left > 0; ++k, --bip_left)
    place(base[k % n_pip] + 2, SetRole::BipLeader);
  return roles;
}

TiprpState::TiprpState(std::size_t num_sets, const TiprpConfig& cfg)
    : training_(cfg.training), bip_training_(cfg.bip_training), roles_(assign_leader_sets(num_sets, cfg.leaders))
{
  if (cfg.psel_bits < 1 || cfg.psel_bits > 31)
    throw ConfigError("tiprp.psel_bits must be in [1,31]");
  max_ = (1u << cfg.psel_bits) - 1;
  const std::uint32_t mid = 1u << (cfg.psel_bits - 1);
  auto threshold = [&](std::int64_t t, const char* name) {
    if (t < 0)
      return mid;
    if (t > max_)
      throw ConfigError(std::string("tiprp.") + name + " exceeds the counter range");
    return static_cast<std::uint32_t>(t);
  };
  t1_ = threshold(cfg.t1, "t1");
  t2_ = threshold(cfg.t2, "t2");
  psel1_ = mid;
  psel2_ = mid;
}

RripMode TiprpState::select(std::size_t set_index) const
{
  switch (roles_[set_index]) {
  case SetRole::PipLeader:
    return RripMode::Pip;
  case SetRole::NpipLeader:
    return RripMode::Npip;
  case SetRole::BipLeader:
    return RripMode::Bip;
  case SetRole::Follower:
    break;
  }
  if (psel1_ > t1_)
    return RripMode::Pip;
  return psel2_ < t2_ ? RripMode::Bip : RripMode::Npip;
}

void TiprpState::set_counters(std::uint32_t psel1, std::uint32_t psel2)
{
  psel1_ = std::min(psel1, max_);
  psel2_ = std::min(psel2, max_);
}

void TiprpState::bump(std::uint32_t& c, int delta) const
{
  if (delta > 0 && c < max_)
    ++c;
  else if (delta < 0 && c > 0)
    --c;
}

void TiprpState::train(TrainingEvent event, SetRole role, bool pb)
{
  const bool hit = event == TrainingEvent::DemandHit;
  const bool all = training_ == TiprpTraining::AllEvents;
  int d1 = 0;
  int d2 = 0;
  switch (role) {
  case SetRole::Follower:
    return;
  case SetRole::PipLeader:
    if (!pb && !all)
      return;
    d1 = hit ? +1 : -1;
    d2 = -1;
    break;
  case SetRole::NpipLeader:
    if (pb && !all)
      return;
    d1 = hit ? -1 : +1;
    d2 = hit ? +1 : -1;
    break;
  case SetRole::BipLeader:
    if (pb && !all)
      return;
    d1 = hit ? -1 : +1;
    if (bip_training_ == BipTraining::Mirror)
      d2 = hit ? -1 : +1;
    else
      d2 = hit ? +1 : -1;
    break;
  }
  bump(psel1_, d1);
  bump(psel2_, d2);
}

ReplacementKind parse_replacement(std::string_view s)
{
  if (s == "lru")
    return ReplacementKind::Lru;
  if (s == "srrip")
    return ReplacementKind::Srrip;
  if (s == "pip")
    return ReplacementKind::Pip;
  if (s == "npip")
    return ReplacementKind::Npip;
  if (s == "bip")
    return ReplacementKind::Bip;
  if (s == "tiprp")
    return ReplacementKind::Tiprp;
  throw ConfigError("unknown replacement policy '" + std::string(s) + "' (lru, srrip, pip, npip, bip, tiprp)");
}

std::string_view to_string(ReplacementKind k)
{
  switch (k) {
  case ReplacementKind::Lru:
    return "lru";
  case ReplacementKind::Srrip:
    return "srrip";
  case ReplacementKind::Pip:
    return "pip";
  case ReplacementKind::Npip:
    return "npip";
  case ReplacementKind::Bip:
    return "bip";
  case ReplacementKind::Tiprp:
    return "tiprp";
  }
  return "?";
}

std::size_t LruPolicy::victim(std::size_t, std::span<CacheLine> lines)
{
  std::size_t best = 0;
  for (std::size_t w = 1; w < lines.size(); ++w)
    if (lines[w].lru_stamp < lines[best].lru_stamp)
      best = w;
  return best;
}

ReplacementKind RripPolicy::kind() const
{
  switch (verdicts_.mode) {
  case RripMode::Srrip:
    return ReplacementKind::Srrip;
  case RripMode::Pip:
    return ReplacementKind::Pip;
  case RripMode::Npip:
    return ReplacementKind::Npip;
  case RripMode::Bip:
    return ReplacementKind::Bip;
  }
  return ReplacementKind::Srrip;
}

void TiprpPolicy::on_access(std::size_t set)
{
  if (state_.role(set) != SetRole::Follower)
    return;
  switch (state_.select(set)) {
  case RripMode::Pip:
    ++selections_.pip;
    break;
  case RripMode::Npip:
    ++selections_.npip;
    break;
  case RripMode::Bip:
    ++selections_.bip;
    break;
  case RripMode::Srrip:
    break;
  }
}

FillVerdict TiprpPolicy::on_fill(std::size_t set, bool pb) { return verdicts_for(set).on_fill(pb); }

void TiprpPolicy::on_hit(std::size_t set, CacheLine& line, bool train)
{
  verdicts_for(set).on_hit(line);
  if (train)
    state_.train(TrainingEvent::DemandHit, state_.role(set), line.pb);
}

std::size_t TiprpPolicy::victim(std::size_t set, std::span<CacheLine> lines) { return verdicts_for(set).on_evict(lines); }

void TiprpPolicy::on_evict(std::size_t set, const CacheLine& line) { state_.train(TrainingEvent::Eviction, state_.role(set), line.pb); }

std::unique_ptr<ReplacementPolicy> make_policy(ReplacementKind kind, std::size_t num_sets, const TiprpConfig& tiprp)
{
  switch (kind) {
  case ReplacementKind::Lru:
    return std::make_unique<LruPolicy>();
  case ReplacementKind::Srrip:
    return std::make_unique<RripPolicy>(srrip_policy());
  case ReplacementKind::Pip:
    return std::make_unique<RripPolicy>(pip_policy());
  case ReplacementKind::Npip:
    return std::make_unique<RripPolicy>(npip_policy());
  case ReplacementKind::Bip:
    return std::make_unique<RripPolicy>(bip_policy());
  case ReplacementKind::Tiprp:
    return std::make_unique<TiprpPolicy>(num_sets, tiprp);
  }
  return std::make_unique<LruPolicy>();
}

} // namespace ipcat
