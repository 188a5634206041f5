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


#ifndef IPCAT_REPL_HPP
#define IPCAT_REPL_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace ipcat
{

struct CacheLine {
  std::uint64_t tag = 0; // full line address
  bool valid = false;
  bool pb = false;        // installed by an L1I prefetch fill
  std::uint8_t rrpv = 0;  // 0..3
  std::uint64_t lru_stamp = 0;
  std::uint32_t demand_served = 0;
  std::uint64_t ready = 0; // fill completion cycle
};

inline constexpr std::uint8_t kMaxRrpv = 3;
inline constexpr std::uint8_t kLongRrpv = 2;

struct FillVerdict {
  bool bypass = false;
  std::uint8_t rrpv = kLongRrpv;
};

enum class RripMode : std::uint8_t { Srrip, Pip, Npip, Bip };

std::string_view to_string(RripMode m);

/*
 * Insertion, promotion, and eviction verdicts of one RRIP-family policy.
 *
 *   Srrip  insert at 2, promote to 0, evict the leftmost rrpv=3 line after
 *          ageing the whole set.
 *   Pip    Srrip insertion and promotion; eviction prefers lines with pb=0,
 *          ageing only those, and falls back to Srrip when every line has pb=1.
 *   Npip   pb=1 fills insert at 3; otherwise Srrip.
 *   Bip    pb=1 fills are not installed; otherwise Srrip.
 */
struct PolicyVerdicts {
  RripMode mode = RripMode::Srrip;

  [[nodiscard]] FillVerdict on_fill(bool pb) const;
  void on_hit(CacheLine& line) const { line.rrpv = 0; }
  /// Victim way of a full set. Ages rrpv values as a side effect.
  std::size_t on_evict(std::span<CacheLine> set) const;
};

PolicyVerdicts srrip_policy();
PolicyVerdicts pip_policy();
PolicyVerdicts npip_policy();
PolicyVerdicts bip_policy();

enum class SetRole : std::uint8_t { Follower, PipLeader, NpipLeader, BipLeader };

/// Static leader-set map: PIP leaders at floor(k*N/pip), NPIP and BIP
/// leaders alternate one and two sets after them. Collisions (small N)
/// slide forward to the next free set.
std::vector<SetRole> assign_leader_sets(std::size_t num_sets, std::array<std::uint32_t, 3> counts);

enum class TiprpTraining { Asymmetric, AllEvents };
enum class BipTraining { Mirror, LikeNpip };

struct TiprpConfig {
  unsigned psel_bits = 10;
  std::int64_t t1 = -1; // < 0: midpoint of the counter range
  std::int64_t t2 = -1;
  std::array<std::uint32_t, 3> leaders{32, 16, 16};
  TiprpTraining training = TiprpTraining::Asymmetric;
  BipTraining bip_training = BipTraining::Mirror;
};

enum class TrainingEvent { DemandHit, Eviction };

/// PSEL1/PSEL2 decision tree with its leader-set map.
class TiprpState
{
public:
  TiprpState(std::size_t num_sets, const TiprpConfig& cfg);

  /// Leaders return their fixed policy; followers walk the tree.
  [[nodiscard]] RripMode select(std::size_t set_index) const;
  [[nodiscard]] SetRole role(std::size_t set_index) const { return roles_[set_index]; }

  void train(TrainingEvent event, SetRole role, bool pb);

  [[nodiscard]] std::uint32_t psel1() const { return psel1_; }
  [[nodiscard]] std::uint32_t psel2() const { return psel2_; }
  [[nodiscard]] std::uint32_t psel_max() const { return max_; }
  [[nodiscard]] std::uint32_t t1() const { return t1_; }
  [[nodiscard]] std::uint32_t t2() const { return t2_; }
  void set_counters(std::uint32_t psel1, std::uint32_t psel2);
  [[nodiscard]] const std::vector<SetRole>& roles() const { return roles_; }

private:
  void bump(std::uint32_t& c, int delta) const;

  std::uint32_t max_;
  std::uint32_t psel1_;
  std::uint32_t psel2_;
  std::uint32_t t1_;
  std::uint32_t t2_;
  TiprpTraining training_;
  BipTraining bip_training_;
  std::vector<SetRole> roles_;
};

enum class ReplacementKind { Lru, Srrip, Pip, Npip, Bip, Tiprp };

ReplacementKind parse_replacement(std::string_view s);
std::string_view to_string(ReplacementKind k);

struct SelectionHistogram {
  std::uint64_t pip = 0, npip = 0, bip = 0;
  [[nodiscard]] std::uint64_t total() const { return pip + npip + bip; }
};

/// Per-cache replacement hook. The cache maintains lru_stamp itself.
class ReplacementPolicy
{
public:
  virtual ~ReplacementPolicy() = default;

  virtual void on_access(std::size_t /*set*/) {}
  virtual FillVerdict on_fill(std::size_t set, bool pb) = 0;
  virtual void on_hit(std::size_t set, CacheLine& line, bool train) = 0;
  virtual std::size_t victim(std::size_t set, std::span<CacheLine> lines) = 0;
  virtual void on_evict(std::size_t /*set*/, const CacheLine& /*line*/) {}

  [[nodiscard]] virtual ReplacementKind kind() const = 0;
};

class LruPolicy final : public ReplacementPolicy
{
public:
  FillVerdict on_fill(std::size_t, bool) override { return {}; }
  void on_hit(std::size_t, CacheLine&, bool) override {}
  std::size_t victim(std::size_t set, std::span<CacheLine> lines) override;
  [[nodiscard]] ReplacementKind kind() const override { return ReplacementKind::Lru; }
};

class RripPolicy final : public ReplacementPolicy
{
public:
  explicit RripPolicy(PolicyVerdicts v) : verdicts_(v) {}
  FillVerdict on_fill(std::size_t, bool pb) override { return verdicts_.on_fill(pb); }
  void on_hit(std::size_t, CacheLine& line, bool) override { verdicts_.on_hit(line); }
  std::size_t victim(std::size_t, std::span<CacheLine> lines) override { return verdicts_.on_evict(lines); }
  [[nodiscard]] ReplacementKind kind() const override;

private:
  PolicyVerdicts verdicts_;
};

class TiprpPolicy final : public ReplacementPolicy
{
public:
  TiprpPolicy(std::size_t num_sets, const TiprpConfig& cfg) : state_(num_sets, cfg) {}

  void on_access(std::size_t set) override;
  FillVerdict on_fill(std::size_t set, bool pb) override;
  void on_hit(std::size_t set, CacheLine& line, bool train) override;
  std::size_t victim(std::size_t set, std::span<CacheLine> lines) override;
  void on_evict(std::size_t set, const CacheLine& line) override;
  [[nodiscard]] ReplacementKind kind() const override { return ReplacementKind::Tiprp; }

  [[nodiscard]] const TiprpState& state() const { return state_; }
  TiprpState& state() { return state_; }
  [[nodiscard]] const SelectionHistogram& selections() const { return selections_; }
  void reset_selections() { selections_ = {}; }

private:
  [[nodiscard]] PolicyVerdicts verdicts_for(std::size_t set) const { return PolicyVerdicts{state_.select(set)}; }

  TiprpState state_;
  SelectionHistogram selections_;
};

std::unique_ptr<ReplacementPolicy> make_policy(ReplacementKind kind, std::size_t num_sets, const TiprpConfig& tiprp = {});

} // namespace ipcat

#endif
