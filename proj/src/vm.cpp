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


#include "ipcat/vm.hpp"

#include <algorithm>
#include <cassert>
#include <string>

namespace ipcat
{

namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Page-table nodes live at PA >= 2^44, data frames grow up from 4KB.
constexpr std::uint64_t kNodeFrameBase = 1ull << 32;

} // namespace

void validate(const VmConfig& cfg)
{
  if (cfg.levels < 4 || cfg.levels > 5)
    throw ConfigError("vm.levels must be 4 or 5");
  if (!(cfg.large_page_fraction >= 0.0 && cfg.large_page_fraction <= 1.0))
    throw ConfigError("vm.large_page_fraction must be in [0,1]");
  if (cfg.psc_sizes.size() != cfg.levels - 1)
    throw ConfigError("vm.psc_sizes needs one size per non-leaf level (" + std::to_string(cfg.levels - 1) + ")");
}

PageTable::PageTable(VmConfig cfg) : cfg_(std::move(cfg)), next_node_frame_(kNodeFrameBase) { validate(cfg_); }

PageSize PageTable::region_page_size(std::uint64_t vaddr) const
{
  if (cfg_.large_page_fraction <= 0.0)
    return PageSize::k4K;
  if (cfg_.large_page_fraction >= 1.0)
    return PageSize::k2M;
  const std::uint64_t h = splitmix64(cfg_.seed ^ splitmix64(vaddr >> 21));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  return u < cfg_.large_page_fraction ? PageSize::k2M : PageSize::k4K;
}

PageMapping PageTable::translate(std::uint64_t vaddr)
{
  const PageSize ps = region_page_size(vaddr);
  const std::uint64_t vpn = vaddr >> page_shift(ps);
  if (ps == PageSize::k4K) {
    auto [it, fresh] = small_.try_emplace(vpn, 0);
    if (fresh)
      it->second = next_frame_++;
    return {ps, vpn, it->second};
  }
  auto [it, fresh] = large_.try_emplace(vpn, 0);
  if (fresh) {
    next_frame_ = (next_frame_ + 511) & ~std::uint64_t{511};
    it->second = next_frame_ >> 9;
    next_frame_ += 512;
  }
  return {ps, vpn, it->second};
}

std::uint64_t PageTable::entry_paddr(std::uint64_t vaddr, unsigned level)
{
  assert(level >= 1 && level <= cfg_.levels);
  const unsigned index_shift = 12 + 9 * (level - 1);
  const std::uint64_t prefix = vaddr >> (index_shift + 9);
  const std::uint64_t key = (prefix << 3) | level;
  auto [it, fresh] = nodes_.try_emplace(key, 0);
  if (fresh)
    it->second = next_node_frame_++;
  const std::uint64_t index = (vaddr >> index_shift) & 511;
  return (it->second << 12) + index * 8;
}

PscSet::PscSet(unsigned levels, std::vector<std::size_t> sizes) : levels_(levels), sizes_(std::move(sizes))
{
  if (sizes_.size() != levels - 1)
    throw ConfigError("PSC needs one size per non-leaf level");
  per_level_.resize(sizes_.size());
}

bool PscSet::enabled() const
{
  return std::any_of(sizes_.begin(), sizes_.end(), [](std::size_t s) { return s > 0; });
}

std::size_t PscSet::capacity(unsigned level) const { return sizes_[levels_ - level]; }
std::size_t PscSet::occupancy(unsigned level) const { return slots(level).size(); }

unsigned PscSet::probe(std::uint64_t vaddr, unsigned leaf_level)
{
  unsigned start = levels_;
  ++clock_;
  for (unsigned level = levels_; level > leaf_level; --level) {
    auto& s = slots(level);
    const std::uint64_t tag = tag_for(vaddr, level);
    auto it = std::find_if(s.begin(), s.end(), [tag](const Slot& x) { return x.tag == tag; });
    if (it != s.end()) {
      it->stamp = clock_;
      start = level - 1;
    }
  }
  return start;
}

void PscSet::install(std::uint64_t vaddr, unsigned level)
{
  const std::size_t cap = capacity(level);
  if (cap == 0)
    return;
  auto& s = slots(level);
  const std::uint64_t tag = tag_for(vaddr, level);
  ++clock_;
  auto it = std::find_if(s.begin(), s.end(), [tag](const Slot& x) { return x.tag == tag; });
  if (it != s.end()) {
    it->stamp = clock_;
    return;
  }
  if (s.size() < cap) {
    s.push_back({tag, clock_});
    return;
  }
  auto victim = std::min_element(s.begin(), s.end(), [](const Slot& a, const Slot& b) { return a.stamp < b.stamp; });
  *victim = {tag, clock_};
}

WalkResult PageWalker::walk(std::uint64_t vaddr, Cycle start, const MemoryPort& port)
{
  WalkResult out;
  out.mapping = table_.translate(vaddr);
  const unsigned leaf = PageTable::leaf_level(out.mapping.page_size);
  const unsigned first = psc_.probe(vaddr, leaf);

  Cycle t = start + kPscLatency;
  out.latency = kPscLatency;
  for (unsigned level = first; level >= leaf; --level) {
    const std::uint64_t line = line_of(table_.entry_paddr(vaddr, level));
    out.memory_refs.push_back(line);
    const Cycle lat = port(line, t);
    t += lat;
    out.latency += lat;
    if (level == 1)
      break;
  }
  for (unsigned level = table_.levels(); level > leaf; --level)
    psc_.install(vaddr, level);

  ++stats_.walks;
  stats_.memory_refs += out.memory_refs.size();
  stats_.levels_skipped += table_.levels() - first;
  return out;
}

} // namespace ipcat
