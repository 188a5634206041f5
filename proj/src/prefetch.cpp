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


#include "ipcat/prefetch.hpp"

#include <string>

namespace ipcat
{

PageCrossMode parse_page_cross_mode(std::string_view s)
{
  if (s == "no-page-cross")
    return PageCrossMode::NoPageCross;
  if (s == "permit-page-cross")
    return PageCrossMode::PermitPageCross;
  if (s == "free-translation")
    return PageCrossMode::FreeTranslation;
  throw ConfigError("prefetch.mode: expected no-page-cross, permit-page-cross or free-translation, got '" + std::string(s) + "'");
}

std::string_view to_string(PageCrossMode m)
{
  switch (m) {
  case PageCrossMode::NoPageCross: return "no-page-cross";
  case PageCrossMode::PermitPageCross: return "permit-page-cross";
  case PageCrossMode::FreeTranslation: return "free-translation";
  }
  return "?";
}

void validate(const PrefetchConfig& cfg)
{
  if (!(cfg.inaccuracy >= 0.0 && cfg.inaccuracy <= 1.0))
    throw ConfigError("prefetch.inaccuracy must be in [0,1]");
  if (cfg.ftq_entries == 0)
    throw ConfigError("prefetch.ftq must be >= 1");
}

PrefetchEngine::PrefetchEngine(PrefetchConfig cfg) : cfg_((validate(cfg), cfg)), rng_(cfg_.seed) {}

bool PrefetchEngine::remember(std::uint64_t line)
{
  if (!requested_.insert(line).second)
    return false;
  fifo_.push_back(line);
  if (fifo_.size() > cfg_.ftq_entries) {
    requested_.erase(fifo_.front());
    fifo_.pop_front();
  }
  return true;
}

std::vector<PrefetchRequest> PrefetchEngine::emit(std::span<const std::uint64_t> window, std::uint64_t current_vaddr,
                                                  PageSize trigger_page, Cycle now, const ResidencyFilter& resident)
{
  std::vector<PrefetchRequest> out;
  if (!cfg_.enabled)
    return out;
  ++stats_.triggers;
  const unsigned shift = page_shift(trigger_page);
  const std::uint64_t trigger_page_no = current_vaddr >> shift;
  const std::uint64_t current_line = line_of(current_vaddr);

  auto consider = [&](std::uint64_t line) {
    ++stats_.candidates;
    if (!remember(line)) {
      ++stats_.suppressed_duplicate;
      return;
    }
    std::uint64_t target = line << kLineShift;
    if (cfg_.inaccuracy > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < cfg_.inaccuracy) {
      const std::uint64_t pages_ahead = std::uniform_int_distribution<std::uint64_t>(1, 64)(rng_);
      const std::uint64_t line_in_page = std::uniform_int_distribution<std::uint64_t>(0, 63)(rng_);
      target = (((current_vaddr >> 12) + pages_ahead) << 12) | (line_in_page << kLineShift);
      ++stats_.wrong;
    }
    if (resident && resident(target)) {
      ++stats_.filtered_resident;
      return;
    }
    const bool cross = (target >> shift) != trigger_page_no;
    if (cross && cfg_.mode == PageCrossMode::NoPageCross) {
      ++stats_.discarded_page_cross;
      return;
    }
    stats_.page_cross += cross ? 1 : 0;
    ++stats_.emitted;
    out.push_back(PrefetchRequest{target, current_vaddr, cross, now});
  };

  for (std::size_t i = 0; i < window.size() && i < cfg_.lookahead; ++i)
    consider(line_of(window[i]));
  for (std::size_t k = 1; k <= cfg_.next_n; ++k)
    consider(current_line + k);
  return out;
}

} // namespace ipcat
