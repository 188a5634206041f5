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


#include "ipcat/system.hpp"

namespace ipcat
{

MemorySystem::MemorySystem(const HierarchyConfig& cfg)
    : cfg_(cfg), table_(cfg.vm), psc_(cfg.vm.levels, cfg.vm.psc_sizes), walker_(table_, psc_), memory_(cfg.memory_latency)
{
  llc_ = std::make_unique<Cache>(cfg_.llc, &memory_);
  l2c_ = std::make_unique<Cache>(cfg_.l2c, llc_.get(), cfg_.tiprp);
  l1i_ = std::make_unique<Cache>(cfg_.l1i, l2c_.get());
  l1d_ = std::make_unique<Cache>(cfg_.l1d, l2c_.get());
  auto port = [this](std::uint64_t line, Cycle at) -> Cycle {
    const AccessResult r = l2c_->access(MemRequest{line, AccessClass::Translation, false, false, at});
    return r.ready - at;
  };
  tlbs_ = std::make_unique<TranslationUnit>(cfg_.tlb, table_, walker_, port);
}

std::optional<PendingPrefetch> MemorySystem::translate_prefetch(const PrefetchRequest& req, PageCrossMode mode)
{
  const TranslationResult tr = tlbs_->resolve(TranslationRequest{req.line_vaddr, Requester::L1IPrefetch, req.is_page_cross,
                                                                 mode == PageCrossMode::FreeTranslation, req.issue_cycle});
  if (tr.dropped())
    return std::nullopt;
  return PendingPrefetch{line_of(tr.mapping.paddr(req.line_vaddr)), req.is_page_cross, req.issue_cycle + tr.latency};
}

AccessResult MemorySystem::fill_prefetch(const PendingPrefetch& p)
{
  return l1i_->access(MemRequest{p.paddr_line, AccessClass::PrefetchCode, true, p.page_cross, p.at});
}

std::optional<Cycle> MemorySystem::issue_prefetch(const PrefetchRequest& req, PageCrossMode mode)
{
  const auto pending = translate_prefetch(req, mode);
  if (!pending)
    return std::nullopt;
  const AccessResult r = fill_prefetch(*pending);
  if (r.outcome == AccessOutcome::Dropped)
    return std::nullopt;
  return r.ready;
}

void MemorySystem::reset_stats()
{
  tlbs_->reset_stats();
  for (Cache* c : {l1i_.get(), l1d_.get(), l2c_.get(), llc_.get()})
    c->reset_stats();
  memory_.reset_stats();
}

void MemorySystem::drain()
{
  tlbs_->drain();
  for (Cache* c : {l1i_.get(), l1d_.get(), l2c_.get(), llc_.get()})
    c->drain();
}

} // namespace ipcat
