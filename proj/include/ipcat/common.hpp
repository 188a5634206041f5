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

#ifndef IPCAT_COMMON_HPP
#define IPCAT_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ipcat
{

using Cycle = std::uint64_t;

inline constexpr unsigned kLineShift = 6;
inline constexpr std::uint64_t kLineSize = 1ull << kLineShift;
inline constexpr unsigned kVaddrBits = 57; // 5-level radix table
inline constexpr unsigned kPaddrBits = 52;

enum class PageSize : std::uint8_t { k4K, k2M };

constexpr unsigned page_shift(PageSize ps) { return ps == PageSize::k4K ? 12u : 21u; }
constexpr std::uint64_t page_bytes(PageSize ps) { return 1ull << page_shift(ps); }
constexpr std::uint64_t line_of(std::uint64_t addr) { return addr >> kLineShift; }

/// Semantic error in a simulation configuration (unknown key, bad value,
/// inconsistent geometry). The CLI maps it to exit code 1.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unreadable trace input. Carries the byte or line offset in
/// its message.
class TraceError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace ipcat

#endif
