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


#ifndef IPCAT_CONFIG_HPP
#define IPCAT_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ipcat/prefetch.hpp"
#include "ipcat/system.hpp"

namespace ipcat
{

struct SimConfig {
  HierarchyConfig hierarchy;
  PrefetchConfig prefetch;
  // Unset: 50K/100K, shrunk to 1/3 and 2/3 of a shorter trace.
  std::optional<std::uint64_t> warmup_records;
  std::optional<std::uint64_t> measure_records;
  double data_overlap = 0.25; // fraction of data-side miss latency exposed
  std::string trace;          // optional trace path
};

inline constexpr std::uint64_t kDefaultWarmup = 50000;
inline constexpr std::uint64_t kDefaultMeasure = 100000;

void validate(const SimConfig& cfg);

/// Warmup and measured record counts for a trace of `trace_length` records.
std::pair<std::uint64_t, std::uint64_t> record_window(const SimConfig& cfg, std::uint64_t trace_length);

/// Sets one key. Throws ConfigError naming the key (and listing the valid
/// keys when it is unknown).
void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value);
[[nodiscard]] std::string get_setting(const SimConfig& cfg, std::string_view key);
[[nodiscard]] const std::vector<std::string>& config_keys();

/// Parses `key = value` lines over the defaults. Errors carry
/// `<source>:<line>`.
SimConfig parse_config(std::string_view text, std::string_view source = "<config>", SimConfig base = {});
SimConfig load_config(const std::filesystem::path& path);
/// One `key = value` line per key, in config_keys() order.
[[nodiscard]] std::string format_config(const SimConfig& cfg);

using Overlay = std::vector<std::pair<std::string, std::string>>;

[[nodiscard]] const std::vector<std::string>& scenario_names();
/// Throws ConfigError listing the presets for an unknown name.
[[nodiscard]] const Overlay& scenario_overlay(std::string_view name);
SimConfig apply_overlay(SimConfig cfg, const Overlay& overlay);

} // namespace ipcat

#endif
