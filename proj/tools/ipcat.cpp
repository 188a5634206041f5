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


// ipcat: trace generation and simulation driver.
//
// Exit codes: 0 success, 1 configuration or simulation error, 2 usage or I/O
// error.

#include <charconv>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ipcat/config.hpp"
#include "ipcat/engine.hpp"
#include "ipcat/trace.hpp"

namespace
{

using namespace ipcat;

constexpr int kExitConfig = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string shortest(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

SimConfig config_from(const std::string& path, const std::vector<std::string>& sets)
{
  SimConfig cfg = path.empty() ? SimConfig{} : load_config(path);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw UsageError("--set expects key=value, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  validate(cfg);
  return cfg;
}

void print_comparison(const Comparison& c, const std::string& base_name, const std::string& variant_name)
{
  std::cout << "scheme,speedup," << StatsReport::csv_header() << "\n";
  std::cout << base_name << ",1," << c.base.csv_row() << "\n";
  std::cout << variant_name << "," << shortest(c.speedup) << "," << c.variant.csv_row() << "\n";
}

std::vector<std::string> split_values(const std::string& s)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!item.empty())
      out.push_back(item);
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  return out;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"ipcat - instruction-fetch translation and L2C replacement simulator"};
  app.require_subcommand(1);

  TraceGenSpec spec;
  std::string out_path;
  std::string format = "binary";
  auto* gen = app.add_subcommand("gen", "generate a synthetic trace");
  gen->add_option("--code-pages", spec.code_pages, "distinct 4KB code pages")->check(CLI::PositiveNumber);
  gen->add_option("--functions", spec.functions, "function count")->check(CLI::PositiveNumber);
  gen->add_option("--func-size", spec.func_size_lines, "cache lines per function")->check(CLI::PositiveNumber);
  gen->add_option("--skew", spec.popularity_skew, "Zipf exponent of function popularity")->check(CLI::NonNegativeNumber);
  gen->add_option("--data-ratio", spec.data_ratio, "fraction of Load/Store records")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--data-pages", spec.data_pages, "distinct 4KB data pages")->check(CLI::PositiveNumber);
  gen->add_option("--length", spec.length, "records to emit")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", spec.seed, "generator seed");
  gen->add_option("-o,--out", out_path, "output path")->required();
  gen->add_option("--format", format, "binary or text")->check(CLI::IsMember({"binary", "text"}));

  std::string config_path;
  std::string trace_path;
  std::vector<std::string> sets;
  bool as_csv = false;
  auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
  run_cmd->add_option("trace", trace_path, "trace file")->required();
  run_cmd->add_option("-c,--config", config_path, "config file");
  run_cmd->add_option("--set", sets, "override key=value");
  auto* json_flag = run_cmd->add_flag("--json", "print JSON (default)");
  run_cmd->add_flag("--csv", as_csv, "print a CSV header and row")->excludes(json_flag);

  std::string variant_path;
  std::vector<std::string> variant_sets;
  auto* cmp = app.add_subcommand("compare", "speedup of a variant over a base configuration");
  cmp->add_option("trace", trace_path, "trace file")->required();
  cmp->add_option("-b,--base", config_path, "base config file");
  cmp->add_option("-v,--variant", variant_path, "variant config file");
  cmp->add_option("--set", sets, "override key=value on both");
  cmp->add_option("--variant-set", variant_sets, "override key=value on the variant");

  std::string key;
  std::string values;
  auto* swp = app.add_subcommand("sweep", "one run per value of a config key");
  swp->add_option("trace", trace_path, "trace file")->required();
  swp->add_option("-c,--config", config_path, "config file");
  swp->add_option("--set", sets, "override key=value");
  swp->add_option("-k,--key", key, "config key to vary")->required();
  swp->add_option("--values", values, "comma-separated values");

  std::string scenario;
  bool list = false;
  bool show = false;
  auto* scn = app.add_subcommand("scenario", "run a named preset against the baseline");
  scn->add_option("name", scenario, "preset name");
  scn->add_option("trace", trace_path, "trace file");
  scn->add_option("-c,--config", config_path, "baseline config file");
  scn->add_option("--set", sets, "override key=value on both");
  scn->add_flag("--list", list, "list presets");
  scn->add_flag("--show", show, "print the preset's config overlay");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      try {
        validate(spec);
      } catch (const ConfigError& e) {
        throw UsageError(e.what());
      }
      write_trace(generate_trace(spec), out_path, format == "text" ? TraceFormat::Text : TraceFormat::Binary);
      return 0;
    }
    if (scn->parsed() && list) {
      for (const auto& n : scenario_names())
        std::cout << n << "\n";
      return 0;
    }
    if (scn->parsed() && show) {
      if (scenario.empty())
        throw UsageError("scenario --show needs a preset name");
      for (const auto& [k, v] : scenario_overlay(scenario))
        std::cout << k << " = " << v << "\n";
      return 0;
    }
    if (scn->parsed() && (scenario.empty() || trace_path.empty()))
      throw UsageError("scenario needs a preset name and a trace");

    SimConfig cfg = config_from(config_path, sets);
    if (scn->parsed())
      (void)scenario_overlay(scenario); // reject unknown names before reading the trace
    const std::vector<TraceRecord> trace = read_trace(trace_path);

    if (run_cmd->parsed()) {
      const StatsReport r = run(cfg, trace);
      if (as_csv)
        std::cout << StatsReport::csv_header() << "\n" << r.csv_row() << "\n";
      else
        std::cout << r.to_json() << "\n";
    } else if (cmp->parsed()) {
      SimConfig variant = variant_path.empty() ? cfg : config_from(variant_path, sets);
      for (const auto& kv : variant_sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw UsageError("--variant-set expects key=value, got '" + kv + "'");
        apply_setting(variant, kv.substr(0, eq), kv.substr(eq + 1));
      }
      validate(variant);
      print_comparison(compare(cfg, variant, trace), "base", "variant");
    } else if (swp->parsed()) {
      const auto vals = split_values(values);
      const auto rows = sweep(cfg, key, vals, trace);
      std::cout << "value," << StatsReport::csv_header() << "\n";
      for (const auto& row : rows)
        std::cout << row.value << "," << row.report.csv_row() << "\n";
    } else if (scn->parsed()) {
      const SimConfig variant = apply_overlay(cfg, scenario_overlay(scenario));
      print_comparison(compare(cfg, variant, trace), "baseline", scenario);
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "ipcat: " << e.what() << "\n";
    return kExitUsage;
  } catch (const TraceError& e) {
    std::cerr << "ipcat: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "ipcat: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "ipcat: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "ipcat: " << e.what() << "\n";
    return kExitConfig;
  }
}
