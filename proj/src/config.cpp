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


#include "ipcat/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ipcat
{

namespace
{

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s)
{
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected)
{
  throw ConfigError(std::string(key) + ": expected " + std::string(expected) + ", got '" + std::string(value) + "'");
}

double parse_real(std::string_view key, std::string_view raw)
{
  const std::string_view s = trim(raw);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v))
    bad_value(key, raw, "a number");
  return v;
}

// Integer with an optional size unit (B, KB, MB, GB; binary multiples) or a
// descriptive suffix (cc, cycles, mshr, ways, entries).
std::uint64_t parse_count(std::string_view key, std::string_view raw)
{
  const std::string_view s = trim(raw);
  std::size_t i = 0;
  while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'))
    ++i;
  if (i == 0)
    bad_value(key, raw, "a non-negative integer");
  const double number = parse_real(key, s.substr(0, i));
  const std::string unit = lower(trim(s.substr(i)));
  double scale = 1.0;
  if (unit == "kb" || unit == "k" || unit == "kib")
    scale = 1024.0;
  else if (unit == "mb" || unit == "m" || unit == "mib")
    scale = 1024.0 * 1024.0;
  else if (unit == "gb" || unit == "g" || unit == "gib")
    scale = 1024.0 * 1024.0 * 1024.0;
  else if (!(unit.empty() || unit == "b" || unit == "cc" || unit == "cycles" || unit == "mshr" || unit == "ways" || unit == "way" ||
             unit == "entries"))
    bad_value(key, raw, "an integer with an optional unit");
  const double v = number * scale;
  if (v != std::floor(v) || v < 0 || v > 1.8e19)
    bad_value(key, raw, "a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

bool parse_bool(std::string_view key, std::string_view raw)
{
  const std::string s = lower(trim(raw));
  if (s == "true" || s == "1" || s == "yes" || s == "on")
    return true;
  if (s == "false" || s == "0" || s == "no" || s == "off")
    return false;
  bad_value(key, raw, "true or false");
}

std::string_view strip_brackets(std::string_view s, char open, char close)
{
  s = trim(s);
  if (!s.empty() && s.front() == open) {
    if (s.back() != close)
      throw ConfigError(std::string("unbalanced '") + open + "' in '" + std::string(s) + "'");
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view s)
{
  std::vector<std::string_view> out;
  if (trim(s).empty())
    return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::uint64_t> parse_list(std::string_view key, std::string_view raw)
{
  std::vector<std::uint64_t> out;
  for (auto item : split_commas(strip_brackets(raw, '[', ']')))
    out.push_back(parse_count(key, item));
  return out;
}

std::string join(const std::vector<std::uint64_t>& v)
{
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i)
    out += (i ? "," : "") + std::to_string(v[i]);
  return out + "]";
}

std::string fmt_real(double v)
{
  std::ostringstream os;
  os << v;
  return os.str();
}

// `{a:1, b:2}` or `{1, 2}` onto the given field names, in order.
void parse_record(std::string_view key, std::string_view raw, const std::vector<std::string_view>& names,
                  const std::function<void(std::size_t field, std::string_view value)>& set)
{
  const auto items = split_commas(strip_brackets(raw, '{', '}'));
  if (items.size() > names.size())
    bad_value(key, raw, std::to_string(names.size()) + " fields");
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string_view item = items[i];
    std::size_t field = i;
    if (const auto colon = item.find(':'); colon != std::string_view::npos) {
      const std::string name = lower(trim(item.substr(0, colon)));
      auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end() && name == "latency")
        it = std::find(names.begin(), names.end(), "lat");
      if (it == names.end())
        throw ConfigError(std::string(key) + ": unknown field '" + name + "'");
      field = static_cast<std::size_t>(it - names.begin());
      item = trim(item.substr(colon + 1));
    }
    set(field, item);
  }
}

struct KeyDef {
  std::string name;
  std::function<void(SimConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const SimConfig&)> get;
};

void add_tlb_keys(std::vector<KeyDef>& keys, const std::string& name, TlbGeometry TlbConfig::*member)
{
  static const std::vector<std::string_view> fields{"entries", "ways", "lat", "mshr"};
  auto field_ref = [](TlbGeometry& g, std::size_t f) -> std::size_t* {
    return f == 0 ? &g.entries : f == 1 ? &g.ways : f == 3 ? &g.mshr : nullptr;
  };
  auto set_field = [field_ref](TlbGeometry& g, std::size_t f, std::string_view key, std::string_view v) {
    if (f == 2)
      g.latency = parse_count(key, v);
    else
      *field_ref(g, f) = parse_count(key, v);
  };
  keys.push_back({"tlb." + name,
                  [member, set_field](SimConfig& c, std::string_view key, std::string_view v) {
                    TlbGeometry& g = c.hierarchy.tlb.*member;
                    parse_record(key, v, fields, [&](std::size_t f, std::string_view item) { set_field(g, f, key, item); });
                  },
                  [member](const SimConfig& c) {
                    const TlbGeometry& g = c.hierarchy.tlb.*member;
                    return "{entries:" + std::to_string(g.entries) + ", ways:" + std::to_string(g.ways) +
                           ", lat:" + std::to_string(g.latency) + ", mshr:" + std::to_string(g.mshr) + "}";
                  }});
  for (std::size_t f = 0; f < fields.size(); ++f)
    keys.push_back({"tlb." + name + "." + std::string(fields[f]),
                    [member, set_field, f](SimConfig& c, std::string_view key, std::string_view v) {
                      set_field(c.hierarchy.tlb.*member, f, key, v);
                    },
                    nullptr});
}

void add_cache_keys(std::vector<KeyDef>& keys, const std::string& name, CacheConfig HierarchyConfig::*member)
{
  static const std::vector<std::string_view> fields{"size", "ways", "lat", "mshr"};
  auto set_field = [](CacheConfig& g, std::size_t f, std::string_view key, std::string_view v) {
    const std::uint64_t n = parse_count(key, v);
    switch (f) {
    case 0: g.size_bytes = n; break;
    case 1: g.ways = static_cast<std::uint32_t>(n); break;
    case 2: g.latency = n; break;
    default: g.mshr_entries = n; break;
    }
  };
  keys.push_back({"cache." + name,
                  [member, set_field](SimConfig& c, std::string_view key, std::string_view v) {
                    CacheConfig& g = c.hierarchy.*member;
                    parse_record(key, v, fields, [&](std::size_t f, std::string_view item) { set_field(g, f, key, item); });
                  },
                  [member](const SimConfig& c) {
                    const CacheConfig& g = c.hierarchy.*member;
                    return "{size:" + std::to_string(g.size_bytes) + "B, ways:" + std::to_string(g.ways) +
                           ", lat:" + std::to_string(g.latency) + ", mshr:" + std::to_string(g.mshr_entries) + "}";
                  }});
  for (std::size_t f = 0; f < fields.size(); ++f)
    keys.push_back({"cache." + name + "." + std::string(fields[f]),
                    [member, set_field, f](SimConfig& c, std::string_view key, std::string_view v) {
                      set_field(c.hierarchy.*member, f, key, v);
                    },
                    nullptr});
}

template <typename T>
KeyDef count_key(std::string name, std::function<T&(SimConfig&)> ref)
{
  return {std::move(name),
          [ref](SimConfig& c, std::string_view key, std::string_view v) { ref(c) = static_cast<T>(parse_count(key, v)); },
          [ref](const SimConfig& c) { return std::to_string(ref(const_cast<SimConfig&>(c))); }};
}

KeyDef real_key(std::string name, std::function<double&(SimConfig&)> ref)
{
  return {std::move(name), [ref](SimConfig& c, std::string_view key, std::string_view v) { ref(c) = parse_real(key, v); },
          [ref](const SimConfig& c) { return fmt_real(ref(const_cast<SimConfig&>(c))); }};
}

KeyDef bool_key(std::string name, std::function<bool&(SimConfig&)> ref)
{
  return {std::move(name), [ref](SimConfig& c, std::string_view key, std::string_view v) { ref(c) = parse_bool(key, v); },
          [ref](const SimConfig& c) { return std::string(ref(const_cast<SimConfig&>(c)) ? "true" : "false"); }};
}

KeyDef threshold_key(std::string name, std::int64_t TiprpConfig::*member)
{
  return {std::move(name),
          [member](SimConfig& c, std::string_view key, std::string_view v) {
            const std::string s = lower(trim(v));
            c.hierarchy.tiprp.*member = (s == "auto" || s == "mid") ? -1 : static_cast<std::int64_t>(parse_count(key, v));
          },
          [member](const SimConfig& c) {
            const auto t = c.hierarchy.tiprp.*member;
            return t < 0 ? std::string("auto") : std::to_string(t);
          }};
}

IdealMode parse_ideal(std::string_view key, std::string_view raw)
{
  const std::string s = lower(trim(raw));
  if (s == "none" || s == "off")
    return IdealMode::None;
  if (s == "page-cross" || s == "pgc")
    return IdealMode::PageCross;
  if (s == "all")
    return IdealMode::All;
  bad_value(key, raw, "none, page-cross or all");
}

std::string to_string(IdealMode m) { return m == IdealMode::None ? "none" : m == IdealMode::PageCross ? "page-cross" : "all"; }

ReplacementKind parse_kind(std::string_view key, std::string_view raw)
{
  try {
    return parse_replacement(lower(trim(raw)));
  } catch (const ConfigError&) {
    bad_value(key, raw, "lru, srrip, pip, npip, bip or tiprp");
  }
}

std::vector<KeyDef> build_keys()
{
  std::vector<KeyDef> k;
  k.push_back(count_key<unsigned>("vm.levels", [](SimConfig& c) -> unsigned& { return c.hierarchy.vm.levels; }));
  k.push_back(real_key("vm.large_page_fraction", [](SimConfig& c) -> double& { return c.hierarchy.vm.large_page_fraction; }));
  k.push_back({"vm.psc_sizes",
               [](SimConfig& c, std::string_view key, std::string_view v) {
                 const auto list = parse_list(key, v);
                 c.hierarchy.vm.psc_sizes.assign(list.begin(), list.end());
               },
               [](const SimConfig& c) {
                 return join({c.hierarchy.vm.psc_sizes.begin(), c.hierarchy.vm.psc_sizes.end()});
               }});
  k.push_back(count_key<std::uint64_t>("vm.seed", [](SimConfig& c) -> std::uint64_t& { return c.hierarchy.vm.seed; }));

  add_tlb_keys(k, "itlb", &TlbConfig::itlb);
  add_tlb_keys(k, "dtlb", &TlbConfig::dtlb);
  add_tlb_keys(k, "stlb", &TlbConfig::stlb);

  k.push_back(bool_key("tpb.enabled", [](SimConfig& c) -> bool& { return c.hierarchy.tlb.tpb.enabled; }));
  k.push_back({"tpb.organization",
               [](SimConfig& c, std::string_view key, std::string_view v) {
                 const std::string s = lower(trim(v));
                 if (s == "standalone")
                   c.hierarchy.tlb.tpb.organization = TpbOrganization::Standalone;
                 else if (s == "integrated")
                   c.hierarchy.tlb.tpb.organization = TpbOrganization::IntegratedInStlb;
                 else
                   bad_value(key, v, "standalone or integrated");
               },
               [](const SimConfig& c) {
                 return std::string(c.hierarchy.tlb.tpb.organization == TpbOrganization::Standalone ? "standalone" : "integrated");
               }});
  // Setting tpb.entries alone keeps the buffer fully associative.
  k.push_back({"tpb.entries",
               [](SimConfig& c, std::string_view key, std::string_view v) {
                 auto& t = c.hierarchy.tlb.tpb;
                 const bool fully = t.ways == t.entries;
                 t.entries = parse_count(key, v);
                 if (fully)
                   t.ways = t.entries;
               },
               [](const SimConfig& c) { return std::to_string(c.hierarchy.tlb.tpb.entries); }});
  k.push_back(count_key<std::size_t>("tpb.ways", [](SimConfig& c) -> std::size_t& { return c.hierarchy.tlb.tpb.ways; }));
  k.push_back(count_key<std::size_t>("tpb.extra_sets", [](SimConfig& c) -> std::size_t& { return c.hierarchy.tlb.tpb.extra_sets; }));

  add_cache_keys(k, "l1i", &HierarchyConfig::l1i);
  add_cache_keys(k, "l1d", &HierarchyConfig::l1d);
  add_cache_keys(k, "l2c", &HierarchyConfig::l2c);
  add_cache_keys(k, "llc", &HierarchyConfig::llc);

  k.push_back({"l2c.replacement",
               [](SimConfig& c, std::string_view key, std::string_view v) { c.hierarchy.l2c.replacement = parse_kind(key, v); },
               [](const SimConfig& c) { return std::string(to_string(c.hierarchy.l2c.replacement)); }});
  k.push_back({"l2c.ideal", [](SimConfig& c, std::string_view key, std::string_view v) { c.hierarchy.l2c.ideal = parse_ideal(key, v); },
               [](const SimConfig& c) { return to_string(c.hierarchy.l2c.ideal); }});
  k.push_back({"llc.replacement",
               [](SimConfig& c, std::string_view key, std::string_view v) { c.hierarchy.llc.replacement = parse_kind(key, v); },
               [](const SimConfig& c) { return std::string(to_string(c.hierarchy.llc.replacement)); }});

  k.push_back(threshold_key("tiprp.t1", &TiprpConfig::t1));
  k.push_back(threshold_key("tiprp.t2", &TiprpConfig::t2));
  k.push_back(count_key<unsigned>("tiprp.psel_bits", [](SimConfig& c) -> unsigned& { return c.hierarchy.tiprp.psel_bits; }));
  k.push_back({"tiprp.leaders",
               [](SimConfig& c, std::string_view key, std::string_view v) {
                 const auto list = parse_list(key, v);
                 if (list.size() != 3)
                   bad_value(key, v, "three counts [pip,npip,bip]");
                 for (std::size_t i = 0; i < 3; ++i)
                   c.hierarchy.tiprp.leaders[i] = static_cast<std::uint32_t>(list[i]);
               },
               [](const SimConfig& c) {
                 const auto& l = c.hierarchy.tiprp.leaders;
                 return join({l[0], l[1], l[2]});
               }});
  k.push_back({"tiprp.training",
               [](SimConfig& c, std::string_view key, std::string_view v) {
                 const std::string s = lower(trim(v));
                 if (s == "asymmetric")
                   c.hierarchy.tiprp.training = TiprpTraining::Asymmetric;
                 else if (s == "all-events")
                   c.hierarchy.tiprp.training = TiprpTraining::AllEvents;
                 else
                   bad_value(key, v, "asymmetric or all-events");
               },
               [](const SimConfig& c) {
                 return std::string(c.hierarchy.tiprp.training == TiprpTraining::Asymmetric ? "asymmetric" : "all-events");
               }});
  k.push_back({"tiprp.bip_training",
               [](SimConfig& c, std::string_view key, std::string_view v) {
                 const std::string s = lower(trim(v));
                 if (s == "mirror")
                   c.hierarchy.tiprp.bip_training = BipTraining::Mirror;
                 else if (s == "npip")
                   c.hierarchy.tiprp.bip_training = BipTraining::LikeNpip;
                 else
                   bad_value(key, v, "mirror or npip");
               },
               [](const SimConfig& c) {
                 return std::string(c.hierarchy.tiprp.bip_training == BipTraining::Mirror ? "mirror" : "npip");
               }});

  k.push_back(bool_key("prefetch.enabled", [](SimConfig& c) -> bool& { return c.prefetch.enabled; }));
  k.push_back(count_key<std::size_t>("prefetch.lookahead", [](SimConfig& c) -> std::size_t& { return c.prefetch.lookahead; }));
  k.push_back(count_key<std::size_t>("prefetch.next_n", [](SimConfig& c) -> std::size_t& { return c.prefetch.next_n; }));
  k.push_back({"prefetch.mode", [](SimConfig& c, std::string_view, std::string_view v) { c.prefetch.mode = parse_page_cross_mode(lower(trim(v))); },
               [](const SimConfig& c) { return std::string(to_string(c.prefetch.mode)); }});
  k.push_back(real_key("prefetch.inaccuracy", [](SimConfig& c) -> double& { return c.prefetch.inaccuracy; }));
  k.push_back(bool_key("prefetch.fill_llc", [](SimConfig& c) -> bool& { return c.prefetch.fill_llc; }));
  k.push_back(count_key<std::size_t>("prefetch.ftq", [](SimConfig& c) -> std::size_t& { return c.prefetch.ftq_entries; }));
  k.push_back(count_key<std::uint64_t>("prefetch.seed", [](SimConfig& c) -> std::uint64_t& { return c.prefetch.seed; }));

  k.push_back(count_key<Cycle>("memory.latency", [](SimConfig& c) -> Cycle& { return c.hierarchy.memory_latency; }));

  auto optional_count = [](std::string name, std::optional<std::uint64_t> SimConfig::*member, std::uint64_t fallback) {
    return KeyDef{std::move(name),
                  [member](SimConfig& c, std::string_view key, std::string_view v) {
                    const std::string s = lower(trim(v));
                    if (s == "auto")
                      c.*member = std::nullopt;
                    else
                      c.*member = parse_count(key, v);
                  },
                  [member, fallback](const SimConfig& c) {
                    return (c.*member) ? std::to_string(*(c.*member)) : "auto # " + std::to_string(fallback) + " or less";
                  }};
  };
  k.push_back(optional_count("sim.warmup_records", &SimConfig::warmup_records, kDefaultWarmup));
  k.push_back(optional_count("sim.measure_records", &SimConfig::measure_records, kDefaultMeasure));
  k.push_back(real_key("sim.data_overlap", [](SimConfig& c) -> double& { return c.data_overlap; }));
  k.push_back({"sim.trace", [](SimConfig& c, std::string_view, std::string_view v) { c.trace = std::string(trim(v)); },
               [](const SimConfig& c) { return c.trace; }});
  return k;
}

const std::vector<KeyDef>& key_defs()
{
  static const std::vector<KeyDef> defs = build_keys();
  return defs;
}

const KeyDef& find_key(std::string_view key)
{
  for (const auto& d : key_defs())
    if (d.name == key)
      return d;
  std::string msg = "unknown config key '" + std::string(key) + "'; valid keys:";
  for (const auto& name : config_keys())
    msg += " " + name;
  throw ConfigError(msg);
}

} // namespace

const std::vector<std::string>& config_keys()
{
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& d : key_defs())
      out.push_back(d.name);
    return out;
  }();
  return names;
}

void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value) { find_key(trim(key)).set(cfg, trim(key), value); }

std::string get_setting(const SimConfig& cfg, std::string_view key)
{
  const KeyDef& d = find_key(trim(key));
  if (d.get)
    return d.get(cfg);
  // Sub-field keys read back through their parent record.
  const std::string name(trim(key));
  const std::string parent = name.substr(0, name.rfind('.'));
  const std::string field = name.substr(name.rfind('.') + 1);
  const std::string record = find_key(parent).get(cfg);
  const auto pos = record.find(field + ":");
  const auto end = record.find_first_of(",}", pos);
  std::string v = record.substr(pos + field.size() + 1, end - pos - field.size() - 1);
  if (!v.empty() && v.back() == 'B')
    v.pop_back();
  return v;
}

void validate(const SimConfig& cfg)
{
  const HierarchyConfig& h = cfg.hierarchy;
  validate(h.vm);
  validate(h.tlb);
  for (const CacheConfig* c : {&h.l1i, &h.l1d, &h.l2c, &h.llc})
    validate(*c);
  validate(cfg.prefetch);
  if (h.tiprp.psel_bits < 1 || h.tiprp.psel_bits > 31)
    throw ConfigError("tiprp.psel_bits must be in [1,31]");
  const std::uint64_t psel_max = (1ull << h.tiprp.psel_bits) - 1;
  for (auto t : {h.tiprp.t1, h.tiprp.t2})
    if (t > static_cast<std::int64_t>(psel_max))
      throw ConfigError("tiprp thresholds must fit in psel_bits");
  if (h.memory_latency == 0)
    throw ConfigError("memory.latency must be >= 1");
  if (cfg.measure_records && *cfg.measure_records == 0)
    throw ConfigError("sim.measure_records must be >= 1");
  if (!(cfg.data_overlap >= 0.0 && cfg.data_overlap <= 1.0))
    throw ConfigError("sim.data_overlap must be in [0,1]");
}

std::pair<std::uint64_t, std::uint64_t> record_window(const SimConfig& cfg, std::uint64_t n)
{
  if (!cfg.warmup_records && !cfg.measure_records) {
    if (n >= kDefaultWarmup + kDefaultMeasure)
      return {kDefaultWarmup, kDefaultMeasure};
    if (n == 0)
      throw ConfigError("trace is empty");
    const std::uint64_t warm = n / 3;
    return {warm, n - warm};
  }
  const std::uint64_t warm = cfg.warmup_records.value_or(0);
  if (warm >= n)
    throw ConfigError("trace has " + std::to_string(n) + " records, fewer than warmup + measure");
  const std::uint64_t measure = cfg.measure_records.value_or(n - warm);
  if (warm + measure > n)
    throw ConfigError("trace has " + std::to_string(n) + " records, fewer than warmup + measure (" +
                      std::to_string(warm + measure) + ")");
  return {warm, measure};
}

SimConfig parse_config(std::string_view text, std::string_view source, SimConfig base)
{
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos)
      throw ConfigError(where + "expected 'key = value'");
    try {
      apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  validate(base);
  return base;
}

SimConfig load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::ios_base::failure("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::string format_config(const SimConfig& cfg)
{
  std::string out;
  for (const auto& d : key_defs())
    if (d.get)
      out += d.name + " = " + d.get(cfg) + "\n";
  return out;
}

const std::vector<std::string>& scenario_names()
{
  static const std::vector<std::string> names{"baseline",      "no-page-cross", "permit-page-cross", "free-translation", "ideal-l2c-pgc",
                                              "ideal-l2c-all", "ipcat",         "tiprp-only",        "tpb-only"};
  return names;
}

const Overlay& scenario_overlay(std::string_view name)
{
  static const std::map<std::string, Overlay, std::less<>> presets{
      {"baseline", {}},
      {"no-page-cross", {{"prefetch.mode", "no-page-cross"}}},
      {"permit-page-cross", {{"prefetch.mode", "permit-page-cross"}}},
      {"free-translation", {{"prefetch.mode", "free-translation"}}},
      {"ideal-l2c-pgc", {{"l2c.ideal", "page-cross"}}},
      {"ideal-l2c-all", {{"l2c.ideal", "all"}}},
      {"ipcat", {{"tpb.enabled", "true"}, {"l2c.replacement", "tiprp"}}},
      {"tiprp-only", {{"l2c.replacement", "tiprp"}}},
      {"tpb-only", {{"tpb.enabled", "true"}}},
  };
  const auto it = presets.find(name);
  if (it == presets.end()) {
    std::string msg = "unknown scenario '" + std::string(name) + "'; presets:";
    for (const auto& n : scenario_names())
      msg += " " + n;
    throw ConfigError(msg);
  }
  return it->second;
}

SimConfig apply_overlay(SimConfig cfg, const Overlay& overlay)
{
  for (const auto& [key, value] : overlay)
    apply_setting(cfg, key, value);
  validate(cfg);
  return cfg;
}

} // namespace ipcat
