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


#include "ipcat/trace.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

namespace ipcat
{

namespace
{

constexpr std::uint64_t kVaddrLimit = 1ull << kVaddrBits;

std::uint64_t load_le64(const unsigned char* p)
{
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i)
    v = (v << 8) | p[i];
  return v;
}

void store_le64(unsigned char* p, std::uint64_t v)
{
  for (int i = 0; i < 8; ++i) {
    p[i] = static_cast<unsigned char>(v & 0xff);
    v >>= 8;
  }
}

char kind_letter(RecordKind k)
{
  switch (k) {
  case RecordKind::IFetch:
    return 'I';
  case RecordKind::Load:
    return 'L';
  case RecordKind::Store:
    return 'S';
  }
  return '?';
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double unit_real(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace

TraceReader::TraceReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary)
{
  if (!in_)
    throw TraceError("cannot open trace '" + path.string() + "'");

  std::array<char, kTraceHeaderBytes> header{};
  in_.read(header.data(), 4);
  if (in_.gcount() == 4 && std::memcmp(header.data(), kTraceMagic, 4) == 0) {
    format_ = TraceFormat::Binary;
    in_.read(header.data() + 4, 4);
    if (in_.gcount() != 4)
      throw TraceError(path.string() + ": truncated header at byte 4");
    const auto* u = reinterpret_cast<const unsigned char*>(header.data());
    const std::uint32_t version = u[4] | (u[5] << 8) | (u[6] << 16) | (static_cast<std::uint32_t>(u[7]) << 24);
    if (version != kTraceVersion)
      throw TraceError(path.string() + ": unsupported trace version " + std::to_string(version) + " at byte 4");
    offset_ = kTraceHeaderBytes;
  } else {
    format_ = TraceFormat::Text;
    in_.clear();
    in_.seekg(0);
  }
}

bool TraceReader::next(TraceRecord& out) { return format_ == TraceFormat::Binary ? next_binary(out) : next_text(out); }

bool TraceReader::next_binary(TraceRecord& out)
{
  std::array<unsigned char, kTraceRecordBytes> buf{};
  in_.read(reinterpret_cast<char*>(buf.data()), kTraceRecordBytes);
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (got == 0)
    return false;
  if (got != kTraceRecordBytes)
    throw TraceError(path_.string() + ": truncated record at byte " + std::to_string(offset_));
  if (buf[0] > 2)
    throw TraceError(path_.string() + ": invalid record kind " + std::to_string(buf[0]) + " at byte " + std::to_string(offset_));
  if (buf[9] != 0)
    throw TraceError(path_.string() + ": nonzero reserved byte at byte " + std::to_string(offset_ + 9));
  out.kind = static_cast<RecordKind>(buf[0]);
  out.vaddr = load_le64(buf.data() + 1);
  if (out.vaddr >= kVaddrLimit)
    throw TraceError(path_.string() + ": non-canonical vaddr at byte " + std::to_string(offset_ + 1));
  offset_ += kTraceRecordBytes;
  return true;
}

bool TraceReader::next_text(TraceRecord& out)
{
  std::string raw;
  while (std::getline(in_, raw)) {
    ++offset_;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;

    auto fail = [&](const std::string& why) {
      return TraceError(path_.string() + ":" + std::to_string(offset_) + ": " + why + " in '" + raw + "'");
    };

    switch (line.front()) {
    case 'I':
      out.kind = RecordKind::IFetch;
      break;
    case 'L':
      out.kind = RecordKind::Load;
      break;
    case 'S':
      out.kind = RecordKind::Store;
      break;
    default:
      throw fail("unknown record kind");
    }
    line.remove_prefix(1);
    if (line.empty() || (line.front() != ' ' && line.front() != '\t'))
      throw fail("expected whitespace after kind");
    line = trim(line);
    if (line.size() > 2 && line[0] == '0' && (line[1] == 'x' || line[1] == 'X'))
      line.remove_prefix(2);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v, 16);
    if (ec != std::errc{} || ptr != line.data() + line.size())
      throw fail("malformed hex address");
    if (v >= kVaddrLimit)
      throw fail("non-canonical vaddr");
    out.vaddr = v;
    return true;
  }
  return false;
}

std::vector<TraceRecord> read_trace(const std::filesystem::path& path)
{
  TraceReader reader(path);
  std::vector<TraceRecord> out;
  if (reader.format() == TraceFormat::Binary) {
    std::error_code ec;
    auto bytes = std::filesystem::file_size(path, ec);
    if (!ec && bytes > kTraceHeaderBytes)
      out.reserve((bytes - kTraceHeaderBytes) / kTraceRecordBytes);
  }
  TraceRecord r;
  while (reader.next(r))
    out.push_back(r);
  return out;
}

void write_trace(std::span<const TraceRecord> records, const std::filesystem::path& path, TraceFormat format)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw TraceError("cannot open '" + path.string() + "' for writing");

  if (format == TraceFormat::Binary) {
    std::array<unsigned char, kTraceHeaderBytes> header{'I', 'P', 'C', 'T', 0, 0, 0, 0};
    header[4] = kTraceVersion & 0xff;
    out.write(reinterpret_cast<const char*>(header.data()), header.size());
    std::array<unsigned char, kTraceRecordBytes> buf{};
    for (const auto& r : records) {
      buf[0] = static_cast<unsigned char>(r.kind);
      store_le64(buf.data() + 1, r.vaddr);
      buf[9] = 0;
      out.write(reinterpret_cast<const char*>(buf.data()), buf.size());
    }
  } else {
    std::array<char, 32> hex{};
    for (const auto& r : records) {
      auto [end, ec] = std::to_chars(hex.data(), hex.data() + hex.size(), r.vaddr, 16);
      out << kind_letter(r.kind) << " 0x" << std::string_view(hex.data(), static_cast<std::size_t>(end - hex.data())) << '\n';
    }
  }
  out.flush();
  if (!out)
    throw TraceError("write failed for '" + path.string() + "'");
}

void validate(const TraceGenSpec& spec)
{
  if (spec.code_pages < 1)
    throw ConfigError("trace generator: code_pages must be >= 1");
  if (spec.functions < 1)
    throw ConfigError("trace generator: functions must be >= 1");
  if (spec.func_size_lines < 1)
    throw ConfigError("trace generator: func_size_lines must be >= 1");
  if (spec.length < 1)
    throw ConfigError("trace generator: length must be >= 1");
  if (!(spec.popularity_skew >= 0.0))
    throw ConfigError("trace generator: popularity_skew must be >= 0");
  if (!(spec.data_ratio >= 0.0 && spec.data_ratio < 1.0))
    throw ConfigError("trace generator: data_ratio must be in [0,1)");
  if (spec.data_ratio > 0.0 && spec.data_pages < 1)
    throw ConfigError("trace generator: data_pages must be >= 1");
  if (kCodeBase + spec.code_pages * 4096 > (1ull << 32))
    throw ConfigError("trace generator: code region exceeds 4GB");
}

std::vector<TraceRecord> generate_trace(const TraceGenSpec& spec)
{
  validate(spec);
  std::mt19937_64 rng(spec.seed);

  const std::uint64_t total_lines = spec.code_pages * (4096 / kLineSize);
  struct Function {
    std::uint64_t first_line;
    std::uint64_t lines;
  };
  std::vector<Function> funcs(spec.functions);
  for (std::uint64_t f = 0; f < spec.functions; ++f) {
    const std::uint64_t start = static_cast<std::uint64_t>((static_cast<unsigned __int128>(f) * total_lines) / spec.functions);
    funcs[f] = {start, std::min(spec.func_size_lines, total_lines - start)};
  }

  // Popularity rank -> function, shuffled so hot functions are scattered.
  std::vector<std::uint64_t> by_rank(spec.functions);
  for (std::uint64_t i = 0; i < spec.functions; ++i)
    by_rank[i] = i;
  for (std::uint64_t i = spec.functions; i > 1; --i)
    std::swap(by_rank[i - 1], by_rank[rng() % i]);

  std::vector<double> cdf(spec.functions);
  double acc = 0.0;
  for (std::uint64_t r = 0; r < spec.functions; ++r) {
    acc += spec.popularity_skew == 0.0 ? 1.0 : 1.0 / std::pow(static_cast<double>(r + 1), spec.popularity_skew);
    cdf[r] = acc;
  }

  auto draw_function = [&]() -> const Function& {
    const double u = unit_real(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    auto rank = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(spec.functions - 1)));
    return funcs[by_rank[rank]];
  };

  std::vector<TraceRecord> out;
  out.reserve(spec.length);
  const Function* cur = nullptr;
  std::uint64_t pos = 0;
  while (out.size() < spec.length) {
    if (spec.data_ratio > 0.0 && unit_real(rng) < spec.data_ratio) {
      const std::uint64_t page = rng() % spec.data_pages;
      const std::uint64_t line = rng() % (4096 / kLineSize);
      const auto kind = (rng() & 3) == 0 ? RecordKind::Store : RecordKind::Load;
      out.push_back({kind, kDataBase + page * 4096 + line * kLineSize});
      continue;
    }
    if (cur == nullptr || pos == cur->lines) {
      cur = &draw_function();
      pos = 0;
    }
    out.push_back({RecordKind::IFetch, kCodeBase + (cur->first_line + pos) * kLineSize});
    ++pos;
  }
  return out;
}

} // namespace ipcat
