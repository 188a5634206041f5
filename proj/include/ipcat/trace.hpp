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


#ifndef IPCAT_TRACE_HPP
#define IPCAT_TRACE_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "ipcat/common.hpp"

namespace ipcat
{

enum class RecordKind : std::uint8_t { IFetch = 0, Load = 1, Store = 2 };

struct TraceRecord {
  RecordKind kind = RecordKind::IFetch;
  std::uint64_t vaddr = 0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

enum class TraceFormat { Binary, Text };

// Binary layout: "IPCT" + u32 LE version, then 10-byte records
// (kind u8, vaddr u64 LE, reserved u8 = 0).
inline constexpr char kTraceMagic[4] = {'I', 'P', 'C', 'T'};
inline constexpr std::uint32_t kTraceVersion = 1;
inline constexpr std::size_t kTraceHeaderBytes = 8;
inline constexpr std::size_t kTraceRecordBytes = 10;

/// Streams records from a binary or text trace. The format is sniffed from
/// the first four bytes.
class TraceReader
{
public:
  explicit TraceReader(const std::filesystem::path& path);

  /// Returns false at end of trace. Throws TraceError on malformed input.
  bool next(TraceRecord& out);

  [[nodiscard]] TraceFormat format() const { return format_; }

private:
  bool next_binary(TraceRecord& out);
  bool next_text(TraceRecord& out);

  std::filesystem::path path_;
  std::ifstream in_;
  TraceFormat format_ = TraceFormat::Text;
  std::uint64_t offset_ = 0; // byte offset (binary) or line number (text)
};

std::vector<TraceRecord> read_trace(const std::filesystem::path& path);
void write_trace(std::span<const TraceRecord> records, const std::filesystem::path& path, TraceFormat format);

/// Parameters of the synthetic server-like trace generator.
struct TraceGenSpec {
  std::uint64_t code_pages = 512;
  std::uint64_t functions = 2048;
  std::uint64_t func_size_lines = 16;
  double popularity_skew = 0.0; // Zipf exponent over functions
  double data_ratio = 0.0;      // fraction of Load/Store records
  std::uint64_t data_pages = 4096;
  std::uint64_t length = 100000;
  std::uint64_t seed = 1;
};

inline constexpr std::uint64_t kCodeBase = 0x400000;        // below 2^32
inline constexpr std::uint64_t kDataBase = 1ull << 40;

void validate(const TraceGenSpec& spec);

/*
 * Emits a deterministic trace: functions are laid out evenly over the code
 * pages, one is drawn by Zipf popularity, and its lines are fetched in order
 * (one IFetch record per cache line) before the next draw. Data records are
 * interleaved with probability data_ratio and fall on uniformly drawn lines
 * of a disjoint data region.
 */
std::vector<TraceRecord> generate_trace(const TraceGenSpec& spec);

} // namespace ipcat

#endif
