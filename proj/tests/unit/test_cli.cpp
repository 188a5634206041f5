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


// Drives the built ipcat binary. IPCAT_CLI_PATH is set by the build.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace
{

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch()
{
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("ipcat_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli(const std::string& args)
{
  const auto out = scratch() / "stdout";
  const auto err = scratch() / "stderr";
  const std::string cmd = std::string(IPCAT_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

const fs::path& small_trace()
{
  static const fs::path p = [] {
    auto t = scratch() / "small.ipct";
    const auto r = cli("gen --code-pages 128 --functions 256 --data-ratio 0.1 --length 6000 --seed 4 -o " + t.string());
    EXPECT_EQ(r.code, 0) << r.err;
    return t;
  }();
  return p;
}

std::vector<std::string> csv_fields(const std::string& line)
{
  std::vector<std::string> out;
  std::stringstream s(line);
  std::string f;
  while (std::getline(s, f, ','))
    out.push_back(f);
  return out;
}

std::vector<std::string> lines(const std::string& text)
{
  std::vector<std::string> out;
  std::stringstream s(text);
  std::string l;
  while (std::getline(s, l))
    out.push_back(l);
  return out;
}

} // namespace

TEST(Cli, GenIsByteIdenticalPerSeed)
{
  const auto a = scratch() / "a.ipct", b = scratch() / "b.ipct", c = scratch() / "c.ipct";
  const std::string args = "gen --code-pages 64 --functions 100 --skew 0.9 --length 5000 --seed 11 -o ";
  ASSERT_EQ(cli(args + a.string()).code, 0);
  ASSERT_EQ(cli(args + b.string()).code, 0);
  ASSERT_EQ(cli("gen --code-pages 64 --functions 100 --skew 0.9 --length 5000 --seed 12 -o " + c.string()).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_NE(slurp(a), slurp(c));
  EXPECT_EQ(fs::file_size(a), 8u + 10u * 5000u);
}

TEST(Cli, GenTextFormat)
{
  const auto t = scratch() / "t.txt";
  ASSERT_EQ(cli("gen --code-pages 1 --functions 1 --func-size 4 --length 8 --seed 7 --format text -o " + t.string()).code, 0);
  EXPECT_EQ(slurp(t), "I 0x400000\nI 0x400040\nI 0x400080\nI 0x4000c0\nI 0x400000\nI 0x400040\nI 0x400080\nI 0x4000c0\n");
}

TEST(Cli, GenUsageErrors)
{
  const auto t = scratch() / "u.ipct";
  EXPECT_EQ(cli("gen --code-pages 8 -o " + t.string()).code, 2);            // --length missing
  EXPECT_EQ(cli("gen --length 10 --code-pages 0 -o " + t.string()).code, 2);
  EXPECT_EQ(cli("gen --length 10 --data-ratio 1.0 -o " + t.string()).code, 2);
  EXPECT_EQ(cli("gen --length 10 --format xml -o " + t.string()).code, 2);
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
}

TEST(Cli, RunPrintsJsonReport)
{
  const auto r = cli("run " + small_trace().string() + " --set l2c.replacement=tiprp --set tpb.enabled=true");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["records"].get<std::uint64_t>(), 4000u);
  EXPECT_GT(j["cycles"].get<std::uint64_t>(), 0u);
  EXPECT_GT(j["policy_selection_histogram_pip"].get<std::uint64_t>() + j["policy_selection_histogram_npip"].get<std::uint64_t>() +
                j["policy_selection_histogram_bip"].get<std::uint64_t>(),
            0u);
  EXPECT_EQ(j["storage_overhead_bits"].get<std::uint64_t>(), 6464u + 16u + 20u);
}

TEST(Cli, RunCsvHasHeaderAndRow)
{
  const auto r = cli("run " + small_trace().string() + " --csv");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(csv_fields(ls[0]).size(), csv_fields(ls[1]).size());
  EXPECT_EQ(csv_fields(ls[0])[0], "records");
}

TEST(Cli, ConfigErrorsExitOne)
{
  const auto cfg = scratch() / "bad.cfg";
  std::ofstream(cfg) << "tpb.enabled = true\nl2c.replacement = ship\n";
  const auto r = cli("run " + small_trace().string() + " -c " + cfg.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad.cfg:2:"), std::string::npos) << r.err;

  const auto u = cli("run " + small_trace().string() + " --set tpb.size=64");
  EXPECT_EQ(u.code, 1);
  EXPECT_NE(u.err.find("tpb.entries"), std::string::npos); // valid keys listed

  EXPECT_EQ(cli("scenario warp-drive " + small_trace().string()).code, 1);
  EXPECT_EQ(cli("run " + small_trace().string() + " --set sim.warmup_records=100000").code, 1);
}

TEST(Cli, MissingFilesExitTwo)
{
  EXPECT_EQ(cli("run " + (scratch() / "absent.ipct").string()).code, 2);
  EXPECT_EQ(cli("run " + small_trace().string() + " -c " + (scratch() / "absent.cfg").string()).code, 2);
  const auto junk = scratch() / "junk.txt";
  std::ofstream(junk) << "I 0x1000\nQ 12\n";
  const auto r = cli("run " + junk.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(":2"), std::string::npos);
}

TEST(Cli, CompareCsvContract)
{
  const auto r = cli("compare " + small_trace().string() + " --variant-set tpb.enabled=true");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  const auto header = csv_fields(ls[0]);
  EXPECT_EQ(header[0], "scheme");
  EXPECT_EQ(header[1], "speedup");
  for (const char* col : {"prefetched_line_reuse_histogram_0", "prefetched_line_reuse_histogram_1_8",
                          "prefetched_line_reuse_histogram_9_128", "prefetched_line_reuse_histogram_gt128", "cycles",
                          "policy_selection_histogram_pip", "storage_overhead_bits"})
    EXPECT_NE(std::find(header.begin(), header.end(), col), header.end()) << col;
  EXPECT_EQ(csv_fields(ls[1])[0], "base");
  EXPECT_EQ(csv_fields(ls[1])[1], "1");
  EXPECT_EQ(csv_fields(ls[2])[0], "variant");
  const auto cycles_col = static_cast<std::size_t>(std::find(header.begin(), header.end(), "cycles") - header.begin());
  const double base = std::stod(csv_fields(ls[1])[cycles_col]);
  const double variant = std::stod(csv_fields(ls[2])[cycles_col]);
  EXPECT_NEAR(std::stod(csv_fields(ls[2])[1]), base / variant, 1e-12);
}

TEST(Cli, CompareIdenticalIsOne)
{
  const auto r = cli("compare " + small_trace().string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(csv_fields(lines(r.out)[2])[1], "1");
}

TEST(Cli, SweepRowsPerValue)
{
  const auto r = cli("sweep " + small_trace().string() + " --set tpb.enabled=true -k tpb.entries --values 8,32,128");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(csv_fields(ls[0])[0], "value");
  EXPECT_EQ(csv_fields(ls[1])[0], "8");
  EXPECT_EQ(csv_fields(ls[3])[0], "128");
  EXPECT_EQ(cli("sweep " + small_trace().string() + " -k tpb.bogus --values 1").code, 1);
  EXPECT_EQ(lines(cli("sweep " + small_trace().string() + " -k tpb.entries").out).size(), 1u);
}

TEST(Cli, ScenarioListShowRun)
{
  auto r = cli("scenario --list");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ipcat\n"), std::string::npos);
  EXPECT_NE(r.out.find("ideal-l2c-pgc\n"), std::string::npos);
  r = cli("scenario ipcat --show");
  EXPECT_EQ(r.out, "tpb.enabled = true\nl2c.replacement = tiprp\n");
  r = cli("scenario ipcat " + small_trace().string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(csv_fields(ls[1])[0], "baseline");
  EXPECT_EQ(csv_fields(ls[2])[0], "ipcat");
  EXPECT_EQ(cli("scenario ipcat").code, 2);
}
