/* Copyright 2026-present MergeMarathon contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

#include "mm/trace.hpp"

#include "test_util.hpp"

// End-to-end tests of the mergemarathon binary. MM_CLI_PATH is injected
// by the build so the tests always exercise the freshly built tool.
#ifndef MM_CLI_PATH
#error "MM_CLI_PATH must point at the mergemarathon binary"
#endif

using namespace mm;
using namespace mm::testutil;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string shell_quote(const std::string& s) {
  REQUIRE(s.find('\'') == std::string::npos);
  return "'" + s + "'";
}

// Runs the binary through the shell with stdout/stderr captured to files.
// stdin comes from stdin_file, or /dev/null so nothing ever blocks.
CliResult run_cli(const TempDir& dir, const std::string& args,
                  const std::string& stdin_file = "") {
  const std::string out_path = dir.path("cli.stdout");
  const std::string err_path = dir.path("cli.stderr");
  std::string cmd = shell_quote(MM_CLI_PATH) + " " + args;
  cmd += stdin_file.empty() ? " < /dev/null"
                            : " < " + shell_quote(stdin_file);
  cmd += " > " + shell_quote(out_path) + " 2> " + shell_quote(err_path);
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  return r;
}

bool no_temp_leftovers(const TempDir& dir) {
  for (const auto& entry : std::filesystem::directory_iterator(dir.dir())) {
    if (entry.path().filename().string().find(".tmp.") !=
        std::string::npos) {
      return false;
    }
  }
  return true;
}

const std::string kExampleTrace = "5\n2\n7\n1\n3\n4\n6\n";

}  // namespace

TEST_CASE("gen is reproducible and writes identical bytes to file and "
          "stdout") {
  TempDir dir;
  const std::string trace_path = dir.path("trace.txt");
  const CliResult to_file = run_cli(
      dir, "gen --count 50 --max 1000 --seed 42 -o " +
               shell_quote(trace_path));
  REQUIRE(to_file.exit_code == 0);
  CHECK(to_file.err.find("gen: 50 values in (0, 1000], seed 42") !=
        std::string::npos);

  const CliResult to_stdout =
      run_cli(dir, "gen --count 50 --max 1000 --seed 42 -o -");
  REQUIRE(to_stdout.exit_code == 0);
  CHECK(read_file(trace_path) == to_stdout.out);

  // The bytes must match the library output exactly.
  std::ostringstream expected;
  write_trace(generate_uniform(50, 1000, 42), expected);
  CHECK(to_stdout.out == expected.str());
}

TEST_CASE("switch reproduces the single-segment worked example") {
  TempDir dir;
  const std::string trace_path = dir.path("trace.txt");
  write_file(trace_path, kExampleTrace);

  const std::string args = "switch -i " + shell_quote(trace_path) +
                           " -o - --segments 1 --stages 4 --max 10";
  const CliResult array = run_cli(dir, args);
  REQUIRE(array.exit_code == 0);
  CHECK(array.out == "0\t1\n0\t2\n0\t5\n0\t7\n0\t3\n0\t4\n0\t6\n");
  CHECK(array.err.find("switch: 7 values, segments=1 stages=4 max=10 "
                       "array") != std::string::npos);
  CHECK(array.err.find("segment 0: [0, 11)") != std::string::npos);

  const CliResult accurate = run_cli(dir, args + " --stage-accurate");
  REQUIRE(accurate.exit_code == 0);
  CHECK(accurate.out == array.out);
  CHECK(accurate.err.find("stage-accurate") != std::string::npos);
}

TEST_CASE("switch logs the computed ranges") {
  TempDir dir;
  const std::string trace_path = dir.path("trace.txt");
  write_file(trace_path, kExampleTrace);

  const CliResult r = run_cli(dir, "switch -i " + shell_quote(trace_path) +
                                       " -o - --segments 3 --stages 2 "
                                       "--max 10");
  REQUIRE(r.exit_code == 0);
  CHECK(r.err.find("segment 0: [0, 4)") != std::string::npos);
  CHECK(r.err.find("segment 1: [4, 7)") != std::string::npos);
  CHECK(r.err.find("segment 2: [7, 11)") != std::string::npos);
}

TEST_CASE("sort consumes tagged streams") {
  TempDir dir;
  const std::string trace_path = dir.path("trace.txt");
  const std::string tagged_path = dir.path("tagged.txt");
  write_file(trace_path, kExampleTrace);

  REQUIRE(run_cli(dir, "switch -i " + shell_quote(trace_path) + " -o " +
                           shell_quote(tagged_path) +
                           " --segments 1 --stages 4 --max 10")
              .exit_code == 0);

  const CliResult sorted = run_cli(
      dir, "sort --tagged -i " + shell_quote(tagged_path) + " -o -");
  REQUIRE(sorted.exit_code == 0);
  CHECK(sorted.out == "1\n2\n3\n4\n5\n6\n7\n");
  CHECK(sorted.err.find("sort: 7 values in 1 segments") !=
        std::string::npos);
}

TEST_CASE("sort reports merge costs for plain traces") {
  TempDir dir;
  const std::string trace_path = dir.path("trace.txt");
  write_file(trace_path, "3\n1\n2\n");

  const CliResult r =
      run_cli(dir, "sort -i " + shell_quote(trace_path) + " -o -");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out == "1\n2\n3\n");
  CHECK(r.err.find("sort: 3 values, k=10; 2 initial runs") !=
        std::string::npos);
  CHECK(r.err.find("predicted work:") != std::string::npos);
}

TEST_CASE("stats text output shows exact ratios") {
  TempDir dir;
  const std::string trace_path = dir.path("trace.txt");
  write_file(trace_path, "1\n2\n5\n7\n3\n4\n6\n");

  const CliResult r =
      run_cli(dir, "stats -i " + shell_quote(trace_path));
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("total_values:") != std::string::npos);
  CHECK(r.out.find("run_count:         2\n") != std::string::npos);
  CHECK(r.out.find("median_run_length: 3.5 (7/2)\n") != std::string::npos);
  CHECK(r.out.find("3.5 (7/2)") != std::string::npos);
}

TEST_CASE("stats --json is machine readable") {
  TempDir dir;
  const std::string trace_path = dir.path("trace.txt");
  write_file(trace_path, "1\n2\n5\n7\n3\n4\n6\n");

  const CliResult plain =
      run_cli(dir, "stats --json -i " + shell_quote(trace_path));
  REQUIRE(plain.exit_code == 0);
  const nlohmann::json doc = nlohmann::json::parse(plain.out);
  CHECK(doc["total_values"] == 7);
  CHECK(doc["run_count"] == 2);
  CHECK(doc["min_run_length"] == 3);
  CHECK(doc["max_run_length"] == 4);
  CHECK(doc["avg_run_length"] == 3.5);
  CHECK(doc["avg_run_length_exact"] == "7/2");

  const std::string tagged_path = dir.path("tagged.txt");
  write_file(tagged_path, "0\t1\n0\t2\n1\t9\n1\t8\n");
  const CliResult tagged =
      run_cli(dir, "stats --json --tagged -i " + shell_quote(tagged_path));
  REQUIRE(tagged.exit_code == 0);
  const nlohmann::json tdoc = nlohmann::json::parse(tagged.out);
  CHECK(tdoc["overall"]["total_values"] == 4);
  REQUIRE(tdoc["per_segment"].size() == 2);
  CHECK(tdoc["per_segment"][0]["segment_id"] == 0);
  CHECK(tdoc["per_segment"][0]["run_count"] == 1);
  CHECK(tdoc["per_segment"][1]["run_count"] == 2);
}

TEST_CASE("gen | switch | sort pipeline matches a direct sort") {
  TempDir dir;
  const std::string trace_path = dir.path("trace.txt");
  const std::string tagged_path = dir.path("tagged.txt");
  const std::string via_switch = dir.path("via_switch.txt");
  const std::string direct = dir.path("direct.txt");

  REQUIRE(run_cli(dir, "gen --count 200 --max 500 --seed 7 -o " +
                           shell_quote(trace_path))
              .exit_code == 0);
  REQUIRE(run_cli(dir, "switch -i " + shell_quote(trace_path) + " -o " +
                           shell_quote(tagged_path) +
                           " --segments 4 --stages 8 --max 500")
              .exit_code == 0);
  REQUIRE(run_cli(dir, "sort --tagged -i " + shell_quote(tagged_path) +
                           " -o " + shell_quote(via_switch))
              .exit_code == 0);
  REQUIRE(run_cli(dir, "sort -i " + shell_quote(trace_path) + " -o " +
                           shell_quote(direct))
              .exit_code == 0);

  const std::string expected = read_file(direct);
  REQUIRE_FALSE(expected.empty());
  CHECK(read_file(via_switch) == expected);

  // Same flow through actual pipes, every stage on stdin/stdout.
  const std::string bin = shell_quote(MM_CLI_PATH);
  const std::string piped = dir.path("piped.txt");
  const std::string cmd =
      bin + " gen --count 200 --max 500 --seed 7 -o - 2> /dev/null | " +
      bin +
      " switch -i - -o - --segments 4 --stages 8 --max 500 2> /dev/null | " +
      bin + " sort --tagged -i - -o - 2> /dev/null > " + shell_quote(piped);
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(read_file(piped) == expected);
}

TEST_CASE("errors exit nonzero with a diagnostic and leave no output") {
  TempDir dir;

  SUBCASE("missing input file") {
    const std::string target = dir.path("out.txt");
    const CliResult r = run_cli(
        dir, "sort -i " + shell_quote(dir.path("absent.txt")) + " -o " +
                 shell_quote(target));
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK(r.err.find("cannot open") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(target));
    CHECK(no_temp_leftovers(dir));
  }

  SUBCASE("malformed trace names the line") {
    const std::string bad = dir.path("bad.txt");
    write_file(bad, "5\nx\n");
    const std::string target = dir.path("out.txt");
    const CliResult r = run_cli(
        dir, "switch -i " + shell_quote(bad) + " -o " +
                 shell_quote(target) + " --segments 1 --stages 2 --max 10");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(target));
    CHECK(no_temp_leftovers(dir));
  }

  SUBCASE("key outside the declared domain names the position") {
    const std::string bad = dir.path("bad.txt");
    write_file(bad, "3\n12\n");
    const CliResult r = run_cli(
        dir, "switch -i " + shell_quote(bad) +
                 " -o - --segments 2 --stages 2 --max 10");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK(r.err.find("position 2") != std::string::npos);
  }

  SUBCASE("tagged id outside the declared segment count") {
    const std::string bad = dir.path("bad.txt");
    write_file(bad, "0\t5\n9\t2\n");
    const CliResult r = run_cli(
        dir, "sort --tagged --segments 1 -i " + shell_quote(bad) + " -o -");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("segment id 9 out of range [0, 1) at position 2") !=
          std::string::npos);
  }

  SUBCASE("missing required flag") {
    const CliResult r = run_cli(dir, "gen -o -");
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("--count") != std::string::npos);
  }

  SUBCASE("unknown subcommand") {
    const CliResult r = run_cli(dir, "frobnicate");
    CHECK(r.exit_code != 0);
    CHECK_FALSE(r.err.empty());
  }

  SUBCASE("unwritable output path") {
    const std::string bad_out =
        (dir.dir() / "no_such_dir" / "out.txt").string();
    const std::string trace_path = dir.path("trace.txt");
    write_file(trace_path, "1\n2\n");
    const CliResult r = run_cli(
        dir, "sort -i " + shell_quote(trace_path) + " -o " +
                 shell_quote(bad_out));
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(bad_out));
    CHECK(no_temp_leftovers(dir));
  }
}

TEST_CASE("bench writes the CSV grid and optional JSON") {
  TempDir dir;
  const std::string trace_path = dir.path("trace.txt");
  const std::string csv_path = dir.path("results.csv");
  const std::string json_path = dir.path("results.json");

  REQUIRE(run_cli(dir, "gen --count 300 --max 500 --seed 9 -o " +
                           shell_quote(trace_path))
              .exit_code == 0);

  const CliResult r = run_cli(
      dir, "bench -i " + shell_quote(trace_path) +
               " --segments-list 1,2 --stages-list 2,4 --k 4 --reps 2 "
               "--max 500 --trace-id custom --out " +
               shell_quote(csv_path) + " --json " + shell_quote(json_path));
  REQUIRE(r.exit_code == 0);
  CHECK(r.err.find("baseline:") != std::string::npos);
  CHECK(r.err.find("bench: wrote 10 rows to") != std::string::npos);

  const std::string csv = read_file(csv_path);
  std::istringstream lines(csv);
  std::string line;
  std::size_t line_count = 0;
  while (std::getline(lines, line)) {
    ++line_count;
    if (line_count == 1) {
      CHECK(line.substr(0, 9) == "trace_id,");
    } else {
      CHECK(line.substr(0, 7) == "custom,");
    }
  }
  // Header, reps baseline rows, then the 2 x 2 grid with 2 reps per cell.
  CHECK(line_count == 1 + 2 + 2 * 2 * 2);

  const nlohmann::json doc = nlohmann::json::parse(read_file(json_path));
  REQUIRE(doc.is_array());
  CHECK(doc.size() == 10);
  CHECK(doc[0]["trace_id"] == "custom");
  CHECK(no_temp_leftovers(dir));
}
