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

// mergemarathon: command line front end.
//
//   gen     write a reproducible uniform random trace
//   switch  run a trace through the pipeline simulator -> tagged stream
//   sort    k-way natural merge sort of a trace or tagged stream
//   stats   run statistics of a trace or tagged stream
//   bench   baseline vs. switch-assisted sort across a (S x L) grid
//
// Paths accept '-' for stdin/stdout. Real file outputs are written to a
// temporary sibling and renamed into place, so a failed run never leaves
// a partial file behind.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "mm/bench.hpp"
#include "mm/runs.hpp"
#include "mm/sorter.hpp"
#include "mm/switch_sim.hpp"
#include "mm/trace.hpp"
#include "mm/types.hpp"

namespace {

using namespace mm;

std::string format_ratio(const Ratio& r) {
  if (r.denominator() == 1) return fmt::format("{}", r.numerator());
  return fmt::format("{}/{}", r.numerator(), r.denominator());
}

std::vector<Value> read_values(const std::string& path) {
  if (path == "-") return parse_trace(std::cin);
  return parse_trace(path);
}

std::vector<TaggedValue> read_tagged(const std::string& path) {
  if (path == "-") return parse_tagged_stream(std::cin);
  return parse_tagged_stream(path);
}

// Writes through a temporary file plus rename when path is not '-'.
void write_output(const std::string& path,
                  const std::function<void(std::ostream&)>& writer) {
  if (path == "-") {
    writer(std::cout);
    std::cout.flush();
    if (!std::cout) throw input_error("write to stdout failed");
    return;
  }
  const std::string tmp = fmt::format("{}.tmp.{}", path, ::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw input_error(fmt::format("cannot open '{}' for writing", tmp));
    }
    writer(out);
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw input_error(fmt::format("write to '{}' failed", tmp));
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw input_error(fmt::format("cannot rename '{}' to '{}'", tmp, path));
  }
}

// --max accepts a decimal bound, 'auto32' for the full 32-bit key space,
// or empty to use the observed maximum of the input.
Value resolve_max(const std::string& spec, std::span<const Value> values) {
  if (spec.empty()) {
    if (values.empty()) {
      throw input_error("--max is required when the input trace is empty");
    }
    return observed_max(values);
  }
  if (spec == "auto32") return 4294967295ULL;
  Value parsed = 0;
  const char* begin = spec.data();
  const char* end = begin + spec.size();
  auto [ptr, ec] = std::from_chars(begin, end, parsed);
  if (ec != std::errc{} || ptr != end || parsed == 0) {
    throw input_error(fmt::format(
        "--max: expected a positive integer or 'auto32', got '{}'", spec));
  }
  return parsed;
}

std::vector<std::size_t> parse_size_list(const std::string& flag,
                                         const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t cut = text.find(',', start);
    if (cut == std::string::npos) cut = text.size();
    const std::string_view item(text.data() + start, cut - start);
    std::size_t parsed = 0;
    auto [ptr, ec] =
        std::from_chars(item.data(), item.data() + item.size(), parsed);
    if (ec != std::errc{} || ptr != item.data() + item.size() ||
        parsed == 0) {
      throw input_error(fmt::format(
          "{}: expected comma-separated positive integers, got '{}'", flag,
          text));
    }
    out.push_back(parsed);
    start = cut + 1;
  }
  return out;
}

std::string default_trace_id(const std::string& input_path) {
  if (input_path == "-") return "stdin";
  const std::size_t slash = input_path.find_last_of('/');
  return slash == std::string::npos ? input_path
                                    : input_path.substr(slash + 1);
}

void print_stats_text(const RunStats& st, const std::string& indent,
                      std::ostream& out) {
  auto ratio_line = [&](const char* name, const Ratio& r) {
    if (r.denominator() == 1) {
      out << fmt::format("{}{:<18} {}\n", indent, name, r.numerator());
    } else {
      out << fmt::format("{}{:<18} {} ({})\n", indent, name, to_double(r),
                         format_ratio(r));
    }
  };
  out << fmt::format("{}{:<18} {}\n", indent, "total_values:",
                     st.total_values);
  out << fmt::format("{}{:<18} {}\n", indent, "run_count:", st.run_count);
  out << fmt::format("{}{:<18} {}\n", indent, "min_run_length:",
                     st.min_length);
  out << fmt::format("{}{:<18} {}\n", indent, "max_run_length:",
                     st.max_length);
  ratio_line("avg_run_length:", st.avg_length);
  ratio_line("median_run_length:", st.median_length);
}

nlohmann::json stats_json(const RunStats& st) {
  return {
      {"total_values", st.total_values},
      {"run_count", st.run_count},
      {"min_run_length", st.min_length},
      {"max_run_length", st.max_length},
      {"avg_run_length", to_double(st.avg_length)},
      {"avg_run_length_exact", format_ratio(st.avg_length)},
      {"median_run_length", to_double(st.median_length)},
      {"median_run_length_exact", format_ratio(st.median_length)},
  };
}

// Tagged stream split back into per-segment key sequences, stream order
// preserved inside each segment.
std::vector<std::vector<Value>> bucket_keys(
    std::span<const TaggedValue> tagged) {
  std::size_t segments = 0;
  for (const TaggedValue& tv : tagged) {
    segments = std::max(segments,
                        static_cast<std::size_t>(tv.segment_id) + 1);
  }
  std::vector<std::vector<Value>> buckets(segments);
  for (const TaggedValue& tv : tagged) {
    buckets[tv.segment_id].push_back(tv.key);
  }
  return buckets;
}

struct GenOpts {
  std::size_t count = 0;
  Value max_value = 32768;
  std::uint64_t seed = 1;
  std::string output;
};

struct SwitchOpts {
  std::string input;
  std::string output;
  std::size_t segments = 0;
  std::size_t stages = 0;
  std::string max_spec;
  bool stage_accurate = false;
};

struct SortOpts {
  std::string input;
  std::string output;
  bool tagged = false;
  std::size_t k = 10;
  std::size_t segments = 0;  // 0: infer from the tags
};

struct StatsOpts {
  std::string input;
  bool tagged = false;
  bool json = false;
};

struct BenchOpts {
  std::string input;
  std::string trace_id;
  std::string segments_list = "1,4,8,16,32,64,128";
  std::string stages_list = "4,8,16,32,64,128";
  std::size_t k = 10;
  std::size_t reps = 10;
  std::string out = "results.csv";
  std::string json_path;
  std::string max_spec;
};

void cmd_gen(const GenOpts& o) {
  const std::vector<Value> values =
      generate_uniform(o.count, o.max_value, o.seed);
  write_output(o.output,
               [&](std::ostream& out) { write_trace(values, out); });
  fmt::print(stderr, "gen: {} values in (0, {}], seed {}\n", values.size(),
             o.max_value, o.seed);
}

void cmd_switch(const SwitchOpts& o) {
  const std::vector<Value> input = read_values(o.input);
  SwitchConfig config{o.segments, o.stages, resolve_max(o.max_spec, input)};
  config.validate();
  const SwitchMode mode = o.stage_accurate ? SwitchMode::stage_accurate
                                           : SwitchMode::array;
  const std::vector<Interval> ranges = set_ranges(config);
  const std::vector<TaggedValue> tagged = apply_switch(config, input, mode);
  write_output(o.output,
               [&](std::ostream& out) { write_tagged_stream(tagged, out); });
  fmt::print(stderr, "switch: {} values, segments={} stages={} max={} {}\n",
             input.size(), config.number_of_segments, config.segment_length,
             config.max_value,
             mode == SwitchMode::array ? "array" : "stage-accurate");
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    fmt::print(stderr, "  segment {}: [{}, {})\n", i, ranges[i].lo,
               ranges[i].hi);
  }
}

void cmd_sort(const SortOpts& o) {
  if (o.tagged) {
    const std::vector<TaggedValue> tagged = read_tagged(o.input);
    std::size_t segments = o.segments;
    if (segments == 0) {
      for (const TaggedValue& tv : tagged) {
        segments = std::max(segments,
                            static_cast<std::size_t>(tv.segment_id) + 1);
      }
    }
    const TaggedSortResult result = sort_tagged_stream(tagged, segments, o.k);
    write_output(o.output, [&](std::ostream& out) {
      write_trace(result.sorted, out);
    });
    std::size_t runs = 0;
    std::size_t iterations = 0;
    std::uint64_t moves = 0;
    std::uint64_t comparisons = 0;
    for (const MergeCostReport& r : result.per_segment) {
      runs += r.initial_runs;
      iterations = std::max(iterations, r.iterations);
      moves += r.measured_moves;
      comparisons += r.measured_comparisons;
    }
    fmt::print(stderr,
               "sort: {} values in {} segments, k={}; {} initial runs, "
               "max {} iterations, {} moves, {} comparisons\n",
               result.sorted.size(), segments, o.k, runs, iterations, moves,
               comparisons);
    return;
  }
  const std::vector<Value> values = read_values(o.input);
  const SortResult result = natural_merge_sort(values, o.k);
  write_output(o.output,
               [&](std::ostream& out) { write_trace(result.sorted, out); });
  const MergeCostReport& r = result.report;
  fmt::print(stderr,
             "sort: {} values, k={}; {} initial runs (avg length {}), "
             "{} iterations, {} moves, {} comparisons\n",
             r.total_values, o.k, r.initial_runs,
             format_ratio(r.avg_initial_run_length), r.iterations,
             r.measured_moves, r.measured_comparisons);
  fmt::print(stderr, "  predicted work: parallel {} sequential {}\n",
             format_ratio(r.predicted_work_parallel),
             format_ratio(r.predicted_work_sequential));
}

void cmd_stats(const StatsOpts& o) {
  if (!o.tagged) {
    const std::vector<Value> values = read_values(o.input);
    const RunStats st = run_stats(values);
    if (o.json) {
      std::cout << stats_json(st).dump(2) << "\n";
    } else {
      print_stats_text(st, "", std::cout);
    }
    return;
  }
  const std::vector<TaggedValue> tagged = read_tagged(o.input);
  std::vector<Value> keys;
  keys.reserve(tagged.size());
  for (const TaggedValue& tv : tagged) keys.push_back(tv.key);
  const RunStats overall = run_stats(keys);
  const std::vector<std::vector<Value>> buckets = bucket_keys(tagged);
  if (o.json) {
    nlohmann::json doc;
    doc["overall"] = stats_json(overall);
    doc["per_segment"] = nlohmann::json::array();
    for (std::size_t s = 0; s < buckets.size(); ++s) {
      nlohmann::json entry = stats_json(run_stats(buckets[s]));
      entry["segment_id"] = s;
      doc["per_segment"].push_back(std::move(entry));
    }
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "overall:\n";
    print_stats_text(overall, "  ", std::cout);
    for (std::size_t s = 0; s < buckets.size(); ++s) {
      std::cout << fmt::format("segment {}:\n", s);
      print_stats_text(run_stats(buckets[s]), "  ", std::cout);
    }
  }
}

void cmd_bench(const BenchOpts& o) {
  const std::vector<Value> values = read_values(o.input);
  const std::string trace_id =
      o.trace_id.empty() ? default_trace_id(o.input) : o.trace_id;
  const Value max_value = resolve_max(o.max_spec, values);
  const std::vector<std::size_t> counts =
      parse_size_list("--segments-list", o.segments_list);
  const std::vector<std::size_t> lengths =
      parse_size_list("--stages-list", o.stages_list);

  fmt::print(stderr, "bench: trace '{}', {} values, k={}, reps={}\n",
             trace_id, values.size(), o.k, o.reps);
  const BaselineResult baseline = run_baseline(values, o.k, o.reps);
  fmt::print(stderr,
             "baseline: median {:.6f}s avg {:.6f}s, {} initial runs, "
             "{} iterations\n",
             median(baseline.rep_seconds), average(baseline.rep_seconds),
             baseline.report.initial_runs, baseline.report.iterations);

  std::vector<SweepResult> rows = baseline_rows(baseline, trace_id, o.k);
  const std::vector<SweepResult> sweep = run_sweep(
      values, baseline, counts, lengths, o.k, o.reps, trace_id, max_value);

  const double baseline_median = median(baseline.rep_seconds);
  for (std::size_t i = 0; i < sweep.size(); i += o.reps) {
    std::vector<double> with;
    for (std::size_t r = 0; r < o.reps; ++r) {
      with.push_back(sweep[i + r].wall_time_with_switch);
    }
    const double med = median(with);
    const double improvement =
        baseline_median > 0.0 ? 1.0 - med / baseline_median : 0.0;
    fmt::print(stderr,
               "  segments={:>4} stages={:>4} median {:.6f}s "
               "improvement {:+.1f}%  iterations {} (baseline {})\n",
               sweep[i].number_of_segments, sweep[i].segment_length, med,
               improvement * 100.0, sweep[i].measured_iterations,
               baseline.report.iterations);
  }
  rows.insert(rows.end(), sweep.begin(), sweep.end());

  write_output(o.out, [&](std::ostream& out) { emit_csv(rows, out); });
  fmt::print(stderr, "bench: wrote {} rows to {}\n", rows.size(), o.out);
  if (!o.json_path.empty()) {
    write_output(o.json_path,
                 [&](std::ostream& out) { out << to_json(rows); });
    fmt::print(stderr, "bench: wrote JSON rows to {}\n", o.json_path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);

  CLI::App app{
      "in-network run lengthening (PISA pipeline simulator) plus k-way "
      "natural merge sort"};
  app.require_subcommand(1);

  GenOpts gen_opts;
  CLI::App* gen = app.add_subcommand("gen", "generate a uniform trace");
  gen->add_option("--count", gen_opts.count, "number of values")->required();
  gen->add_option("--max", gen_opts.max_value,
                  "largest key; domain is (0, max]")
      ->capture_default_str();
  gen->add_option("--seed", gen_opts.seed, "mt19937_64 seed")
      ->capture_default_str();
  gen->add_option("--output,-o", gen_opts.output,
                  "output trace path, '-' for stdout")
      ->required();
  gen->callback([&] { cmd_gen(gen_opts); });

  SwitchOpts switch_opts;
  CLI::App* sw = app.add_subcommand(
      "switch", "run a trace through the pipeline simulator");
  sw->add_option("--input,-i", switch_opts.input,
                 "input trace path, '-' for stdin")
      ->required();
  sw->add_option("--output,-o", switch_opts.output,
                 "tagged stream output path, '-' for stdout")
      ->required();
  sw->add_option("--segments", switch_opts.segments,
                 "number of pipeline segments")
      ->required();
  sw->add_option("--stages", switch_opts.stages, "stages per segment")
      ->required();
  sw->add_option("--max", switch_opts.max_spec,
                 "key domain bound: integer, 'auto32', or omit to use the "
                 "observed maximum");
  sw->add_flag("--stage-accurate", switch_opts.stage_accurate,
               "use the per-stage execution mode");
  sw->callback([&] { cmd_switch(switch_opts); });

  SortOpts sort_opts;
  CLI::App* sort_cmd =
      app.add_subcommand("sort", "k-way natural merge sort");
  sort_cmd->add_option("--input,-i", sort_opts.input,
                       "input path, '-' for stdin")
      ->required();
  sort_cmd->add_option("--output,-o", sort_opts.output,
                       "sorted output path, '-' for stdout")
      ->required();
  sort_cmd->add_flag("--tagged", sort_opts.tagged,
                     "input is a tagged stream (segment_id <TAB> key)");
  sort_cmd->add_option("--k", sort_opts.k, "merge order (>= 2)")
      ->capture_default_str();
  sort_cmd->add_option("--segments", sort_opts.segments,
                       "segment count for tagged input; 0 infers from tags")
      ->capture_default_str();
  sort_cmd->callback([&] { cmd_sort(sort_opts); });

  StatsOpts stats_opts;
  CLI::App* stats_cmd =
      app.add_subcommand("stats", "run statistics of a stream");
  stats_cmd->add_option("--input,-i", stats_opts.input,
                        "input path, '-' for stdin")
      ->required();
  stats_cmd->add_flag("--tagged", stats_opts.tagged,
                      "input is a tagged stream");
  stats_cmd->add_flag("--json", stats_opts.json, "emit JSON instead of text");
  stats_cmd->callback([&] { cmd_stats(stats_opts); });

  BenchOpts bench_opts;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "baseline vs. switch-assisted sort across a grid");
  bench_cmd->add_option("--input,-i", bench_opts.input,
                        "input trace path, '-' for stdin")
      ->required();
  bench_cmd->add_option("--trace-id", bench_opts.trace_id,
                        "identifier for the trace_id column");
  bench_cmd->add_option("--segments-list", bench_opts.segments_list,
                        "comma-separated segment counts")
      ->capture_default_str();
  bench_cmd->add_option("--stages-list", bench_opts.stages_list,
                        "comma-separated stages per segment")
      ->capture_default_str();
  bench_cmd->add_option("--k", bench_opts.k, "merge order (>= 2)")
      ->capture_default_str();
  bench_cmd->add_option("--reps", bench_opts.reps, "repetitions per cell")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_opts.out, "CSV output path")
      ->capture_default_str();
  bench_cmd->add_option("--json", bench_opts.json_path,
                        "also write rows as JSON to this path");
  bench_cmd->add_option("--max", bench_opts.max_spec,
                        "key domain bound: integer, 'auto32', or omit to "
                        "use the observed maximum");
  bench_cmd->callback([&] { cmd_bench(bench_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
