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

#ifndef MM_BENCH_HPP_
#define MM_BENCH_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mm/sorter.hpp"
#include "mm/types.hpp"

// Experiment harness: times the server sort on the raw trace (baseline)
// and on switch output across a (segments x stages) grid. Switch
// simulation is not charged to server time — the pipeline does its work
// in-network while values are in flight — but its stage-visit count is
// recorded as a separate column. One CSV row per repetition, so averages
// and medians can be recomputed from the file.

namespace mm {

struct BaselineResult {
  std::vector<double> rep_seconds;
  RunStats trace_stats;
  MergeCostReport report;
  std::vector<Value> sorted;  // reference output every sweep row must match
};

// One benchmark row. Baseline rows use number_of_segments = 0 and
// segment_length = 0.
struct SweepResult {
  std::string trace_id;
  std::size_t number_of_segments = 0;
  std::size_t segment_length = 0;
  std::size_t k = 10;
  std::size_t rep = 1;  // 1-based repetition index
  double wall_time_server_only = 0.0;
  double wall_time_with_switch = 0.0;
  double improvement_ratio = 0.0;         // 1 - with/without
  std::size_t switch_emission_count = 0;  // equals the trace length
  std::uint64_t stage_visits = 0;
  double mean_segment_run_count = 0.0;
  double mean_segment_avg_run_length = 0.0;
  std::size_t predicted_iterations = 0;  // max over segments
  std::size_t measured_iterations = 0;   // max over segments
  std::uint64_t measured_moves = 0;      // summed over segments
  std::uint64_t measured_comparisons = 0;
  double predicted_complexity_ratio = 0.0;
};

double average(std::span<const double> xs);
double median(std::span<const double> xs);

// Times natural_merge_sort on the raw trace reps times (reps >= 1).
BaselineResult run_baseline(std::span<const Value> trace, std::size_t k,
                            std::size_t reps);

// Baseline rendered as CSV rows, one per repetition.
std::vector<SweepResult> baseline_rows(const BaselineResult& baseline,
                                       const std::string& trace_id,
                                       std::size_t k);

// Full grid: for every (S, L) pair, S-major / L-minor / rep-minor, the
// switch runs once (untimed) and sort_tagged_stream is timed reps times
// against baseline repetition r of the same index. Every row's sorted
// output is checked against the baseline's before timing starts; a
// mismatch aborts the sweep.
std::vector<SweepResult> run_sweep(std::span<const Value> trace,
                                   const BaselineResult& baseline,
                                   std::vector<std::size_t> segment_counts,
                                   std::vector<std::size_t> segment_lengths,
                                   std::size_t k, std::size_t reps,
                                   const std::string& trace_id,
                                   Value max_value);

// Fixed header, one line per result, LF endings, deterministic order
// (rows are emitted as given).
void emit_csv(std::span<const SweepResult> results, std::ostream& out);

// Same rows as a serialized JSON array of objects.
std::string to_json(std::span<const SweepResult> results);

}  // namespace mm

#endif  // MM_BENCH_HPP_
