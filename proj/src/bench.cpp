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

#include "mm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>
#include <json.hpp>

#include "mm/runs.hpp"
#include "mm/switch_sim.hpp"

namespace mm {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// trace_id lands in a comma-separated file; strip anything that would
// break the row.
std::string sanitize_id(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') c = '_';
  }
  return out;
}

double safe_complexity_ratio(std::size_t n, std::size_t segments) {
  if (segments == 0 || n < 2 || segments > n) return 0.0;
  return predicted_complexity_ratio(n, segments);
}

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

double average(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

double median(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  if (v.size() % 2 == 1) return v[mid];
  return (v[mid - 1] + v[mid]) / 2.0;
}

BaselineResult run_baseline(std::span<const Value> trace, std::size_t k,
                            std::size_t reps) {
  if (reps == 0) throw std::invalid_argument("reps must be >= 1");
  BaselineResult out;
  out.trace_stats = run_stats(trace);
  out.rep_seconds.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    SortResult result = natural_merge_sort(trace, k);
    out.rep_seconds.push_back(seconds_since(start));
    if (r == 0) {
      out.report = std::move(result.report);
      out.sorted = std::move(result.sorted);
    }
  }
  return out;
}

std::vector<SweepResult> baseline_rows(const BaselineResult& baseline,
                                       const std::string& trace_id,
                                       std::size_t k) {
  std::vector<SweepResult> rows;
  rows.reserve(baseline.rep_seconds.size());
  const std::string id = sanitize_id(trace_id);
  for (std::size_t r = 0; r < baseline.rep_seconds.size(); ++r) {
    SweepResult row;
    row.trace_id = id;
    row.number_of_segments = 0;
    row.segment_length = 0;
    row.k = k;
    row.rep = r + 1;
    row.wall_time_server_only = baseline.rep_seconds[r];
    row.wall_time_with_switch = baseline.rep_seconds[r];
    row.improvement_ratio = 0.0;
    row.switch_emission_count = 0;
    row.stage_visits = 0;
    row.mean_segment_run_count =
        static_cast<double>(baseline.trace_stats.run_count);
    row.mean_segment_avg_run_length =
        to_double(baseline.trace_stats.avg_length);
    row.predicted_iterations =
        predicted_iterations(baseline.report.initial_runs, k);
    row.measured_iterations = baseline.report.iterations;
    row.measured_moves = baseline.report.measured_moves;
    row.measured_comparisons = baseline.report.measured_comparisons;
    row.predicted_complexity_ratio = 1.0;  // whole sort runs on the server
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepResult> run_sweep(std::span<const Value> trace,
                                   const BaselineResult& baseline,
                                   std::vector<std::size_t> segment_counts,
                                   std::vector<std::size_t> segment_lengths,
                                   std::size_t k, std::size_t reps,
                                   const std::string& trace_id,
                                   Value max_value) {
  if (reps == 0 || reps != baseline.rep_seconds.size()) {
    throw std::invalid_argument("reps must match the baseline repetitions");
  }
  segment_counts = sorted_unique(std::move(segment_counts));
  segment_lengths = sorted_unique(std::move(segment_lengths));
  const std::string id = sanitize_id(trace_id);

  std::vector<SweepResult> rows;
  rows.reserve(segment_counts.size() * segment_lengths.size() * reps);
  for (std::size_t segments : segment_counts) {
    for (std::size_t length : segment_lengths) {
      SwitchConfig config{segments, length, max_value};
      config.validate();

      Switch sw(config, SwitchMode::array);
      std::vector<TaggedValue> tagged;
      tagged.reserve(trace.size());
      for (Value v : trace) sw.insert(v, tagged);
      sw.flush(tagged);

      SweepResult base;
      base.trace_id = id;
      base.number_of_segments = segments;
      base.segment_length = length;
      base.k = k;
      base.switch_emission_count = tagged.size();
      base.stage_visits = sw.stage_visits();
      base.predicted_complexity_ratio =
          safe_complexity_ratio(trace.size(), segments);

      for (std::size_t r = 0; r < reps; ++r) {
        const auto start = Clock::now();
        TaggedSortResult result = sort_tagged_stream(tagged, segments, k);
        const double elapsed = seconds_since(start);

        if (r == 0) {
          if (result.sorted != baseline.sorted) {
            throw std::runtime_error(fmt::format(
                "sweep output diverged from baseline at segments={} "
                "stages={}",
                segments, length));
          }
          double run_count_sum = 0.0;
          double avg_length_sum = 0.0;
          std::size_t predicted = 0;
          std::size_t measured = 0;
          std::uint64_t moves = 0;
          std::uint64_t comparisons = 0;
          for (const MergeCostReport& rep_report : result.per_segment) {
            run_count_sum += static_cast<double>(rep_report.initial_runs);
            avg_length_sum += to_double(rep_report.avg_initial_run_length);
            predicted = std::max(
                predicted, predicted_iterations(rep_report.initial_runs, k));
            measured = std::max(measured, rep_report.iterations);
            moves += rep_report.measured_moves;
            comparisons += rep_report.measured_comparisons;
          }
          const double denom = static_cast<double>(segments);
          base.mean_segment_run_count = run_count_sum / denom;
          base.mean_segment_avg_run_length = avg_length_sum / denom;
          base.predicted_iterations = predicted;
          base.measured_iterations = measured;
          base.measured_moves = moves;
          base.measured_comparisons = comparisons;
        }

        SweepResult row = base;
        row.rep = r + 1;
        row.wall_time_server_only = baseline.rep_seconds[r];
        row.wall_time_with_switch = elapsed;
        row.improvement_ratio =
            baseline.rep_seconds[r] > 0.0
                ? 1.0 - elapsed / baseline.rep_seconds[r]
                : 0.0;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void emit_csv(std::span<const SweepResult> results, std::ostream& out) {
  out << "trace_id,number_of_segments,segment_length,k,rep,"
         "wall_time_server_only,wall_time_with_switch,improvement_ratio,"
         "switch_emission_count,stage_visits,mean_segment_run_count,"
         "mean_segment_avg_run_length,predicted_iterations,"
         "measured_iterations,measured_moves,measured_comparisons,"
         "predicted_complexity_ratio\n";
  for (const SweepResult& r : results) {
    out << fmt::format(
        "{},{},{},{},{},{:.9f},{:.9f},{:.6f},{},{},{:.6f},{:.6f},{},{},{},"
        "{},{:.6f}\n",
        r.trace_id, r.number_of_segments, r.segment_length, r.k, r.rep,
        r.wall_time_server_only, r.wall_time_with_switch, r.improvement_ratio,
        r.switch_emission_count, r.stage_visits, r.mean_segment_run_count,
        r.mean_segment_avg_run_length, r.predicted_iterations,
        r.measured_iterations, r.measured_moves, r.measured_comparisons,
        r.predicted_complexity_ratio);
  }
}

std::string to_json(std::span<const SweepResult> results) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepResult& r : results) {
    rows.push_back({
        {"trace_id", r.trace_id},
        {"number_of_segments", r.number_of_segments},
        {"segment_length", r.segment_length},
        {"k", r.k},
        {"rep", r.rep},
        {"wall_time_server_only", r.wall_time_server_only},
        {"wall_time_with_switch", r.wall_time_with_switch},
        {"improvement_ratio", r.improvement_ratio},
        {"switch_emission_count", r.switch_emission_count},
        {"stage_visits", r.stage_visits},
        {"mean_segment_run_count", r.mean_segment_run_count},
        {"mean_segment_avg_run_length", r.mean_segment_avg_run_length},
        {"predicted_iterations", r.predicted_iterations},
        {"measured_iterations", r.measured_iterations},
        {"measured_moves", r.measured_moves},
        {"measured_comparisons", r.measured_comparisons},
        {"predicted_complexity_ratio", r.predicted_complexity_ratio},
    });
  }
  return rows.dump(2) + "\n";
}

}  // namespace mm
