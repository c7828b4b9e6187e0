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

#include "mm/sorter.hpp"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "mm/runs.hpp"

namespace mm {

namespace {

struct identity_key {
  Value operator()(Value v) const { return v; }
};

// Merges one group of runs (given as slices of src) into dst starting at
// dst_offset. Returns the number of key comparisons spent.
std::uint64_t merge_group(std::span<const std::span<const Value>> group,
                          std::vector<Value>& dst, std::size_t dst_offset) {
  LoserTree<Value, identity_key> tree(group, identity_key{});
  while (!tree.empty()) {
    dst[dst_offset++] = tree.pop();
  }
  return tree.comparisons();
}

}  // namespace

std::vector<Value> merge_k_runs(const std::vector<std::vector<Value>>& runs,
                                std::size_t k) {
  if (runs.size() > k) {
    throw std::invalid_argument(
        fmt::format("merge_k_runs: {} runs exceed order k = {}", runs.size(), k));
  }
  std::size_t total = 0;
  std::vector<std::span<const Value>> group(runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    group[i] = runs[i];
    total += runs[i].size();
  }
  std::vector<Value> out(total);
  merge_group(group, out, 0);
  return out;
}

SortResult natural_merge_sort(std::span<const Value> values, std::size_t k) {
  if (k < 2) {
    throw std::invalid_argument("merge order k must be >= 2");
  }
  SortResult result;
  result.sorted.assign(values.begin(), values.end());

  MergeCostReport& report = result.report;
  const std::size_t n = values.size();
  report.total_values = n;

  std::vector<Run> runs = detect_runs(values);
  report.initial_runs = runs.size();
  if (!runs.empty()) {
    report.avg_initial_run_length = Ratio(n, runs.size());
  }
  report.predicted_work_parallel =
      predicted_work_parallel(runs.size(), k, report.avg_initial_run_length);
  report.predicted_work_sequential =
      predicted_work_sequential(runs.size(), k, report.avg_initial_run_length);
  if (runs.size() <= 1) {
    return result;
  }

  std::vector<Value> scratch(n);
  std::vector<Value>* src = &result.sorted;
  std::vector<Value>* dst = &scratch;
  std::vector<Run> merged_runs;
  std::vector<std::span<const Value>> group;
  group.reserve(k);

  while (runs.size() > 1) {
    ++report.iterations;
    merged_runs.clear();
    std::uint64_t iteration_moves = 0;

    // Consecutive groups of up to k runs; the last group may be smaller.
    for (std::size_t g = 0; g < runs.size(); g += k) {
      const std::size_t group_end = std::min(runs.size(), g + k);
      group.clear();
      std::size_t group_offset = runs[g].offset;
      std::size_t group_length = 0;
      for (std::size_t i = g; i < group_end; ++i) {
        group.emplace_back(src->data() + runs[i].offset, runs[i].length);
        group_length += runs[i].length;
      }
      report.measured_comparisons += merge_group(group, *dst, group_offset);
      iteration_moves += group_length;
      merged_runs.push_back({group_offset, group_length});
    }

    report.measured_moves += iteration_moves;
    report.iteration_log.push_back(
        {runs.size(), merged_runs.size(), Ratio(n, merged_runs.size()),
         iteration_moves});
    runs.swap(merged_runs);
    std::swap(src, dst);
  }

  if (src != &result.sorted) {
    result.sorted.swap(scratch);
  }
  return result;
}

TaggedSortResult sort_tagged_stream(std::span<const TaggedValue> tagged,
                                    std::size_t segment_count,
                                    std::size_t k) {
  std::vector<std::vector<Value>> buckets(segment_count);
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    if (tagged[i].segment_id >= segment_count) {
      throw input_error(
          fmt::format("segment id {} out of range [0, {}) at position {}",
                      tagged[i].segment_id, segment_count, i + 1));
    }
    buckets[tagged[i].segment_id].push_back(tagged[i].key);
  }

  TaggedSortResult result;
  result.sorted.reserve(tagged.size());
  result.per_segment.reserve(segment_count);
  for (const std::vector<Value>& bucket : buckets) {
    SortResult sorted = natural_merge_sort(bucket, k);
    result.sorted.insert(result.sorted.end(), sorted.sorted.begin(),
                         sorted.sorted.end());
    result.per_segment.push_back(std::move(sorted.report));
  }
  return result;
}

std::size_t predicted_iterations(std::size_t initial_runs, std::size_t k) {
  if (k < 2) {
    throw std::invalid_argument("merge order k must be >= 2");
  }
  if (initial_runs <= 1) return 0;
  std::size_t iterations = 0;
  std::size_t reach = 1;  // k^iterations, saturated at initial_runs
  while (reach < initial_runs) {
    reach = reach > (initial_runs - 1) / k ? initial_runs : reach * k;
    ++iterations;
  }
  return iterations;
}

Ratio predicted_work_parallel(std::size_t initial_runs, std::size_t k,
                              const Ratio& avg_initial_run_length) {
  const std::size_t iterations = predicted_iterations(initial_runs, k);
  Ratio sum(0);
  Ratio power(1);
  for (std::size_t i = 1; i <= iterations; ++i) {
    power *= Ratio(k);
    sum += power;
  }
  return sum * avg_initial_run_length;
}

Ratio predicted_work_sequential(std::size_t initial_runs, std::size_t k,
                                const Ratio& avg_initial_run_length) {
  const std::size_t iterations = predicted_iterations(initial_runs, k);
  return Ratio(iterations) * Ratio(initial_runs) * avg_initial_run_length;
}

double predicted_complexity_ratio(std::uint64_t total_values,
                                  std::uint64_t segment_count) {
  if (segment_count < 1 || total_values < segment_count) {
    throw std::invalid_argument("requires total_values >= segment_count >= 1");
  }
  if (total_values == segment_count) return 0.0;
  if (segment_count == 1) return 1.0;
  const double log_n = std::log2(static_cast<double>(total_values));
  const double log_s = std::log2(static_cast<double>(segment_count));
  return (log_n - log_s) / log_n;
}

}  // namespace mm
