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

#include "mm/runs.hpp"

#include <algorithm>

#include "mm/kernels.hpp"

namespace mm {

std::vector<Run> detect_runs(std::span<const Value> values) {
  std::vector<Run> runs;
  if (values.empty()) return runs;
  std::size_t start = 0;
  while (true) {
    std::size_t boundary = kernels::next_descent(values, start);
    if (boundary == kernels::npos) {
      runs.push_back({start, values.size() - start});
      return runs;
    }
    runs.push_back({start, boundary + 1 - start});
    start = boundary + 1;
  }
}

std::size_t count_runs(std::span<const Value> values) {
  if (values.empty()) return 0;
  return kernels::count_descents(values) + 1;
}

RunStats run_stats(std::span<const Value> values) {
  RunStats stats;
  stats.total_values = values.size();
  if (values.empty()) return stats;

  std::vector<Run> runs = detect_runs(values);
  stats.run_count = runs.size();
  stats.avg_length = Ratio(values.size(), runs.size());

  std::vector<std::size_t> lengths(runs.size());
  std::transform(runs.begin(), runs.end(), lengths.begin(),
                 [](const Run& r) { return r.length; });
  std::sort(lengths.begin(), lengths.end());
  stats.min_length = lengths.front();
  stats.max_length = lengths.back();
  const std::size_t mid = lengths.size() / 2;
  if (lengths.size() % 2 == 1) {
    stats.median_length = Ratio(lengths[mid]);
  } else {
    stats.median_length = Ratio(lengths[mid - 1] + lengths[mid], 2);
  }
  return stats;
}

}  // namespace mm
