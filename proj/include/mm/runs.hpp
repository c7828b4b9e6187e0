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

#ifndef MM_RUNS_HPP_
#define MM_RUNS_HPP_

#include <span>
#include <vector>

#include "mm/types.hpp"

namespace mm {

// Splits a sequence into its maximal non-decreasing slices. A run ends
// exactly where values[i] > values[i + 1]; equal neighbours stay in the
// same run. The returned runs partition the input in order.
std::vector<Run> detect_runs(std::span<const Value> values);

// Run count without materializing the run list.
std::size_t count_runs(std::span<const Value> values);

// Aggregate statistics over detect_runs(values). Empty input yields
// run_count = 0 and all lengths 0.
RunStats run_stats(std::span<const Value> values);

}  // namespace mm

#endif  // MM_RUNS_HPP_
