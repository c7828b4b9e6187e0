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

#ifndef MM_SORTER_HPP_
#define MM_SORTER_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mm/types.hpp"

// Server-side natural merge sort of order k. The input is split at its
// run boundaries, then consecutive groups of up to k runs are merged per
// iteration until one run remains, double-buffering between iterations.
// Tagged streams are sorted per segment and concatenated in segment-index
// order, which yields a globally sorted stream when the tags come from a
// switch run (segment ranges are ordered and disjoint).

namespace mm {

struct MergeIterationLog {
  std::size_t runs_in = 0;
  std::size_t runs_out = 0;
  Ratio avg_run_length_out{0};  // total / runs_out after this iteration
  std::uint64_t moves = 0;
};

struct MergeCostReport {
  std::size_t total_values = 0;
  std::size_t initial_runs = 0;            // l
  Ratio avg_initial_run_length{0};         // total / l
  std::size_t iterations = 0;              // always ceil(log_k l)
  Ratio predicted_work_parallel{0};
  Ratio predicted_work_sequential{0};
  std::uint64_t measured_moves = 0;        // elements written while merging
  std::uint64_t measured_comparisons = 0;  // key comparisons while merging
  std::vector<MergeIterationLog> iteration_log;
};

struct SortResult {
  std::vector<Value> sorted;
  MergeCostReport report;
};

struct TaggedSortResult {
  std::vector<Value> sorted;
  std::vector<MergeCostReport> per_segment;
};

// Selection structure for k-way merging: a tournament (loser) tree over
// the run heads, O(log k) comparisons per emitted element. Ties are won
// by the lower source index, which keeps the merge stable by run order.
template <typename T, typename KeyOf>
class LoserTree {
 public:
  LoserTree(std::span<const std::span<const T>> sources, KeyOf key_of)
      : key_of_(key_of) {
    const std::size_t m = sources.size();
    leaves_ = 1;
    while (leaves_ < m) leaves_ *= 2;
    sources_.resize(leaves_);
    for (std::size_t i = 0; i < m; ++i) {
      sources_[i] = {sources[i].data(), sources[i].data() + sources[i].size()};
      remaining_ += sources[i].size();
    }
    // Bottom-up tournament: winners bubble toward the root, each internal
    // node keeps the loser of its match.
    tree_.assign(leaves_, 0);
    std::vector<std::uint32_t> winners(2 * leaves_);
    for (std::size_t j = 0; j < leaves_; ++j) {
      winners[leaves_ + j] = static_cast<std::uint32_t>(j);
    }
    for (std::size_t v = leaves_ - 1; v >= 1; --v) {
      const std::uint32_t a = winners[2 * v];
      const std::uint32_t b = winners[2 * v + 1];
      if (beats(a, b)) {
        winners[v] = a;
        tree_[v] = b;
      } else {
        winners[v] = b;
        tree_[v] = a;
      }
    }
    winner_ = winners[1];
  }

  bool empty() const { return remaining_ == 0; }
  std::size_t remaining() const { return remaining_; }
  std::uint64_t comparisons() const { return comparisons_; }

  T pop() {
    Source& src = sources_[winner_];
    T item = *src.pos++;
    --remaining_;
    std::uint32_t current = winner_;
    for (std::size_t v = (leaves_ + winner_) / 2; v >= 1; v /= 2) {
      if (beats(tree_[v], current)) {
        std::swap(tree_[v], current);
      }
    }
    winner_ = current;
    return item;
  }

 private:
  struct Source {
    const T* pos = nullptr;
    const T* end = nullptr;
    bool exhausted() const { return pos == end; }
  };

  bool beats(std::uint32_t a, std::uint32_t b) {
    if (sources_[a].exhausted()) return false;
    if (sources_[b].exhausted()) return true;
    ++comparisons_;
    const auto ka = key_of_(*sources_[a].pos);
    const auto kb = key_of_(*sources_[b].pos);
    if (ka != kb) return ka < kb;
    return a < b;
  }

  KeyOf key_of_;
  std::vector<Source> sources_;
  std::vector<std::uint32_t> tree_;
  std::uint32_t winner_ = 0;
  std::size_t leaves_ = 1;
  std::size_t remaining_ = 0;
  std::uint64_t comparisons_ = 0;
};

// Merges up to k non-decreasing sequences into one; ties resolved by the
// lowest input index. Throws std::invalid_argument for more than k inputs.
std::vector<Value> merge_k_runs(
    const std::vector<std::vector<Value>>& runs, std::size_t k);

// Natural merge sort of order k (k >= 2) with full cost accounting.
SortResult natural_merge_sort(std::span<const Value> values, std::size_t k);

// Buckets a tagged stream by segment id (arrival order preserved within
// a segment), sorts each bucket, and concatenates in segment-index order.
// Throws input_error for segment ids >= segment_count, naming the 1-based
// stream position.
TaggedSortResult sort_tagged_stream(std::span<const TaggedValue> tagged,
                                    std::size_t segment_count, std::size_t k);

// Number of merge iterations needed for l initial runs at order k:
// ceil(log_k l) for l >= 2, else 0. Integer exponent search.
std::size_t predicted_iterations(std::size_t initial_runs, std::size_t k);

// Modeled merge cost in element moves, iteration i costing k^i * r_init
// for i = 1..ceil(log_k l) when each group of k runs merges in parallel.
Ratio predicted_work_parallel(std::size_t initial_runs, std::size_t k,
                              const Ratio& avg_initial_run_length);

// Sequential-merge variant: every iteration costs the full input length
// N = l * r_init.
Ratio predicted_work_sequential(std::size_t initial_runs, std::size_t k,
                                const Ratio& avg_initial_run_length);

// Modeled work ratio of range-partitioned sorting vs. sorting the whole
// stream: log(N/S) / log(N).
double predicted_complexity_ratio(std::uint64_t total_values,
                                  std::uint64_t segment_count);

}  // namespace mm

#endif  // MM_SORTER_HPP_
