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

#ifndef MM_SWITCH_SIM_HPP_
#define MM_SWITCH_SIM_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mm/types.hpp"

// Simulates the partial-sorting switch. The switch owns S pipeline
// segments with disjoint key ranges. Each arriving value is routed to the
// segment owning its range and inserted into that segment's stage array;
// once a segment is full, every arrival evicts one stored value to the
// output, so each segment emits long non-decreasing blocks.
//
// Two execution modes produce bit-identical output:
//  - array mode: each segment is a plain sorted array with an explicit
//    rotating partition index. This is the fast path used by benchmarks.
//  - stage-accurate mode: each stage is an isolated match-action unit
//    holding one value plus O(1) local flags, and a value traverses the
//    pipeline as a packet with O(1) state. No stage reads another stage's
//    memory and nothing divides after initialization; the partition index
//    is recovered per stage from a wrapped arrival counter.

namespace mm {

struct SwitchConfig {
  std::size_t number_of_segments = 1;
  std::size_t segment_length = 1;
  Value max_value = 0;

  // Throws std::invalid_argument on an unusable configuration, notably
  // number_of_segments > max_value (some segment range would be empty).
  void validate() const;
};

// Half-open key interval [lo, hi).
struct Interval {
  Value lo;
  Value hi;

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Splits [0, max_value] into number_of_segments contiguous half-open
// intervals: with q = max_value / S and r = max_value % S, segment i < r
// starts at (q + 1) * i and segment i >= r starts at r * (q + 1) +
// (i - r) * q. The last interval ends at max_value + 1 so the whole key
// domain is covered.
std::vector<Interval> set_ranges(const SwitchConfig& config);

// Index of the unique interval containing v. Throws input_error when v is
// outside (0, max_value].
std::size_t find_segment(std::span<const Interval> ranges, Value v);

enum class SwitchMode { array, stage_accurate };

// Array-mode segment: sorted stage array plus rotating partition index.
// While filling, stages [0, filled) are one sorted run. Once full, the
// stages hold the younger run in [0, partition_index) and the older run
// in [partition_index, L), both non-decreasing.
class ArraySegment {
 public:
  ArraySegment(Interval range, std::size_t length);

  // Inserts one in-range value; returns the evicted value once full.
  std::optional<Value> insert(Value v);

  // Drains the segment: older run first, then the younger run, so the
  // first flushed pass extends the run currently being emitted. A segment
  // that never filled holds a single run and emits it in stage order.
  void flush(std::vector<Value>& out);

  bool invariant_holds() const;

  const Interval& range() const { return range_; }
  std::span<const Value> stages() const { return stages_; }
  std::size_t filled() const { return filled_; }
  std::size_t partition_index() const { return partition_; }

 private:
  Interval range_;
  std::vector<Value> stages_;
  std::size_t filled_ = 0;
  std::size_t partition_ = 0;
};

// Stage-accurate segment. Per-stage state is one value, an occupied flag
// and an arrival counter wrapped to [0, L) by comparison; the stage with
// counter == its own position is the partition index for the current
// packet. Packet state is O(1): the carried value, the evicted value and
// a past-partition mark.
class PipelineSegment {
 public:
  PipelineSegment(Interval range, std::size_t length);

  std::optional<Value> insert(Value v);
  void flush(std::vector<Value>& out);

  const Interval& range() const { return range_; }
  std::size_t occupied_count() const;

 private:
  struct Stage {
    Value value = 0;
    std::uint32_t counter = 0;
    std::uint32_t position = 0;
    bool occupied = false;
  };

  struct Packet {
    Value carried = 0;
    Value evicted = 0;
    bool has_carried = true;
    bool has_evicted = false;
    bool past_partition = false;
  };

  static void step(Stage& stage, Packet& packet, std::uint32_t length);

  Interval range_;
  std::vector<Stage> stages_;
};

class Switch {
 public:
  explicit Switch(const SwitchConfig& config,
                  SwitchMode mode = SwitchMode::array);

  // Routes and inserts one value; appends the eviction, if any, to out.
  // Throws input_error when v is outside (0, max_value].
  void insert(Value v, std::vector<TaggedValue>& out);

  // End-of-stream drain, in segment-index order.
  void flush(std::vector<TaggedValue>& out);

  std::size_t find_segment(Value v) const;

  const SwitchConfig& config() const { return config_; }
  SwitchMode mode() const { return mode_; }
  std::span<const Interval> ranges() const { return ranges_; }

  // Total stages traversed (streaming plus two flush passes per segment);
  // the scalar pipeline-work metric reported by the benchmark.
  std::uint64_t stage_visits() const { return stage_visits_; }

  std::span<const ArraySegment> array_segments() const { return array_; }

 private:
  SwitchConfig config_;
  SwitchMode mode_;
  std::vector<Interval> ranges_;
  std::vector<ArraySegment> array_;
  std::vector<PipelineSegment> pipeline_;
  std::uint64_t stage_visits_ = 0;
};

// Runs the full stream through a freshly initialized switch and returns
// the tagged output: streaming emissions in arrival order, then the flush
// of every segment in index order. Output length equals input length.
// Throws input_error naming the 1-based position of an out-of-domain
// value.
std::vector<TaggedValue> apply_switch(const SwitchConfig& config,
                                      std::span<const Value> input,
                                      SwitchMode mode = SwitchMode::array);

// apply_switch under the per-stage execution constraints; bit-identical
// output to array mode by contract.
std::vector<TaggedValue> apply_switch_stage_accurate(
    const SwitchConfig& config, std::span<const Value> input);

}  // namespace mm

#endif  // MM_SWITCH_SIM_HPP_
