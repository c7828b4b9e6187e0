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

#include "mm/switch_sim.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

#include <fmt/format.h>

namespace mm {

void SwitchConfig::validate() const {
  if (number_of_segments == 0) {
    throw std::invalid_argument("number_of_segments must be >= 1");
  }
  if (segment_length == 0) {
    throw std::invalid_argument("segment_length must be >= 1");
  }
  if (max_value == 0) {
    throw std::invalid_argument("max_value must be >= 1");
  }
  if (max_value == std::numeric_limits<Value>::max()) {
    throw std::invalid_argument(
        "max_value must leave headroom for the open upper bound");
  }
  if (number_of_segments > max_value) {
    throw std::invalid_argument(fmt::format(
        "number_of_segments ({}) exceeds max_value ({}): some segment "
        "range would be empty",
        number_of_segments, max_value));
  }
}

std::vector<Interval> set_ranges(const SwitchConfig& config) {
  config.validate();
  const std::size_t segments = config.number_of_segments;
  const Value q = config.max_value / segments;
  const Value r = config.max_value % segments;

  std::vector<Interval> ranges(segments);
  for (std::size_t i = 0; i < segments; ++i) {
    ranges[i].lo = i < r ? (q + 1) * i : r * (q + 1) + (i - r) * q;
  }
  for (std::size_t i = 0; i + 1 < segments; ++i) {
    ranges[i].hi = ranges[i + 1].lo;
  }
  ranges.back().hi = config.max_value + 1;
  return ranges;
}

std::size_t find_segment(std::span<const Interval> ranges, Value v) {
  if (v == 0 || v >= ranges.back().hi) {
    throw input_error(fmt::format("value {} outside domain (0, {}]", v,
                                  ranges.back().hi - 1));
  }
  auto it = std::upper_bound(
      ranges.begin(), ranges.end(), v,
      [](Value value, const Interval& range) { return value < range.lo; });
  return static_cast<std::size_t>(it - ranges.begin()) - 1;
}

ArraySegment::ArraySegment(Interval range, std::size_t length)
    : range_(range), stages_(length, 0) {}

std::optional<Value> ArraySegment::insert(Value v) {
  assert(v >= range_.lo && v < range_.hi);

  if (filled_ < stages_.size()) {
    // Not full: slot v after any equal values and bubble the rest up.
    auto pos = std::upper_bound(stages_.begin(), stages_.begin() + filled_, v);
    std::copy_backward(pos, stages_.begin() + filled_,
                       stages_.begin() + filled_ + 1);
    *pos = v;
    ++filled_;
    assert(invariant_holds());
    return std::nullopt;
  }

  // Full: the head of the older run leaves; v joins the younger run
  // [0, partition_). With an empty younger run (partition_ == 0) or
  // v >= its last value, v lands directly in the freed slot; otherwise
  // the tail of the younger run shifts up into it.
  const Value evicted = stages_[partition_];
  auto pos =
      std::upper_bound(stages_.begin(), stages_.begin() + partition_, v);
  std::copy_backward(pos, stages_.begin() + partition_,
                     stages_.begin() + partition_ + 1);
  *pos = v;
  partition_ = partition_ + 1 == stages_.size() ? 0 : partition_ + 1;
  assert(invariant_holds());
  return evicted;
}

void ArraySegment::flush(std::vector<Value>& out) {
  if (filled_ < stages_.size()) {
    out.insert(out.end(), stages_.begin(), stages_.begin() + filled_);
  } else {
    out.insert(out.end(), stages_.begin() + partition_, stages_.end());
    out.insert(out.end(), stages_.begin(), stages_.begin() + partition_);
  }
  filled_ = 0;
  partition_ = 0;
}

bool ArraySegment::invariant_holds() const {
  auto sorted = [&](std::size_t lo, std::size_t hi) {
    return std::is_sorted(stages_.begin() + lo, stages_.begin() + hi);
  };
  auto in_range = [&](std::size_t lo, std::size_t hi) {
    return std::all_of(stages_.begin() + lo, stages_.begin() + hi,
                       [&](Value v) { return v >= range_.lo && v < range_.hi; });
  };
  if (filled_ < stages_.size()) {
    return partition_ == 0 && sorted(0, filled_) && in_range(0, filled_);
  }
  return sorted(0, partition_) && sorted(partition_, stages_.size()) &&
         in_range(0, stages_.size());
}

PipelineSegment::PipelineSegment(Interval range, std::size_t length)
    : range_(range), stages_(length) {
  for (std::size_t i = 0; i < length; ++i) {
    stages_[i].position = static_cast<std::uint32_t>(i);
  }
}

void PipelineSegment::step(Stage& stage, Packet& packet,
                           std::uint32_t length) {
  if (!stage.occupied) {
    // Initial-value stage: adopt the carried value.
    if (packet.has_carried) {
      stage.value = packet.carried;
      stage.occupied = true;
      packet.has_carried = false;
    }
  } else if (packet.has_carried && !packet.past_partition) {
    if (stage.counter == stage.position) {
      // This stage is the partition index for the current packet: its
      // value moves to the output and the carried value replaces it.
      packet.evicted = stage.value;
      packet.has_evicted = true;
      stage.value = packet.carried;
      packet.has_carried = false;
      packet.past_partition = true;
    } else if (stage.value > packet.carried) {
      const Value tmp = stage.value;
      stage.value = packet.carried;
      packet.carried = tmp;
    }
  }
  // Wrap by comparison; the pipeline performs no division after init.
  stage.counter = stage.counter + 1 == length ? 0 : stage.counter + 1;
}

std::optional<Value> PipelineSegment::insert(Value v) {
  assert(v >= range_.lo && v < range_.hi);
  Packet packet{.carried = v};
  const auto length = static_cast<std::uint32_t>(stages_.size());
  for (Stage& stage : stages_) {
    step(stage, packet, length);
  }
  assert(!packet.has_carried);
  if (packet.has_evicted) return packet.evicted;
  return std::nullopt;
}

void PipelineSegment::flush(std::vector<Value>& out) {
  // First pass drains from the partition stage onward (the older run);
  // the second pass collects what the first one skipped.
  bool past_partition = false;
  for (Stage& stage : stages_) {
    if (stage.occupied && stage.counter == stage.position) {
      past_partition = true;
    }
    if (past_partition && stage.occupied) {
      out.push_back(stage.value);
      stage.occupied = false;
    }
  }
  for (Stage& stage : stages_) {
    if (stage.occupied) {
      out.push_back(stage.value);
      stage.occupied = false;
    }
    stage.counter = 0;
  }
}

std::size_t PipelineSegment::occupied_count() const {
  return static_cast<std::size_t>(
      std::count_if(stages_.begin(), stages_.end(),
                    [](const Stage& s) { return s.occupied; }));
}

Switch::Switch(const SwitchConfig& config, SwitchMode mode)
    : config_(config), mode_(mode), ranges_(set_ranges(config)) {
  if (mode_ == SwitchMode::array) {
    array_.reserve(ranges_.size());
    for (const Interval& range : ranges_) {
      array_.emplace_back(range, config_.segment_length);
    }
  } else {
    pipeline_.reserve(ranges_.size());
    for (const Interval& range : ranges_) {
      pipeline_.emplace_back(range, config_.segment_length);
    }
  }
}

std::size_t Switch::find_segment(Value v) const {
  return mm::find_segment(ranges_, v);
}

void Switch::insert(Value v, std::vector<TaggedValue>& out) {
  const std::size_t s = find_segment(v);
  const std::optional<Value> evicted = mode_ == SwitchMode::array
                                           ? array_[s].insert(v)
                                           : pipeline_[s].insert(v);
  stage_visits_ += config_.segment_length;
  if (evicted) {
    out.push_back({static_cast<std::uint32_t>(s), *evicted});
  }
}

void Switch::flush(std::vector<TaggedValue>& out) {
  std::vector<Value> drained;
  for (std::size_t s = 0; s < config_.number_of_segments; ++s) {
    drained.clear();
    if (mode_ == SwitchMode::array) {
      array_[s].flush(drained);
    } else {
      pipeline_[s].flush(drained);
    }
    stage_visits_ += 2 * config_.segment_length;
    for (Value v : drained) {
      out.push_back({static_cast<std::uint32_t>(s), v});
    }
  }
}

std::vector<TaggedValue> apply_switch(const SwitchConfig& config,
                                      std::span<const Value> input,
                                      SwitchMode mode) {
  Switch sw(config, mode);
  std::vector<TaggedValue> out;
  out.reserve(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    try {
      sw.insert(input[i], out);
    } catch (const input_error& e) {
      throw input_error(fmt::format("{} at position {}", e.what(), i + 1));
    }
  }
  sw.flush(out);
  return out;
}

std::vector<TaggedValue> apply_switch_stage_accurate(
    const SwitchConfig& config, std::span<const Value> input) {
  return apply_switch(config, input, SwitchMode::stage_accurate);
}

}  // namespace mm
