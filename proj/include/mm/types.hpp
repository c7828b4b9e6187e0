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

#ifndef MM_TYPES_HPP_
#define MM_TYPES_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/rational.hpp>

namespace mm {

// Sort keys are unsigned 64-bit. The valid key domain of a configured
// switch is (0, max_value]; zero is reserved so it can never collide with
// a stored stage value.
using Value = std::uint64_t;

// Exact fraction used for every averaged statistic, so that
// run_count * avg_length == total_values holds with no rounding.
using Ratio = boost::rational<std::uint64_t>;

inline double to_double(const Ratio& r) {
  return boost::rational_cast<double>(r);
}

// A key paired with the pipeline segment that emitted it. The segment id
// plays the role of an egress port number: the server buckets values by it
// and sorts each bucket independently.
struct TaggedValue {
  std::uint32_t segment_id;
  Value key;

  friend bool operator==(const TaggedValue&, const TaggedValue&) = default;
};

// A maximal non-decreasing slice of some value sequence, stored as a view
// (offset + length) so run detection never copies the underlying values.
struct Run {
  std::size_t offset;
  std::size_t length;

  friend bool operator==(const Run&, const Run&) = default;
};

struct RunStats {
  std::size_t run_count = 0;
  Ratio avg_length{0};
  Ratio median_length{0};
  std::size_t min_length = 0;
  std::size_t max_length = 0;
  std::size_t total_values = 0;
};

// Malformed or out-of-domain input. The message names the offending line
// or stream position.
class input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mm

#endif  // MM_TYPES_HPP_
