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

#ifndef MM_TRACE_HPP_
#define MM_TRACE_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mm/types.hpp"

// Trace acquisition and the two text stream formats:
//  - plain trace: one decimal key per line, LF endings;
//  - tagged stream: "<segment_id>\t<key>" per line, LF endings — the
//    contract between the switch front end and the server-side sort.

namespace mm {

enum class TraceSource { uniform_random, file, extracted_field };

struct TraceSpec {
  TraceSource source = TraceSource::uniform_random;
  std::size_t count = 0;         // uniform_random
  Value max_value = 32768;       // uniform_random; default domain 2^15
  std::uint64_t seed = 1;        // uniform_random
  std::string path;              // file / extracted_field
  char delimiter = ',';          // extracted_field
  std::size_t field_index = 0;   // extracted_field
};

// count values drawn i.i.d. uniform on [1, max_value].
//
// The generator is pinned for reproducibility: std::mt19937_64 seeded
// directly with `seed` (its output sequence is fully specified by the
// C++ standard), mapped to [1, max_value] by rejection — raw draws at or
// above the largest multiple of max_value below 2^64 are discarded, the
// rest reduced modulo max_value. Any conforming implementation, in any
// language, reproduces the identical stream.
std::vector<Value> generate_uniform(std::size_t count, Value max_value,
                                    std::uint64_t seed);

// One decimal unsigned key per line. Trailing empty lines are tolerated;
// a non-numeric line, a zero, or an overflowing value raises input_error
// naming the line.
std::vector<Value> parse_trace(std::istream& in);
std::vector<Value> parse_trace(const std::string& path);

// Splits each line on `delimiter` and parses field `field_index`
// (0-based) as an unsigned key, preserving line order. Lines starting
// with '#' are skipped. Missing or non-numeric fields raise input_error
// naming the line.
std::vector<Value> extract_field(std::istream& in, char delimiter,
                                 std::size_t field_index);
std::vector<Value> extract_field(const std::string& path, char delimiter,
                                 std::size_t field_index);

std::vector<Value> load_trace(const TraceSpec& spec);

void write_trace(std::span<const Value> values, std::ostream& out);

std::vector<TaggedValue> parse_tagged_stream(std::istream& in);
std::vector<TaggedValue> parse_tagged_stream(const std::string& path);

void write_tagged_stream(std::span<const TaggedValue> tagged,
                         std::ostream& out);

// Largest key in the trace; used as the default switch max_value.
Value observed_max(std::span<const Value> values);

}  // namespace mm

#endif  // MM_TRACE_HPP_
