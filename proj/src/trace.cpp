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

#include "mm/trace.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <string_view>

#include <fmt/format.h>

#include "mm/kernels.hpp"

namespace mm {

namespace {

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
  throw input_error(fmt::format("line {}: {}", line, what));
}

std::uint64_t parse_uint(std::string_view token, std::size_t line,
                         std::string_view what) {
  std::uint64_t value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc::result_out_of_range) {
    fail_line(line, fmt::format("{} '{}' overflows 64 bits", what, token));
  }
  if (ec != std::errc() || ptr != last || token.empty()) {
    fail_line(line, fmt::format("expected unsigned {}, got '{}'", what, token));
  }
  return value;
}

Value parse_key(std::string_view token, std::size_t line) {
  const Value v = parse_uint(token, line, "key");
  if (v == 0) fail_line(line, "key must be > 0");
  return v;
}

// Reads lines, stripping an optional trailing '\r'. Trailing empty lines
// are tolerated; an empty line followed by content is an error.
template <typename LineFn>
void for_each_line(std::istream& in, LineFn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t first_empty = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (first_empty == 0) first_empty = line_no;
      continue;
    }
    if (first_empty != 0) fail_line(first_empty, "unexpected empty line");
    fn(std::string_view(line), line_no);
  }
  if (in.bad()) throw input_error("I/O error while reading input");
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error(fmt::format("cannot open '{}'", path));
  return in;
}

}  // namespace

std::vector<Value> generate_uniform(std::size_t count, Value max_value,
                                    std::uint64_t seed) {
  if (max_value < 1) throw std::invalid_argument("max_value must be >= 1");
  std::mt19937_64 rng(seed);
  // Largest multiple of max_value representable in 64 bits; draws at or
  // above it would bias the low residues.
  const std::uint64_t residues =
      (std::numeric_limits<std::uint64_t>::max() % max_value + 1) % max_value;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - residues;  // inclusive
  std::vector<Value> values;
  values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t draw = rng();
    while (draw > limit) draw = rng();
    values.push_back(1 + draw % max_value);
  }
  return values;
}

std::vector<Value> parse_trace(std::istream& in) {
  std::vector<Value> values;
  for_each_line(in, [&](std::string_view line, std::size_t line_no) {
    values.push_back(parse_key(line, line_no));
  });
  return values;
}

std::vector<Value> parse_trace(const std::string& path) {
  std::ifstream in = open_file(path);
  return parse_trace(in);
}

std::vector<Value> extract_field(std::istream& in, char delimiter,
                                 std::size_t field_index) {
  std::vector<Value> values;
  for_each_line(in, [&](std::string_view line, std::size_t line_no) {
    if (line.front() == '#') return;  // comment/header line
    std::string_view rest = line;
    std::string_view field;
    for (std::size_t i = 0; i <= field_index; ++i) {
      if (i > 0) {
        if (rest.size() == field.size()) {
          fail_line(line_no,
                    fmt::format("missing field {} (0-based)", field_index));
        }
        rest.remove_prefix(field.size() + 1);
      }
      const std::size_t cut = rest.find(delimiter);
      field = cut == std::string_view::npos ? rest : rest.substr(0, cut);
    }
    values.push_back(parse_key(field, line_no));
  });
  return values;
}

std::vector<Value> extract_field(const std::string& path, char delimiter,
                                 std::size_t field_index) {
  std::ifstream in = open_file(path);
  return extract_field(in, delimiter, field_index);
}

std::vector<Value> load_trace(const TraceSpec& spec) {
  switch (spec.source) {
    case TraceSource::uniform_random:
      return generate_uniform(spec.count, spec.max_value, spec.seed);
    case TraceSource::file:
      return parse_trace(spec.path);
    case TraceSource::extracted_field:
      return extract_field(spec.path, spec.delimiter, spec.field_index);
  }
  throw std::invalid_argument("unknown trace source");
}

void write_trace(std::span<const Value> values, std::ostream& out) {
  char buf[32];
  char* const limit = buf + sizeof(buf) - 1;  // slack for the newline
  for (Value v : values) {
    auto [ptr, ec] = std::to_chars(buf, limit, v);
    *ptr++ = '\n';
    out.write(buf, ptr - buf);
  }
}

std::vector<TaggedValue> parse_tagged_stream(std::istream& in) {
  std::vector<TaggedValue> tagged;
  for_each_line(in, [&](std::string_view line, std::size_t line_no) {
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      fail_line(line_no, "expected '<segment_id>\\t<key>'");
    }
    const std::uint64_t id =
        parse_uint(line.substr(0, tab), line_no, "segment id");
    if (id > std::numeric_limits<std::uint32_t>::max()) {
      fail_line(line_no, fmt::format("segment id {} too large", id));
    }
    const Value key = parse_key(line.substr(tab + 1), line_no);
    tagged.push_back({static_cast<std::uint32_t>(id), key});
  });
  return tagged;
}

std::vector<TaggedValue> parse_tagged_stream(const std::string& path) {
  std::ifstream in = open_file(path);
  return parse_tagged_stream(in);
}

void write_tagged_stream(std::span<const TaggedValue> tagged,
                         std::ostream& out) {
  char buf[64];
  char* const limit = buf + sizeof(buf) - 2;  // slack for '\t' and '\n'
  for (const TaggedValue& tv : tagged) {
    auto [ptr, ec] = std::to_chars(buf, limit, tv.segment_id);
    *ptr++ = '\t';
    auto [ptr2, ec2] = std::to_chars(ptr, limit, tv.key);
    *ptr2++ = '\n';
    out.write(buf, ptr2 - buf);
  }
}

Value observed_max(std::span<const Value> values) {
  if (values.empty()) {
    throw std::invalid_argument("observed_max of an empty trace");
  }
  return kernels::min_max(values).second;
}

}  // namespace mm
