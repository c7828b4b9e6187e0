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

#include "mm/kernels.hpp"

namespace mm::kernels::detail {

std::size_t count_descents_scalar(std::span<const Value> values) {
  if (values.size() < 2) return 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    n += values[i] > values[i + 1];
  }
  return n;
}

std::size_t next_descent_scalar(std::span<const Value> values,
                                std::size_t from) {
  if (values.size() < 2) return npos;
  for (std::size_t i = from; i + 1 < values.size(); ++i) {
    if (values[i] > values[i + 1]) return i;
  }
  return npos;
}

std::pair<Value, Value> min_max_scalar(std::span<const Value> values) {
  Value lo = values.front();
  Value hi = values.front();
  for (Value v : values.subspan(1)) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return {lo, hi};
}

}  // namespace mm::kernels::detail
