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

namespace mm::kernels {

namespace {

bool detect_avx2() {
#if defined(MM_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend& backend_slot() {
  static Backend backend = detect_avx2() ? Backend::avx2 : Backend::scalar;
  return backend;
}

}  // namespace

bool avx2_available() {
  static const bool available = detect_avx2();
  return available;
}

Backend active_backend() { return backend_slot(); }

void force_backend(Backend backend) {
  if (backend == Backend::avx2 && !avx2_available()) return;
  backend_slot() = backend;
}

std::size_t count_descents(std::span<const Value> values) {
#if defined(MM_HAVE_AVX2)
  if (active_backend() == Backend::avx2) {
    return detail::count_descents_avx2(values);
  }
#endif
  return detail::count_descents_scalar(values);
}

std::size_t next_descent(std::span<const Value> values, std::size_t from) {
#if defined(MM_HAVE_AVX2)
  if (active_backend() == Backend::avx2) {
    return detail::next_descent_avx2(values, from);
  }
#endif
  return detail::next_descent_scalar(values, from);
}

std::pair<Value, Value> min_max(std::span<const Value> values) {
#if defined(MM_HAVE_AVX2)
  if (active_backend() == Backend::avx2) {
    return detail::min_max_avx2(values);
  }
#endif
  return detail::min_max_scalar(values);
}

}  // namespace mm::kernels
