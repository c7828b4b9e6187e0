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

#ifndef MM_KERNELS_HPP_
#define MM_KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

#include "mm/types.hpp"

// Flat scan kernels for the hot loops: run-boundary detection over traces
// and the min/max reduction used to derive a default key domain. Each
// kernel has a scalar reference implementation and an AVX2 variant; the
// active variant is picked once at startup from CPU features. The two
// must agree bit-for-bit on every input (see tests/test_kernels.cpp).

namespace mm::kernels {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

enum class Backend { scalar, avx2 };

// Backend chosen by CPU detection (or the last force_backend call).
Backend active_backend();

// Test hook; Backend::avx2 is ignored on hosts without AVX2.
void force_backend(Backend backend);

// True when the AVX2 variants were compiled in and the CPU supports them.
bool avx2_available();

// Number of adjacent pairs with values[i] > values[i + 1] (strict
// descents). For a non-empty sequence, run count = descents + 1.
std::size_t count_descents(std::span<const Value> values);

// First index i >= from with values[i] > values[i + 1], or npos.
std::size_t next_descent(std::span<const Value> values, std::size_t from);

// {min, max} of a non-empty sequence.
std::pair<Value, Value> min_max(std::span<const Value> values);

namespace detail {
std::size_t count_descents_scalar(std::span<const Value> values);
std::size_t next_descent_scalar(std::span<const Value> values,
                                std::size_t from);
std::pair<Value, Value> min_max_scalar(std::span<const Value> values);

#if defined(MM_HAVE_AVX2)
std::size_t count_descents_avx2(std::span<const Value> values);
std::size_t next_descent_avx2(std::span<const Value> values,
                              std::size_t from);
std::pair<Value, Value> min_max_avx2(std::span<const Value> values);
#endif
}  // namespace detail

}  // namespace mm::kernels

#endif  // MM_KERNELS_HPP_
