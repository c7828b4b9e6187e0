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

#if defined(MM_HAVE_AVX2)

#include <immintrin.h>

#include <bit>

namespace mm::kernels::detail {

namespace {

// AVX2 has no unsigned 64-bit compare; flipping the sign bit maps the
// unsigned order onto the signed one.
inline __m256i flip_sign(__m256i v) {
  return _mm256_xor_si256(v, _mm256_set1_epi64x(INT64_MIN));
}

// 4-bit mask of lanes where a > b (unsigned).
inline int gt_mask_u64(__m256i a, __m256i b) {
  __m256i gt = _mm256_cmpgt_epi64(flip_sign(a), flip_sign(b));
  return _mm256_movemask_pd(_mm256_castsi256_pd(gt));
}

}  // namespace

std::size_t count_descents_avx2(std::span<const Value> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0;
  const Value* p = values.data();
  const std::size_t pairs = n - 1;
  std::size_t i = 0;
  std::size_t total = 0;
  for (; i + 4 <= pairs; i += 4) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    __m256i y =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i + 1));
    total += std::popcount(static_cast<unsigned>(gt_mask_u64(x, y)));
  }
  for (; i < pairs; ++i) total += p[i] > p[i + 1];
  return total;
}

std::size_t next_descent_avx2(std::span<const Value> values,
                              std::size_t from) {
  const std::size_t n = values.size();
  if (n < 2 || from >= n - 1) return npos;
  const Value* p = values.data();
  const std::size_t pairs = n - 1;
  std::size_t i = from;
  for (; i + 4 <= pairs; i += 4) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    __m256i y =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i + 1));
    int mask = gt_mask_u64(x, y);
    if (mask != 0) {
      return i + std::countr_zero(static_cast<unsigned>(mask));
    }
  }
  for (; i < pairs; ++i) {
    if (p[i] > p[i + 1]) return i;
  }
  return npos;
}

std::pair<Value, Value> min_max_avx2(std::span<const Value> values) {
  const std::size_t n = values.size();
  if (n < 4) return min_max_scalar(values);
  const Value* p = values.data();
  __m256i vmin = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
  __m256i vmax = vmin;
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    __m256i xf = flip_sign(x);
    __m256i lt = _mm256_cmpgt_epi64(flip_sign(vmin), xf);
    __m256i gt = _mm256_cmpgt_epi64(xf, flip_sign(vmax));
    vmin = _mm256_blendv_epi8(vmin, x, lt);
    vmax = _mm256_blendv_epi8(vmax, x, gt);
  }
  alignas(32) Value lanes_min[4];
  alignas(32) Value lanes_max[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes_min), vmin);
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes_max), vmax);
  Value lo = lanes_min[0];
  Value hi = lanes_max[0];
  for (int lane = 1; lane < 4; ++lane) {
    if (lanes_min[lane] < lo) lo = lanes_min[lane];
    if (lanes_max[lane] > hi) hi = lanes_max[lane];
  }
  for (; i < n; ++i) {
    if (p[i] < lo) lo = p[i];
    if (p[i] > hi) hi = p[i];
  }
  return {lo, hi};
}

}  // namespace mm::kernels::detail

#endif  // MM_HAVE_AVX2
