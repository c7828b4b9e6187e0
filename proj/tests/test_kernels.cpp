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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "mm/kernels.hpp"

using namespace mm;
using kernels::Backend;

namespace {

// Restores the dispatch choice even when a CHECK fails mid-test.
class BackendGuard {
 public:
  BackendGuard() : saved_(kernels::active_backend()) {}
  ~BackendGuard() { kernels::force_backend(saved_); }

 private:
  Backend saved_;
};

std::size_t naive_count_descents(const std::vector<Value>& v) {
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i] > v[i + 1]) ++count;
  }
  return count;
}

std::size_t naive_next_descent(const std::vector<Value>& v,
                               std::size_t from) {
  for (std::size_t i = from; i + 1 < v.size(); ++i) {
    if (v[i] > v[i + 1]) return i;
  }
  return kernels::npos;
}

// Lengths straddling the 4-lane vector width and its unrolled tails.
const std::vector<std::size_t> kLengths = {0,  1,  2,  3,  4,  5,  7,  8,
                                           9,  15, 16, 17, 31, 32, 33, 63,
                                           64, 65, 127, 128, 129, 1000};

std::vector<std::vector<Value>> test_vectors(std::size_t n,
                                             std::mt19937_64& rng) {
  std::vector<std::vector<Value>> out;

  std::vector<Value> random(n);
  for (Value& v : random) v = rng();
  out.push_back(random);

  std::vector<Value> small(n);
  for (Value& v : small) v = rng() % 7;
  out.push_back(small);

  std::vector<Value> sorted = random;
  std::sort(sorted.begin(), sorted.end());
  out.push_back(sorted);

  std::vector<Value> reversed = sorted;
  std::reverse(reversed.begin(), reversed.end());
  out.push_back(reversed);

  out.emplace_back(n, Value{5});

  // Values around the signed/unsigned boundary exercise the sign-flip
  // trick in the vector compare.
  std::vector<Value> boundary(n);
  const Value probes[] = {0, 1, std::numeric_limits<std::int64_t>::max(),
                          static_cast<Value>(
                              std::numeric_limits<std::int64_t>::max()) +
                              1,
                          std::numeric_limits<Value>::max()};
  for (std::size_t i = 0; i < n; ++i) boundary[i] = probes[rng() % 5];
  out.push_back(boundary);

  return out;
}

}  // namespace

TEST_CASE("backend forcing") {
  BackendGuard guard;
  kernels::force_backend(Backend::scalar);
  CHECK(kernels::active_backend() == Backend::scalar);
  kernels::force_backend(Backend::avx2);
  if (kernels::avx2_available()) {
    CHECK(kernels::active_backend() == Backend::avx2);
  } else {
    CHECK(kernels::active_backend() == Backend::scalar);
  }
}

TEST_CASE("kernels match naive references on the scalar backend") {
  BackendGuard guard;
  kernels::force_backend(Backend::scalar);
  std::mt19937_64 rng(7);
  for (std::size_t n : kLengths) {
    for (const std::vector<Value>& v : test_vectors(n, rng)) {
      CHECK(kernels::count_descents(v) == naive_count_descents(v));
      for (std::size_t from : {std::size_t{0}, n / 2, n}) {
        CHECK(kernels::next_descent(v, from) == naive_next_descent(v, from));
      }
      if (!v.empty()) {
        const auto [lo, hi] = kernels::min_max(v);
        const auto [it_lo, it_hi] = std::minmax_element(v.begin(), v.end());
        CHECK(lo == *it_lo);
        CHECK(hi == *it_hi);
      }
    }
  }
}

TEST_CASE("avx2 backend is equivalent to scalar") {
  if (!kernels::avx2_available()) {
    MESSAGE("avx2 not available; dispatch equivalence degenerates");
    return;
  }
  BackendGuard guard;
  std::mt19937_64 rng(8);
  for (std::size_t n : kLengths) {
    for (const std::vector<Value>& v : test_vectors(n, rng)) {
      kernels::force_backend(Backend::scalar);
      const std::size_t scalar_descents = kernels::count_descents(v);
      kernels::force_backend(Backend::avx2);
      CHECK(kernels::count_descents(v) == scalar_descents);

      for (std::size_t from = 0; from <= std::min<std::size_t>(n, 40);
           ++from) {
        kernels::force_backend(Backend::scalar);
        const std::size_t scalar_next = kernels::next_descent(v, from);
        kernels::force_backend(Backend::avx2);
        CHECK(kernels::next_descent(v, from) == scalar_next);
      }

      if (!v.empty()) {
        kernels::force_backend(Backend::scalar);
        const auto scalar_mm = kernels::min_max(v);
        kernels::force_backend(Backend::avx2);
        const auto avx2_mm = kernels::min_max(v);
        CHECK(avx2_mm.first == scalar_mm.first);
        CHECK(avx2_mm.second == scalar_mm.second);
      }
    }
  }
}

TEST_CASE("next_descent walks every boundary") {
  BackendGuard guard;
  std::mt19937_64 rng(9);
  for (Backend backend : {Backend::scalar, Backend::avx2}) {
    kernels::force_backend(backend);
    std::vector<Value> v(777);
    for (Value& x : v) x = rng() % 30;

    std::size_t from = 0;
    std::vector<std::size_t> boundaries;
    while (true) {
      const std::size_t i = kernels::next_descent(v, from);
      if (i == kernels::npos) break;
      boundaries.push_back(i);
      from = i + 1;
    }
    CHECK(boundaries.size() == naive_count_descents(v));
    for (std::size_t b : boundaries) CHECK(v[b] > v[b + 1]);
  }
}

TEST_CASE("next_descent npos cases") {
  BackendGuard guard;
  kernels::force_backend(Backend::scalar);
  const std::vector<Value> sorted = {1, 2, 3, 4, 5};
  CHECK(kernels::next_descent(sorted, 0) == kernels::npos);
  CHECK(kernels::next_descent(sorted, 4) == kernels::npos);
  CHECK(kernels::next_descent(sorted, 99) == kernels::npos);
  CHECK(kernels::next_descent(std::vector<Value>{}, 0) == kernels::npos);
  CHECK(kernels::next_descent(std::vector<Value>{3}, 0) == kernels::npos);
}
