// Copyright 2026 the aggplay project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2 kernel variants. This translation unit is compiled with -mavx2; the
// dispatcher in kernels.cpp only selects these when the CPU reports AVX2.
// Reductions accumulate in four lanes and fold at the end, so dot/l1/sum may
// differ from scalar by reassociation rounding; the elementwise kernels
// perform the same operation per element as scalar.

#include "aggplay/kernels.hpp"

#if defined(AGGPLAY_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace aggplay::kernels::avx2 {

namespace {

inline double reduce_add(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  return _mm_cvtsd_f64(s);
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(a + i);
    __m256d y = _mm256_loadu_pd(b + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(x, y));
  }
  double r = reduce_add(acc);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

void matvec(const double* table, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(table + r * cols, x, cols);
}

void decay_bump(double* v, std::size_t n, double decay, std::size_t index,
                double bump) {
  const __m256d d = _mm256_set1_pd(decay);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(v + i, _mm256_mul_pd(_mm256_loadu_pd(v + i), d));
  for (; i < n; ++i) v[i] *= decay;
  v[index] += bump;
}

void axpy(double* y, const double* x, std::size_t n, double a) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yi = _mm256_loadu_pd(y + i);
    __m256d xi = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(yi, _mm256_mul_pd(av, xi)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void decay_shift(double* v, std::size_t n, double decay, double shift) {
  const __m256d d = _mm256_set1_pd(decay);
  const __m256d s = _mm256_set1_pd(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_mul_pd(_mm256_loadu_pd(v + i), d);
    _mm256_storeu_pd(v + i, _mm256_add_pd(x, s));
  }
  for (; i < n; ++i) v[i] = v[i] * decay + shift;
}

double l1_diff(const double* a, const double* b, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, d));
  }
  double r = reduce_add(acc);
  for (; i < n; ++i) r += std::fabs(a[i] - b[i]);
  return r;
}

double sum(const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
  double r = reduce_add(acc);
  for (; i < n; ++i) r += v[i];
  return r;
}

}  // namespace aggplay::kernels::avx2

#endif  // AGGPLAY_HAVE_AVX2
