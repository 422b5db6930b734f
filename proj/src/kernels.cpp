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

#include "aggplay/kernels.hpp"

#include <cmath>

namespace aggplay::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void matvec(const double* table, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(table + r * cols, x, cols);
}

void decay_bump(double* v, std::size_t n, double decay, std::size_t index,
                double bump) {
  for (std::size_t i = 0; i < n; ++i) v[i] *= decay;
  v[index] += bump;
}

void axpy(double* y, const double* x, std::size_t n, double a) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void decay_shift(double* v, std::size_t n, double decay, double shift) {
  for (std::size_t i = 0; i < n; ++i) v[i] = v[i] * decay + shift;
}

double l1_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
  return acc;
}

double sum(const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += v[i];
  return acc;
}

}  // namespace scalar

namespace {

bool cpu_has_avx2() {
#if defined(AGGPLAY_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const bool kUseAvx2 = cpu_has_avx2();

}  // namespace

#if defined(AGGPLAY_HAVE_AVX2)
#define AGGPLAY_PICK(fn) (kUseAvx2 ? avx2::fn : scalar::fn)
#else
#define AGGPLAY_PICK(fn) (scalar::fn)
#endif

const MatvecFn matvec = AGGPLAY_PICK(matvec);
const DotFn dot = AGGPLAY_PICK(dot);
const DecayBumpFn decay_bump = AGGPLAY_PICK(decay_bump);
const AxpyFn axpy = AGGPLAY_PICK(axpy);
const DecayShiftFn decay_shift = AGGPLAY_PICK(decay_shift);
const L1DiffFn l1_diff = AGGPLAY_PICK(l1_diff);
const SumFn sum = AGGPLAY_PICK(sum);

#undef AGGPLAY_PICK

std::string_view active_backend() { return kUseAvx2 ? "avx2" : "scalar"; }

}  // namespace aggplay::kernels
