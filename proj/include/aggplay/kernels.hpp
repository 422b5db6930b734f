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

#ifndef AGGPLAY_KERNELS_HPP_
#define AGGPLAY_KERNELS_HPP_

#include <cstddef>
#include <string_view>

// Arithmetic inner loops used by the belief updates, expected-reward
// evaluations and table reductions. Each kernel has a scalar reference
// implementation and may have SIMD variants; the top-level entry points are
// function pointers bound once at startup to the best variant the CPU
// supports. Dispatch never changes within a process, so runs stay
// reproducible on a given machine.
namespace aggplay::kernels {

// y[r] = sum_c table[r*cols + c] * x[c]
using MatvecFn = void (*)(const double* table, std::size_t rows,
                          std::size_t cols, const double* x, double* y);
// sum_i a[i] * b[i]
using DotFn = double (*)(const double* a, const double* b, std::size_t n);
// v *= decay; v[index] += bump   (the simplex-shift recurrence)
using DecayBumpFn = void (*)(double* v, std::size_t n, double decay,
                             std::size_t index, double bump);
// y += a * x
using AxpyFn = void (*)(double* y, const double* x, std::size_t n, double a);
// v[i] = v[i] * decay + shift   (relaxation toward a constant mix)
using DecayShiftFn = void (*)(double* v, std::size_t n, double decay,
                              double shift);
// sum_i |a[i] - b[i]|
using L1DiffFn = double (*)(const double* a, const double* b, std::size_t n);
// sum_i v[i]
using SumFn = double (*)(const double* v, std::size_t n);

namespace scalar {
void matvec(const double* table, std::size_t rows, std::size_t cols,
            const double* x, double* y);
double dot(const double* a, const double* b, std::size_t n);
void decay_bump(double* v, std::size_t n, double decay, std::size_t index,
                double bump);
void axpy(double* y, const double* x, std::size_t n, double a);
void decay_shift(double* v, std::size_t n, double decay, double shift);
double l1_diff(const double* a, const double* b, std::size_t n);
double sum(const double* v, std::size_t n);
}  // namespace scalar

#if defined(AGGPLAY_HAVE_AVX2)
namespace avx2 {
void matvec(const double* table, std::size_t rows, std::size_t cols,
            const double* x, double* y);
double dot(const double* a, const double* b, std::size_t n);
void decay_bump(double* v, std::size_t n, double decay, std::size_t index,
                double bump);
void axpy(double* y, const double* x, std::size_t n, double a);
void decay_shift(double* v, std::size_t n, double decay, double shift);
double l1_diff(const double* a, const double* b, std::size_t n);
double sum(const double* v, std::size_t n);
}  // namespace avx2
#endif

extern const MatvecFn matvec;
extern const DotFn dot;
extern const DecayBumpFn decay_bump;
extern const AxpyFn axpy;
extern const DecayShiftFn decay_shift;
extern const L1DiffFn l1_diff;
extern const SumFn sum;

// "scalar" or "avx2"; what the function pointers above are bound to.
std::string_view active_backend();

}  // namespace aggplay::kernels

#endif  // AGGPLAY_KERNELS_HPP_
