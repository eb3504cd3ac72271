// include/narb/kernels.h

// Copyright 2026 The narb Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef NARB_KERNELS_H_
#define NARB_KERNELS_H_

#include <cstddef>
#include <span>

// Dense inner loops used by the autodiff core, retrieval scans and metric
// accumulation. Every kernel has a plain serial version, kept as the
// reference for tests and benchmarks, and an OpenMP version. The parallel
// versions split work over output elements only and keep each element's
// summation order, so both produce bit-identical results.
namespace narb::kernels {

/// Work (multiply-adds) below which the OpenMP versions stay on one thread.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 15;

// y = A x, A is rows x cols row-major.
void GemvSerial(std::span<const double> a, std::size_t rows, std::size_t cols,
                std::span<const double> x, std::span<double> y);
void GemvParallel(std::span<const double> a, std::size_t rows, std::size_t cols,
                  std::span<const double> x, std::span<double> y);

// x += A^T y.
void GemvTransAccSerial(std::span<const double> a, std::size_t rows, std::size_t cols,
                        std::span<const double> y, std::span<double> x);
void GemvTransAccParallel(std::span<const double> a, std::size_t rows, std::size_t cols,
                          std::span<const double> y, std::span<double> x);

// A += y x^T (rank-1 update).
void GerSerial(std::span<const double> y, std::span<const double> x, std::size_t rows,
               std::size_t cols, std::span<double> a);
void GerParallel(std::span<const double> y, std::span<const double> x, std::size_t rows,
                 std::size_t cols, std::span<double> a);

// C = A B with A m x k, B k x n.
void GemmSerial(std::span<const double> a, std::span<const double> b, std::size_t m,
                std::size_t k, std::size_t n, std::span<double> c);
void GemmParallel(std::span<const double> a, std::span<const double> b, std::size_t m,
                  std::size_t k, std::size_t n, std::span<double> c);

// out[i] = cosine(query, row i of M); 0 when either side has zero norm.
void CosineRowsSerial(std::span<const double> m, std::size_t rows, std::size_t cols,
                      std::span<const double> query, std::span<double> out);
void CosineRowsParallel(std::span<const double> m, std::size_t rows, std::size_t cols,
                        std::span<const double> query, std::span<double> out);

double Dot(std::span<const double> a, std::span<const double> b);
double Norm(std::span<const double> a);

// Entry points used by the library.
inline void Gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
                 std::span<const double> x, std::span<double> y) {
  GemvParallel(a, rows, cols, x, y);
}
inline void GemvTransAcc(std::span<const double> a, std::size_t rows, std::size_t cols,
                         std::span<const double> y, std::span<double> x) {
  GemvTransAccParallel(a, rows, cols, y, x);
}
inline void Ger(std::span<const double> y, std::span<const double> x, std::size_t rows,
                std::size_t cols, std::span<double> a) {
  GerParallel(y, x, rows, cols, a);
}
inline void Gemm(std::span<const double> a, std::span<const double> b, std::size_t m,
                 std::size_t k, std::size_t n, std::span<double> c) {
  GemmParallel(a, b, m, k, n, c);
}
inline void CosineRows(std::span<const double> m, std::size_t rows, std::size_t cols,
                       std::span<const double> query, std::span<double> out) {
  CosineRowsParallel(m, rows, cols, query, out);
}

}  // namespace narb::kernels

#endif  // NARB_KERNELS_H_
