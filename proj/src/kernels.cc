// src/kernels.cc

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

#include "narb/kernels.h"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace narb::kernels {

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

void GemvSerial(std::span<const double> a, std::size_t rows, std::size_t cols,
                std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double *row = a.data() + i * cols;
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void GemvParallel(std::span<const double> a, std::size_t rows, std::size_t cols,
                  std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static) if (rows * cols >= kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) {
    const double *row = a.data() + static_cast<std::size_t>(i) * cols;
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += row[j] * x[j];
    y[static_cast<std::size_t>(i)] = s;
  }
}

void GemvTransAccSerial(std::span<const double> a, std::size_t rows, std::size_t cols,
                        std::span<const double> y, std::span<double> x) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double *row = a.data() + i * cols;
    const double yi = y[i];
    for (std::size_t j = 0; j < cols; ++j) x[j] += row[j] * yi;
  }
}

void GemvTransAccParallel(std::span<const double> a, std::size_t rows, std::size_t cols,
                          std::span<const double> y, std::span<double> x) {
  if (rows * cols < kParallelThreshold) {
    GemvTransAccSerial(a, rows, cols, y, x);
    return;
  }
  // Column blocks; inside a block the row loop runs in the serial order.
  constexpr std::size_t kBlock = 64;
  const auto nblocks = static_cast<std::int64_t>((cols + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::size_t j0 = static_cast<std::size_t>(b) * kBlock;
    const std::size_t j1 = std::min(cols, j0 + kBlock);
    for (std::size_t i = 0; i < rows; ++i) {
      const double *row = a.data() + i * cols;
      const double yi = y[i];
      for (std::size_t j = j0; j < j1; ++j) x[j] += row[j] * yi;
    }
  }
}

void GerSerial(std::span<const double> y, std::span<const double> x, std::size_t rows,
               std::size_t cols, std::span<double> a) {
  for (std::size_t i = 0; i < rows; ++i) {
    double *row = a.data() + i * cols;
    const double yi = y[i];
    for (std::size_t j = 0; j < cols; ++j) row[j] += yi * x[j];
  }
}

void GerParallel(std::span<const double> y, std::span<const double> x, std::size_t rows,
                 std::size_t cols, std::span<double> a) {
  const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static) if (rows * cols >= kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) {
    double *row = a.data() + static_cast<std::size_t>(i) * cols;
    const double yi = y[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < cols; ++j) row[j] += yi * x[j];
  }
}

void GemmSerial(std::span<const double> a, std::span<const double> b, std::size_t m,
                std::size_t k, std::size_t n, std::span<double> c) {
  for (std::size_t i = 0; i < m; ++i) {
    double *crow = c.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) crow[j] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      const double *brow = b.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

void GemmParallel(std::span<const double> a, std::span<const double> b, std::size_t m,
                  std::size_t k, std::size_t n, std::span<double> c) {
  const auto rows = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static) if (m * k * n >= kParallelThreshold)
  for (std::int64_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double *crow = c.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) crow[j] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      const double *brow = b.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

namespace {

inline double CosineOne(const double *row, std::size_t cols, std::span<const double> q,
                        double qnorm) {
  double dot = 0.0, nn = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    dot += row[j] * q[j];
    nn += row[j] * row[j];
  }
  if (nn <= 0.0 || qnorm <= 0.0) return 0.0;
  return dot / (std::sqrt(nn) * qnorm);
}

}  // namespace

void CosineRowsSerial(std::span<const double> m, std::size_t rows, std::size_t cols,
                      std::span<const double> query, std::span<double> out) {
  const double qn = Norm(query);
  for (std::size_t i = 0; i < rows; ++i) out[i] = CosineOne(m.data() + i * cols, cols, query, qn);
}

void CosineRowsParallel(std::span<const double> m, std::size_t rows, std::size_t cols,
                        std::span<const double> query, std::span<double> out) {
  const double qn = Norm(query);
  const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static) if (rows * cols >= kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    out[r] = CosineOne(m.data() + r * cols, cols, query, qn);
  }
}

}  // namespace narb::kernels
