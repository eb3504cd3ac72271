// include/narb/tensor.h

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

#ifndef NARB_TENSOR_H_
#define NARB_TENSOR_H_

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace narb {

/// Dense row-major matrix of doubles. A vector is an n x 1 tensor.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Tensor Column(std::vector<double> values) {
    Tensor t;
    t.rows_ = values.size();
    t.cols_ = 1;
    t.data_ = std::move(values);
    return t;
  }
  static Tensor Scalar(double v) { return Column({v}); }
  static Tensor Identity(std::size_t n) {
    Tensor t(n, n);
    for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
    return t;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool IsColumn() const { return cols_ == 1; }
  bool SameShape(const Tensor &o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double &operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> span() { return data_; }
  std::span<const double> span() const { return data_; }
  double *data() { return data_.data(); }
  const double *data() const { return data_.data(); }
  const std::vector<double> &values() const { return data_; }
  std::vector<double> &values() { return data_; }

  void Fill(double v) { std::fill(data_.begin(), data_.end(), v); }
  std::string ShapeString() const {
    return "[" + std::to_string(rows_) + "x" + std::to_string(cols_) + "]";
  }

  bool operator==(const Tensor &) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace narb

#endif  // NARB_TENSOR_H_
