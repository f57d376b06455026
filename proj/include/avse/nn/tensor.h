// include/avse/nn/tensor.h

// Copyright 2026  The avse Authors

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

#ifndef AVSE_NN_TENSOR_H_
#define AVSE_NN_TENSOR_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "avse/error.h"

namespace avse::nn {

using Shape = std::vector<std::size_t>;

std::string ShapeString(const Shape& shape);

inline std::size_t NumElements(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

// Dense row-major n-d array. float for training, double for gradient checks.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T{})
      : shape_(std::move(shape)), data_(NumElements(shape_), fill) {}
  Tensor(Shape shape, std::vector<T> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != NumElements(shape_))
      throw Error(ErrorCode::kShapeMismatch,
                  "data length " + std::to_string(data_.size()) +
                      " does not match shape " + ShapeString(shape_));
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t i) const { return shape_.at(i); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }
  std::vector<T>& values() noexcept { return data_; }
  const std::vector<T>& values() const noexcept { return data_; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  // NCHW element access for rank-4 tensors.
  T& at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) {
    return data_[((n * shape_[1] + c) * shape_[2] + h) * shape_[3] + w];
  }
  const T& at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const {
    return data_[((n * shape_[1] + c) * shape_[2] + h) * shape_[3] + w];
  }

  void Reshape(Shape shape) {
    if (NumElements(shape) != data_.size())
      throw Error(ErrorCode::kShapeMismatch, "cannot reshape " +
                                                 ShapeString(shape_) + " to " +
                                                 ShapeString(shape));
    shape_ = std::move(shape);
  }
  Tensor Reshaped(Shape shape) const {
    Tensor t = *this;
    t.Reshape(std::move(shape));
    return t;
  }

  void Fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  template <typename U>
  Tensor<U> Cast() const {
    return Tensor<U>(shape_, std::vector<U>(data_.begin(), data_.end()));
  }

  bool operator==(const Tensor&) const = default;

 private:
  Shape shape_;
  std::vector<T> data_;
};

template <typename T>
bool AllFinite(const Tensor<T>& t) {
  for (T v : t.values())
    if (!std::isfinite(v)) return false;
  return true;
}

// Throws NonFiniteValue naming `where`.
template <typename T>
void CheckFinite(const Tensor<T>& t, const char* where) {
  if (!AllFinite(t))
    throw Error(ErrorCode::kNonFiniteValue,
                std::string(where) + " produced NaN/Inf");
}

template <typename T>
void ExpectShape(const Tensor<T>& t, const Shape& shape, const char* what) {
  if (t.shape() != shape)
    throw Error(ErrorCode::kShapeMismatch, std::string(what) + ": expected " +
                                               ShapeString(shape) + ", got " +
                                               ShapeString(t.shape()));
}

}  // namespace avse::nn

#endif  // AVSE_NN_TENSOR_H_
