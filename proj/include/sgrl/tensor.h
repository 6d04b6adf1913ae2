// Copyright 2026 The SGRL Authors
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

// Dense row-major tensors. Training runs on Tensor (32-bit); the gradient
// verification path instantiates the same model code on BasicTensor<double>.

#ifndef SGRL_TENSOR_H_
#define SGRL_TENSOR_H_

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sgrl/error.h"

namespace sgrl {

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using ColVector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

std::string shape_string(std::span<const std::size_t> dims);

template <typename T>
class BasicTensor {
 public:
  using value_type = T;

  BasicTensor() = default;
  explicit BasicTensor(std::vector<std::size_t> dims)
      : dims_(std::move(dims)), data_(element_count(dims_), T(0)) {}
  BasicTensor(std::vector<std::size_t> dims, std::vector<T> data)
      : dims_(std::move(dims)), data_(data.begin(), data.end()) {
    check(data_.size() == element_count(dims_), ErrorCode::kDimension,
          "tensor data length " + std::to_string(data_.size()) +
              " does not match shape " + shape_string(dims_));
  }

  static BasicTensor vector(std::initializer_list<T> values) {
    return BasicTensor({values.size()}, std::vector<T>(values));
  }
  static BasicTensor matrix(std::size_t rows, std::size_t cols,
                            std::initializer_list<T> values) {
    return BasicTensor({rows, cols}, std::vector<T>(values));
  }

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t rank() const { return dims_.size(); }
  std::size_t size() const { return data_.size(); }
  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
  std::size_t rows() const { return dims_.empty() ? 0 : dims_[0]; }
  std::size_t cols() const {
    return dims_.empty() ? 0 : data_.size() / std::max<std::size_t>(dims_[0], 1);
  }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  T& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  const T& at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  // Eigen views. A rank-1 tensor maps as a column vector / single-column matrix.
  Eigen::Map<RowMatrix<T>> mat() {
    return Eigen::Map<RowMatrix<T>>(data_.data(), rows(), cols());
  }
  Eigen::Map<const RowMatrix<T>> mat() const {
    return Eigen::Map<const RowMatrix<T>>(data_.data(), rows(), cols());
  }
  Eigen::Map<ColVector<T>> vec() {
    return Eigen::Map<ColVector<T>>(data_.data(), data_.size());
  }
  Eigen::Map<const ColVector<T>> vec() const {
    return Eigen::Map<const ColVector<T>>(data_.data(), data_.size());
  }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }
  bool same_shape(const BasicTensor& other) const { return dims_ == other.dims_; }

  friend bool operator==(const BasicTensor&, const BasicTensor&) = default;

  template <typename U>
  BasicTensor<U> cast() const {
    return BasicTensor<U>(dims_, std::vector<U>(data_.begin(), data_.end()));
  }

 private:
  static std::size_t element_count(const std::vector<std::size_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                           std::multiplies<>());
  }

  std::vector<std::size_t> dims_;
  // Aligned to EIGEN_MAX_ALIGN_BYTES.
  std::vector<T, Eigen::aligned_allocator<T>> data_;
};

using Tensor = BasicTensor<float>;
using TensorD = BasicTensor<double>;

// Parameter structs expose `visit(f)` (const and non-const) calling
// f(name, tensor) for every trainable tensor in a fixed order. Adam state,
// flattening for gradient checks and checkpoint I/O all rely on that order.
template <typename Params>
std::size_t count_parameters(const Params& params) {
  std::size_t total = 0;
  params.visit([&](const std::string&, const auto& t) { total += t.size(); });
  return total;
}

template <typename To, typename Params>
void flatten_into(const Params& params, std::vector<To>& out) {
  params.visit([&](const std::string&, const auto& t) {
    for (auto v : t.values()) out.push_back(static_cast<To>(v));
  });
}

template <typename From, typename Params>
std::size_t unflatten_from(std::span<const From> flat, std::size_t offset,
                           Params& params) {
  params.visit([&](const std::string&, auto& t) {
    for (auto& v : t.values()) v = static_cast<std::decay_t<decltype(v)>>(flat[offset++]);
  });
  return offset;
}

}  // namespace sgrl

#endif  // SGRL_TENSOR_H_
