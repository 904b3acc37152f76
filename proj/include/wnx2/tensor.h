#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wnx2 {

using Dims = std::vector<std::size_t>;

std::string shape_string(std::span<const std::size_t> dims);

// Dense float tensor of rank 1..3, row-major with the last dimension
// contiguous. Activations are stored channel-major: [channels x frames].
// A default-constructed tensor is the empty placeholder (rank 0).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Dims dims, float fill = 0.0f);
  Tensor(Dims dims, std::vector<float> data);

  const Dims& dims() const { return dims_; }
  std::size_t rank() const { return dims_.size(); }
  std::size_t dim(std::size_t i) const { return dims_.at(i); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }
  float* ptr() { return data_.data(); }
  const float* ptr() const { return data_.data(); }

  float& operator[](std::size_t i) { return data_[i]; }
  float operator[](std::size_t i) const { return data_[i]; }

  float& operator()(std::size_t r, std::size_t c) { return data_[r * dims_[1] + c]; }
  float operator()(std::size_t r, std::size_t c) const { return data_[r * dims_[1] + c]; }
  float& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }
  float operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }

  // Row r of a rank-2 tensor.
  std::span<float> row(std::size_t r) { return {data_.data() + r * dims_[1], dims_[1]}; }
  std::span<const float> row(std::size_t r) const {
    return {data_.data() + r * dims_[1], dims_[1]};
  }

  std::string shape() const { return shape_string(dims_); }

  bool operator==(const Tensor&) const = default;

 private:
  Dims dims_;
  std::vector<float> data_;
};

// Throws ShapeError("<what>: expected [..], got [..]") when dims differ.
void expect_shape(const Tensor& t, const Dims& expected, const std::string& what);

}  // namespace wnx2
