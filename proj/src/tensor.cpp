#include "wnx2/tensor.h"

#include <functional>
#include <numeric>
#include <sstream>

#include "wnx2/error.h"

namespace wnx2 {

namespace {

std::size_t checked_volume(const Dims& dims) {
  if (dims.empty() || dims.size() > 3) {
    throw ShapeError("tensor rank must be 1..3, got " + std::to_string(dims.size()));
  }
  for (auto d : dims) {
    if (d == 0) throw ShapeError("tensor extents must be positive: " + shape_string(dims));
  }
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

std::string shape_string(std::span<const std::size_t> dims) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) os << 'x';
    os << dims[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Dims dims, float fill) : dims_(std::move(dims)) {
  data_.assign(checked_volume(dims_), fill);
}

Tensor::Tensor(Dims dims, std::vector<float> data) : dims_(std::move(dims)), data_(std::move(data)) {
  const auto n = checked_volume(dims_);
  if (n != data_.size()) {
    throw ShapeError("tensor " + shape_string(dims_) + " needs " + std::to_string(n) +
                     " values, got " + std::to_string(data_.size()));
  }
}

void expect_shape(const Tensor& t, const Dims& expected, const std::string& what) {
  if (t.dims() != expected) {
    throw ShapeError(what + ": expected " + shape_string(expected) + ", got " + t.shape());
  }
}

const char* to_string(ContainerErrc code) {
  switch (code) {
    case ContainerErrc::bad_magic: return "bad magic";
    case ContainerErrc::unsupported_version: return "unsupported version";
    case ContainerErrc::truncated: return "truncated file";
    case ContainerErrc::overlapping_records: return "overlapping records";
    case ContainerErrc::duplicate_name: return "duplicate tensor name";
    case ContainerErrc::bad_record: return "bad record";
  }
  return "container error";
}

}  // namespace wnx2
