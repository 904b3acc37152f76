#include "wnx2/numerics.h"

#include <Eigen/Core>
#include <cmath>
#include <numbers>

#include "wnx2/error.h"

namespace wnx2 {

namespace {

using RowMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMatrix = Eigen::Map<RowMatrix>;
using ConstMapMatrix = Eigen::Map<const RowMatrix>;

// Eigen picks up OMP_NUM_THREADS otherwise.
const int kDefaultThreads = (Eigen::setNbThreads(1), 1);

void expect_rank(const Tensor& t, std::size_t rank, const char* what) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(what) + ": expected rank " + std::to_string(rank) + ", got " +
                     t.shape());
  }
}

Tensor conv1d_depthwise(const Tensor& x, const Conv1dParams& p) {
  const std::size_t channels = x.dim(0);
  const std::size_t len = x.dim(1);
  const std::size_t k_size = p.kernel();
  const auto pad = static_cast<std::ptrdiff_t>(p.padding());
  Tensor out({channels, len});
  for (std::size_t c = 0; c < channels; ++c) {
    const float* w = p.weight.ptr() + c * k_size;
    const auto in = x.row(c);
    auto dst = out.row(c);
    for (std::size_t l = 0; l < len; ++l) {
      double acc = p.bias[c];
      for (std::size_t k = 0; k < k_size; ++k) {
        const auto idx = static_cast<std::ptrdiff_t>(l + k) - pad;
        if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(len)) {
          acc += static_cast<double>(w[k]) * in[static_cast<std::size_t>(idx)];
        }
      }
      dst[l] = static_cast<float>(acc);
    }
  }
  return out;
}

// Grouped convolution as one im2col + GEMM per group.
Tensor conv1d_gemm(const Tensor& x, const Conv1dParams& p) {
  const std::size_t len = x.dim(1);
  const std::size_t k_size = p.kernel();
  const std::size_t cin_g = p.weight.dim(1);
  const std::size_t cout_g = p.out_channels() / p.groups;
  const auto pad = static_cast<std::ptrdiff_t>(p.padding());
  const std::size_t patch = cin_g * k_size;

  Tensor out({p.out_channels(), len});
  std::vector<float> cols(k_size == 1 ? 0 : patch * len);
  for (std::size_t g = 0; g < p.groups; ++g) {
    const float* src = x.ptr() + g * cin_g * len;
    if (k_size > 1) {
      for (std::size_t j = 0; j < cin_g; ++j) {
        const float* in = src + j * len;
        for (std::size_t k = 0; k < k_size; ++k) {
          float* dst = cols.data() + (j * k_size + k) * len;
          const auto shift = static_cast<std::ptrdiff_t>(k) - pad;
          for (std::size_t l = 0; l < len; ++l) {
            const auto idx = static_cast<std::ptrdiff_t>(l) + shift;
            dst[l] = (idx >= 0 && idx < static_cast<std::ptrdiff_t>(len))
                         ? in[static_cast<std::size_t>(idx)]
                         : 0.0f;
          }
        }
      }
    }
    const float* rhs = k_size == 1 ? src : cols.data();
    ConstMapMatrix w(p.weight.ptr() + g * cout_g * patch, cout_g, patch);
    ConstMapMatrix c(rhs, patch, len);
    MapMatrix o(out.ptr() + g * cout_g * len, cout_g, len);
    o.noalias() = w * c;
    for (std::size_t r = 0; r < cout_g; ++r) {
      o.row(r).array() += p.bias[g * cout_g + r];
    }
  }
  return out;
}

}  // namespace

void Conv1dParams::validate() const {
  expect_rank(weight, 3, "conv1d weight");
  expect_rank(bias, 1, "conv1d bias");
  if (groups == 0 || out_channels() % groups != 0) {
    throw ShapeError("conv1d: groups " + std::to_string(groups) + " does not divide C_out " +
                     std::to_string(out_channels()));
  }
  if (kernel() % 2 == 0) {
    throw ShapeError("conv1d: kernel must be odd, got " + std::to_string(kernel()));
  }
  if (bias.dim(0) != out_channels()) {
    throw ShapeError("conv1d: bias " + bias.shape() + " does not match weight " + weight.shape());
  }
}

Tensor conv1d(const Tensor& x, const Conv1dParams& p) {
  p.validate();
  expect_rank(x, 2, "conv1d input");
  if (x.dim(0) != p.in_channels()) {
    throw ShapeError("conv1d: input " + x.shape() + " does not match weight " + p.weight.shape() +
                     " with groups=" + std::to_string(p.groups));
  }
  if (p.weight.dim(1) == 1 && p.groups == p.out_channels()) return conv1d_depthwise(x, p);
  return conv1d_gemm(x, p);
}

Tensor layer_norm_channels(const Tensor& x, const Tensor& gamma, const Tensor& beta, float eps) {
  expect_rank(x, 2, "layer_norm input");
  const std::size_t channels = x.dim(0);
  const std::size_t frames = x.dim(1);
  expect_shape(gamma, {channels}, "layer_norm gamma");
  expect_shape(beta, {channels}, "layer_norm beta");
  if (!(eps > 0.0f)) throw ValidationError("layer_norm: eps must be positive");

  std::vector<double> mean(frames, 0.0);
  std::vector<double> var(frames, 0.0);
  for (std::size_t c = 0; c < channels; ++c) {
    const auto r = x.row(c);
    for (std::size_t f = 0; f < frames; ++f) mean[f] += r[f];
  }
  for (auto& m : mean) m /= static_cast<double>(channels);
  for (std::size_t c = 0; c < channels; ++c) {
    const auto r = x.row(c);
    for (std::size_t f = 0; f < frames; ++f) {
      const double d = r[f] - mean[f];
      var[f] += d * d;
    }
  }
  std::vector<double> inv_std(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    inv_std[f] = 1.0 / std::sqrt(var[f] / static_cast<double>(channels) + eps);
  }

  Tensor out({channels, frames});
  for (std::size_t c = 0; c < channels; ++c) {
    const auto src = x.row(c);
    auto dst = out.row(c);
    const double g = gamma[c];
    const double b = beta[c];
    for (std::size_t f = 0; f < frames; ++f) {
      dst[f] = static_cast<float>(g * ((src[f] - mean[f]) * inv_std[f]) + b);
    }
  }
  return out;
}

float gelu(float x) {
  return 0.5f * x * (1.0f + std::erf(x * (1.0f / std::numbers::sqrt2_v<float>)));
}

void gelu_inplace(std::span<float> x) {
  for (auto& v : x) v = gelu(v);
}

Tensor gelu(Tensor x) {
  gelu_inplace(x.data());
  return x;
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  expect_rank(x, 2, "linear input");
  expect_rank(w, 2, "linear weight");
  if (x.dim(1) != w.dim(1)) {
    throw ShapeError("linear: input " + x.shape() + " does not match weight " + w.shape());
  }
  expect_shape(b, {w.dim(0)}, "linear bias");
  const std::size_t rows = x.dim(0);
  const std::size_t d_out = w.dim(0);
  Tensor out({rows, d_out});
  ConstMapMatrix xm(x.ptr(), rows, x.dim(1));
  ConstMapMatrix wm(w.ptr(), d_out, w.dim(1));
  MapMatrix om(out.ptr(), rows, d_out);
  om.noalias() = xm * wm.transpose();
  Eigen::Map<const Eigen::RowVectorXf> bias(b.ptr(), d_out);
  om.rowwise() += bias;
  return out;
}

Tensor pointwise(const Tensor& x, const Tensor& w, const Tensor& b) {
  expect_rank(x, 2, "pointwise input");
  expect_rank(w, 2, "pointwise weight");
  if (x.dim(0) != w.dim(1)) {
    throw ShapeError("pointwise: input " + x.shape() + " does not match weight " + w.shape());
  }
  expect_shape(b, {w.dim(0)}, "pointwise bias");
  const std::size_t frames = x.dim(1);
  const std::size_t d_out = w.dim(0);
  Tensor out({d_out, frames});
  ConstMapMatrix xm(x.ptr(), x.dim(0), frames);
  ConstMapMatrix wm(w.ptr(), d_out, w.dim(1));
  MapMatrix om(out.ptr(), d_out, frames);
  om.noalias() = wm * xm;
  for (std::size_t r = 0; r < d_out; ++r) om.row(r).array() += b[r];
  return out;
}

std::vector<double> dct_ii(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  if (n == 0) return y;
  const double s0 = std::sqrt(1.0 / static_cast<double>(n));
  const double sk = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += x[i] * std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) *
                             static_cast<double>(k) / static_cast<double>(n));
    }
    y[k] = (k == 0 ? s0 : sk) * acc;
  }
  return y;
}

std::vector<double> dct_iii(std::span<const double> y) {
  const std::size_t n = y.size();
  std::vector<double> x(n, 0.0);
  if (n == 0) return x;
  const double s0 = std::sqrt(1.0 / static_cast<double>(n));
  const double sk = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double acc = s0 * y[0];
    for (std::size_t k = 1; k < n; ++k) {
      acc += sk * y[k] *
             std::cos(std::numbers::pi * (static_cast<double>(i) + 0.5) * static_cast<double>(k) /
                      static_cast<double>(n));
    }
    x[i] = acc;
  }
  return x;
}

void set_num_threads(int n) { Eigen::setNbThreads(n < 1 ? 1 : n); }

int num_threads() {
  (void)kDefaultThreads;
  return Eigen::nbThreads();
}

}  // namespace wnx2
