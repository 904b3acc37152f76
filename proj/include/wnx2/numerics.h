#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wnx2/tensor.h"

// Dense kernels shared by the generator and the front-end. Everything is
// stride 1 and float32; reductions accumulate in double except inside GEMM.
namespace wnx2 {

inline constexpr float kLayerNormEps = 1e-6f;

// weight: [C_out x C_in/groups x K], bias: [C_out]. K is odd and the
// convolution is always length preserving (padding = (K-1)/2).
struct Conv1dParams {
  Tensor weight;
  Tensor bias;
  std::size_t groups = 1;

  std::size_t out_channels() const { return weight.dim(0); }
  std::size_t in_channels() const { return weight.dim(1) * groups; }
  std::size_t kernel() const { return weight.dim(2); }
  std::size_t padding() const { return (kernel() - 1) / 2; }

  void validate() const;
};

// x: [C_in x L] -> [C_out x L].
Tensor conv1d(const Tensor& x, const Conv1dParams& p);

// Normalizes each frame (column) of x: [C x F] over its C channels using
// the population variance.
Tensor layer_norm_channels(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                           float eps = kLayerNormEps);

// Exact x * Phi(x) using erf.
float gelu(float x);
Tensor gelu(Tensor x);
void gelu_inplace(std::span<float> x);

// Row-wise affine map: x [F x D_in], w [D_out x D_in], b [D_out] -> [F x D_out].
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);

// Same map applied to channel-major activations: x [D_in x F] -> [D_out x F].
// Equal to linear(x^T, w, b)^T.
Tensor pointwise(const Tensor& x, const Tensor& w, const Tensor& b);

// Orthonormal DCT-II and its inverse (DCT-III with matching scaling).
std::vector<double> dct_ii(std::span<const double> x);
std::vector<double> dct_iii(std::span<const double> y);

// Thread count used by the GEMM backend. Defaults to 1.
void set_num_threads(int n);
int num_threads();

}  // namespace wnx2
