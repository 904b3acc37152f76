#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "wnx2/dsp.h"
#include "wnx2/numerics.h"
#include "wnx2/tensor.h"

// The per-step sub-model: STFT-spec packing of the current waveform,
// embedding convolution over [mel; STFT-spec; noise level], a stack of
// ConvNeXt blocks and a linear head emitting `hop` samples per frame.
namespace wnx2 {

struct GeneratorConfig {
  std::size_t n_mels = 128;
  std::size_t n_fft = 600;
  std::size_t hop = 300;
  std::size_t hidden_dim = 512;
  std::size_t intermediate_dim = 1536;
  std::size_t n_blocks = 8;
  std::size_t kernel = 7;
  // Diffusion sub-models take sqrt(1 - a_bar) as one extra constant channel.
  bool noise_channel = false;

  std::size_t input_channels() const { return n_mels + n_fft + (noise_channel ? 1 : 0); }
  void validate() const;
  bool operator==(const GeneratorConfig&) const = default;
};

struct ConvNeXtBlockWeights {
  Conv1dParams dwconv;  // depthwise, groups == hidden_dim
  Tensor norm_gamma;
  Tensor norm_beta;
  Tensor up_weight;  // [intermediate x hidden]
  Tensor up_bias;
  Tensor down_weight;  // [hidden x intermediate]
  Tensor down_bias;
};

struct SubModelWeights {
  Conv1dParams embed;
  std::vector<ConvNeXtBlockWeights> blocks;
  Tensor final_norm_gamma;
  Tensor final_norm_beta;
  Tensor head_weight;  // [hop x hidden]
  Tensor head_bias;    // [hop]
};

// Closed form, from the config alone.
std::size_t parameter_count(const GeneratorConfig& cfg);
// Sum of tensor sizes actually held.
std::size_t parameter_count(const SubModelWeights& w);

// [mel; spec; optional sqrt(1 - noise_level)] -> embedding conv -> [d x F].
Tensor embed(const GeneratorConfig& cfg, const MelSpectrogram& mel, const StftSpec& spec,
             std::optional<double> noise_level, const SubModelWeights& w);

// h + down(gelu(up(norm(dwconv(h))))).
Tensor convnext_block(const Tensor& h, const ConvNeXtBlockWeights& b);

// Final norm, per-frame d -> hop projection, frame-major flattening to F*hop samples.
Waveform head(const Tensor& h, const SubModelWeights& w, int sample_rate = kDefaultSampleRate);

// Predicted noise for the waveform y conditioned on mel; length mel.F * hop.
Waveform predict_noise(const GeneratorConfig& cfg, const SubModelWeights& w,
                       const MelSpectrogram& mel, const Waveform& y,
                       std::optional<double> noise_level);

}  // namespace wnx2
