#include "wnx2/generator.h"

#include <algorithm>
#include <cmath>

#include "wnx2/error.h"

namespace wnx2 {

void GeneratorConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ValidationError("generator config: " + msg); };
  if (n_mels == 0) fail("n_mels must be positive");
  if (n_fft < 2 || n_fft % 2 != 0) fail("n_fft must be even and >= 2");
  if (hop == 0 || hop > n_fft) fail("hop must be in [1, n_fft]");
  if (hidden_dim == 0 || intermediate_dim == 0) fail("hidden and intermediate dims must be positive");
  if (kernel == 0 || kernel % 2 == 0) fail("kernel must be odd");
}

std::size_t parameter_count(const GeneratorConfig& cfg) {
  const std::size_t d = cfg.hidden_dim;
  const std::size_t inter = cfg.intermediate_dim;
  const std::size_t embed = cfg.input_channels() * d * cfg.kernel + d;
  const std::size_t block = (d * cfg.kernel + d) + 2 * d + (inter * d + inter) + (d * inter + d);
  const std::size_t head = cfg.hop * d + cfg.hop;
  return embed + cfg.n_blocks * block + 2 * d + head;
}

std::size_t parameter_count(const SubModelWeights& w) {
  std::size_t n = w.embed.weight.size() + w.embed.bias.size();
  for (const auto& b : w.blocks) {
    n += b.dwconv.weight.size() + b.dwconv.bias.size() + b.norm_gamma.size() + b.norm_beta.size() +
         b.up_weight.size() + b.up_bias.size() + b.down_weight.size() + b.down_bias.size();
  }
  return n + w.final_norm_gamma.size() + w.final_norm_beta.size() + w.head_weight.size() +
         w.head_bias.size();
}

Tensor embed(const GeneratorConfig& cfg, const MelSpectrogram& mel, const StftSpec& spec,
             std::optional<double> noise_level, const SubModelWeights& w) {
  if (mel.values.rank() != 2 || mel.n_mels() != cfg.n_mels) {
    throw ShapeError("embed: mel " + mel.values.shape() + " does not have " +
                     std::to_string(cfg.n_mels) + " channels");
  }
  if (spec.channels.rank() != 2 || spec.channels.dim(0) != cfg.n_fft) {
    throw ShapeError("embed: STFT-spec " + spec.channels.shape() + " does not have " +
                     std::to_string(cfg.n_fft) + " channels");
  }
  const std::size_t frames = mel.frames();
  if (spec.frames() != frames) {
    throw ShapeError("embed: frame mismatch, mel has " + std::to_string(frames) +
                     " frames, STFT-spec has " + std::to_string(spec.frames()));
  }
  if (noise_level && !cfg.noise_channel) {
    throw ValidationError("embed: noise level supplied but the sub-model has no noise channel");
  }
  if (!noise_level && cfg.noise_channel) {
    throw ValidationError("embed: sub-model expects a noise level");
  }

  Tensor x({cfg.input_channels(), frames});
  std::copy(mel.values.data().begin(), mel.values.data().end(), x.data().begin());
  std::copy(spec.channels.data().begin(), spec.channels.data().end(),
            x.data().begin() + static_cast<std::ptrdiff_t>(cfg.n_mels * frames));
  if (noise_level) {
    const double a_bar = *noise_level;
    if (!(a_bar >= 0.0 && a_bar <= 1.0)) {
      throw ValidationError("embed: noise level must be in [0, 1], got " + std::to_string(a_bar));
    }
    std::ranges::fill(x.row(cfg.input_channels() - 1), static_cast<float>(std::sqrt(1.0 - a_bar)));
  }
  return conv1d(x, w.embed);
}

Tensor convnext_block(const Tensor& h, const ConvNeXtBlockWeights& b) {
  auto y = conv1d(h, b.dwconv);
  y = layer_norm_channels(y, b.norm_gamma, b.norm_beta);
  y = pointwise(y, b.up_weight, b.up_bias);
  gelu_inplace(y.data());
  y = pointwise(y, b.down_weight, b.down_bias);
  if (y.dims() != h.dims()) {
    throw ShapeError("convnext_block: residual " + y.shape() + " vs input " + h.shape());
  }
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += h[i];
  return y;
}

Waveform head(const Tensor& h, const SubModelWeights& w, int sample_rate) {
  const auto normed = layer_norm_channels(h, w.final_norm_gamma, w.final_norm_beta);
  // [hop x F]; column f is frame f's samples.
  const auto frames = pointwise(normed, w.head_weight, w.head_bias);
  const std::size_t hop = frames.dim(0);
  const std::size_t n_frames = frames.dim(1);
  Waveform out;
  out.sample_rate = sample_rate;
  out.samples.resize(hop * n_frames);
  for (std::size_t s = 0; s < hop; ++s) {
    const auto r = frames.row(s);
    for (std::size_t f = 0; f < n_frames; ++f) out.samples[f * hop + s] = r[f];
  }
  return out;
}

Waveform predict_noise(const GeneratorConfig& cfg, const SubModelWeights& w,
                       const MelSpectrogram& mel, const Waveform& y,
                       std::optional<double> noise_level) {
  const auto spec = stft_spec(y, cfg.n_fft, cfg.hop, mel.frames());
  auto h = embed(cfg, mel, spec, noise_level, w);
  for (const auto& block : w.blocks) h = convnext_block(h, block);
  return head(h, w, y.sample_rate);
}

}  // namespace wnx2
