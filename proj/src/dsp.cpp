#include "wnx2/dsp.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.h"
#include "wnx2/error.h"

namespace wnx2 {

namespace {

std::vector<double> hann_f64(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                 static_cast<double>(n)));
  }
  return w;
}

// Mirror index i into [0, n) without repeating the edge sample.
std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  i %= period;
  if (i < 0) i += period;
  if (i >= static_cast<std::ptrdiff_t>(n)) i = period - i;
  return static_cast<std::size_t>(i);
}

void check_frame_params(std::size_t n_fft, std::size_t hop) {
  if (n_fft < 2 || n_fft % 2 != 0) {
    throw ValidationError("n_fft must be even and >= 2, got " + std::to_string(n_fft));
  }
  if (hop == 0 || hop > n_fft) {
    throw ValidationError("hop must be in [1, n_fft], got hop=" + std::to_string(hop) +
                          " n_fft=" + std::to_string(n_fft));
  }
}

std::vector<double> magnitudes(const ComplexSpec& s) {
  std::vector<double> mag(s.real.size());
  for (std::size_t i = 0; i < mag.size(); ++i) {
    mag[i] = std::hypot(static_cast<double>(s.real[i]), static_cast<double>(s.imag[i]));
  }
  return mag;
}

}  // namespace

MelConfig MelConfig::for_hop(std::size_t hop) {
  MelConfig cfg;
  cfg.hop = hop;
  cfg.n_fft = 2 * hop;
  return cfg;
}

std::vector<float> hann_window(std::size_t n) {
  if (n == 0 || n % 2 != 0) {
    throw ValidationError("hann_window: length must be even and positive, got " +
                          std::to_string(n));
  }
  const auto w = hann_f64(n);
  return {w.begin(), w.end()};
}

std::size_t stft_frame_count(std::size_t len, std::size_t hop) { return len / hop + 1; }

ComplexSpec stft(std::span<const float> x, std::size_t n_fft, std::size_t hop) {
  check_frame_params(n_fft, hop);
  if (x.empty()) throw ValidationError("stft: empty waveform");
  const std::size_t len = x.size();
  const std::size_t bins = n_fft / 2 + 1;
  const std::size_t frames = stft_frame_count(len, hop);
  const auto half = static_cast<std::ptrdiff_t>(n_fft / 2);
  const auto window = hann_f64(n_fft);

  ComplexSpec s{Tensor({bins, frames}), Tensor({bins, frames}), n_fft, hop};
  detail::RealFft fft(n_fft);
  for (std::size_t t = 0; t < frames; ++t) {
    const auto start = static_cast<std::ptrdiff_t>(t * hop) - half;
    double* buf = fft.time();
    for (std::size_t i = 0; i < n_fft; ++i) {
      buf[i] = window[i] * x[reflect(start + static_cast<std::ptrdiff_t>(i), len)];
    }
    fft.forward();
    const auto* spec = fft.freq();
    for (std::size_t k = 0; k < bins; ++k) {
      s.real(k, t) = static_cast<float>(spec[k].real());
      s.imag(k, t) = static_cast<float>(spec[k].imag());
    }
  }
  return s;
}

Waveform istft(const ComplexSpec& s, std::size_t target_len, int sample_rate) {
  check_frame_params(s.n_fft, s.hop);
  const std::size_t n_fft = s.n_fft;
  const std::size_t bins = n_fft / 2 + 1;
  if (s.real.rank() != 2 || s.real.dim(0) != bins || s.imag.dims() != s.real.dims()) {
    throw ShapeError("istft: spectrum " + s.real.shape() + "/" + s.imag.shape() +
                     " does not match n_fft=" + std::to_string(n_fft));
  }
  const std::size_t frames = s.frames();
  const std::size_t padded = (frames - 1) * s.hop + n_fft;
  const auto window = hann_f64(n_fft);

  std::vector<double> ola(padded, 0.0);
  std::vector<double> envelope(padded, 0.0);
  detail::RealFft fft(n_fft);
  for (std::size_t t = 0; t < frames; ++t) {
    auto* spec = fft.freq();
    for (std::size_t k = 0; k < bins; ++k) spec[k] = {s.real(k, t), s.imag(k, t)};
    fft.inverse();
    const double* frame = fft.time();
    const std::size_t start = t * s.hop;
    for (std::size_t i = 0; i < n_fft; ++i) {
      ola[start + i] += frame[i] * window[i];
      envelope[start + i] += window[i] * window[i];
    }
  }

  Waveform out;
  out.sample_rate = sample_rate;
  out.samples.assign(target_len, 0.0f);
  const std::size_t half = n_fft / 2;
  for (std::size_t n = 0; n < target_len && n + half < padded; ++n) {
    const double env = envelope[n + half];
    if (env > 1e-8) out.samples[n] = static_cast<float>(ola[n + half] / env);
  }
  return out;
}

StftSpec pack_stft_spec(const ComplexSpec& s, std::size_t frames) {
  if (frames == 0) throw ValidationError("stft_spec: frame count must be positive");
  if (s.frames() < frames) {
    throw ValidationError("stft_spec: too few STFT frames (F_available=" +
                          std::to_string(s.frames()) +
                          ", F_required=" + std::to_string(frames) + ")");
  }
  const std::size_t n_fft = s.n_fft;
  const std::size_t half = n_fft / 2;
  StftSpec out{Tensor({n_fft, frames}), n_fft, s.hop};
  for (std::size_t k = 0; k <= half; ++k) {
    std::copy_n(s.real.row(k).begin(), frames, out.channels.row(k).begin());
  }
  for (std::size_t k = 1; k < half; ++k) {
    std::copy_n(s.imag.row(k).begin(), frames, out.channels.row(half + k).begin());
  }
  return out;
}

StftSpec stft_spec(const Waveform& w, std::size_t n_fft, std::size_t hop, std::size_t frames) {
  return pack_stft_spec(stft(w, n_fft, hop), frames);
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Tensor mel_filterbank(std::size_t n_mels, std::size_t n_fft, int sample_rate, double f_min,
                      double f_max) {
  if (n_mels == 0) throw ValidationError("mel_filterbank: n_mels must be positive");
  if (n_fft < 2 || n_fft % 2 != 0) throw ValidationError("mel_filterbank: n_fft must be even");
  if (!(f_min >= 0.0 && f_min < f_max && f_max <= sample_rate / 2.0)) {
    throw ValidationError("mel_filterbank: invalid band edges f_min=" + std::to_string(f_min) +
                          " f_max=" + std::to_string(f_max));
  }
  const std::size_t bins = n_fft / 2 + 1;
  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                      static_cast<double>(n_mels + 1));
  }
  Tensor fb({n_mels, bins});
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / static_cast<double>(n_fft);
      const double rise = (f - lo) / (center - lo);
      const double fall = (hi - f) / (hi - center);
      fb(m, k) = static_cast<float>(std::max(0.0, std::min(rise, fall)));
    }
  }
  return fb;
}

std::vector<double> log_mel_f64(const Waveform& w, const MelConfig& cfg) {
  const auto spec = stft(w, cfg.n_fft, cfg.hop);
  const auto fb = mel_filterbank(cfg.n_mels, cfg.n_fft, cfg.sample_rate, cfg.f_min, cfg.f_max);
  const auto mag = magnitudes(spec);
  const std::size_t bins = spec.bins();
  const std::size_t frames = spec.frames();
  std::vector<double> out(cfg.n_mels * frames, 0.0);
  for (std::size_t m = 0; m < cfg.n_mels; ++m) {
    const auto filt = fb.row(m);
    double* dst = out.data() + m * frames;
    for (std::size_t k = 0; k < bins; ++k) {
      const double g = filt[k];
      if (g == 0.0) continue;
      const double* src = mag.data() + k * frames;
      for (std::size_t t = 0; t < frames; ++t) dst[t] += g * src[t];
    }
    for (std::size_t t = 0; t < frames; ++t) dst[t] = std::log(std::max(dst[t], cfg.floor));
  }
  return out;
}

MelSpectrogram log_mel(const Waveform& w, const MelConfig& cfg) {
  const auto values = log_mel_f64(w, cfg);
  const std::size_t frames = values.size() / cfg.n_mels;
  return {Tensor({cfg.n_mels, frames}, std::vector<float>(values.begin(), values.end())),
          cfg.sample_rate, cfg.hop, cfg.n_fft};
}

std::vector<double> average_magnitude(std::span<const Waveform> ws, std::size_t n_fft,
                                      std::size_t hop) {
  const std::size_t bins = n_fft / 2 + 1;
  std::vector<double> sum(bins, 0.0);
  std::size_t total_frames = 0;
  for (const auto& w : ws) {
    const auto spec = stft(w, n_fft, hop);
    const auto mag = magnitudes(spec);
    const std::size_t frames = spec.frames();
    for (std::size_t k = 0; k < bins; ++k) {
      for (std::size_t t = 0; t < frames; ++t) sum[k] += mag[k * frames + t];
    }
    total_frames += frames;
  }
  if (total_frames > 0) {
    for (auto& v : sum) v /= static_cast<double>(total_frames);
  }
  return sum;
}

PostFilter estimate_postfilter(std::span<const Waveform> refs, std::span<const Waveform> syns,
                               std::size_t n_fft, std::size_t hop, GainClamp clamp) {
  if (refs.empty() || syns.empty()) {
    throw ValidationError("estimate_postfilter: reference and synthesized lists must be non-empty");
  }
  if (refs.size() != syns.size()) {
    throw ValidationError("estimate_postfilter: " + std::to_string(refs.size()) +
                          " references vs " + std::to_string(syns.size()) + " syntheses");
  }
  if (!(clamp.min >= 0.0f && clamp.min <= clamp.max)) {
    throw ValidationError("estimate_postfilter: invalid gain clamp");
  }
  const auto ref_avg = average_magnitude(refs, n_fft, hop);
  const auto syn_avg = average_magnitude(syns, n_fft, hop);
  PostFilter pf{std::vector<float>(ref_avg.size()), n_fft, hop};
  for (std::size_t k = 0; k < ref_avg.size(); ++k) {
    const double g = ref_avg[k] / std::max(syn_avg[k], 1e-8);
    pf.gains[k] = static_cast<float>(std::clamp(g, static_cast<double>(clamp.min),
                                                static_cast<double>(clamp.max)));
  }
  return pf;
}

Waveform apply_postfilter(const Waveform& w, const PostFilter& pf) {
  if (pf.gains.size() != pf.n_fft / 2 + 1) {
    throw ValidationError("postfilter: " + std::to_string(pf.gains.size()) +
                          " gains for n_fft=" + std::to_string(pf.n_fft));
  }
  auto spec = stft(w, pf.n_fft, pf.hop);
  for (std::size_t k = 0; k < spec.bins(); ++k) {
    const float g = pf.gains[k];
    for (auto& v : spec.real.row(k)) v *= g;
    for (auto& v : spec.imag.row(k)) v *= g;
  }
  return istft(spec, w.size(), w.sample_rate);
}

}  // namespace wnx2
