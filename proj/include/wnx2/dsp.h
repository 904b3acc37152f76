#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wnx2/tensor.h"

namespace wnx2 {

inline constexpr int kDefaultSampleRate = 24000;

struct Waveform {
  std::vector<float> samples;
  int sample_rate = kDefaultSampleRate;

  std::size_t size() const { return samples.size(); }
  double seconds() const { return static_cast<double>(samples.size()) / sample_rate; }
};

// One-sided spectrum, real and imaginary planes of [n_fft/2+1 x F].
struct ComplexSpec {
  Tensor real;
  Tensor imag;
  std::size_t n_fft = 0;
  std::size_t hop = 0;

  std::size_t bins() const { return real.dim(0); }
  std::size_t frames() const { return real.dim(1); }
};

// Packed real-valued spectrum [n_fft x F]: rows 0..n_fft/2 are the real
// part, rows n_fft/2+1..n_fft-1 the imaginary part of bins 1..n_fft/2-1.
struct StftSpec {
  Tensor channels;
  std::size_t n_fft = 0;
  std::size_t hop = 0;

  std::size_t frames() const { return channels.dim(1); }
};

struct MelConfig {
  int sample_rate = kDefaultSampleRate;
  std::size_t n_fft = 512;
  std::size_t hop = 256;
  std::size_t n_mels = 128;
  double f_min = 0.0;
  double f_max = 12000.0;
  double floor = 1e-5;

  // n_fft = 2 * hop, the default pairing (600/300, 512/256).
  static MelConfig for_hop(std::size_t hop);
};

// Natural-log mel magnitudes [n_mels x F].
struct MelSpectrogram {
  Tensor values;
  int sample_rate = kDefaultSampleRate;
  std::size_t hop = 0;
  std::size_t n_fft = 0;

  std::size_t n_mels() const { return values.dim(0); }
  std::size_t frames() const { return values.dim(1); }
};

struct GainClamp {
  float min = 0.1f;
  float max = 10.0f;
};

// Time-invariant per-bin magnitude gains.
struct PostFilter {
  std::vector<float> gains;  // n_fft/2 + 1
  std::size_t n_fft = 0;
  std::size_t hop = 0;
};

// Periodic Hann window; n must be even.
std::vector<float> hann_window(std::size_t n);

// Frames produced by the centered STFT: floor(len / hop) + 1.
std::size_t stft_frame_count(std::size_t len, std::size_t hop);

// Centered (reflection padded by n_fft/2), Hann windowed, one-sided STFT.
ComplexSpec stft(std::span<const float> x, std::size_t n_fft, std::size_t hop);
inline ComplexSpec stft(const Waveform& w, std::size_t n_fft, std::size_t hop) {
  return stft(w.samples, n_fft, hop);
}

// Windowed overlap-add with squared-window normalization, trimmed or
// zero-padded to target_len.
Waveform istft(const ComplexSpec& s, std::size_t target_len, int sample_rate = kDefaultSampleRate);

StftSpec pack_stft_spec(const ComplexSpec& s, std::size_t frames);
StftSpec stft_spec(const Waveform& w, std::size_t n_fft, std::size_t hop, std::size_t frames);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular HTK-scale filters, peak-normalized: [n_mels x n_fft/2+1].
Tensor mel_filterbank(std::size_t n_mels, std::size_t n_fft, int sample_rate, double f_min,
                      double f_max);

// ln(max(filterbank * |stft(w)|, floor)) in double, row-major [n_mels x F].
std::vector<double> log_mel_f64(const Waveform& w, const MelConfig& cfg);
MelSpectrogram log_mel(const Waveform& w, const MelConfig& cfg);

// Mean |X[k]| over every frame of every waveform.
std::vector<double> average_magnitude(std::span<const Waveform> ws, std::size_t n_fft,
                                      std::size_t hop);

PostFilter estimate_postfilter(std::span<const Waveform> refs, std::span<const Waveform> syns,
                               std::size_t n_fft, std::size_t hop, GainClamp clamp = {});

// Scales each bin's magnitude by its gain; phase and length are preserved.
Waveform apply_postfilter(const Waveform& w, const PostFilter& pf);

}  // namespace wnx2
