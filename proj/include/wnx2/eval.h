#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wnx2/dsp.h"
#include "wnx2/error.h"
#include "wnx2/model.h"
#include "wnx2/pipelines.h"

namespace wnx2 {

struct RtfReport {
  double audio_seconds = 0.0;
  std::vector<double> wall_seconds;  // one per timed repeat
  double rtf = 0.0;                  // median(wall_seconds) / audio_seconds
  int threads = 1;
  std::string mode;
  std::size_t iterations = 0;
};

// Times `run` `repeats` times after one untimed warm-up call.
RtfReport measure_rtf(const std::function<void()>& run, double audio_seconds, std::size_t repeats);

// Feature-conditioned synthesis only; the model is already loaded.
RtfReport measure_rtf(const VocoderModel& model, const MelSpectrogram& mel, std::size_t repeats,
                      PipelineConfig cfg = {});

double median(std::vector<double> values);

struct F0Options {
  double frame_seconds = 0.025;
  double hop_seconds = 0.010;
  double f0_min = 70.0;
  double f0_max = 400.0;
  double voicing_threshold = 0.5;
};

struct F0Track {
  std::vector<std::optional<double>> frame_hz;  // empty = unvoiced
  double frame_hop_seconds = 0.0;

  std::size_t voiced_frames() const;
};

// Normalized autocorrelation pitch tracker with parabolic peak refinement.
F0Track estimate_f0(const Waveform& w, const F0Options& opts = {});

class UnvoicedOverlapError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// RMSE of ln F0 over frames voiced in both signals.
double log_f0_rmse(const Waveform& ref, const Waveform& syn, const F0Options& opts = {});

// Mel analysis used for cepstral distortion: 80 mels, n_fft 1024, hop 256.
MelConfig mcd_mel_config(int sample_rate = kDefaultSampleRate);

// Mel-cepstral distortion in dB over frame-aligned signals, cepstral
// coefficients 1..n_coeffs (c0 excluded).
double mcd(const Waveform& ref, const Waveform& syn, std::size_t n_coeffs = 25);

// Spectral convergence + mean |log magnitude difference| at one resolution.
// Convergence is normalized by the RMS of both Frobenius norms, so the
// distance is symmetric.
double stft_distance(const Waveform& ref, const Waveform& syn, std::size_t n_fft, std::size_t hop);

// Mean of stft_distance over (512,128), (1024,256), (2048,512).
double mrstft_distance(const Waveform& ref, const Waveform& syn);

}  // namespace wnx2
