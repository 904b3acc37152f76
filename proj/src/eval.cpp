#include "wnx2/eval.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "wnx2/numerics.h"

namespace wnx2 {

namespace {

void expect_same_length(const Waveform& a, const Waveform& b, const char* what) {
  if (a.size() != b.size()) {
    throw ValidationError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + " samples)");
  }
}

std::vector<double> magnitude(const ComplexSpec& s) {
  std::vector<double> m(s.real.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = std::hypot(static_cast<double>(s.real[i]), static_cast<double>(s.imag[i]));
  }
  return m;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::ranges::sort(values);
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

RtfReport measure_rtf(const std::function<void()>& run, double audio_seconds, std::size_t repeats) {
  if (repeats == 0) throw ValidationError("measure_rtf: repeats must be >= 1");
  if (!(audio_seconds > 0.0)) throw ValidationError("measure_rtf: audio duration must be positive");
  using clock = std::chrono::steady_clock;
  run();
  RtfReport report;
  report.audio_seconds = audio_seconds;
  report.threads = num_threads();
  for (std::size_t i = 0; i < repeats; ++i) {
    const auto start = clock::now();
    run();
    report.wall_seconds.push_back(std::chrono::duration<double>(clock::now() - start).count());
  }
  report.rtf = median(report.wall_seconds) / audio_seconds;
  return report;
}

RtfReport measure_rtf(const VocoderModel& model, const MelSpectrogram& mel, std::size_t repeats,
                      PipelineConfig cfg) {
  cfg.mode = model.manifest.mode;
  const double seconds = static_cast<double>(mel.frames() * model.manifest.generator.hop) /
                         model.manifest.sample_rate;
  auto report = measure_rtf([&] { (void)synthesize(model, mel, cfg); }, seconds, repeats);
  report.mode = to_string(cfg.mode);
  report.iterations = cfg.iterations == 0 ? model.manifest.iterations : cfg.iterations;
  return report;
}

std::size_t F0Track::voiced_frames() const {
  return static_cast<std::size_t>(std::ranges::count_if(frame_hz, [](const auto& f) { return f.has_value(); }));
}

F0Track estimate_f0(const Waveform& w, const F0Options& opts) {
  const double sr = w.sample_rate;
  const auto frame = static_cast<std::size_t>(std::lround(opts.frame_seconds * sr));
  const auto hop = static_cast<std::size_t>(std::lround(opts.hop_seconds * sr));
  const auto lag_min = static_cast<std::size_t>(std::ceil(sr / opts.f0_max));
  const auto lag_max = static_cast<std::size_t>(std::floor(sr / opts.f0_min));
  if (hop == 0 || lag_min < 2 || lag_max + 2 >= frame) {
    throw ValidationError("estimate_f0: frame too short for the F0 search band");
  }

  F0Track track;
  track.frame_hop_seconds = static_cast<double>(hop) / sr;
  if (w.size() < frame) return track;
  const std::size_t n_frames = (w.size() - frame) / hop + 1;
  std::vector<double> r(lag_max + 2, 0.0);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const float* x = w.samples.data() + f * hop;
    for (std::size_t lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
      double xy = 0.0, xx = 0.0, yy = 0.0;
      for (std::size_t n = 0; n + lag < frame; ++n) {
        xy += static_cast<double>(x[n]) * x[n + lag];
        xx += static_cast<double>(x[n]) * x[n];
        yy += static_cast<double>(x[n + lag]) * x[n + lag];
      }
      r[lag] = (xx > 1e-12 && yy > 1e-12) ? xy / std::sqrt(xx * yy) : 0.0;
    }

    double best = -1.0;
    std::vector<std::size_t> peaks;
    for (std::size_t lag = lag_min; lag <= lag_max; ++lag) {
      if (r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1] && r[lag] > 0.0) {
        peaks.push_back(lag);
        best = std::max(best, r[lag]);
      }
    }
    std::optional<double> f0;
    if (!peaks.empty() && best >= opts.voicing_threshold) {
      // Earliest near-maximal peak, so multiples of the period lose.
      const auto lag = *std::ranges::find_if(peaks, [&](std::size_t l) { return r[l] >= 0.9 * best; });
      const double denom = r[lag - 1] - 2.0 * r[lag] + r[lag + 1];
      const double shift = denom < 0.0 ? 0.5 * (r[lag - 1] - r[lag + 1]) / denom : 0.0;
      const double hz = sr / (static_cast<double>(lag) + shift);
      if (hz >= opts.f0_min && hz <= opts.f0_max) f0 = hz;
    }
    track.frame_hz.push_back(f0);
  }
  return track;
}

double log_f0_rmse(const Waveform& ref, const Waveform& syn, const F0Options& opts) {
  expect_same_length(ref, syn, "log_f0_rmse");
  const auto a = estimate_f0(ref, opts);
  const auto b = estimate_f0(syn, opts);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < std::min(a.frame_hz.size(), b.frame_hz.size()); ++i) {
    if (a.frame_hz[i] && b.frame_hz[i]) {
      const double d = std::log(*a.frame_hz[i]) - std::log(*b.frame_hz[i]);
      sum += d * d;
      ++count;
    }
  }
  if (count == 0) throw UnvoicedOverlapError("unvoiced overlap: no frame is voiced in both signals");
  return std::sqrt(sum / static_cast<double>(count));
}

MelConfig mcd_mel_config(int sample_rate) {
  MelConfig cfg;
  cfg.sample_rate = sample_rate;
  cfg.n_fft = 1024;
  cfg.hop = 256;
  cfg.n_mels = 80;
  cfg.f_max = sample_rate / 2.0;
  return cfg;
}

double mcd(const Waveform& ref, const Waveform& syn, std::size_t n_coeffs) {
  expect_same_length(ref, syn, "mcd");
  const auto cfg = mcd_mel_config(ref.sample_rate);
  if (n_coeffs == 0 || n_coeffs >= cfg.n_mels) {
    throw ValidationError("mcd: n_coeffs must be in [1, " + std::to_string(cfg.n_mels - 1) + "]");
  }
  const auto a = log_mel_f64(ref, cfg);
  const auto b = log_mel_f64(syn, cfg);
  const std::size_t frames = a.size() / cfg.n_mels;
  std::vector<double> col_a(cfg.n_mels), col_b(cfg.n_mels);
  double total = 0.0;
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t m = 0; m < cfg.n_mels; ++m) {
      col_a[m] = a[m * frames + t];
      col_b[m] = b[m * frames + t];
    }
    const auto ca = dct_ii(col_a);
    const auto cb = dct_ii(col_b);
    double sq = 0.0;
    for (std::size_t k = 1; k <= n_coeffs; ++k) sq += (ca[k] - cb[k]) * (ca[k] - cb[k]);
    total += std::sqrt(sq);
  }
  return 10.0 * std::numbers::sqrt2 / std::numbers::ln10 * total / static_cast<double>(frames);
}

double stft_distance(const Waveform& ref, const Waveform& syn, std::size_t n_fft, std::size_t hop) {
  expect_same_length(ref, syn, "stft_distance");
  const auto a = magnitude(stft(ref, n_fft, hop));
  const auto b = magnitude(stft(syn, n_fft, hop));
  double diff = 0.0, norm_a = 0.0, norm_b = 0.0, log_l1 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    norm_a += a[i] * a[i];
    norm_b += b[i] * b[i];
    log_l1 += std::abs(std::log(std::max(a[i], 1e-7)) - std::log(std::max(b[i], 1e-7)));
  }
  const double denom = std::sqrt(0.5 * (norm_a + norm_b));
  const double convergence = denom > 0.0 ? std::sqrt(diff) / denom : 0.0;
  return convergence + log_l1 / static_cast<double>(a.size());
}

double mrstft_distance(const Waveform& ref, const Waveform& syn) {
  constexpr std::size_t kResolutions[][2] = {{512, 128}, {1024, 256}, {2048, 512}};
  double total = 0.0;
  for (const auto& [n_fft, hop] : kResolutions) total += stft_distance(ref, syn, n_fft, hop);
  return total / 3.0;
}

}  // namespace wnx2
