#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wnx2/generator.h"

namespace wnx2 {

enum class Mode { gan, diffusion };

const char* to_string(Mode mode);
Mode parse_mode(const std::string& s);

// Cumulative noise levels a_bar_t for t = 1..T, stored from the clean end:
// a_bar[0] is a_bar_1 (closest to clean), a_bar[T-1] is a_bar_T. a_bar_0 = 1
// is implicit.
struct NoiseSchedule {
  std::vector<double> a_bar;

  // The 4-step schedule [1.0e-4, 2.8e-2, 5.6e-1, 9.1e-1] reversed into
  // t order: {0.91, 0.56, 0.028, 1e-4}.
  static NoiseSchedule four_step();

  std::size_t steps() const { return a_bar.size(); }
  // a_bar_t for t in 0..T.
  double at(std::size_t t) const { return t == 0 ? 1.0 : a_bar.at(t - 1); }
  // Requires 0 < a_bar_t < 1 and strictly decreasing in t.
  void validate() const;
  bool operator==(const NoiseSchedule&) const = default;
};

inline constexpr int kManifestVersion = 1;

struct ModelManifest {
  Mode mode = Mode::gan;
  std::size_t iterations = 2;
  GeneratorConfig generator;
  NoiseSchedule schedule;  // diffusion only
  int sample_rate = kDefaultSampleRate;
  int version = kManifestVersion;

  // d=512, 8 blocks, hop 300 / n_fft 600, no noise channel.
  static ModelManifest standard_gan(std::size_t iterations);
  // d=512, 8 blocks, hop 256 / n_fft 512, noise channel, 4-step schedule.
  static ModelManifest standard_diffusion();

  void validate() const;
  bool operator==(const ModelManifest&) const = default;
};

struct VocoderModel {
  ModelManifest manifest;
  std::vector<SubModelWeights> submodels;  // submodels[t-1] runs at step t

  std::size_t parameter_count() const;
};

}  // namespace wnx2
