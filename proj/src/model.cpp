#include "wnx2/model.h"

#include "wnx2/error.h"

namespace wnx2 {

const char* to_string(Mode mode) { return mode == Mode::gan ? "gan" : "diffusion"; }

Mode parse_mode(const std::string& s) {
  if (s == "gan") return Mode::gan;
  if (s == "diffusion") return Mode::diffusion;
  throw ValidationError("unknown mode \"" + s + "\" (expected gan or diffusion)");
}

NoiseSchedule NoiseSchedule::four_step() { return {{9.1e-1, 5.6e-1, 2.8e-2, 1.0e-4}}; }

void NoiseSchedule::validate() const {
  if (a_bar.empty()) throw ValidationError("noise schedule is empty");
  double prev = 1.0;
  for (std::size_t i = 0; i < a_bar.size(); ++i) {
    const double v = a_bar[i];
    if (!(v > 0.0 && v < 1.0)) {
      throw ValidationError("noise schedule: a_bar_" + std::to_string(i + 1) +
                            " must be in (0, 1), got " + std::to_string(v));
    }
    if (!(v < prev)) {
      throw ValidationError("noise schedule must be strictly decreasing in t (a_bar_" +
                            std::to_string(i + 1) + ")");
    }
    prev = v;
  }
}

ModelManifest ModelManifest::standard_gan(std::size_t iterations) {
  ModelManifest m;
  m.mode = Mode::gan;
  m.iterations = iterations;
  m.generator = GeneratorConfig{};
  return m;
}

ModelManifest ModelManifest::standard_diffusion() {
  ModelManifest m;
  m.mode = Mode::diffusion;
  m.iterations = 4;
  m.generator.n_fft = 512;
  m.generator.hop = 256;
  m.generator.noise_channel = true;
  m.schedule = NoiseSchedule::four_step();
  return m;
}

void ModelManifest::validate() const {
  if (version != kManifestVersion) {
    throw ValidationError("manifest: unsupported version " + std::to_string(version));
  }
  if (iterations == 0) throw ValidationError("manifest: iterations must be positive");
  if (sample_rate <= 0) throw ValidationError("manifest: sample_rate must be positive");
  generator.validate();
  if (mode == Mode::diffusion) {
    if (!generator.noise_channel) {
      throw ValidationError("manifest: diffusion mode requires noise_channel");
    }
    schedule.validate();
    if (schedule.steps() != iterations) {
      throw ValidationError("manifest: schedule length " + std::to_string(schedule.steps()) +
                            " != iterations " + std::to_string(iterations));
    }
  } else {
    if (generator.noise_channel) {
      throw ValidationError("manifest: gan mode sub-models take no noise channel");
    }
    if (!schedule.a_bar.empty()) throw ValidationError("manifest: gan mode has no schedule");
  }
}

std::size_t VocoderModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& s : submodels) n += wnx2::parameter_count(s);
  return n;
}

}  // namespace wnx2
