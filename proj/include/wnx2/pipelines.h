#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>

#include "wnx2/dsp.h"
#include "wnx2/generator.h"
#include "wnx2/model.h"

// The two inference procedures over the shared sub-model:
//
//   gan:       y_T = init; y_{t-1} = y_t - n_hat_t(mel, y_t)          t = T..1
//   diffusion: x_T ~ N(0, I); x_{t-1} = DDPM ancestral step with
//              eps_hat_t(mel, x_t, a_bar_t), then the optional post-filter.
namespace wnx2 {

enum class GanInit { gaussian, zeros };

struct PipelineConfig {
  Mode mode = Mode::gan;
  // Sub-models to run; 0 means all of them.
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  GanInit init = GanInit::gaussian;
  bool add_reverse_noise = true;
  std::optional<PostFilter> postfilter;  // diffusion only
};

// Noise estimate for step t (1-based) given the current signal. noise_level
// is a_bar_t in diffusion mode and empty in gan mode.
using NoisePredictor = std::function<Waveform(std::size_t t, const Waveform& current,
                                              std::optional<double> noise_level)>;
// Called once per step with the step's input signal and the predicted noise.
using StepObserver =
    std::function<void(std::size_t t, const Waveform& current, const Waveform& predicted)>;

Waveform gaussian_noise(std::size_t n, std::mt19937_64& rng, int sample_rate = kDefaultSampleRate);

// sqrt(a_bar) * x0 + sqrt(1 - a_bar) * eps.
Waveform forward_diffuse(const Waveform& x0, double a_bar, const Waveform& eps);

// One ancestral step from x_t to x_{t-1}. z is only read when add_noise is
// set and t > 1.
Waveform reverse_step(const Waveform& x_t, const Waveform& eps_hat, std::size_t t,
                      const NoiseSchedule& sched, std::span<const float> z, bool add_noise);

Waveform gan_refine(const NoisePredictor& predict, std::size_t steps, std::size_t length,
                    int sample_rate, const PipelineConfig& cfg,
                    const StepObserver& observe = nullptr);
Waveform gan_refine(std::span<const SubModelWeights> models, const GeneratorConfig& gen,
                    const MelSpectrogram& mel, const PipelineConfig& cfg,
                    const StepObserver& observe = nullptr);

Waveform diffusion_sample(const NoisePredictor& predict, const NoiseSchedule& sched,
                          std::size_t length, int sample_rate, const PipelineConfig& cfg,
                          const StepObserver& observe = nullptr);
Waveform diffusion_sample(std::span<const SubModelWeights> models, const GeneratorConfig& gen,
                          const MelSpectrogram& mel, const NoiseSchedule& sched,
                          const PipelineConfig& cfg, const StepObserver& observe = nullptr);

// Runs the model's pipeline on mel. cfg.mode must match the model; in gan
// mode cfg.iterations may select the first T' <= T sub-models, in
// diffusion mode it must be 0 or T.
Waveform synthesize(const VocoderModel& model, const MelSpectrogram& mel, const PipelineConfig& cfg);

}  // namespace wnx2
