#include "wnx2/pipelines.h"

#include <cmath>

#include "wnx2/error.h"

namespace wnx2 {

namespace {

std::size_t resolve_steps(std::size_t requested, std::size_t available) {
  const std::size_t steps = requested == 0 ? available : requested;
  if (steps != available) {
    throw ValidationError("sub-model count mismatch: " + std::to_string(steps) +
                          " iterations requested, " + std::to_string(available) + " sub-models");
  }
  if (steps == 0) throw ValidationError("sub-model count mismatch: no sub-models");
  return steps;
}

void expect_length(const Waveform& w, std::size_t length, const char* what) {
  if (w.size() != length) {
    throw ShapeError(std::string(what) + ": expected " + std::to_string(length) +
                     " samples, got " + std::to_string(w.size()));
  }
}

}  // namespace

Waveform gaussian_noise(std::size_t n, std::mt19937_64& rng, int sample_rate) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(n);
  for (auto& v : w.samples) v = static_cast<float>(dist(rng));
  return w;
}

Waveform forward_diffuse(const Waveform& x0, double a_bar, const Waveform& eps) {
  if (!(a_bar >= 0.0 && a_bar <= 1.0)) {
    throw ValidationError("forward_diffuse: a_bar must be in [0, 1], got " + std::to_string(a_bar));
  }
  expect_length(eps, x0.size(), "forward_diffuse noise");
  const double signal = std::sqrt(a_bar);
  const double noise = std::sqrt(1.0 - a_bar);
  Waveform out;
  out.sample_rate = x0.sample_rate;
  out.samples.resize(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) {
    out.samples[i] = static_cast<float>(signal * x0.samples[i] + noise * eps.samples[i]);
  }
  return out;
}

Waveform reverse_step(const Waveform& x_t, const Waveform& eps_hat, std::size_t t,
                      const NoiseSchedule& sched, std::span<const float> z, bool add_noise) {
  if (t < 1 || t > sched.steps()) {
    throw ValidationError("reverse_step: t=" + std::to_string(t) + " outside 1.." +
                          std::to_string(sched.steps()));
  }
  expect_length(eps_hat, x_t.size(), "reverse_step eps_hat");
  const double a_t = sched.at(t);
  const double a_prev = sched.at(t - 1);
  const double alpha = a_t / a_prev;
  const double beta = 1.0 - alpha;
  const double eps_coef = beta / std::sqrt(1.0 - a_t);
  const double inv_sqrt_alpha = 1.0 / std::sqrt(alpha);
  const bool noisy = add_noise && t > 1;
  const double sigma = noisy ? std::sqrt((1.0 - a_prev) / (1.0 - a_t) * beta) : 0.0;
  if (noisy && z.size() != x_t.size()) {
    throw ShapeError("reverse_step z: expected " + std::to_string(x_t.size()) + " samples, got " +
                     std::to_string(z.size()));
  }

  Waveform out;
  out.sample_rate = x_t.sample_rate;
  out.samples.resize(x_t.size());
  for (std::size_t i = 0; i < x_t.size(); ++i) {
    double v = (x_t.samples[i] - eps_coef * eps_hat.samples[i]) * inv_sqrt_alpha;
    if (noisy) v += sigma * z[i];
    out.samples[i] = static_cast<float>(v);
  }
  return out;
}

Waveform gan_refine(const NoisePredictor& predict, std::size_t steps, std::size_t length,
                    int sample_rate, const PipelineConfig& cfg, const StepObserver& observe) {
  if (cfg.postfilter) throw ValidationError("gan mode does not use a post-filter");
  std::mt19937_64 rng(cfg.seed);
  Waveform y;
  if (cfg.init == GanInit::gaussian) {
    y = gaussian_noise(length, rng, sample_rate);
  } else {
    y.sample_rate = sample_rate;
    y.samples.assign(length, 0.0f);
  }
  for (std::size_t t = steps; t >= 1; --t) {
    const auto noise = predict(t, y, std::nullopt);
    expect_length(noise, length, "predicted noise");
    if (observe) observe(t, y, noise);
    for (std::size_t i = 0; i < length; ++i) y.samples[i] -= noise.samples[i];
  }
  return y;
}

Waveform gan_refine(std::span<const SubModelWeights> models, const GeneratorConfig& gen,
                    const MelSpectrogram& mel, const PipelineConfig& cfg,
                    const StepObserver& observe) {
  const std::size_t steps = resolve_steps(cfg.iterations, models.size());
  if (gen.noise_channel) throw ValidationError("gan mode sub-models take no noise channel");
  auto predict = [&](std::size_t t, const Waveform& y, std::optional<double>) {
    return predict_noise(gen, models[t - 1], mel, y, std::nullopt);
  };
  return gan_refine(predict, steps, mel.frames() * gen.hop, mel.sample_rate, cfg, observe);
}

Waveform diffusion_sample(const NoisePredictor& predict, const NoiseSchedule& sched,
                          std::size_t length, int sample_rate, const PipelineConfig& cfg,
                          const StepObserver& observe) {
  sched.validate();
  std::mt19937_64 rng(cfg.seed);
  auto x = gaussian_noise(length, rng, sample_rate);
  for (std::size_t t = sched.steps(); t >= 1; --t) {
    const double a_bar = sched.at(t);
    const auto eps_hat = predict(t, x, a_bar);
    expect_length(eps_hat, length, "predicted noise");
    if (observe) observe(t, x, eps_hat);
    Waveform z;
    if (cfg.add_reverse_noise && t > 1) z = gaussian_noise(length, rng, sample_rate);
    x = reverse_step(x, eps_hat, t, sched, z.samples, cfg.add_reverse_noise);
  }
  if (cfg.postfilter) return apply_postfilter(x, *cfg.postfilter);
  return x;
}

Waveform diffusion_sample(std::span<const SubModelWeights> models, const GeneratorConfig& gen,
                          const MelSpectrogram& mel, const NoiseSchedule& sched,
                          const PipelineConfig& cfg, const StepObserver& observe) {
  const std::size_t steps = resolve_steps(cfg.iterations, models.size());
  if (sched.steps() != steps) {
    throw ValidationError("sub-model count mismatch: schedule has " +
                          std::to_string(sched.steps()) + " steps, " + std::to_string(steps) +
                          " sub-models");
  }
  if (!gen.noise_channel) {
    throw ValidationError("diffusion mode requires sub-models with a noise channel");
  }
  if (cfg.postfilter && (cfg.postfilter->n_fft != gen.n_fft || cfg.postfilter->hop != gen.hop)) {
    throw ValidationError("post-filter n_fft/hop (" + std::to_string(cfg.postfilter->n_fft) + "/" +
                          std::to_string(cfg.postfilter->hop) + ") do not match the model (" +
                          std::to_string(gen.n_fft) + "/" + std::to_string(gen.hop) + ")");
  }
  auto predict = [&](std::size_t t, const Waveform& x, std::optional<double> a_bar) {
    return predict_noise(gen, models[t - 1], mel, x, a_bar);
  };
  return diffusion_sample(predict, sched, mel.frames() * gen.hop, mel.sample_rate, cfg, observe);
}

Waveform synthesize(const VocoderModel& model, const MelSpectrogram& mel, const PipelineConfig& cfg) {
  const auto& m = model.manifest;
  if (cfg.mode != m.mode) {
    throw ValidationError(std::string("pipeline mode ") + to_string(cfg.mode) +
                          " does not match model mode " + to_string(m.mode));
  }
  if (model.submodels.size() != m.iterations) {
    throw ValidationError("sub-model count mismatch: manifest declares " +
                          std::to_string(m.iterations) + ", model holds " +
                          std::to_string(model.submodels.size()));
  }
  auto run_cfg = cfg;
  if (m.mode == Mode::gan) {
    const std::size_t steps = cfg.iterations == 0 ? m.iterations : cfg.iterations;
    if (steps > m.iterations) {
      throw ValidationError("sub-model count mismatch: " + std::to_string(steps) +
                            " iterations requested, model has " + std::to_string(m.iterations));
    }
    run_cfg.iterations = steps;
    return gan_refine(std::span(model.submodels).first(steps), m.generator, mel, run_cfg);
  }
  return diffusion_sample(model.submodels, m.generator, mel, m.schedule, run_cfg);
}

}  // namespace wnx2
