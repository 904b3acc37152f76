// wnx2: synthesis, feature extraction, benchmarking and evaluation for
// residual-denoising ConvNeXt vocoders.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 runtime error.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wnx2/dsp.h"
#include "wnx2/error.h"
#include "wnx2/eval.h"
#include "wnx2/model_io.h"
#include "wnx2/numerics.h"
#include "wnx2/pipelines.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kRuntime = 3 };

// Results are printed as key=value lines and optionally mirrored to JSON.
class Report {
 public:
  template <typename T>
  void set(const std::string& key, const T& value) {
    json_[key] = value;
  }

  void echo_flags(const CLI::App& sub) {
    set("command", sub.get_name());
    for (const auto* opt : sub.get_options()) {
      if (opt->get_single_name() == "help" || opt->get_single_name().empty()) continue;
      std::string value;
      if (opt->count() > 0) {
        const auto& res = opt->results();
        for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
        if (value.empty()) value = "true";
      } else {
        value = opt->get_default_str();
        if (value.empty()) continue;
      }
      set("flag." + opt->get_single_name(), value);
    }
  }

  void emit(const std::string& json_path) const {
    for (const auto& [key, value] : json_.items()) std::cout << key << '=' << format(value) << '\n';
    if (!json_path.empty()) {
      std::ofstream out(json_path);
      if (!out) throw wnx2::IoError("cannot write " + json_path);
      out << json_.dump(2) << '\n';
    }
  }

 private:
  static std::string format(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format(v[i]);
      return s;
    }
    return v.dump();
  }
  Json json_;
};

void check_rate(const wnx2::Waveform& w, int expected, bool strict, const std::string& path) {
  if (strict && w.sample_rate != expected) {
    throw wnx2::ValidationError(path + ": sample rate " + std::to_string(w.sample_rate) +
                                " Hz, expected " + std::to_string(expected) +
                                " Hz (pass --no-strict to override)");
  }
}

struct SynthArgs {
  std::string model, mel, out, postfilter, init = "gaussian";
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  bool reverse_noise = true;
};

void run_synth(const SynthArgs& a, Report& report) {
  const auto model = wnx2::load_model(a.model);
  const auto& m = model.manifest;
  const auto mel = wnx2::load_mel(a.mel, m.generator.hop, m.generator.n_fft, m.sample_rate);

  wnx2::PipelineConfig cfg;
  cfg.mode = m.mode;
  cfg.seed = a.seed;
  cfg.iterations = a.iterations;
  cfg.add_reverse_noise = a.reverse_noise;
  if (a.init == "zeros") {
    cfg.init = wnx2::GanInit::zeros;
  } else if (a.init != "gaussian") {
    throw wnx2::ValidationError("--init must be gaussian or zeros");
  }
  if (!a.postfilter.empty()) {
    if (m.mode != wnx2::Mode::diffusion) {
      throw wnx2::ValidationError("--postfilter applies to diffusion models only");
    }
    cfg.postfilter = wnx2::load_postfilter(a.postfilter);
  }
  if (m.mode == wnx2::Mode::diffusion && a.iterations != 0 && a.iterations != m.iterations) {
    throw wnx2::ValidationError("sub-model count mismatch: diffusion model has " +
                                std::to_string(m.iterations) + " sub-models, --iterations " +
                                std::to_string(a.iterations));
  }

  const auto start = std::chrono::steady_clock::now();
  const auto wav = wnx2::synthesize(model, mel, cfg);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  wnx2::Waveform out = wav;
  out.sample_rate = m.sample_rate;
  wnx2::write_wav(out, a.out);

  report.set("mode", wnx2::to_string(m.mode));
  report.set("iterations", a.iterations == 0 ? m.iterations : a.iterations);
  report.set("frames", mel.frames());
  report.set("samples", out.size());
  report.set("sample_rate", out.sample_rate);
  report.set("audio_seconds", out.seconds());
  report.set("synthesis_seconds", elapsed);
  report.set("rtf", elapsed / out.seconds());
}

struct ExtractArgs {
  std::string wav, out;
  std::size_t hop = 256;
  std::size_t n_fft = 0;
  int sample_rate = wnx2::kDefaultSampleRate;
  bool strict = true;
};

void run_extract(const ExtractArgs& a, Report& report) {
  const auto w = wnx2::read_wav(a.wav);
  check_rate(w, a.sample_rate, a.strict, a.wav);
  auto cfg = wnx2::MelConfig::for_hop(a.hop);
  if (a.n_fft != 0) cfg.n_fft = a.n_fft;
  cfg.sample_rate = w.sample_rate;
  cfg.f_max = std::min(cfg.f_max, w.sample_rate / 2.0);
  const auto mel = wnx2::log_mel(w, cfg);
  wnx2::save_mel(mel, a.out);
  report.set("n_mels", mel.n_mels());
  report.set("frames", mel.frames());
  report.set("n_fft", cfg.n_fft);
  report.set("hop", cfg.hop);
}

struct BenchArgs {
  std::string model;
  double seconds = 2.0;
  std::size_t repeats = 3;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
};

void run_bench(const BenchArgs& a, Report& report) {
  if (!(a.seconds > 0.0)) throw wnx2::ValidationError("--seconds must be positive");
  const auto model = wnx2::load_model(a.model);
  const auto& m = model.manifest;
  const auto frames = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(a.seconds * m.sample_rate / m.generator.hop)));
  std::mt19937_64 rng(a.seed);
  std::normal_distribution<double> dist(-5.0, 2.0);
  wnx2::Tensor values({m.generator.n_mels, frames});
  for (auto& v : values.data()) v = static_cast<float>(dist(rng));
  const wnx2::MelSpectrogram mel{std::move(values), m.sample_rate, m.generator.hop, m.generator.n_fft};

  wnx2::PipelineConfig cfg;
  cfg.seed = a.seed;
  cfg.iterations = a.iterations;
  const auto r = wnx2::measure_rtf(model, mel, a.repeats, cfg);
  report.set("mode", r.mode);
  report.set("iterations", r.iterations);
  report.set("threads", r.threads);
  report.set("audio_seconds", r.audio_seconds);
  report.set("wall_seconds", r.wall_seconds);
  report.set("rtf", r.rtf);
  report.set("parameters", model.parameter_count());
}

struct EvalArgs {
  std::string ref, syn;
  bool strict = true;
};

void run_eval(const EvalArgs& a, Report& report) {
  auto ref = wnx2::read_wav(a.ref);
  auto syn = wnx2::read_wav(a.syn);
  check_rate(ref, wnx2::kDefaultSampleRate, a.strict, a.ref);
  check_rate(syn, wnx2::kDefaultSampleRate, a.strict, a.syn);
  if (ref.sample_rate != syn.sample_rate) {
    throw wnx2::ValidationError("sample rates differ: " + std::to_string(ref.sample_rate) + " vs " +
                                std::to_string(syn.sample_rate));
  }
  const std::size_t n = std::min(ref.size(), syn.size());
  ref.samples.resize(n);
  syn.samples.resize(n);
  report.set("aligned_samples", n);
  report.set("mcd", wnx2::mcd(ref, syn));
  try {
    report.set("log_f0_rmse", wnx2::log_f0_rmse(ref, syn));
  } catch (const wnx2::UnvoicedOverlapError&) {
    report.set("log_f0_rmse", "nan");
    report.set("log_f0_note", "no common voiced frames");
  }
  report.set("mrstft", wnx2::mrstft_distance(ref, syn));
}

struct InitArgs {
  std::string manifest, preset, out;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
};

void run_init(const InitArgs& a, Report& report) {
  wnx2::ModelManifest manifest;
  if (!a.manifest.empty() && !a.preset.empty()) {
    throw wnx2::ValidationError("pass either --manifest or --preset, not both");
  }
  if (!a.manifest.empty()) {
    manifest = wnx2::load_manifest(a.manifest);
  } else if (a.preset == "standard-gan") {
    manifest = wnx2::ModelManifest::standard_gan(a.iterations == 0 ? 4 : a.iterations);
  } else if (a.preset == "standard-diffusion") {
    manifest = wnx2::ModelManifest::standard_diffusion();
  } else {
    throw wnx2::ValidationError("one of --manifest or --preset {standard-gan, standard-diffusion} is required");
  }
  const auto model = wnx2::init_random(manifest, a.seed);
  wnx2::save_model(model, a.out);
  report.set("mode", wnx2::to_string(manifest.mode));
  report.set("iterations", manifest.iterations);
  report.set("parameters", model.parameter_count());
  report.set("parameters_per_submodel", wnx2::parameter_count(manifest.generator));
}

struct PostfilterArgs {
  std::vector<std::string> refs, syns;
  std::string out;
  std::size_t n_fft = 512, hop = 256;
  float g_min = 0.1f, g_max = 10.0f;
  bool strict = true;
};

void run_postfilter(const PostfilterArgs& a, Report& report) {
  auto load_all = [&](const std::vector<std::string>& paths) {
    std::vector<wnx2::Waveform> ws;
    for (const auto& p : paths) {
      ws.push_back(wnx2::read_wav(p));
      check_rate(ws.back(), wnx2::kDefaultSampleRate, a.strict, p);
    }
    return ws;
  };
  const auto refs = load_all(a.refs);
  const auto syns = load_all(a.syns);
  const auto pf = wnx2::estimate_postfilter(refs, syns, a.n_fft, a.hop, {a.g_min, a.g_max});
  wnx2::save_postfilter(pf, a.out);
  double lo = pf.gains.front(), hi = pf.gains.front(), sum = 0.0;
  for (float g : pf.gains) {
    lo = std::min<double>(lo, g);
    hi = std::max<double>(hi, g);
    sum += g;
  }
  report.set("bins", pf.gains.size());
  report.set("gain_min", lo);
  report.set("gain_max", hi);
  report.set("gain_mean", sum / static_cast<double>(pf.gains.size()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wnx2 - residual-denoising ConvNeXt vocoder (GAN and diffusion modes)"};
  app.require_subcommand(1);
  std::string json_path;
  int threads = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--json", json_path, "Also write the report as JSON");
    sub->add_option("--threads", threads, "Compute threads")->capture_default_str()->check(CLI::PositiveNumber);
  };

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Synthesize a waveform from a mel container");
  synth_cmd->add_option("--model", synth.model, "Model directory")->required();
  synth_cmd->add_option("--mel", synth.mel, "Mel container (tensor \"mel\")")->required();
  synth_cmd->add_option("--out", synth.out, "Output WAV path")->required();
  synth_cmd->add_option("--seed", synth.seed, "Noise seed")->capture_default_str();
  synth_cmd->add_option("--iterations", synth.iterations, "Run the first N sub-models (gan mode)");
  synth_cmd->add_option("--postfilter", synth.postfilter, "Post-filter container (diffusion mode)");
  synth_cmd->add_option("--init", synth.init, "gan start signal: gaussian or zeros")->capture_default_str();
  synth_cmd->add_flag("--reverse-noise,!--no-reverse-noise", synth.reverse_noise,
                      "Ancestral noise between diffusion steps")
      ->default_str("true");
  add_common(synth_cmd);

  ExtractArgs extract;
  auto* extract_cmd = app.add_subcommand("extract-mel", "Compute a 128-band log-mel container from a WAV");
  extract_cmd->add_option("--wav", extract.wav, "Input WAV (16-bit mono)")->required();
  extract_cmd->add_option("--out", extract.out, "Output mel container")->required();
  extract_cmd->add_option("--hop", extract.hop, "Hop size")->capture_default_str()->check(CLI::PositiveNumber);
  extract_cmd->add_option("--n-fft", extract.n_fft, "FFT size (default 2*hop)");
  extract_cmd->add_option("--sample-rate", extract.sample_rate, "Expected sample rate")->capture_default_str();
  extract_cmd->add_flag("--strict,!--no-strict", extract.strict, "Reject other sample rates")->default_str("true");
  add_common(extract_cmd);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Measure the real-time factor on a random mel input");
  bench_cmd->add_option("--model", bench.model, "Model directory")->required();
  bench_cmd->add_option("--seconds", bench.seconds, "Audio duration")->capture_default_str();
  bench_cmd->add_option("--repeats", bench.repeats, "Timed repeats")->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--iterations", bench.iterations, "Run the first N sub-models (gan mode)");
  bench_cmd->add_option("--seed", bench.seed, "Seed for the mel and noise")->capture_default_str();
  add_common(bench_cmd);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "MCD, log-F0 RMSE and multi-resolution STFT distance");
  eval_cmd->add_option("--ref", eval.ref, "Reference WAV")->required();
  eval_cmd->add_option("--syn", eval.syn, "Synthesized WAV")->required();
  eval_cmd->add_flag("--strict,!--no-strict", eval.strict, "Require 24 kHz input")->default_str("true");
  add_common(eval_cmd);

  InitArgs init;
  auto* init_cmd = app.add_subcommand("init-random", "Write a randomly initialized model directory");
  init_cmd->add_option("--manifest", init.manifest, "manifest.json to instantiate");
  init_cmd->add_option("--preset", init.preset, "standard-gan or standard-diffusion");
  init_cmd->add_option("--iterations", init.iterations, "Sub-model count for --preset standard-gan");
  init_cmd->add_option("--out", init.out, "Output model directory")->required();
  init_cmd->add_option("--seed", init.seed, "Weight seed")->capture_default_str();
  add_common(init_cmd);

  PostfilterArgs pf;
  auto* pf_cmd = app.add_subcommand("estimate-postfilter", "Estimate time-invariant spectral gains");
  pf_cmd->add_option("--refs", pf.refs, "Reference WAVs")->required()->expected(1, -1);
  pf_cmd->add_option("--syns", pf.syns, "Synthesized WAVs, same order")->required()->expected(1, -1);
  pf_cmd->add_option("--out", pf.out, "Output post-filter container")->required();
  pf_cmd->add_option("--n-fft", pf.n_fft, "FFT size")->capture_default_str();
  pf_cmd->add_option("--hop", pf.hop, "Hop size")->capture_default_str();
  pf_cmd->add_option("--g-min", pf.g_min, "Lower gain clamp")->capture_default_str();
  pf_cmd->add_option("--g-max", pf.g_max, "Upper gain clamp")->capture_default_str();
  pf_cmd->add_flag("--strict,!--no-strict", pf.strict, "Require 24 kHz input")->default_str("true");
  add_common(pf_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    wnx2::set_num_threads(threads);
    Report report;
    const CLI::App* sub = app.get_subcommands().front();
    report.echo_flags(*sub);
    if (sub == synth_cmd) run_synth(synth, report);
    if (sub == extract_cmd) run_extract(extract, report);
    if (sub == bench_cmd) run_bench(bench, report);
    if (sub == eval_cmd) run_eval(eval, report);
    if (sub == init_cmd) run_init(init, report);
    if (sub == pf_cmd) run_postfilter(pf, report);
    report.emit(json_path);
    return kOk;
  } catch (const wnx2::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  } catch (const wnx2::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
