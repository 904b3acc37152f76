#include <random>

#include "doctest.h"
#include "oracles.h"
#include "wnx2/error.h"
#include "wnx2/generator.h"

using namespace wnx2;

namespace {

MelSpectrogram random_mel(const GeneratorConfig& cfg, std::size_t frames, std::mt19937_64& rng) {
  return {oracle::random_tensor({cfg.n_mels, frames}, rng), kDefaultSampleRate, cfg.hop, cfg.n_fft};
}

Waveform random_wave(std::size_t n, std::mt19937_64& rng) {
  return {oracle::random_signal(n, rng), kDefaultSampleRate};
}

// Oracle head: per frame final norm, affine map, then frame-major layout.
std::vector<float> head_oracle(const Tensor& h, const SubModelWeights& w) {
  const auto normed = oracle::layer_norm(h, w.final_norm_gamma, w.final_norm_beta, 1e-6);
  const auto per_frame = oracle::linear(oracle::transpose(normed), w.head_weight, w.head_bias);
  return {per_frame.data().begin(), per_frame.data().end()};
}

}  // namespace

TEST_CASE("config validation and channel arity") {
  GeneratorConfig cfg;
  CHECK(cfg.input_channels() == 128 + 600);
  cfg.noise_channel = true;
  CHECK(cfg.input_channels() == 128 + 600 + 1);
  cfg.n_fft = 512;
  cfg.noise_channel = false;
  CHECK(cfg.input_channels() == 640);
  cfg.kernel = 6;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.hop = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("parameter count closed form equals the tensor sum") {
  std::mt19937_64 rng(1);
  for (bool noise : {false, true}) {
    const auto cfg = oracle::tiny_config(noise);
    CHECK(parameter_count(cfg) == parameter_count(oracle::make_weights(cfg, rng, 1.0)));
  }
  // Full-size GAN sub-model: d=512, 3x expansion, hop 300, n_fft 600.
  CHECK(parameter_count(GeneratorConfig{}) == 15404844);
}

TEST_CASE("embed") {
  std::mt19937_64 rng(2);
  SUBCASE("full-size arity 128 + 512 channels") {
    GeneratorConfig cfg;
    cfg.n_fft = 512;
    cfg.hop = 256;
    cfg.hidden_dim = 4;
    cfg.intermediate_dim = 12;
    cfg.n_blocks = 1;
    const auto w = oracle::make_weights(cfg, rng, 0.01);
    REQUIRE(w.embed.weight.dim(1) == 640);
    const auto mel = random_mel(cfg, 3, rng);
    StftSpec spec{oracle::random_tensor({512, 3}, rng), 512, 256};
    CHECK(embed(cfg, mel, spec, std::nullopt, w).dims() == Dims{4, 3});
  }
  SUBCASE("zero weights give the bias broadcast") {
    const auto cfg = oracle::tiny_config();
    auto w = oracle::make_weights(cfg, rng, 1.0, true);
    w.embed.bias = Tensor({4}, {1, 2, 3, 4});
    const auto h = embed(cfg, random_mel(cfg, 5, rng), {oracle::random_tensor({8, 5}, rng), 8, 4},
                         std::nullopt, w);
    for (std::size_t c = 0; c < 4; ++c)
      for (std::size_t f = 0; f < 5; ++f) CHECK(h(c, f) == float(c + 1));
  }
  SUBCASE("noise channel carries sqrt(1 - a_bar)") {
    const auto cfg = oracle::tiny_config(true);
    auto w = oracle::make_weights(cfg, rng, 1.0, true);
    // Select only the noise channel at the centre tap.
    w.embed.weight(0, cfg.input_channels() - 1, cfg.kernel / 2) = 1.0f;
    const auto mel = random_mel(cfg, 4, rng);
    StftSpec spec{oracle::random_tensor({8, 4}, rng), 8, 4};
    const auto at_one = embed(cfg, mel, spec, 1.0, w);
    for (std::size_t f = 0; f < 4; ++f) CHECK(at_one(0, f) == 0.0f);
    const auto at_quarter = embed(cfg, mel, spec, 0.75, w);
    for (std::size_t f = 0; f < 4; ++f) CHECK(at_quarter(0, f) == doctest::Approx(0.5f));
    CHECK_THROWS_AS(embed(cfg, mel, spec, std::nullopt, w), ValidationError);
    CHECK_THROWS_AS(embed(cfg, mel, spec, 1.5, w), ValidationError);
  }
  SUBCASE("errors") {
    const auto cfg = oracle::tiny_config();
    const auto w = oracle::make_weights(cfg, rng, 1.0);
    const auto mel = random_mel(cfg, 4, rng);
    CHECK_THROWS_AS(embed(cfg, mel, {Tensor({8, 3}), 8, 4}, std::nullopt, w), ShapeError);
    CHECK_THROWS_AS(embed(cfg, mel, {Tensor({8, 4}), 8, 4}, 0.5, w), ValidationError);
  }
}

TEST_CASE("convnext block") {
  std::mt19937_64 rng(3);
  const auto cfg = oracle::tiny_config();
  SUBCASE("zero weights are the identity") {
    const auto w = oracle::make_weights(cfg, rng, 1.0, true);
    const auto h = oracle::random_tensor({4, 6}, rng);
    CHECK(convnext_block(h, w.blocks[0]) == h);
    CHECK(convnext_block(convnext_block(h, w.blocks[0]), w.blocks[1]) == h);
  }
  SUBCASE("matches the composition oracle") {
    GeneratorConfig two = cfg;
    two.hidden_dim = 2;
    two.intermediate_dim = 6;
    for (int trial = 0; trial < 20; ++trial) {
      const auto w = oracle::make_weights(two, rng, 0.7);
      const auto h = oracle::random_tensor({2, 2}, rng);
      CHECK(oracle::max_abs_diff(convnext_block(h, w.blocks[0]).data(),
                                 oracle::convnext_block(h, w.blocks[0]).data()) <= 1e-5);
    }
  }
}

TEST_CASE("head") {
  std::mt19937_64 rng(4);
  SUBCASE("bias tiling shows frame-major order") {
    SubModelWeights w;
    w.final_norm_gamma = Tensor({2}, 1.0f);
    w.final_norm_beta = Tensor({2});
    w.head_weight = Tensor({3, 2});
    w.head_bias = Tensor({3}, {1, 2, 3});
    const auto y = head(oracle::random_tensor({2, 2}, rng), w);
    CHECK(y.samples == std::vector<float>{1, 2, 3, 1, 2, 3});
  }
  SUBCASE("length and oracle agreement") {
    for (int trial = 0; trial < 10; ++trial) {
      auto cfg = oracle::tiny_config();
      cfg.hidden_dim = 1 + trial % 4;
      cfg.hop = 1 + trial % 5;
      cfg.n_fft = 2 * cfg.hop;
      const auto w = oracle::make_weights(cfg, rng, 1.0);
      const std::size_t frames = 1 + trial;
      const auto h = oracle::random_tensor({cfg.hidden_dim, frames}, rng);
      const auto y = head(h, w);
      CHECK(y.size() == frames * cfg.hop);
      CHECK(oracle::max_abs_diff(y.samples, head_oracle(h, w)) <= 1e-5);
    }
  }
}

TEST_CASE("predict_noise") {
  std::mt19937_64 rng(5);
  const auto cfg = oracle::tiny_config();
  const auto mel = random_mel(cfg, 3, rng);
  const auto y = random_wave(12, rng);
  SUBCASE("zero weights give the tiled head bias") {
    auto w = oracle::make_weights(cfg, rng, 1.0, true);
    w.head_bias = Tensor({4}, {0.5f, -1, 2, 3});
    const auto n = predict_noise(cfg, w, mel, y, std::nullopt);
    REQUIRE(n.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(n.samples[i] == w.head_bias[i % 4]);
  }
  SUBCASE("pure and deterministic") {
    const auto w = oracle::make_weights(cfg, rng, 0.5);
    CHECK(predict_noise(cfg, w, mel, y, std::nullopt).samples ==
          predict_noise(cfg, w, mel, y, std::nullopt).samples);
  }
  SUBCASE("staged composition oracle") {
    auto four = cfg;
    four.hidden_dim = 4;
    const auto w = oracle::make_weights(four, rng, 0.5);
    // Stage 1: packed spectrum from a direct DFT.
    Tensor spec({8, 3});
    for (std::size_t f = 0; f < 3; ++f) {
      const auto s = oracle::dft_frame(y.samples, 8, 4, f);
      for (std::size_t k = 0; k <= 4; ++k) spec(k, f) = static_cast<float>(s[k].real());
      for (std::size_t k = 1; k < 4; ++k) spec(4 + k, f) = static_cast<float>(s[k].imag());
    }
    // Stage 2: concatenation and embedding conv.
    Tensor x({14, 3});
    for (std::size_t f = 0; f < 3; ++f) {
      for (std::size_t c = 0; c < 6; ++c) x(c, f) = mel.values(c, f);
      for (std::size_t c = 0; c < 8; ++c) x(6 + c, f) = spec(c, f);
    }
    auto h = oracle::conv1d(x, w.embed.weight, w.embed.bias, 1);
    // Stage 3: blocks. Stage 4: head.
    for (const auto& b : w.blocks) h = oracle::convnext_block(h, b);
    const auto expect = head_oracle(h, w);
    CHECK(oracle::max_abs_diff(predict_noise(four, w, mel, y, std::nullopt).samples, expect) <= 1e-4);
  }
  SUBCASE("length contract across configs") {
    for (int trial = 0; trial < 20; ++trial) {
      auto c = oracle::tiny_config(trial % 2 == 0);
      c.hop = 2 + trial % 4;
      c.n_fft = 2 * c.hop;
      const std::size_t frames = 1 + trial % 7;
      const auto w = oracle::make_weights(c, rng, 0.3);
      const auto m = random_mel(c, frames, rng);
      const auto sig = random_wave(frames * c.hop, rng);
      const auto noise_level = c.noise_channel ? std::optional<double>(0.5) : std::nullopt;
      CHECK(predict_noise(c, w, m, sig, noise_level).size() == frames * c.hop);
    }
  }
  SUBCASE("short input signal is rejected") {
    const auto w = oracle::make_weights(cfg, rng, 0.3);
    CHECK_THROWS_AS(predict_noise(cfg, w, mel, random_wave(4, rng), std::nullopt), ValidationError);
  }
}
