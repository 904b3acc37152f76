#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "wnx2/dsp.h"
#include "wnx2/error.h"

using namespace wnx2;

namespace {

Waveform noise(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  return {oracle::random_signal(n, rng, scale), kDefaultSampleRate};
}

Waveform sine(double hz, std::size_t n, double amp = 0.5) {
  Waveform w;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = static_cast<float>(amp * std::sin(2.0 * std::numbers::pi * hz * i / 24000.0));
  }
  return w;
}

// Brick-wall lowpass via a direct DFT on the whole signal.
Waveform lowpass(const Waveform& w, double cutoff_hz) {
  const std::size_t n = w.size();
  ComplexSpec s{Tensor({n / 2 + 1, 1}), Tensor({n / 2 + 1, 1}), n, n};
  std::vector<double> re(n / 2 + 1, 0.0), im(n / 2 + 1, 0.0);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = -2.0 * std::numbers::pi * double(k * i % n) / double(n);
      re[k] += w.samples[i] * std::cos(a);
      im[k] += w.samples[i] * std::sin(a);
    }
  }
  Waveform out;
  out.samples.assign(n, 0.0f);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k <= n / 2; ++k) {
      if (k * 24000.0 / n > cutoff_hz) break;
      const double a = 2.0 * std::numbers::pi * double(k * i % n) / double(n);
      const double c = (k == 0 || k == n / 2) ? 1.0 : 2.0;
      acc += c * (re[k] * std::cos(a) - im[k] * std::sin(a));
    }
    out.samples[i] = static_cast<float>(acc / n);
  }
  return out;
}

double rms(std::span<const float> x, std::size_t from = 0, std::size_t to = 0) {
  if (to == 0) to = x.size();
  double acc = 0.0;
  for (std::size_t i = from; i < to; ++i) acc += double(x[i]) * x[i];
  return std::sqrt(acc / double(to - from));
}

double interior_error(const Waveform& a, const Waveform& b, std::size_t margin) {
  double m = 0.0;
  for (std::size_t i = margin; i + margin < a.size(); ++i) {
    m = std::max(m, std::abs(double(a.samples[i]) - b.samples[i]));
  }
  return m;
}

}  // namespace

TEST_CASE("hann window") {
  CHECK(hann_window(4) == std::vector<float>{0.0f, 0.5f, 1.0f, 0.5f});
  CHECK(hann_window(2) == std::vector<float>{0.0f, 1.0f});
  double sum = 0.0;
  for (float v : hann_window(512)) sum += v;
  CHECK(sum == doctest::Approx(256.0).epsilon(1e-7));
  CHECK_THROWS_AS(hann_window(5), ValidationError);
  CHECK_THROWS_AS(hann_window(0), ValidationError);
}

TEST_CASE("stft") {
  SUBCASE("DC input concentrates in bin 0") {
    Waveform dc;
    dc.samples.assign(4096, 1.0f);
    const auto s = stft(dc, 512, 128);
    double wsum = 0.0;
    for (float v : hann_window(512)) wsum += v;
    for (std::size_t f = 4; f < s.frames() - 4; ++f) {
      CHECK(s.real(0, f) == doctest::Approx(wsum).epsilon(1e-5));
      // Hann leaks exactly -wsum/2 into bin 1
      CHECK(s.real(1, f) == doctest::Approx(-wsum / 2).epsilon(1e-5));
      for (std::size_t k = 2; k < s.bins(); ++k) {
        CHECK(std::hypot(s.real(k, f), s.imag(k, f)) < 1e-4);
      }
    }
  }
  SUBCASE("bin-centred sine peaks at its bin and matches a direct DFT") {
    const std::size_t n_fft = 64, k0 = 5;
    const auto w = sine(24000.0 * k0 / n_fft, 1000);
    const auto s = stft(w, n_fft, 16);
    for (std::size_t f : {0u, 7u, 30u, 62u}) {
      const auto ref = oracle::dft_frame(w.samples, n_fft, 16, f);
      std::size_t arg = 0;
      for (std::size_t k = 0; k < s.bins(); ++k) {
        CHECK(s.real(k, f) == doctest::Approx(ref[k].real()).epsilon(1e-4).scale(1.0));
        CHECK(s.imag(k, f) == doctest::Approx(ref[k].imag()).epsilon(1e-4).scale(1.0));
        if (std::abs(ref[k]) > std::abs(ref[arg])) arg = k;
      }
      if (f > 2 && f < 60) CHECK(arg == k0);
    }
  }
  SUBCASE("zero signal") {
    Waveform z;
    z.samples.assign(300, 0.0f);
    const auto s = stft(z, 32, 8);
    for (float v : s.real.data()) CHECK(v == 0.0f);
    for (float v : s.imag.data()) CHECK(v == 0.0f);
  }
  SUBCASE("frame count") {
    for (std::size_t len : {1u, 255u, 256u, 257u, 24000u}) {
      Waveform w;
      w.samples.assign(len, 0.1f);
      CHECK(stft(w, 512, 256).frames() == len / 256 + 1);
      CHECK(stft_frame_count(len, 256) == len / 256 + 1);
    }
  }
  CHECK_THROWS_AS(stft(Waveform{}, 16, 4), ValidationError);
  CHECK_THROWS_AS(stft(noise(100, 1), 15, 4), ValidationError);
  CHECK_THROWS_AS(stft(noise(100, 1), 16, 32), ValidationError);
}

TEST_CASE("istft") {
  SUBCASE("white noise round trip") {
    const auto w = noise(24000, 11);
    const auto back = istft(stft(w, 1024, 256), w.size());
    REQUIRE(back.size() == w.size());
    CHECK(interior_error(w, back, 0) < 1e-4);
  }
  SUBCASE("sine round trip") {
    const auto w = sine(440.0, 24000);
    const auto back = istft(stft(w, 1024, 256), w.size());
    std::vector<float> diff(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) diff[i] = back.samples[i] - w.samples[i];
    CHECK(rms(diff) / rms(w.samples) < 1e-4);
  }
  SUBCASE("zero spectrum") {
    ComplexSpec s{Tensor({9, 5}), Tensor({9, 5}), 16, 4};
    const auto w = istft(s, 20);
    CHECK(w.size() == 20);
    for (float v : w.samples) CHECK(v == 0.0f);
  }
  SUBCASE("target length pads and trims") {
    const auto w = noise(100, 12);
    const auto s = stft(w, 16, 4);
    CHECK(istft(s, 50).size() == 50);
    const auto longer = istft(s, 140);
    CHECK(longer.size() == 140);
    // last frame ends n_fft/2 past (F-1)*hop
    for (std::size_t i = 108; i < 140; ++i) CHECK(longer.samples[i] == 0.0f);
    CHECK(longer.samples[107] != 0.0f);
  }
}

TEST_CASE("COLA round trip over 100 seeds") {
  for (const auto [n_fft, hop] : {std::pair<std::size_t, std::size_t>{600, 300}, {512, 256}, {512, 128}}) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto w = noise(4800, 1000 + seed);
      worst = std::max(worst, interior_error(w, istft(stft(w, n_fft, hop), w.size()), n_fft / 2));
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("stft spec packing") {
  SUBCASE("channel arity") {
    for (std::size_t n_fft : {8u, 16u, 512u, 600u, 1024u}) {
      const auto w = noise(4 * n_fft, n_fft);
      const auto s = stft(w, n_fft, n_fft / 4);
      const auto spec = pack_stft_spec(s, s.frames());
      CHECK(spec.channels.dim(0) == n_fft);
      CHECK(spec.channels.dim(0) == (n_fft / 2 + 1) + (n_fft / 2 - 1));
    }
  }
  SUBCASE("layout and dropped channels") {
    const auto w = noise(64, 3);
    const auto s = stft(w, 8, 2);
    const auto spec = pack_stft_spec(s, s.frames());
    for (std::size_t f = 0; f < s.frames(); ++f) {
      CHECK(s.imag(0, f) == 0.0f);
      CHECK(s.imag(4, f) == 0.0f);
      for (std::size_t k = 0; k <= 4; ++k) CHECK(spec.channels(k, f) == s.real(k, f));
      for (std::size_t k = 1; k <= 3; ++k) CHECK(spec.channels(4 + k, f) == s.imag(k, f));
    }
  }
  SUBCASE("truncation to the mel frame count") {
    const auto w = noise(24000, 4);
    const auto mel = log_mel(w, MelConfig::for_hop(256));
    CHECK(mel.frames() == 24000 / 256 + 1);
    const auto spec = stft_spec(w, 512, 256, mel.frames());
    CHECK(spec.frames() == mel.frames());
    CHECK(stft_spec(w, 512, 256, 10).frames() == 10);
  }
  SUBCASE("too few frames") {
    try {
      (void)stft_spec(noise(100, 5), 16, 4, 50);
      FAIL("expected error");
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("F_available=26") != std::string::npos);
      CHECK(msg.find("F_required=50") != std::string::npos);
    }
  }
}

TEST_CASE("mel filterbank") {
  CHECK(hz_to_mel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)));
  CHECK(mel_to_hz(hz_to_mel(1234.5)) == doctest::Approx(1234.5));
  SUBCASE("centres increase") {
    const auto fb = mel_filterbank(4, 64, 24000, 0.0, 12000.0);
    REQUIRE(fb.dims() == Dims{4, 33});
    std::size_t prev = 0;
    for (std::size_t m = 0; m < 4; ++m) {
      std::size_t arg = 0;
      for (std::size_t k = 0; k < 33; ++k) {
        if (fb(m, k) > fb(m, arg)) arg = k;
      }
      if (m > 0) CHECK(arg > prev);
      prev = arg;
    }
  }
  SUBCASE("coverage and peak normalization") {
    const auto fb = mel_filterbank(128, 512, 24000, 0.0, 12000.0);
    for (std::size_t k = 1; k < 256; ++k) {
      double col = 0.0;
      for (std::size_t m = 0; m < 128; ++m) col += fb(m, k);
      CHECK(col > 0.0);
    }
    for (std::size_t m = 0; m < 128; ++m) {
      float peak = 0.0f;
      for (std::size_t k = 0; k < 257; ++k) peak = std::max(peak, fb(m, k));
      CHECK(peak <= 1.0f + 1e-6f);
    }
  }
  CHECK_THROWS_AS(mel_filterbank(8, 64, 24000, 100.0, 50.0), ValidationError);
  CHECK_THROWS_AS(mel_filterbank(8, 64, 24000, 0.0, 13000.0), ValidationError);
  CHECK_THROWS_AS(mel_filterbank(8, 64, 24000, -1.0, 1000.0), ValidationError);
}

TEST_CASE("log mel") {
  SUBCASE("silence hits the floor") {
    Waveform z;
    z.samples.assign(2400, 0.0f);
    const auto mel = log_mel(z, MelConfig::for_hop(300));
    CHECK(mel.n_mels() == 128);
    for (float v : mel.values.data()) CHECK(v == static_cast<float>(std::log(1e-5)));
  }
  SUBCASE("frame counts") {
    Waveform one;
    one.samples.assign(24000, 0.0f);
    CHECK(log_mel(one, MelConfig::for_hop(300)).frames() == 81);
    CHECK(log_mel(one, MelConfig::for_hop(256)).frames() == 94);
    CHECK(MelConfig::for_hop(300).n_fft == 600);
  }
  SUBCASE("doubling the signal shifts by ln 2") {
    auto w = noise(4800, 6, 0.1);
    const auto a = log_mel(w, MelConfig::for_hop(256));
    for (auto& v : w.samples) v *= 2.0f;
    const auto b = log_mel(w, MelConfig::for_hop(256));
    const float floor = static_cast<float>(std::log(1e-5));
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      if (a.values[i] > floor + 1.0f) CHECK(b.values[i] - a.values[i] == doctest::Approx(std::log(2.0)).epsilon(1e-4));
    }
  }
  SUBCASE("values never drop below the floor") {
    const auto mel = log_mel(noise(3000, 7), MelConfig::for_hop(256));
    for (float v : mel.values.data()) CHECK(v >= static_cast<float>(std::log(1e-5)));
  }
}

TEST_CASE("post-filter estimation") {
  const std::vector<Waveform> refs{noise(4800, 20), noise(3000, 21)};
  SUBCASE("identical lists give unit gains") {
    const auto pf = estimate_postfilter(refs, refs, 512, 256);
    REQUIRE(pf.gains.size() == 257);
    for (float g : pf.gains) CHECK(g == doctest::Approx(1.0f));
  }
  SUBCASE("halved syntheses give gain 2") {
    auto syns = refs;
    for (auto& w : syns)
      for (auto& v : w.samples) v *= 0.5f;
    const auto pf = estimate_postfilter(refs, syns, 512, 256);
    for (float g : pf.gains) CHECK(g == doctest::Approx(2.0f).epsilon(1e-5));
  }
  SUBCASE("average spectrum matches the direct DFT oracle") {
    const std::vector<Waveform> small{noise(200, 30), noise(130, 31)};
    const auto ours = average_magnitude(small, 32, 8);
    const auto ref = oracle::average_magnitude({small[0].samples, small[1].samples}, 32, 8);
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK(ours[k] == doctest::Approx(ref[k]).epsilon(1e-5));
  }
  SUBCASE("lowpassed syntheses hit the upper clamp above their cutoff") {
    const auto base = noise(4096, 40);
    const std::vector<Waveform> r{lowpass(base, 6000.0)};
    const std::vector<Waveform> s{lowpass(base, 3000.0)};
    const auto pf = estimate_postfilter(r, s, 512, 256);
    for (std::size_t k = 0; k < pf.gains.size(); ++k) {
      const double hz = k * 24000.0 / 512;
      if (hz < 2500.0) CHECK(pf.gains[k] == doctest::Approx(1.0f).epsilon(0.05));
      if (hz > 3500.0 && hz < 5500.0) CHECK(pf.gains[k] == 10.0f);
      CHECK(pf.gains[k] >= 0.1f);
      CHECK(pf.gains[k] <= 10.0f);
    }
  }
  CHECK_THROWS_AS(estimate_postfilter({}, {}, 512, 256), ValidationError);
  CHECK_THROWS_AS(estimate_postfilter(refs, std::span(refs).first(1), 512, 256), ValidationError);
}

TEST_CASE("post-filter application") {
  const auto w = noise(12000, 50);
  PostFilter unit{std::vector<float>(257, 1.0f), 512, 256};
  SUBCASE("unit gains are the round trip") {
    const auto y = apply_postfilter(w, unit);
    CHECK(y.size() == w.size());
    CHECK(interior_error(w, y, 0) < 1e-4);
    CHECK(interior_error(w, apply_postfilter(y, unit), 0) < 2e-4);
  }
  SUBCASE("gain 2 doubles RMS") {
    PostFilter two{std::vector<float>(257, 2.0f), 512, 256};
    CHECK(rms(apply_postfilter(w, two).samples) / rms(w.samples) == doctest::Approx(2.0).epsilon(0.01));
  }
  SUBCASE("bandstop attenuates the band by at least 40 dB") {
    PostFilter stop = unit;
    for (std::size_t k = 60; k <= 100; ++k) stop.gains[k] = 0.0f;
    const auto y = apply_postfilter(w, stop);
    auto band_energy = [](const Waveform& x) {
      const auto s = stft(x, 512, 256);
      double e = 0.0;
      for (std::size_t k = 65; k <= 95; ++k)
        for (std::size_t f = 2; f + 2 < s.frames(); ++f) e += std::norm(std::complex<double>(s.real(k, f), s.imag(k, f)));
      return e;
    };
    CHECK(10.0 * std::log10(band_energy(w) / band_energy(y)) >= 40.0);
  }
  SUBCASE("time invariance under a one-hop shift") {
    PostFilter shaped = unit;
    for (std::size_t k = 0; k < 257; ++k) shaped.gains[k] = 0.5f + float(k) / 256.0f;
    Waveform shifted;
    shifted.samples.assign(256, 0.0f);
    shifted.samples.insert(shifted.samples.end(), w.samples.begin(), w.samples.end());
    const auto a = apply_postfilter(w, shaped);
    const auto b = apply_postfilter(shifted, shaped);
    double worst = 0.0;
    for (std::size_t i = 512; i + 512 < w.size(); ++i) {
      worst = std::max(worst, std::abs(double(a.samples[i]) - b.samples[i + 256]));
    }
    CHECK(worst < 1e-4);
  }
  CHECK_THROWS_AS(apply_postfilter(w, PostFilter{std::vector<float>(10, 1.0f), 512, 256}), ValidationError);
}
