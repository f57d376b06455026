// tests/unit/dsp_test.cc

// Copyright 2026  The avse Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <fstream>
#include <random>

#include "avse/dsp/stft.h"
#include "avse/dsp/wav.h"
#include "avse/dsp/waveform.h"
#include "avse/error.h"

namespace avse::dsp {
namespace {

Waveform RandomWaveform(std::size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Waveform w;
  w.samples.resize(n);
  for (double& s : w.samples) s = u(rng);
  return w;
}

template <typename F>
void ExpectError(ErrorCode code, F&& f) {
  try {
    f();
    FAIL() << "expected " << ErrorCodeName(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(PeakNormalize, DividesByPeak) {
  auto w = PeakNormalize(Waveform{{1.0, -2.0}});
  EXPECT_EQ(w.samples, (std::vector<double>{0.5, -1.0}));
  w = PeakNormalize(Waveform{{-1.0, 0.5}});
  EXPECT_EQ(w.samples, (std::vector<double>{-1.0, 0.5}));
}

TEST(PeakNormalize, RejectsSilence) {
  ExpectError(ErrorCode::kAllZeroSignal,
              [] { PeakNormalize(Waveform{{0.0, 0.0, 0.0}}); });
}

TEST(PeakNormalize, IdempotentWithExactPeak) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto w = RandomWaveform(1000, seed);
    for (double& s : w.samples) s *= 0.37;
    const auto once = PeakNormalize(w);
    double peak = 0.0;
    for (double s : once.samples) peak = std::max(peak, std::abs(s));
    EXPECT_EQ(peak, 1.0);
    EXPECT_EQ(PeakNormalize(once).samples, once.samples);
    for (std::size_t i = 0; i < w.size(); ++i)
      EXPECT_EQ(std::signbit(w.samples[i]), std::signbit(once.samples[i]));
  }
}

TEST(HammingWindow, PeriodicForm) {
  const auto w = HammingWindow(640);
  ASSERT_EQ(w.size(), 640u);
  EXPECT_NEAR(w[0], 0.08, 1e-15);
  EXPECT_NEAR(w[320], 1.0, 1e-15);
  for (int k = 1; k < 640; ++k) EXPECT_NEAR(w[k], w[640 - k], 1e-15);
}

TEST(Stft, FrameCounts) {
  EXPECT_EQ(Stft(RandomWaveform(640, 1)).frames(), 1u);
  EXPECT_EQ(Stft(RandomWaveform(16000, 1)).frames(), 97u);
  EXPECT_EQ(Stft(RandomWaveform(641, 1)).frames(), 2u);
  EXPECT_EQ(Stft(RandomWaveform(640, 1)).bins(), 321u);
}

TEST(Stft, RejectsShortSignal) {
  ExpectError(ErrorCode::kSignalTooShort, [] { Stft(RandomWaveform(639, 1)); });
}

TEST(Stft, ConstantSignalDcBinIsWindowSum) {
  Waveform ones{std::vector<double>(640, 1.0)};
  const auto s = Stft(ones);
  double window_sum = 0.0;
  for (int k = 0; k < 640; ++k)
    window_sum += 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / 640.0);
  EXPECT_NEAR(s.values(0, 0).real(), window_sum, 1e-9);
  EXPECT_NEAR(s.values(0, 0).imag(), 0.0, 1e-12);
}

// Direct O(N^2) DFT of the windowed frame as an independent oracle.
TEST(Stft, MatchesDirectDft) {
  const auto w = RandomWaveform(1000, 7);
  const auto s = Stft(w);
  const auto win = HammingWindow(640);
  for (std::size_t l : {0u, 1u, 2u}) {
    for (int k : {0, 1, 17, 160, 320}) {
      std::complex<double> acc = 0.0;
      for (int t = 0; t < 640; ++t) {
        const std::size_t n = l * 160 + t;
        const double x = n < w.size() ? w.samples[n] * win[t] : 0.0;
        acc += x * std::polar(1.0, -2.0 * std::numbers::pi * k * t / 640.0);
      }
      EXPECT_NEAR(std::abs(s.values(k, l) - acc), 0.0, 1e-9);
    }
  }
}

TEST(Stft, Linearity) {
  const auto x = RandomWaveform(5000, 1);
  const auto y = RandomWaveform(5000, 2);
  const double a = 0.7, b = -1.3;
  Waveform z;
  for (std::size_t i = 0; i < x.size(); ++i)
    z.samples.push_back(a * x.samples[i] + b * y.samples[i]);
  const auto sx = Stft(x), sy = Stft(y), sz = Stft(z);
  double worst = 0.0;
  for (std::size_t i = 0; i < sz.values.size(); ++i)
    worst = std::max(worst, std::abs(sz.values.data()[i] -
                                     (a * sx.values.data()[i] +
                                      b * sy.values.data()[i])));
  EXPECT_LT(worst, 1e-9);
}

TEST(Stft, ParsevalAgainstWindowedEnergy) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto x = RandomWaveform(4000 + 37 * seed, seed);
    const auto s = Stft(x);
    const auto win = HammingWindow(640);
    double spectral = 0.0, windowed = 0.0;
    for (std::size_t l = 0; l < s.frames(); ++l) {
      for (std::size_t k = 0; k < s.bins(); ++k) {
        const double e = std::norm(s.values(k, l));
        spectral += (k == 0 || k == 320) ? e : 2.0 * e;
      }
      for (int t = 0; t < 640; ++t) {
        const std::size_t n = l * 160 + t;
        const double v = n < x.size() ? x.samples[n] * win[t] : 0.0;
        windowed += v * v;
      }
    }
    EXPECT_NEAR(spectral / 640.0, windowed, 0.01 * windowed);
  }
}

TEST(Istft, RoundTrip) {
  for (std::size_t len : {640u, 641u, 16000u, 16001u, 799u}) {
    const auto x = RandomWaveform(len, len);
    const auto y = Istft(Stft(x), len);
    ASSERT_EQ(y.size(), len);
    double worst = 0.0;
    for (std::size_t i = 0; i < len; ++i)
      worst = std::max(worst, std::abs(y.samples[i] - x.samples[i]));
    EXPECT_LT(worst, 1e-6) << "length " << len;
  }
}

TEST(Istft, ZeroSpectrogramGivesSilence) {
  auto s = Stft(RandomWaveform(3000, 3));
  for (auto& v : s.values.data()) v = 0.0;
  const auto y = Istft(s, 3000);
  for (double v : y.samples) EXPECT_EQ(v, 0.0);
}

TEST(Istft, ZeroWindowOverlapIsReported) {
  auto s = Stft(RandomWaveform(3000, 3));
  s.params.window.assign(640, 0.0);
  ExpectError(ErrorCode::kZeroWindowOverlap, [&] { Istft(s, 3000); });
}

TEST(Polar, MagnitudeAndPhase) {
  ComplexSpectrogram s{Grid<std::complex<double>>(1, 2), StftParams::Default()};
  s.values(0, 0) = {3.0, 4.0};
  s.values(0, 1) = {0.0, 0.0};
  const auto m = Magnitude(s);
  const auto ph = Phase(s);
  EXPECT_DOUBLE_EQ(m.values(0, 0), 5.0);
  EXPECT_EQ(m.values(0, 1), 0.0);
  EXPECT_EQ(ph(0, 1), 0.0);
}

TEST(Polar, ReconstructsSpectrogram) {
  const auto s = Stft(RandomWaveform(4000, 11));
  const auto r = FromPolar(Magnitude(s), Phase(s), s.params);
  for (std::size_t i = 0; i < s.values.size(); ++i)
    EXPECT_LT(std::abs(r.values.data()[i] - s.values.data()[i]), 1e-9);
}

TEST(Wav, RoundTripWithinQuantization) {
  const auto path = std::filesystem::temp_directory_path() / "avse_dsp_test.wav";
  auto w = RandomWaveform(1234, 5);
  WriteWav(w, path);
  const auto r = ReadWav(path);
  ASSERT_EQ(r.size(), w.size());
  EXPECT_EQ(r.sample_rate, 16000);
  for (std::size_t i = 0; i < w.size(); ++i)
    EXPECT_NEAR(r.samples[i], w.samples[i], 0.5 / 32768.0 + 1e-12);
  // Re-encoding decoded samples is lossless.
  WriteWav(r, path);
  EXPECT_EQ(ReadWav(path).samples, r.samples);
  std::filesystem::remove(path);
}

TEST(Wav, RejectsGarbage) {
  const auto path = std::filesystem::temp_directory_path() / "avse_garbage.wav";
  { std::ofstream(path) << "definitely not a wav file"; }
  ExpectError(ErrorCode::kCorruptFile, [&] { ReadWav(path); });
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace avse::dsp
