// src/data/fixture.cc

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

#include "avse/data/fixture.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "avse/dsp/wav.h"
#include "avse/dsp/waveform.h"
#include "avse/error.h"
#include "avse/seed.h"

namespace avse::data {

namespace {

constexpr int kSamplesPerVideoFrame = dsp::kSampleRate / kVideoFps;  // 640
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Voice {
  double f0;
  double formant_scale;
  double mouth_width;
  int skin;
};

Voice SpeakerVoice(int speaker, uint64_t seed) {
  std::mt19937_64 rng(DeriveSeed(seed, {uint64_t(speaker), 0x70ce}));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Voice v;
  v.f0 = 95.0 + 130.0 * u(rng);
  v.formant_scale = 0.9 + 0.2 * u(rng);
  v.mouth_width = 26.0 + 10.0 * u(rng);
  v.skin = 140 + int(30.0 * u(rng));
  return v;
}

double Resonance(double f, double centre, double bandwidth) {
  const double x = (f - centre) / bandwidth;
  return 1.0 / std::sqrt(1.0 + x * x);
}

std::string Id(const char* prefix, int i, int width) {
  std::string s = std::to_string(i);
  return prefix + std::string(std::max(0, width - int(s.size())), '0') + s;
}

}  // namespace

FixtureUtterance SynthesizeUtterance(int speaker, int utterance, uint64_t seed) {
  const Voice voice = SpeakerVoice(speaker, seed);
  std::mt19937_64 rng(DeriveSeed(seed, {uint64_t(speaker), uint64_t(utterance) + 1}));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int video_frames = 50 + int(rng() % 26);
  const std::size_t n = std::size_t(video_frames) * kSamplesPerVideoFrame;
  const double fs = dsp::kSampleRate;

  // Syllable layout: envelope and formant targets per sample.
  std::vector<double> env(n, 0.0), f1(n, 500.0), f2(n, 1500.0);
  std::size_t t = std::size_t((0.08 + 0.1 * u(rng)) * fs);
  const std::size_t tail = std::size_t(0.12 * fs);
  while (t + tail < n) {
    const std::size_t len =
        std::min(std::size_t((0.12 + 0.14 * u(rng)) * fs), n - tail - t);
    const double peak = 0.5 + 0.5 * u(rng);
    const double a = (300.0 + 500.0 * u(rng)) * voice.formant_scale;
    const double b = (900.0 + 1400.0 * u(rng)) * voice.formant_scale;
    for (std::size_t i = 0; i < len; ++i) {
      const double s = std::sin(std::numbers::pi * double(i) / double(len));
      env[t + i] = peak * s * s;
      f1[t + i] = a;
      f2[t + i] = b;
    }
    t += len + std::size_t((0.04 + 0.08 * u(rng)) * fs);
  }

  FixtureUtterance out;
  out.plain.samples.assign(n, 0.0);
  const double vibrato_phase = kTwoPi * u(rng);
  std::normal_distribution<double> breath(0.0, 1e-4);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double time = double(i) / fs;
    const double f0 = voice.f0 * (1.0 + 0.08 * std::sin(kTwoPi * 0.7 * time + vibrato_phase)) *
                      (1.0 - 0.05 * time);
    phase += kTwoPi * f0 / fs;
    double voiced = 0.0;
    if (env[i] > 0.0) {
      for (int h = 1; h * f0 < 4000.0; ++h) {
        const double f = h * f0;
        const double gain = (Resonance(f, f1[i], 90.0) +
                             0.6 * Resonance(f, f2[i], 140.0) +
                             0.2 * Resonance(f, 2700.0 * voice.formant_scale, 200.0)) /
                            std::sqrt(double(h));
        voiced += gain * std::cos(h * phase);
      }
    }
    out.plain.samples[i] = env[i] * voiced + breath(rng);
  }

  // Pseudo-Lombard: first-difference tilt, then +6 dB in energy.
  out.lombard.samples.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    out.lombard.samples[i] =
        out.plain.samples[i] - 0.6 * (i ? out.plain.samples[i - 1] : 0.0);
  const double gain = std::sqrt(dsp::Energy(out.plain.samples) /
                                dsp::Energy(out.lombard.samples) *
                                std::pow(10.0, kFixtureLombardGainDb / 10.0));
  for (double& s : out.lombard.samples) s *= gain;
  double peak = 0.0;
  for (double s : out.lombard.samples) peak = std::max(peak, std::abs(s));
  for (double s : out.plain.samples) peak = std::max(peak, std::abs(s));
  const double scale = 0.45 / peak;
  for (double& s : out.plain.samples) s *= scale;
  for (double& s : out.lombard.samples) s *= scale;

  // Mouth video: the opening follows the per-frame envelope.
  out.envelope.resize(video_frames);
  double env_max = 0.0;
  for (int v = 0; v < video_frames; ++v) {
    double e = 0.0;
    for (int i = 0; i < kSamplesPerVideoFrame; ++i)
      e += env[std::size_t(v) * kSamplesPerVideoFrame + i];
    out.envelope[v] = e / kSamplesPerVideoFrame;
    env_max = std::max(env_max, out.envelope[v]);
  }
  for (double& e : out.envelope) e = env_max > 0.0 ? e / env_max : 0.0;
  out.video.pixels.resize(std::size_t(video_frames) * kVideoSize * kVideoSize);
  const double cx = 63.5, cy = 70.0;
  for (int v = 0; v < video_frames; ++v) {
    const double a = voice.mouth_width;
    const double b = 1.5 + 22.0 * out.envelope[v];
    uint8_t* frame = out.video.pixels.data() + std::size_t(v) * kVideoSize * kVideoSize;
    for (int y = 0; y < kVideoSize; ++y)
      for (int x = 0; x < kVideoSize; ++x) {
        const double dx = (x - cx) / a, dy = (y - cy) / b;
        const double lx = (x - cx) / (a + 5.0), ly = (y - cy) / (b + 5.0);
        uint8_t p = uint8_t(voice.skin);
        if (lx * lx + ly * ly <= 1.0) p = 100;
        if (dx * dx + dy * dy <= 1.0) p = 25;
        frame[y * kVideoSize + x] = p;
      }
  }
  return out;
}

int MouthAperture(std::span<const uint8_t> frame, int height, int width) {
  int dark = 0;
  const int x = width / 2;
  for (int y = 0; y < height; ++y) dark += frame[std::size_t(y) * width + x] < 60;
  return dark;
}

Manifest GenerateFixtureCorpus(const FixtureOptions& options,
                               const std::filesystem::path& out_dir) {
  if (options.speakers < 2 || options.utterances < 16)
    throw Error(ErrorCode::kInvalidArgument,
                "fixture needs >= 2 speakers and >= 16 utterances");
  std::error_code ec;
  for (const char* sub : {"audio", "video"}) {
    std::filesystem::create_directories(out_dir / sub, ec);
    if (ec)
      throw Error(ErrorCode::kIoError,
                  "cannot create " + (out_dir / sub).string() + ": " + ec.message());
  }
  Manifest manifest;
  for (int s = 0; s < options.speakers; ++s) {
    const std::string speaker = Id("s", s + 1, 2);
    for (int k = 0; k < options.utterances; ++k) {
      const std::string utt = Id("u", k + 1, 3);
      const FixtureUtterance fx = SynthesizeUtterance(s, k, options.seed);
      for (Condition c : {Condition::kNonLombard, Condition::kLombard}) {
        const std::string stem =
            speaker + "_" + std::string(ConditionName(c)) + "_" + utt;
        const std::filesystem::path audio = std::filesystem::path("audio") / (stem + ".wav");
        const std::filesystem::path video = std::filesystem::path("video") / (stem + ".vfr");
        dsp::WriteWav(c == Condition::kLombard ? fx.lombard : fx.plain, out_dir / audio);
        WriteVideoFrames(fx.video, out_dir / video);
        manifest.push_back({speaker, c, utt, audio, video});
      }
    }
  }
  WriteManifest(manifest, out_dir / "manifest.tsv");
  return ReadManifest(out_dir / "manifest.tsv");
}

}  // namespace avse::data
