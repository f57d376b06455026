// src/mixture/mixture.cc

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

#include "avse/mixture/mixture.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>

#include "avse/dsp/stft.h"
#include "avse/error.h"

namespace avse::mixture {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

void Ltas::Validate() const {
  if (magnitudes.size() != static_cast<std::size_t>(dsp::kNumBins))
    throw Error(ErrorCode::kShapeMismatch, "LTAS must have 321 bins");
  bool any_positive = false;
  for (double m : magnitudes) {
    if (!std::isfinite(m) || m < 0.0)
      throw Error(ErrorCode::kInvalidArgument, "LTAS bins must be finite, >= 0");
    any_positive |= m > 0.0;
  }
  if (!any_positive)
    throw Error(ErrorCode::kInvalidArgument, "LTAS is identically zero");
}

Ltas EstimateLtas(std::span<const dsp::Waveform> corpus) {
  double seconds = 0.0;
  for (const auto& w : corpus) seconds += w.duration_seconds();
  if (seconds < 10.0)
    throw Error(ErrorCode::kCorpusTooSmall,
                "LTAS needs >= 10 s of speech, got " + std::to_string(seconds));

  const auto params = dsp::StftParams::Default();
  Ltas ltas{std::vector<double>(params.bins(), 0.0)};
  std::size_t frames = 0;
  for (const auto& w : corpus) {
    if (w.size() < static_cast<std::size_t>(params.n_fft)) continue;
    const auto mag = dsp::Magnitude(dsp::Stft(dsp::PeakNormalize(w), params));
    for (std::size_t k = 0; k < mag.bins(); ++k)
      for (std::size_t l = 0; l < mag.frames(); ++l)
        ltas.magnitudes[k] += mag.values(k, l);
    frames += mag.frames();
  }
  for (double& m : ltas.magnitudes) m /= static_cast<double>(frames);
  return ltas;
}

std::vector<double> DesignSsnFilter(const Ltas& ltas, int sample_rate) {
  ltas.Validate();
  const int n = kSsnFilterTaps;
  const int half = (n - 1) / 2;
  const double bin_hz = static_cast<double>(sample_rate) / dsp::kFftSize;
  const auto last = static_cast<double>(ltas.magnitudes.size() - 1);

  // Desired amplitude at f_k = k * fs / n, interpolated from the LTAS grid.
  std::vector<double> desired(half + 1);
  for (int k = 0; k <= half; ++k) {
    const double pos =
        std::min(static_cast<double>(k) * sample_rate / n / bin_hz, last);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, ltas.magnitudes.size() - 1);
    const double frac = pos - lo;
    desired[k] = (1.0 - frac) * ltas.magnitudes[lo] + frac * ltas.magnitudes[hi];
  }

  std::vector<double> h(n);
  for (int t = 0; t < n; ++t) {
    double acc = desired[0];
    for (int k = 1; k <= half; ++k)
      acc += 2.0 * desired[k] *
             std::cos(2.0 * std::numbers::pi * k * (t - half) / n);
    h[t] = acc / n;
  }
  return h;
}

dsp::Waveform GenerateSsn(const Ltas& ltas, std::size_t n_samples,
                          uint64_t seed) {
  if (n_samples < 16000)
    throw Error(ErrorCode::kInvalidArgument, "SSN needs >= 16000 samples");
  const auto h = DesignSsnFilter(ltas);
  const std::size_t taps = h.size();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> white(n_samples + taps - 1);
  for (double& v : white) v = gauss(rng);

  dsp::Waveform out;
  out.samples.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double* x = white.data() + i;
    double acc = 0.0;
    // Valid part of the convolution: y[i] = sum_j h[j] x[i + taps - 1 - j].
    for (std::size_t j = 0; j < taps; ++j) acc += h[taps - 1 - j] * x[j];
    out.samples[i] = acc;
  }
  return dsp::PeakNormalize(out);
}

double SnrDb(std::span<const double> clean, std::span<const double> noise) {
  return 20.0 * std::log10(dsp::Rms(clean) / dsp::Rms(noise));
}

MixResult MixAtSnr(const dsp::Waveform& clean, const dsp::Waveform& noise,
                   double snr_db, std::size_t noise_offset) {
  if (!std::isfinite(snr_db))
    throw Error(ErrorCode::kInvalidArgument, "SNR must be finite");
  const std::size_t len = clean.size();
  if (noise_offset + len > noise.size())
    throw Error(ErrorCode::kNoiseTooShort,
                "noise has " + std::to_string(noise.size()) +
                    " samples, need offset " + std::to_string(noise_offset) +
                    " + " + std::to_string(len));
  const std::span<const double> segment(noise.samples.data() + noise_offset,
                                        len);
  const double clean_rms = dsp::Rms(clean.samples);
  const double noise_rms = dsp::Rms(segment);
  if (clean_rms == 0.0 || noise_rms == 0.0)
    throw Error(ErrorCode::kZeroEnergySignal, "cannot mix a silent signal");

  MixResult r;
  r.gain = clean_rms / (noise_rms * std::pow(10.0, snr_db / 20.0));
  r.mixture.sample_rate = clean.sample_rate;
  r.mixture.samples.resize(len);
  r.scaled_noise.sample_rate = clean.sample_rate;
  r.scaled_noise.samples.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    r.mixture.samples[i] = clean.samples[i] + r.gain * segment[i];
    r.scaled_noise.samples[i] = r.mixture.samples[i] - clean.samples[i];
  }
  return r;
}

void SaveLtas(const Ltas& ltas, const std::filesystem::path& path) {
  ltas.Validate();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  f.write("LTAS", 4);
  f.write(reinterpret_cast<const char*>(ltas.magnitudes.data()),
          static_cast<std::streamsize>(ltas.magnitudes.size() * sizeof(double)));
  if (!f) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

Ltas LoadLtas(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  char magic[4];
  Ltas ltas{std::vector<double>(dsp::kNumBins)};
  f.read(magic, 4);
  if (!f || std::memcmp(magic, "LTAS", 4) != 0)
    throw Error(ErrorCode::kCorruptFile, path.string() + ": bad LTAS magic");
  f.read(reinterpret_cast<char*>(ltas.magnitudes.data()),
         static_cast<std::streamsize>(ltas.magnitudes.size() * sizeof(double)));
  if (!f || f.peek() != std::char_traits<char>::eof())
    throw Error(ErrorCode::kCorruptFile, path.string() + ": bad LTAS length");
  ltas.Validate();
  return ltas;
}

}  // namespace avse::mixture
