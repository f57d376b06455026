// src/dsp/stft.cc

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

#include "avse/dsp/stft.h"

#include <cmath>
#include <numbers>

#include "avse/dsp/fft.h"
#include "avse/error.h"

namespace avse::dsp {

std::vector<double> HammingWindow(int n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "window length < 2");
  std::vector<double> w(n);
  for (int k = 0; k < n; ++k)
    w[k] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / n);
  return w;
}

StftParams StftParams::Default() {
  StftParams p;
  p.window = HammingWindow(p.n_fft);
  return p;
}

void StftParams::Validate() const {
  if (n_fft < 2 || hop < 1 || hop > n_fft ||
      static_cast<int>(window.size()) != n_fft)
    throw Error(ErrorCode::kInvalidArgument,
                "inconsistent STFT parameters (need win_length == n_fft, "
                "1 <= hop <= win_length)");
}

std::size_t StftParams::NumFrames(std::size_t length) const {
  const auto n = static_cast<std::size_t>(n_fft);
  if (length < n) return 0;
  const auto h = static_cast<std::size_t>(hop);
  return (length - n + h - 1) / h + 1;
}

ComplexSpectrogram Stft(const Waveform& w, const StftParams& p) {
  p.Validate();
  const std::size_t length = w.samples.size();
  if (length < static_cast<std::size_t>(p.n_fft))
    throw Error(ErrorCode::kSignalTooShort,
                "signal has " + std::to_string(length) + " samples, need " +
                    std::to_string(p.n_fft));
  const std::size_t frames = p.NumFrames(length);
  ComplexSpectrogram out{Grid<std::complex<double>>(p.bins(), frames), p};

  RealFft fft(p.n_fft);
  std::vector<double> frame(p.n_fft);
  std::vector<std::complex<double>> spec(p.bins());
  for (std::size_t l = 0; l < frames; ++l) {
    const std::size_t start = l * p.hop;
    for (int t = 0; t < p.n_fft; ++t) {
      const std::size_t n = start + t;
      frame[t] = n < length ? w.samples[n] * p.window[t] : 0.0;
    }
    fft.Forward(frame, spec);
    for (int k = 0; k < p.bins(); ++k) out.values(k, l) = spec[k];
  }
  return out;
}

ComplexSpectrogram Stft(const Waveform& w) {
  return Stft(w, StftParams::Default());
}

Waveform Istft(const ComplexSpectrogram& s, std::size_t target_length,
               int sample_rate) {
  const StftParams& p = s.params;
  p.Validate();
  if (s.bins() != static_cast<std::size_t>(p.bins()))
    throw Error(ErrorCode::kShapeMismatch, "spectrogram bins != n_fft/2+1");
  const std::size_t frames = s.frames();
  const std::size_t span_length =
      frames == 0 ? 0 : (frames - 1) * p.hop + p.n_fft;
  if (target_length > span_length)
    throw Error(ErrorCode::kInvalidArgument,
                "target_length exceeds the span covered by the frames");

  std::vector<double> acc(span_length, 0.0);
  std::vector<double> envelope(span_length, 0.0);
  RealFft fft(p.n_fft);
  std::vector<std::complex<double>> spec(p.bins());
  std::vector<double> frame(p.n_fft);
  for (std::size_t l = 0; l < frames; ++l) {
    for (int k = 0; k < p.bins(); ++k) spec[k] = s.values(k, l);
    fft.Inverse(spec, frame);
    const std::size_t start = l * p.hop;
    for (int t = 0; t < p.n_fft; ++t) {
      acc[start + t] += frame[t] * p.window[t];
      envelope[start + t] += p.window[t] * p.window[t];
    }
  }

  Waveform out;
  out.sample_rate = sample_rate;
  out.samples.resize(target_length);
  for (std::size_t n = 0; n < target_length; ++n) {
    if (envelope[n] < 1e-12)
      throw Error(ErrorCode::kZeroWindowOverlap,
                  "squared-window sum vanishes at sample " + std::to_string(n));
    out.samples[n] = acc[n] / envelope[n];
  }
  return out;
}

MagnitudeSpectrogram Magnitude(const ComplexSpectrogram& s) {
  Grid<double> m(s.bins(), s.frames());
  const auto& src = s.values.data();
  auto& dst = m.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::abs(src[i]);
  return MagnitudeSpectrogram(std::move(m));
}

Grid<double> Phase(const ComplexSpectrogram& s) {
  Grid<double> ph(s.bins(), s.frames());
  const auto& src = s.values.data();
  auto& dst = ph.data();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = src[i] == std::complex<double>(0.0, 0.0) ? 0.0 : std::arg(src[i]);
  return ph;
}

ComplexSpectrogram FromPolar(const MagnitudeSpectrogram& magnitude,
                             const Grid<double>& phase,
                             const StftParams& params) {
  if (!magnitude.values.same_shape(phase))
    throw Error(ErrorCode::kShapeMismatch, "magnitude/phase shapes differ");
  ComplexSpectrogram out{
      Grid<std::complex<double>>(magnitude.bins(), magnitude.frames()), params};
  const auto& m = magnitude.values.data();
  const auto& ph = phase.data();
  auto& dst = out.values.data();
  for (std::size_t i = 0; i < m.size(); ++i) dst[i] = std::polar(m[i], ph[i]);
  return out;
}

}  // namespace avse::dsp
