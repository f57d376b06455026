// src/metrics/estoi.cc

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

#include "avse/metrics/estoi.h"

#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "avse/dsp/fft.h"
#include "avse/error.h"
#include "avse/metrics/resample.h"

namespace avse::metrics {

namespace {

// Symmetric Hann without the zero end points (hanning(n + 2)[1:-1]).
std::vector<double> InnerHann(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * (i + 1) / (n + 1));
  return w;
}

// Frame starts 0, hop, ... strictly below len - frame.
std::size_t NumFrames(std::size_t len) {
  if (len <= std::size_t(kEstoiFrame)) return 0;
  return (len - kEstoiFrame + kEstoiHop - 1) / kEstoiHop;
}

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// bands x frames envelope.
Matrix BandEnvelopes(const std::vector<double>& x,
                     const std::vector<ThirdOctaveBand>& bands) {
  const auto w = InnerHann(kEstoiFrame);
  const std::size_t frames = NumFrames(x.size());
  dsp::RealFft fft(kEstoiFft);
  std::vector<double> buf(kEstoiFrame);
  std::vector<std::complex<double>> spec(fft.bins());
  Matrix env(bands.size(), frames);
  for (std::size_t f = 0; f < frames; ++f) {
    for (int i = 0; i < kEstoiFrame; ++i) buf[i] = w[i] * x[f * kEstoiHop + i];
    fft.Forward(buf, spec);
    for (std::size_t b = 0; b < bands.size(); ++b) {
      double e = 0.0;
      for (int k = bands[b].lo; k < bands[b].hi; ++k) e += std::norm(spec[k]);
      env(b, f) = std::sqrt(e);
    }
  }
  return env;
}

// Zero mean, unit norm rows then columns. All-constant vectors become zero.
void RowColumnNormalize(Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    m.row(r).array() -= m.row(r).mean();
    const double n = m.row(r).norm();
    if (n > 0) m.row(r) /= n;
  }
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    m.col(c).array() -= m.col(c).mean();
    const double n = m.col(c).norm();
    if (n > 0) m.col(c) /= n;
  }
}

}  // namespace

std::vector<ThirdOctaveBand> ThirdOctaveBands() {
  const int bins = kEstoiFft / 2 + 1;
  // Nearest bin to each edge; ties go to the lower bin.
  auto nearest = [&](double f) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < bins; ++k) {
      const double d = std::abs(double(k) * kEstoiRate / kEstoiFft - f);
      if (d < best_d) best = k, best_d = d;
    }
    return best;
  };
  std::vector<ThirdOctaveBand> bands(kEstoiBands);
  for (int j = 0; j < kEstoiBands; ++j) {
    bands[j].centre = kEstoiMinFreq * std::pow(2.0, j / 3.0);
    bands[j].lo = nearest(kEstoiMinFreq * std::pow(2.0, (2.0 * j - 1) / 6));
    bands[j].hi = nearest(kEstoiMinFreq * std::pow(2.0, (2.0 * j + 1) / 6));
  }
  return bands;
}

void RemoveSilentFrames(std::span<const double> clean,
                        std::span<const double> processed,
                        std::vector<double>& clean_out,
                        std::vector<double>& processed_out) {
  const auto w = InnerHann(kEstoiFrame);
  const std::size_t frames = NumFrames(clean.size());
  std::vector<double> energy_db(frames);
  double loudest = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < frames; ++f) {
    double e = 0.0;
    for (int i = 0; i < kEstoiFrame; ++i) {
      const double v = w[i] * clean[f * kEstoiHop + i];
      e += v * v;
    }
    energy_db[f] = 20.0 * std::log10(std::sqrt(e) + std::numeric_limits<double>::epsilon());
    loudest = std::max(loudest, energy_db[f]);
  }
  std::size_t kept = 0;
  for (double e : energy_db) kept += loudest - kEstoiDynamicRange - e < 0;
  const std::size_t len = kept == 0 ? 0 : (kept - 1) * kEstoiHop + kEstoiFrame;
  clean_out.assign(len, 0.0);
  processed_out.assign(len, 0.0);
  std::size_t at = 0;
  for (std::size_t f = 0; f < frames; ++f) {
    if (!(loudest - kEstoiDynamicRange - energy_db[f] < 0)) continue;
    for (int i = 0; i < kEstoiFrame; ++i) {
      clean_out[at + i] += w[i] * clean[f * kEstoiHop + i];
      processed_out[at + i] += w[i] * processed[f * kEstoiHop + i];
    }
    at += kEstoiHop;
  }
}

double Estoi(const dsp::Waveform& clean, const dsp::Waveform& processed) {
  if (clean.size() != processed.size())
    throw Error(ErrorCode::kLengthMismatch, "ESTOI inputs differ in length");
  if (clean.sample_rate != processed.sample_rate)
    throw Error(ErrorCode::kInvalidArgument, "ESTOI inputs differ in sample rate");
  const auto x10 = Resample(clean.samples, clean.sample_rate, kEstoiRate);
  const auto y10 = Resample(processed.samples, processed.sample_rate, kEstoiRate);
  std::vector<double> x, y;
  RemoveSilentFrames(x10, y10, x, y);
  const std::size_t frames = NumFrames(x.size());
  if (frames < std::size_t(kEstoiSegment))
    throw Error(ErrorCode::kTooShortAfterVad,
                "only " + std::to_string(frames) + " frames left after silence removal");
  const auto bands = ThirdOctaveBands();
  const Matrix xe = BandEnvelopes(x, bands);
  const Matrix ye = BandEnvelopes(y, bands);
  const std::size_t segments = frames - kEstoiSegment + 1;
  double total = 0.0;
  for (std::size_t s = 0; s < segments; ++s) {
    Matrix xs = xe.middleCols(s, kEstoiSegment);
    Matrix ys = ye.middleCols(s, kEstoiSegment);
    RowColumnNormalize(xs);
    RowColumnNormalize(ys);
    total += (xs.array() * ys.array()).sum() / kEstoiSegment;
  }
  return total / double(segments);
}

}  // namespace avse::metrics
