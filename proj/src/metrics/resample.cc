// src/metrics/resample.cc

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

#include "avse/metrics/resample.h"

#include <cmath>
#include <numeric>

#include "avse/error.h"

namespace avse::metrics {

namespace {

constexpr int kTapsPerPhase = 64;
constexpr double kKaiserBeta = 5.653;  // about 60 dB stopband

double BesselI0(double x) {
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= (x / (2.0 * k)) * (x / (2.0 * k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

}  // namespace

std::vector<double> DesignResampleFilter(int up, int down, int taps_per_phase,
                                         double kaiser_beta) {
  if (up < 1 || down < 1 || taps_per_phase < 2)
    throw Error(ErrorCode::kInvalidArgument, "bad resampling parameters");
  const int half = taps_per_phase / 2 * up;
  const double cutoff = 0.5 / std::max(up, down);  // cycles per sample
  std::vector<double> h(2 * half + 1);
  const double norm = BesselI0(kaiser_beta);
  for (int i = -half; i <= half; ++i) {
    const double arg = 2.0 * cutoff * i;
    const double sinc = i == 0 ? 1.0 : std::sin(M_PI * arg) / (M_PI * arg);
    const double r = double(i) / half;
    const double w = BesselI0(kaiser_beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / norm;
    h[i + half] = 2.0 * cutoff * sinc * w;
  }
  const double sum = std::accumulate(h.begin(), h.end(), 0.0);
  for (double& v : h) v /= sum;
  return h;
}

std::vector<double> ResamplePoly(std::span<const double> x, int up, int down,
                                 std::span<const double> filter) {
  if (filter.size() % 2 == 0)
    throw Error(ErrorCode::kInvalidArgument, "filter length must be odd");
  const long c = long(filter.size() / 2);
  const long n = long(x.size());
  const long out_len = (n * up + down - 1) / down;
  std::vector<double> y(out_len);
  for (long m = 0; m < out_len; ++m) {
    const long centre = m * down;
    // taps with 0 <= c + centre - k * up <= 2c
    long k_lo = (centre - c + up - 1) >= 0 ? (centre - c + up - 1) / up
                                            : -((c - centre) / up);
    long k_hi = (centre + c) / up;
    k_lo = std::max(k_lo, 0L);
    k_hi = std::min(k_hi, n - 1);
    double acc = 0.0;
    for (long k = k_lo; k <= k_hi; ++k) acc += x[k] * filter[c + centre - k * up];
    y[m] = up * acc;
  }
  return y;
}

std::vector<double> Resample(std::span<const double> x, int from_rate,
                             int to_rate) {
  if (from_rate <= 0 || to_rate <= 0)
    throw Error(ErrorCode::kInvalidArgument, "sample rates must be positive");
  const int g = std::gcd(from_rate, to_rate);
  const int up = to_rate / g, down = from_rate / g;
  if (up == 1 && down == 1) return {x.begin(), x.end()};
  const auto h = DesignResampleFilter(up, down, kTapsPerPhase, kKaiserBeta);
  return ResamplePoly(x, up, down, h);
}

}  // namespace avse::metrics
