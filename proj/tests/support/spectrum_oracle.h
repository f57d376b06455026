// tests/support/spectrum_oracle.h

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

#ifndef AVSE_TESTS_SPECTRUM_ORACLE_H_
#define AVSE_TESTS_SPECTRUM_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

#include "avse/dsp/fft.h"
#include "avse/mixture/mixture.h"

namespace avse::testing {

// Welch power spectrum: Hann-windowed 1024-point segments, 50% overlap.
inline std::vector<double> WelchPsd(const std::vector<double>& x) {
  const int n = 1024;
  dsp::RealFft fft(n);
  std::vector<double> window(n), frame(n), psd(n / 2 + 1, 0.0);
  for (int i = 0; i < n; ++i)
    window[i] = 0.5 - 0.5 * std::cos(2 * std::numbers::pi * i / n);
  std::vector<std::complex<double>> spec(n / 2 + 1);
  int count = 0;
  for (std::size_t start = 0; start + n <= x.size(); start += n / 2, ++count) {
    for (int i = 0; i < n; ++i) frame[i] = x[start + i] * window[i];
    fft.Forward(frame, spec);
    for (int k = 0; k <= n / 2; ++k) psd[k] += std::norm(spec[k]);
  }
  for (double& p : psd) p /= count;
  return psd;
}

// Mean power per third-octave band (centres 160 Hz .. 4 kHz) of a spectrum
// sampled every `hz_per_bin` Hz, in dB relative to the mean over bands.
inline std::vector<double> RelativeBandLevels(const std::vector<double>& power,
                                       double hz_per_bin) {
  std::vector<double> levels;
  for (int i = 22; i <= 36; ++i) {  // 10^(i/10) Hz: 158 .. 3981
    const double centre = std::pow(10.0, i / 10.0);
    const double lo = centre * std::pow(2.0, -1.0 / 6), hi = centre * std::pow(2.0, 1.0 / 6);
    double sum = 0.0;
    int bins = 0;
    for (std::size_t k = 0; k < power.size(); ++k) {
      const double f = k * hz_per_bin;
      if (f >= lo && f < hi) {
        sum += power[k];
        ++bins;
      }
    }
    levels.push_back(10.0 * std::log10(sum / bins));
  }
  const double mean = std::accumulate(levels.begin(), levels.end(), 0.0) / levels.size();
  for (double& l : levels) l -= mean;
  return levels;
}

// LTAS power linearly interpolated onto a fine grid, for the band oracle.
inline std::vector<double> LtasPower(const mixture::Ltas& ltas, double hz_per_bin,
                              std::size_t bins) {
  std::vector<double> p(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double pos = k * hz_per_bin / 25.0;
    const std::size_t i = std::min<std::size_t>(std::size_t(pos), 319);
    const double frac = std::min(pos - i, 1.0);
    const double m = ltas.magnitudes[i] * (1 - frac) + ltas.magnitudes[i + 1] * frac;
    p[k] = m * m;
  }
  return p;
}

}  // namespace avse::testing

#endif  // AVSE_TESTS_SPECTRUM_ORACLE_H_
