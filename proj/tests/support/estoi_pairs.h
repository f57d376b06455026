// tests/support/estoi_pairs.h

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

#ifndef AVSE_TESTS_SUPPORT_ESTOI_PAIRS_H_
#define AVSE_TESTS_SUPPORT_ESTOI_PAIRS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "avse/data/fixture.h"
#include "avse/dsp/waveform.h"

namespace avse::testing {

inline constexpr int kEstoiPairs = 5;

// Frozen from an independent reference implementation (pystoi 0.4.1,
// extended=True) run on exactly these sample arrays.
inline constexpr double kEstoiReference[kEstoiPairs] = {
    0.1110563211, 0.5645613914, 0.9831954038, 0.6920973004, 0.0200623494};

struct EstoiPair {
  dsp::Waveform clean;
  dsp::Waveform degraded;
};

// Uniform in [-1, 1) from the raw engine output, so the sequence is fixed by
// the standard rather than by a library's distribution code.
inline double Uniform(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-52 - 1.0;
}

// Fixed (clean, degraded) fixture pairs used for cross-implementation
// regression of ESTOI.
inline EstoiPair MakeEstoiPair(int which) {
  std::mt19937_64 rng(1000 + which);
  const auto a = data::SynthesizeUtterance(0, 1, 3).lombard;
  const auto b = data::SynthesizeUtterance(1, 3, 3).plain;
  const auto c = data::SynthesizeUtterance(0, 2, 3).plain;
  EstoiPair p;
  const auto noise = [&](double level) { return level * Uniform(rng); };
  switch (which) {
    case 0:  // white noise
      p.clean = a;
      p.degraded = a;
      for (double& v : p.degraded.samples) v += noise(0.15);
      break;
    case 1: {  // competing talker
      const std::size_t n = std::min(a.size(), b.size());
      p.clean.samples.assign(a.samples.begin(), a.samples.begin() + n);
      p.degraded = p.clean;
      for (std::size_t i = 0; i < n; ++i) p.degraded.samples[i] += 0.8 * b.samples[i];
      break;
    }
    case 2:  // 9-tap moving average
      p.clean = c;
      p.degraded = c;
      for (std::size_t i = 0; i < c.size(); ++i) {
        double s = 0.0;
        for (int k = -4; k <= 4; ++k) {
          const long j = long(i) + k;
          if (j >= 0 && j < long(c.size())) s += c.samples[j];
        }
        p.degraded.samples[i] = s / 9.0;
      }
      break;
    case 3:  // hard clipping plus noise
      p.clean = b;
      p.degraded = b;
      for (double& v : p.degraded.samples) v = std::clamp(4.0 * v, -0.5, 0.5) / 4.0 + noise(0.01);
      break;
    default:  // echo plus noise
      p.clean = c;
      p.degraded = c;
      for (std::size_t i = 0; i < c.size(); ++i)
        p.degraded.samples[i] = 0.2 * c.samples[i] + noise(0.2) +
                                (i >= 37 ? 0.5 * c.samples[i - 37] : 0.0);
      break;
  }
  return p;
}

}  // namespace avse::testing

#endif  // AVSE_TESTS_SUPPORT_ESTOI_PAIRS_H_
