// src/dsp/waveform.cc

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

#include "avse/dsp/waveform.h"

#include <cmath>

#include "avse/error.h"

namespace avse::dsp {

void ValidateWaveform(const Waveform& w) {
  if (w.sample_rate <= 0)
    throw Error(ErrorCode::kInvalidArgument, "sample_rate must be positive");
  for (double s : w.samples)
    if (!std::isfinite(s))
      throw Error(ErrorCode::kNonFiniteValue, "waveform has non-finite sample");
}

Waveform PeakNormalize(const Waveform& w) {
  double peak = 0.0;
  for (double s : w.samples) peak = std::max(peak, std::abs(s));
  if (peak == 0.0)
    throw Error(ErrorCode::kAllZeroSignal, "cannot peak-normalize silence");
  Waveform out{w.samples, w.sample_rate};
  for (double& s : out.samples) s /= peak;
  return out;
}

double Energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double Rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::sqrt(Energy(x) / static_cast<double>(x.size()));
}

}  // namespace avse::dsp
