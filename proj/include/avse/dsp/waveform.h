// include/avse/dsp/waveform.h

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

#ifndef AVSE_DSP_WAVEFORM_H_
#define AVSE_DSP_WAVEFORM_H_

#include <span>
#include <vector>

namespace avse::dsp {

inline constexpr int kSampleRate = 16000;

struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  std::size_t size() const noexcept { return samples.size(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Throws NonFiniteValue / InvalidArgument when the invariants do not hold.
void ValidateWaveform(const Waveform& w);

// Scales so that max |sample| == 1. Throws AllZeroSignal.
Waveform PeakNormalize(const Waveform& w);

double Energy(std::span<const double> x);
double Rms(std::span<const double> x);

}  // namespace avse::dsp

#endif  // AVSE_DSP_WAVEFORM_H_
