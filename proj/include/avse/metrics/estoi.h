// include/avse/metrics/estoi.h

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

#ifndef AVSE_METRICS_ESTOI_H_
#define AVSE_METRICS_ESTOI_H_

#include <span>
#include <vector>

#include "avse/dsp/waveform.h"

namespace avse::metrics {

inline constexpr int kEstoiRate = 10000;
inline constexpr int kEstoiFrame = 256;
inline constexpr int kEstoiHop = 128;
inline constexpr int kEstoiFft = 512;
inline constexpr int kEstoiBands = 15;
inline constexpr double kEstoiMinFreq = 150.0;
inline constexpr int kEstoiSegment = 30;
inline constexpr double kEstoiDynamicRange = 40.0;

// Extended short-time objective intelligibility of `processed` against
// `clean`. Both must have the same length and sample rate. The clean signal
// decides which frames are silent, so the score is not symmetric.
// Throws LengthMismatch, TooShortAfterVad.
double Estoi(const dsp::Waveform& clean, const dsp::Waveform& processed);

// Pieces exposed for tests. Both operate at 10 kHz.

// Drops 256-sample frames whose clean energy is more than 40 dB below the
// loudest one and overlap-adds the survivors (Hann-windowed) of both signals.
void RemoveSilentFrames(std::span<const double> clean,
                        std::span<const double> processed,
                        std::vector<double>& clean_out,
                        std::vector<double>& processed_out);

// Band edges as FFT bin ranges [lo, hi) of the 512-point transform.
struct ThirdOctaveBand {
  int lo = 0;
  int hi = 0;
  double centre = 0.0;
};
std::vector<ThirdOctaveBand> ThirdOctaveBands();

}  // namespace avse::metrics

#endif  // AVSE_METRICS_ESTOI_H_
