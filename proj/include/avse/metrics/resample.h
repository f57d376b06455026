// include/avse/metrics/resample.h

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

#ifndef AVSE_METRICS_RESAMPLE_H_
#define AVSE_METRICS_RESAMPLE_H_

#include <span>
#include <vector>

namespace avse::metrics {

// Kaiser-windowed sinc lowpass for rational resampling by up/down (already
// reduced), cut off at the lower Nyquist rate. Length 2 * half + 1 with
// half = taps_per_phase / 2 * up, normalized to unit sum.
std::vector<double> DesignResampleFilter(int up, int down, int taps_per_phase,
                                         double kaiser_beta);

// Zero-phase polyphase resampling: ceil(n * up / down) output samples,
// y[m] = up * sum_n x[n] h[c + m * down - n * up] with c the filter centre.
std::vector<double> ResamplePoly(std::span<const double> x, int up, int down,
                                 std::span<const double> filter);

// Convenience wrapper for sample-rate conversion; reduces the ratio first.
std::vector<double> Resample(std::span<const double> x, int from_rate,
                             int to_rate);

}  // namespace avse::metrics

#endif  // AVSE_METRICS_RESAMPLE_H_
