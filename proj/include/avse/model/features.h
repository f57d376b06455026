// include/avse/model/features.h

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

#ifndef AVSE_MODEL_FEATURES_H_
#define AVSE_MODEL_FEATURES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "avse/data/video.h"
#include "avse/dsp/grid.h"
#include "avse/dsp/stft.h"

namespace avse::model {

inline constexpr double kStdFloor = 1e-6;

// Input normalization: per-bin audio statistics of mixture magnitudes and a
// single scalar pair for video pixels (as reals in [0, 1]).
struct FeatureStats {
  std::vector<double> audio_mean, audio_std;  // 321 each
  double video_mean = 0.0;
  double video_std = 1.0;

  bool has_audio() const noexcept { return !audio_mean.empty(); }
  // Throws StatsMissing when audio statistics are absent.
  void NormalizeAudio(const dsp::Grid<double>& chunk, float* out) const;
  void NormalizeVideo(std::span<const uint8_t> pixels, float* out) const;
};

// Streaming accumulator (per-bin Welford updates, merged in a fixed order).
class FeatureStatsAccumulator {
 public:
  FeatureStatsAccumulator();
  void AddAudio(const dsp::MagnitudeSpectrogram& mixture);
  void AddVideo(const data::VideoClip& clip);
  // Throws EmptySplit when nothing was added. Stds are floored at 1e-6.
  FeatureStats Finish() const;

 private:
  struct Moments {
    double count = 0.0, mean = 0.0, m2 = 0.0;
    void Merge(double n, double mean, double m2);
  };
  std::vector<Moments> bins_;
  Moments video_;
};

}  // namespace avse::model

#endif  // AVSE_MODEL_FEATURES_H_
