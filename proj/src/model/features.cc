// src/model/features.cc

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

#include "avse/model/features.h"

#include <algorithm>
#include <cmath>

#include "avse/error.h"

namespace avse::model {

void FeatureStats::NormalizeAudio(const dsp::Grid<double>& chunk,
                                  float* out) const {
  if (!has_audio())
    throw Error(ErrorCode::kStatsMissing, "audio feature statistics missing");
  if (chunk.rows() != audio_mean.size())
    throw Error(ErrorCode::kBadChunkShape, "audio chunk has wrong bin count");
  for (std::size_t k = 0; k < chunk.rows(); ++k) {
    const double inv = 1.0 / audio_std[k];
    for (std::size_t t = 0; t < chunk.cols(); ++t)
      out[k * chunk.cols() + t] = float((chunk(k, t) - audio_mean[k]) * inv);
  }
}

void FeatureStats::NormalizeVideo(std::span<const uint8_t> pixels,
                                  float* out) const {
  const double inv = 1.0 / video_std;
  for (std::size_t i = 0; i < pixels.size(); ++i)
    out[i] = float((pixels[i] / 255.0 - video_mean) * inv);
}

void FeatureStatsAccumulator::Moments::Merge(double n, double m, double q) {
  if (n == 0.0) return;
  const double total = count + n;
  const double delta = m - mean;
  mean += delta * n / total;
  m2 += q + delta * delta * count * n / total;
  count = total;
}

FeatureStatsAccumulator::FeatureStatsAccumulator() : bins_(dsp::kNumBins) {}

void FeatureStatsAccumulator::AddAudio(const dsp::MagnitudeSpectrogram& mix) {
  const auto& v = mix.values;
  if (v.rows() != bins_.size())
    throw Error(ErrorCode::kShapeMismatch, "spectrogram must have 321 bins");
  if (v.cols() == 0) return;
  for (std::size_t k = 0; k < v.rows(); ++k) {
    double mean = 0.0;
    for (std::size_t t = 0; t < v.cols(); ++t) mean += v(k, t);
    mean /= double(v.cols());
    double m2 = 0.0;
    for (std::size_t t = 0; t < v.cols(); ++t)
      m2 += (v(k, t) - mean) * (v(k, t) - mean);
    bins_[k].Merge(double(v.cols()), mean, m2);
  }
}

void FeatureStatsAccumulator::AddVideo(const data::VideoClip& clip) {
  if (clip.pixels.empty()) return;
  double mean = 0.0;
  for (uint8_t p : clip.pixels) mean += p / 255.0;
  mean /= double(clip.pixels.size());
  double m2 = 0.0;
  for (uint8_t p : clip.pixels) m2 += (p / 255.0 - mean) * (p / 255.0 - mean);
  video_.Merge(double(clip.pixels.size()), mean, m2);
}

FeatureStats FeatureStatsAccumulator::Finish() const {
  if (bins_[0].count == 0.0 && video_.count == 0.0)
    throw Error(ErrorCode::kEmptySplit, "no training data for feature stats");
  FeatureStats s;
  if (bins_[0].count > 0.0) {
    for (const Moments& m : bins_) {
      s.audio_mean.push_back(m.mean);
      s.audio_std.push_back(std::max(std::sqrt(m.m2 / m.count), kStdFloor));
    }
  }
  if (video_.count > 0.0) {
    s.video_mean = video_.mean;
    s.video_std = std::max(std::sqrt(video_.m2 / video_.count), kStdFloor);
  }
  return s;
}

}  // namespace avse::model
