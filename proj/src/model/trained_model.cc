// src/model/trained_model.cc

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

#include "avse/model/trained_model.h"

#include <algorithm>

#include "avse/error.h"

namespace avse::model {

namespace {
constexpr std::size_t kInferenceBatch = 16;
}  // namespace

nn::Tensor<float> AudioBatch(std::span<const dsp::Grid<double>> chunks,
                             const FeatureStats& stats) {
  const std::size_t plane = std::size_t(kAudioBins) * kChunkFrames;
  nn::Tensor<float> t({chunks.size(), 1, std::size_t(kAudioBins),
                       std::size_t(kChunkFrames)});
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (chunks[i].rows() != std::size_t(kAudioBins) ||
        chunks[i].cols() != std::size_t(kChunkFrames))
      throw Error(ErrorCode::kBadChunkShape, "audio chunk must be 321x20");
    stats.NormalizeAudio(chunks[i], t.data() + i * plane);
  }
  return t;
}

nn::Tensor<float> VideoBatch(std::span<const data::VideoClip> chunks,
                             const FeatureStats& stats) {
  const std::size_t side = kVideoSide;
  const std::size_t volume = kVideoChannels * side * side;
  nn::Tensor<float> t({chunks.size(), std::size_t(kVideoChannels), side, side});
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (chunks[i].pixels.size() != volume)
      throw Error(ErrorCode::kBadChunkShape, "video chunk must be 5x128x128");
    stats.NormalizeVideo(chunks[i].pixels, t.data() + i * volume);
  }
  return t;
}

TrainedModel::TrainedModel(const ModelSpec& spec, FeatureStats stats)
    : stats_(std::move(stats)),
      network_(std::make_unique<Network<float>>(spec)) {
  if (UsesAudio(spec.modality) && !stats_.has_audio())
    throw Error(ErrorCode::kStatsMissing, "audio model without audio stats");
}

std::vector<dsp::Grid<double>> TrainedModel::EstimateChunks(
    std::span<const dsp::Grid<double>> audio_chunks,
    std::span<const data::VideoClip> video_chunks) const {
  const bool a = UsesAudio(modality()), v = UsesVideo(modality());
  if ((a && audio_chunks.empty()) || (v && video_chunks.empty()))
    throw Error(ErrorCode::kMissingModality, "model input missing");
  const std::size_t n = a ? audio_chunks.size() : video_chunks.size();
  if (a && v && video_chunks.size() != n)
    throw Error(ErrorCode::kBadChunkShape, "audio/video chunk counts differ");

  std::vector<dsp::Grid<double>> masks;
  masks.reserve(n);
  std::lock_guard<std::mutex> lock(mutex_);
  for (std::size_t begin = 0; begin < n; begin += kInferenceBatch) {
    const std::size_t count = std::min(kInferenceBatch, n - begin);
    nn::Tensor<float> audio, video;
    if (a) audio = AudioBatch(audio_chunks.subspan(begin, count), stats_);
    if (v) video = VideoBatch(video_chunks.subspan(begin, count), stats_);
    const nn::Tensor<float> out = network_->Forward(
        a ? &audio : nullptr, v ? &video : nullptr, nn::Mode::kInference);
    network_->ClearCaches();
    const std::size_t plane = std::size_t(kAudioBins) * kChunkFrames;
    for (std::size_t i = 0; i < count; ++i) {
      dsp::Grid<double> m(kAudioBins, kChunkFrames);
      std::copy_n(out.data() + i * plane, plane, m.data().begin());
      masks.push_back(std::move(m));
    }
  }
  return masks;
}

}  // namespace avse::model
