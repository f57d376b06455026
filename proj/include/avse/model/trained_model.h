// include/avse/model/trained_model.h

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

#ifndef AVSE_MODEL_TRAINED_MODEL_H_
#define AVSE_MODEL_TRAINED_MODEL_H_

#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "avse/masking/masking.h"
#include "avse/model/features.h"
#include "avse/model/network.h"
#include "avse/model/spec.h"

namespace avse::model {

struct TrainingMetadata {
  int epoch = 0;  // epoch of the kept snapshot, 1-based; 0 if untrained
  double validation_loss = std::nan("");
  uint64_t seed = 0;
  std::string train_condition;  // "L", "NL" or empty
};

// Normalized input tensors for a batch of chunks.
nn::Tensor<float> AudioBatch(std::span<const dsp::Grid<double>> chunks,
                             const FeatureStats& stats);
nn::Tensor<float> VideoBatch(std::span<const data::VideoClip> chunks,
                             const FeatureStats& stats);

// A network together with the statistics its inputs are normalized with.
// Inference through EstimateChunks is serialized internally and safe to call
// from several threads.
class TrainedModel : public masking::ChunkMaskEstimator {
 public:
  TrainedModel(const ModelSpec& spec, FeatureStats stats);
  TrainedModel(const TrainedModel&) = delete;
  TrainedModel& operator=(const TrainedModel&) = delete;

  const ModelSpec& spec() const noexcept { return network_->spec(); }
  const FeatureStats& stats() const noexcept { return stats_; }
  Network<float>& network() noexcept { return *network_; }

  Modality modality() const override { return spec().modality; }
  std::vector<dsp::Grid<double>> EstimateChunks(
      std::span<const dsp::Grid<double>> audio_chunks,
      std::span<const data::VideoClip> video_chunks) const override;

  TrainingMetadata metadata;

 private:
  FeatureStats stats_;
  std::unique_ptr<Network<float>> network_;
  mutable std::mutex mutex_;
};

}  // namespace avse::model

#endif  // AVSE_MODEL_TRAINED_MODEL_H_
