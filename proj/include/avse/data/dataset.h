// include/avse/data/dataset.h

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

#ifndef AVSE_DATA_DATASET_H_
#define AVSE_DATA_DATASET_H_

#include <cstdint>
#include <span>
#include <vector>

#include "avse/data/manifest.h"
#include "avse/data/video.h"
#include "avse/dsp/grid.h"
#include "avse/dsp/waveform.h"
#include "avse/model/features.h"
#include "avse/model/modality.h"
#include "avse/nn/tensor.h"

namespace avse::data {

// A loaded utterance; the clean waveform is peak-normalized.
struct Utterance {
  ManifestEntry entry;
  dsp::Waveform clean;
  VideoClip video;  // empty when not loaded
};

std::vector<Utterance> LoadUtterances(std::span<const ManifestEntry> entries,
                                      bool with_video);

enum class NoiseOffsets { kFixed, kRandom };

// Offset of the noise segment mixed with `entry`. Fixed offsets depend only
// on (seed, speaker, condition, utterance); random ones also on the epoch.
std::size_t NoiseOffset(const ManifestEntry& entry, std::size_t clean_length,
                        std::size_t noise_length, NoiseOffsets policy,
                        uint64_t seed, int epoch);

// The five frames starting at `first`, repeating the last frame past the end.
VideoClip VideoChunk(const VideoClip& clip, std::size_t first);

struct Batch {
  nn::Tensor<float> audio;   // [B, 1, 321, 20] normalized, empty for VO
  nn::Tensor<float> video;   // [B, 5, 128, 128] normalized, empty for AO
  nn::Tensor<float> target;  // [B, 1, 321, 20] clipped ideal amplitude masks
  std::size_t size() const { return target.dim(0); }
};

// Every complete 20-frame chunk of every utterance mixed at every SNR.
// PrepareEpoch synthesizes the mixtures and targets for one epoch; chunk
// indices then address (utterance, snr, chunk) triples in a fixed order.
class ChunkDataset {
 public:
  ChunkDataset(std::vector<Utterance> utterances, const dsp::Waveform& noise,
               std::vector<double> snrs, model::Modality modality,
               NoiseOffsets offsets, uint64_t seed, double clip_max = 10.0);

  void PrepareEpoch(int epoch);
  std::size_t num_chunks() const noexcept { return refs_.size(); }
  std::size_t num_utterances() const noexcept { return utterances_.size(); }

  // Chunk indices for the epoch, shuffled by (seed, epoch) when asked.
  std::vector<std::size_t> Order(int epoch, bool shuffle) const;

  // Throws StatsMissing when the modality needs audio statistics that
  // `stats` lacks.
  Batch MakeBatch(std::span<const std::size_t> chunks,
                  const model::FeatureStats& stats) const;

  // Mixture magnitudes (all frames) and video pixels of the prepared epoch.
  void Accumulate(model::FeatureStatsAccumulator& acc) const;

  const dsp::Grid<float>& target(std::size_t utterance, std::size_t snr) const {
    return targets_[utterance * snrs_.size() + snr];
  }

 private:
  struct Ref {
    uint32_t utterance, snr, chunk;
  };
  std::vector<Utterance> utterances_;
  const dsp::Waveform* noise_;
  std::vector<double> snrs_;
  model::Modality modality_;
  NoiseOffsets offsets_;
  uint64_t seed_;
  double clip_max_;
  int epoch_ = -1;
  std::vector<Ref> refs_;
  std::vector<dsp::Grid<float>> mixtures_;  // utterance-major, then SNR
  std::vector<dsp::Grid<float>> targets_;
};

}  // namespace avse::data

#endif  // AVSE_DATA_DATASET_H_
