// include/avse/model/spec.h

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

#ifndef AVSE_MODEL_SPEC_H_
#define AVSE_MODEL_SPEC_H_

#include <cstddef>
#include <string>
#include <vector>

#include "avse/model/modality.h"
#include "avse/nn/ops.h"

namespace avse::model {

inline constexpr int kAudioBins = 321;
inline constexpr int kChunkFrames = 20;
inline constexpr int kVideoChannels = 5;
inline constexpr int kVideoSide = 128;

// Channels x height x width of one activation, batch axis omitted.
struct ActivationShape {
  int channels = 0, height = 0, width = 0;
  std::size_t size() const {
    return std::size_t(channels) * std::size_t(height) * std::size_t(width);
  }
  bool operator==(const ActivationShape&) const = default;
};

std::string ShapeString(const ActivationShape& s);

struct ConvSpec {
  std::string name;
  int in_channels = 0;
  int filters = 0;
  nn::Kernel2 kernel;
  nn::Stride2 stride;
  ActivationShape input, output;  // output after pooling, if any
  bool pool = false;
  bool dropout = false;
};

struct DenseSpec {
  std::string name;
  int in_features = 0;
  int out_features = 0;
};

// Decoder layer `after_decoder` (0-based) has its output concatenated with
// the output of audio encoder layer `encoder_layer` along channels.
struct SkipSpec {
  int after_decoder = 0;
  int encoder_layer = 0;
};

// Fully resolved network description. `channel_divisor` scales every hidden
// width (filters and dense units) down for desk-scale runs; 1 is the full
// network.
struct ModelSpec {
  Modality modality = Modality::kAudioVisual;
  int channel_divisor = 1;
  double leaky_alpha = 0.2;
  double dropout = 0.25;
  double clip_max = 10.0;

  std::vector<ConvSpec> audio_encoder;  // empty for VO
  std::vector<ConvSpec> video_encoder;  // empty for AO
  std::vector<DenseSpec> fusion;
  ActivationShape bottleneck;           // reshaped fusion output
  std::vector<ConvSpec> decoder;        // transposed convolutions
  std::vector<SkipSpec> skips;

  int audio_features() const;  // flattened audio encoder output, 0 if absent
  int video_features() const;
  int fusion_input() const { return audio_features() + video_features(); }
  ActivationShape output() const { return decoder.back().output; }

  // Throws InvalidArgument when the chain is not self-consistent.
  void Validate() const;
  bool operator==(const ModelSpec& o) const;
};

// channel_divisor must divide 64.
ModelSpec BuildModel(Modality modality, int channel_divisor = 1,
                     double leaky_alpha = 0.2, double dropout = 0.25);

// Weights, biases and batchnorm affine parameters.
std::size_t CountParameters(const ModelSpec& spec);

}  // namespace avse::model

#endif  // AVSE_MODEL_SPEC_H_
