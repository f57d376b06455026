// include/avse/model/network.h

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

#ifndef AVSE_MODEL_NETWORK_H_
#define AVSE_MODEL_NETWORK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "avse/model/spec.h"
#include "avse/nn/layers.h"

namespace avse::model {

struct TraceEntry {
  std::string name;
  nn::Shape shape;
};

// The encoder / fusion / decoder network described by a ModelSpec.
template <typename T>
class Network {
 public:
  explicit Network(const ModelSpec& spec);

  const ModelSpec& spec() const noexcept { return spec_; }

  // Xavier weights, zero biases, unit batchnorm scale.
  void Init(uint64_t seed);

  // audio: [N, 1, 321, 20]; video: [N, 5, 128, 128]. Each must be present
  // exactly when the modality uses it (MissingModality, BadChunkShape).
  // Returns the [N, 1, 321, 20] mask. `trace`, if given, receives every
  // intermediate activation shape in evaluation order.
  nn::Tensor<T> Forward(const nn::Tensor<T>* audio, const nn::Tensor<T>* video,
                        nn::Mode mode, uint64_t dropout_seed = 0,
                        std::vector<TraceEntry>* trace = nullptr);

  // Overwrites every parameter gradient for the last Forward.
  void Backward(const nn::Tensor<T>& grad_out);

  std::vector<nn::Param<T>> Params();
  std::vector<nn::Buffer<T>> Buffers();

  // With skips disabled the decoder sees zeros in place of encoder outputs.
  void set_skips_enabled(bool on) noexcept { skips_enabled_ = on; }
  bool skips_enabled() const noexcept { return skips_enabled_; }

  void ClearCaches();

  // Forwarded to every batchnorm layer (see BatchNormLayer).
  void BeginBatchNormCalibration();
  void EndBatchNormCalibration();

 private:
  struct EncoderBlock {
    nn::Conv2dLayer<T> conv;
    nn::LeakyReluLayer<T> act;
    nn::BatchNormLayer<T> bn;
    nn::MaxPoolLayer<T> pool;
    nn::DropoutLayer<T> drop;
    bool pooled = false;
    bool dropped = false;
  };
  struct FusionBlock {
    nn::DenseLayer<T> dense;
    nn::LeakyReluLayer<T> act;
  };
  struct DecoderBlock {
    nn::ConvTranspose2dLayer<T> conv;
    nn::LeakyReluLayer<T> act;
    nn::BatchNormLayer<T> bn;
    nn::ReluLayer<T> relu;
    bool final = false;
  };

  nn::Tensor<T> EncoderForward(EncoderBlock& b, const nn::Tensor<T>& x,
                               nn::Mode mode, uint64_t seed);
  nn::Tensor<T> EncoderBackward(EncoderBlock& b, const nn::Tensor<T>& g,
                                bool need_input_grad);

  ModelSpec spec_;
  std::vector<EncoderBlock> audio_;
  std::vector<EncoderBlock> video_;
  std::vector<FusionBlock> fusion_;
  std::vector<DecoderBlock> decoder_;
  bool skips_enabled_ = true;
  std::size_t batch_ = 0;
  bool has_forward_ = false;
};

}  // namespace avse::model

#endif  // AVSE_MODEL_NETWORK_H_
