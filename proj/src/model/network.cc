// src/model/network.cc

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

#include "avse/model/network.h"

#include "avse/error.h"
#include "avse/seed.h"

namespace avse::model {

using nn::Mode;
using nn::Shape;
using nn::Tensor;

namespace {



template <typename T>
void CheckChunk(const Tensor<T>& t, const Shape& per_example,
                const char* what) {
  if (t.rank() != 4 || t.dim(0) == 0 || t.dim(1) != per_example[0] ||
      t.dim(2) != per_example[1] || t.dim(3) != per_example[2])
    throw Error(ErrorCode::kBadChunkShape,
                std::string(what) + " chunk has shape " +
                    nn::ShapeString(t.shape()));
}

Shape ToShape(std::size_t n, const ActivationShape& s) {
  return {n, std::size_t(s.channels), std::size_t(s.height),
          std::size_t(s.width)};
}

}  // namespace

template <typename T>
Network<T>::Network(const ModelSpec& spec) : spec_(spec) {
  spec_.Validate();
  auto encoder = [&](const std::vector<ConvSpec>& layers,
                     std::vector<EncoderBlock>& out) {
    for (const ConvSpec& l : layers) {
      EncoderBlock b{nn::Conv2dLayer<T>(l.in_channels, l.filters, l.kernel,
                                        l.stride),
                     nn::LeakyReluLayer<T>(spec_.leaky_alpha),
                     nn::BatchNormLayer<T>(l.filters),
                     nn::MaxPoolLayer<T>(),
                     nn::DropoutLayer<T>(spec_.dropout),
                     l.pool,
                     l.dropout};
      out.push_back(std::move(b));
    }
  };
  encoder(spec_.audio_encoder, audio_);
  encoder(spec_.video_encoder, video_);
  for (const DenseSpec& d : spec_.fusion)
    fusion_.push_back({nn::DenseLayer<T>(d.in_features, d.out_features),
                       nn::LeakyReluLayer<T>(spec_.leaky_alpha)});
  for (std::size_t i = 0; i < spec_.decoder.size(); ++i) {
    const ConvSpec& l = spec_.decoder[i];
    DecoderBlock b{nn::ConvTranspose2dLayer<T>(l.in_channels, l.filters,
                                               l.kernel, l.stride,
                                               l.output.height, l.output.width),
                   nn::LeakyReluLayer<T>(spec_.leaky_alpha),
                   nn::BatchNormLayer<T>(l.filters), nn::ReluLayer<T>(),
                   i + 1 == spec_.decoder.size()};
    decoder_.push_back(std::move(b));
  }
}

template <typename T>
void Network<T>::Init(uint64_t seed) {
  uint64_t k = 0;
  for (auto& b : audio_) b.conv.Init(DeriveSeed(seed, {++k}));
  for (auto& b : video_) b.conv.Init(DeriveSeed(seed, {++k}));
  for (auto& b : fusion_) b.dense.Init(DeriveSeed(seed, {++k}));
  for (auto& b : decoder_) b.conv.Init(DeriveSeed(seed, {++k}));
  auto reset = [](nn::BatchNormLayer<T>& bn) {
    bn.gamma.Fill(T{1});
    bn.beta.Fill(T{0});
    bn.running_mean.Fill(T{0});
    bn.running_var.Fill(T{1});
  };
  for (auto& b : audio_) reset(b.bn);
  for (auto& b : video_) reset(b.bn);
  for (auto& b : decoder_) reset(b.bn);
  ClearCaches();
}

template <typename T>
Tensor<T> Network<T>::EncoderForward(EncoderBlock& b, const Tensor<T>& x,
                                     Mode mode, uint64_t seed) {
  Tensor<T> y = b.bn.Forward(b.act.Forward(b.conv.Forward(x)), mode);
  if (b.pooled) y = b.pool.Forward(y);
  if (b.dropped) y = b.drop.Forward(y, mode, seed);
  return y;
}

template <typename T>
Tensor<T> Network<T>::EncoderBackward(EncoderBlock& b, const Tensor<T>& g,
                                      bool need_input_grad) {
  Tensor<T> d = g;
  if (b.dropped) d = b.drop.Backward(d);
  if (b.pooled) d = b.pool.Backward(d);
  d = b.act.Backward(b.bn.Backward(d));
  return b.conv.Backward(d, need_input_grad);
}

template <typename T>
Tensor<T> Network<T>::Forward(const Tensor<T>* audio, const Tensor<T>* video,
                              Mode mode, uint64_t dropout_seed,
                              std::vector<TraceEntry>* trace) {
  const bool wants_audio = UsesAudio(spec_.modality);
  const bool wants_video = UsesVideo(spec_.modality);
  if (wants_audio && audio == nullptr)
    throw Error(ErrorCode::kMissingModality, "model needs audio input");
  if (wants_video && video == nullptr)
    throw Error(ErrorCode::kMissingModality, "model needs video input");
  if (wants_audio)
    CheckChunk(*audio, {1, kAudioBins, kChunkFrames}, "audio");
  if (wants_video)
    CheckChunk(*video, {kVideoChannels, kVideoSide, kVideoSide}, "video");
  const std::size_t n = wants_audio ? audio->dim(0) : video->dim(0);
  if (wants_audio && wants_video && video->dim(0) != n)
    throw Error(ErrorCode::kBadChunkShape, "audio and video batch sizes differ");
  batch_ = n;
  auto record = [&](const std::string& name, const Tensor<T>& t) {
    if (trace) trace->push_back({name, t.shape()});
  };

  std::vector<Tensor<T>> encoded;  // audio encoder outputs, kept for skips
  std::vector<const Tensor<T>*> features;
  Tensor<T> audio_flat, video_flat;
  if (wants_audio) {
    record("audio_input", *audio);
    Tensor<T> a = *audio;
    for (std::size_t i = 0; i < audio_.size(); ++i) {
      a = EncoderForward(audio_[i], a, mode, 0);
      record(spec_.audio_encoder[i].name, a);
      encoded.push_back(a);
    }
    audio_flat = a.Reshaped({n, a.size() / n});
    record("audio_flat", audio_flat);
    features.push_back(&audio_flat);
  }
  if (wants_video) {
    record("video_input", *video);
    Tensor<T> v = *video;
    for (std::size_t i = 0; i < video_.size(); ++i) {
      v = EncoderForward(video_[i], v, mode, DeriveSeed(dropout_seed, {i}));
      record(spec_.video_encoder[i].name, v);
    }
    video_flat = v.Reshaped({n, v.size() / n});
    record("video_flat", video_flat);
    features.push_back(&video_flat);
  }

  Tensor<T> h = features.size() == 1 ? *features[0]
                                     : nn::ConcatFeatures<T>(features);
  record("fusion_input", h);
  for (std::size_t i = 0; i < fusion_.size(); ++i) {
    h = fusion_[i].act.Forward(fusion_[i].dense.Forward(h));
    record(spec_.fusion[i].name, h);
  }

  Tensor<T> y = h.Reshaped(ToShape(n, spec_.bottleneck));
  record("bottleneck", y);
  for (std::size_t i = 0; i < decoder_.size(); ++i) {
    DecoderBlock& b = decoder_[i];
    y = b.conv.Forward(y);
    y = b.final ? b.relu.Forward(y) : b.bn.Forward(b.act.Forward(y), mode);
    record(spec_.decoder[i].name, y);
    for (const SkipSpec& s : spec_.skips) {
      if (s.after_decoder != int(i)) continue;
      const Tensor<T>& e = encoded[s.encoder_layer];
      y = nn::ConcatChannels(y, skips_enabled_ ? e : Tensor<T>(e.shape()));
      record(spec_.decoder[i].name + "+skip", y);
    }
  }
  has_forward_ = true;
  return y;
}

template <typename T>
void Network<T>::Backward(const Tensor<T>& grad_out) {
  if (!has_forward_)
    throw Error(ErrorCode::kMissingForwardCache, "network backward before forward");
  const std::size_t n = batch_;
  std::vector<Tensor<T>> skip_grads(audio_.size());

  Tensor<T> g = grad_out;
  for (std::size_t i = decoder_.size(); i-- > 0;) {
    DecoderBlock& b = decoder_[i];
    for (auto it = spec_.skips.rbegin(); it != spec_.skips.rend(); ++it) {
      if (it->after_decoder != int(i)) continue;
      Tensor<T> main, skip;
      nn::SplitChannels(g, g.dim(1) - std::size_t(spec_.audio_encoder[it->encoder_layer].filters),
                        &main, &skip);
      if (skips_enabled_) skip_grads[it->encoder_layer] = std::move(skip);
      g = std::move(main);
    }
    g = b.final ? b.relu.Backward(g) : b.act.Backward(b.bn.Backward(g));
    g = b.conv.Backward(g, true);
  }

  g.Reshape({n, g.size() / n});
  for (std::size_t i = fusion_.size(); i-- > 0;)
    g = fusion_[i].dense.Backward(fusion_[i].act.Backward(g));

  const std::size_t audio_width = std::size_t(spec_.audio_features());
  const std::size_t video_width = std::size_t(spec_.video_features());
  Tensor<T> ga, gv;
  if (audio_width > 0 && video_width > 0) {
    ga = Tensor<T>({n, audio_width});
    gv = Tensor<T>({n, video_width});
    const std::size_t total = audio_width + video_width;
    for (std::size_t r = 0; r < n; ++r) {
      std::copy_n(g.data() + r * total, audio_width, ga.data() + r * audio_width);
      std::copy_n(g.data() + r * total + audio_width, video_width,
                  gv.data() + r * video_width);
    }
  } else if (audio_width > 0) {
    ga = std::move(g);
  } else {
    gv = std::move(g);
  }

  if (audio_width > 0) {
    ga.Reshape(ToShape(n, spec_.audio_encoder.back().output));
    for (std::size_t i = audio_.size(); i-- > 0;) {
      if (skip_grads[i].size() > 0)
        for (std::size_t k = 0; k < ga.size(); ++k) ga[k] += skip_grads[i][k];
      ga = EncoderBackward(audio_[i], ga, i > 0);
    }
  }
  if (video_width > 0) {
    gv.Reshape(ToShape(n, spec_.video_encoder.back().output));
    for (std::size_t i = video_.size(); i-- > 0;)
      gv = EncoderBackward(video_[i], gv, i > 0);
  }
}

template <typename T>
std::vector<nn::Param<T>> Network<T>::Params() {
  std::vector<nn::Param<T>> out;
  for (std::size_t i = 0; i < audio_.size(); ++i) {
    const std::string& name = spec_.audio_encoder[i].name;
    audio_[i].conv.CollectParams(name + ".conv", out);
    audio_[i].bn.CollectParams(name + ".bn", out);
  }
  for (std::size_t i = 0; i < video_.size(); ++i) {
    const std::string& name = spec_.video_encoder[i].name;
    video_[i].conv.CollectParams(name + ".conv", out);
    video_[i].bn.CollectParams(name + ".bn", out);
  }
  for (std::size_t i = 0; i < fusion_.size(); ++i)
    fusion_[i].dense.CollectParams(spec_.fusion[i].name, out);
  for (std::size_t i = 0; i < decoder_.size(); ++i) {
    const std::string& name = spec_.decoder[i].name;
    decoder_[i].conv.CollectParams(name + ".conv", out);
    if (!decoder_[i].final) decoder_[i].bn.CollectParams(name + ".bn", out);
  }
  return out;
}

template <typename T>
std::vector<nn::Buffer<T>> Network<T>::Buffers() {
  std::vector<nn::Buffer<T>> out;
  for (std::size_t i = 0; i < audio_.size(); ++i)
    audio_[i].bn.CollectBuffers(spec_.audio_encoder[i].name + ".bn", out);
  for (std::size_t i = 0; i < video_.size(); ++i)
    video_[i].bn.CollectBuffers(spec_.video_encoder[i].name + ".bn", out);
  for (std::size_t i = 0; i < decoder_.size(); ++i)
    if (!decoder_[i].final)
      decoder_[i].bn.CollectBuffers(spec_.decoder[i].name + ".bn", out);
  return out;
}

template <typename T>
void Network<T>::BeginBatchNormCalibration() {
  for (auto& b : audio_) b.bn.BeginCalibration();
  for (auto& b : video_) b.bn.BeginCalibration();
  for (auto& b : decoder_)
    if (!b.final) b.bn.BeginCalibration();
}

template <typename T>
void Network<T>::EndBatchNormCalibration() {
  for (auto& b : audio_) b.bn.EndCalibration();
  for (auto& b : video_) b.bn.EndCalibration();
  for (auto& b : decoder_)
    if (!b.final) b.bn.EndCalibration();
}

template <typename T>
void Network<T>::ClearCaches() {
  auto clear = [](EncoderBlock& b) {
    b.conv.ClearCache();
    b.act.ClearCache();
    b.bn.ClearCache();
    b.pool.ClearCache();
    b.drop.ClearCache();
  };
  for (auto& b : audio_) clear(b);
  for (auto& b : video_) clear(b);
  for (auto& b : fusion_) {
    b.dense.ClearCache();
    b.act.ClearCache();
  }
  for (auto& b : decoder_) {
    b.conv.ClearCache();
    b.act.ClearCache();
    b.bn.ClearCache();
    b.relu.ClearCache();
  }
  has_forward_ = false;
}

template class Network<float>;
template class Network<double>;

}  // namespace avse::model
