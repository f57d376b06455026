// src/model/spec.cc

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

#include "avse/model/spec.h"

#include "avse/error.h"

namespace avse::model {

namespace {

struct EncoderRow {
  int filters;
  int kernel;
  nn::Stride2 stride;
};

// Audio encoder L1..L6 and video encoder L1..L6 at full width.
constexpr EncoderRow kAudioRows[] = {
    {64, 5, {2, 2}},  {64, 4, {2, 1}},  {128, 4, {2, 2}},
    {128, 2, {2, 1}}, {128, 2, {2, 1}}, {128, 2, {2, 1}},
};
constexpr EncoderRow kVideoRows[] = {
    {128, 5, {1, 1}}, {128, 5, {1, 1}}, {256, 3, {1, 1}},
    {256, 3, {1, 1}}, {512, 3, {1, 1}}, {512, 3, {1, 1}},
};
constexpr int kFusionHidden = 1312;
constexpr int kBottleneckChannels = 128;

ActivationShape Strided(const ActivationShape& in, int filters,
                        nn::Stride2 s) {
  return {filters, nn::CeilDiv(in.height, s.h), nn::CeilDiv(in.width, s.w)};
}

}  // namespace

std::string ShapeString(const ActivationShape& s) {
  return std::to_string(s.height) + "x" + std::to_string(s.width) + "x" +
         std::to_string(s.channels);
}

int ModelSpec::audio_features() const {
  return audio_encoder.empty() ? 0 : int(audio_encoder.back().output.size());
}

int ModelSpec::video_features() const {
  return video_encoder.empty() ? 0 : int(video_encoder.back().output.size());
}

bool ModelSpec::operator==(const ModelSpec& o) const {
  return modality == o.modality && channel_divisor == o.channel_divisor &&
         leaky_alpha == o.leaky_alpha && dropout == o.dropout &&
         clip_max == o.clip_max;
}

void ModelSpec::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "inconsistent model: " + what);
  };
  auto check_chain = [&](const std::vector<ConvSpec>& layers,
                         ActivationShape input) {
    for (const ConvSpec& l : layers) {
      if (l.input != input) fail(l.name + " input " + ShapeString(l.input));
      if (l.in_channels != input.channels) fail(l.name + " channels");
      ActivationShape out = Strided(input, l.filters, l.stride);
      if (l.pool) out = {out.channels, out.height / 2, out.width / 2};
      if (l.output != out) fail(l.name + " output " + ShapeString(l.output));
      input = out;
    }
  };
  if (UsesAudio(modality) == audio_encoder.empty()) fail("audio encoder");
  if (UsesVideo(modality) == video_encoder.empty()) fail("video encoder");
  check_chain(audio_encoder, {1, kAudioBins, kChunkFrames});
  check_chain(video_encoder, {kVideoChannels, kVideoSide, kVideoSide});
  int width = fusion_input();
  for (const DenseSpec& d : fusion) {
    if (d.in_features != width) fail(d.name + " width");
    width = d.out_features;
  }
  if (std::size_t(width) != bottleneck.size()) fail("bottleneck size");
  ActivationShape x = bottleneck;
  for (std::size_t i = 0; i < decoder.size(); ++i) {
    const ConvSpec& l = decoder[i];
    if (l.input != x) fail(l.name + " input " + ShapeString(l.input));
    if (nn::CeilDiv(l.output.height, l.stride.h) != x.height ||
        nn::CeilDiv(l.output.width, l.stride.w) != x.width)
      fail(l.name + " unreachable output");
    x = l.output;
    for (const SkipSpec& s : skips) {
      if (s.after_decoder != int(i)) continue;
      const ActivationShape& e = audio_encoder.at(s.encoder_layer).output;
      if (e.height != x.height || e.width != x.width) fail("skip geometry");
      x.channels += e.channels;
    }
  }
  if (output() != ActivationShape{1, kAudioBins, kChunkFrames})
    fail("decoder output " + ShapeString(output()));
}

ModelSpec BuildModel(Modality modality, int channel_divisor,
                     double leaky_alpha, double dropout) {
  if (channel_divisor < 1 || 32 % channel_divisor != 0)
    throw Error(ErrorCode::kInvalidArgument,
                "channel divisor must divide 32, got " +
                    std::to_string(channel_divisor));
  if (!(leaky_alpha >= 0.0 && leaky_alpha < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "leaky_alpha must be in [0, 1)");
  if (!(dropout >= 0.0 && dropout < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "dropout must be in [0, 1)");
  const int d = channel_divisor;
  ModelSpec spec;
  spec.modality = modality;
  spec.channel_divisor = d;
  spec.leaky_alpha = leaky_alpha;
  spec.dropout = dropout;

  // The audio chain is built even for VO: the decoder mirrors its geometry.
  std::vector<ConvSpec> audio;
  ActivationShape x{1, kAudioBins, kChunkFrames};
  for (int i = 0; i < 6; ++i) {
    const EncoderRow& r = kAudioRows[i];
    ConvSpec l;
    l.name = "audio" + std::to_string(i + 1);
    l.in_channels = x.channels;
    l.filters = r.filters / d;
    l.kernel = {r.kernel, r.kernel};
    l.stride = r.stride;
    l.input = x;
    l.output = Strided(x, l.filters, r.stride);
    x = l.output;
    audio.push_back(l);
  }
  if (UsesAudio(modality)) spec.audio_encoder = audio;

  if (UsesVideo(modality)) {
    ActivationShape v{kVideoChannels, kVideoSide, kVideoSide};
    for (int i = 0; i < 6; ++i) {
      const EncoderRow& r = kVideoRows[i];
      ConvSpec l;
      l.name = "video" + std::to_string(i + 1);
      l.in_channels = v.channels;
      l.filters = r.filters / d;
      l.kernel = {r.kernel, r.kernel};
      l.stride = r.stride;
      l.pool = true;
      l.dropout = true;
      l.input = v;
      l.output = {l.filters, v.height / 2, v.width / 2};
      v = l.output;
      spec.video_encoder.push_back(l);
    }
  }

  spec.bottleneck = {kBottleneckChannels / d, audio.back().output.height,
                     audio.back().output.width};
  const int widths[] = {kFusionHidden / d, kFusionHidden / d,
                        int(spec.bottleneck.size())};
  int in = spec.fusion_input();
  for (int i = 0; i < 3; ++i) {
    spec.fusion.push_back({"fusion" + std::to_string(i + 1), in, widths[i]});
    in = widths[i];
  }

  if (UsesAudio(modality)) spec.skips = {{0, 4}, {2, 2}, {4, 0}};
  ActivationShape y = spec.bottleneck;
  for (int i = 0; i < 6; ++i) {
    const ConvSpec& mirror = audio[5 - i];
    ConvSpec l;
    l.name = "decoder" + std::to_string(i + 1);
    l.in_channels = y.channels;
    l.filters = mirror.in_channels;
    l.kernel = mirror.kernel;
    l.stride = mirror.stride;
    l.input = y;
    l.output = mirror.input;
    l.output.channels = l.filters;
    y = l.output;
    for (const SkipSpec& s : spec.skips)
      if (s.after_decoder == i) y.channels += audio[s.encoder_layer].filters;
    spec.decoder.push_back(l);
  }
  spec.Validate();
  return spec;
}

std::size_t CountParameters(const ModelSpec& spec) {
  std::size_t total = 0;
  auto conv = [&](const ConvSpec& l, bool batchnorm) {
    total += std::size_t(l.filters) * l.in_channels * l.kernel.h * l.kernel.w;
    total += l.filters;
    if (batchnorm) total += 2 * std::size_t(l.filters);
  };
  for (const ConvSpec& l : spec.audio_encoder) conv(l, true);
  for (const ConvSpec& l : spec.video_encoder) conv(l, true);
  for (const DenseSpec& d : spec.fusion)
    total += std::size_t(d.in_features) * d.out_features + d.out_features;
  for (std::size_t i = 0; i < spec.decoder.size(); ++i)
    conv(spec.decoder[i], i + 1 < spec.decoder.size());
  return total;
}

}  // namespace avse::model
