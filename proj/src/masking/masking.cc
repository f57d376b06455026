// src/masking/masking.cc

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

#include "avse/masking/masking.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "avse/error.h"

namespace avse::masking {

namespace {

void CheckSameShape(const dsp::Grid<double>& a, const dsp::Grid<double>& b,
                    const char* what) {
  if (!a.same_shape(b))
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

}  // namespace

Mask IdealAmplitudeMask(const dsp::MagnitudeSpectrogram& clean,
                        const dsp::MagnitudeSpectrogram& mixture,
                        double clip_max) {
  CheckSameShape(clean.values, mixture.values, "IdealAmplitudeMask");
  if (!(clip_max >= 0.0) || !std::isfinite(clip_max))
    throw Error(ErrorCode::kInvalidArgument, "clip_max must be finite, >= 0");
  Mask m{dsp::Grid<double>(clean.bins(), clean.frames()), clip_max};
  const auto& a = clean.values.data();
  const auto& r = mixture.values.data();
  auto& out = m.values.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (r[i] < kSilentMagnitude)
      out[i] = a[i] > 0.0 ? clip_max : 0.0;
    else
      out[i] = std::clamp(a[i] / r[i], 0.0, clip_max);
  }
  return m;
}

Mask OracleAmplitudeMask(const dsp::MagnitudeSpectrogram& clean,
                         const dsp::MagnitudeSpectrogram& mixture) {
  CheckSameShape(clean.values, mixture.values, "OracleAmplitudeMask");
  Mask m{dsp::Grid<double>(clean.bins(), clean.frames()),
         std::numeric_limits<double>::infinity()};
  const auto& a = clean.values.data();
  const auto& r = mixture.values.data();
  auto& out = m.values.data();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = r[i] > 0.0 ? a[i] / r[i] : 0.0;
  return m;
}

dsp::ComplexSpectrogram ApplyMask(const Mask& mask,
                                  const dsp::ComplexSpectrogram& mixture) {
  if (mask.bins() != mixture.bins() || mask.frames() != mixture.frames())
    throw Error(ErrorCode::kShapeMismatch, "mask and spectrogram shapes differ");
  dsp::ComplexSpectrogram out = mixture;
  const auto& m = mask.values.data();
  auto& v = out.values.data();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= m[i];
  return out;
}

Mask EstimateMask(const dsp::MagnitudeSpectrogram& mixture,
                  const data::VideoClip* video,
                  const ChunkMaskEstimator& estimator) {
  const model::Modality modality = estimator.modality();
  const bool need_video = model::UsesVideo(modality);
  const bool need_audio = model::UsesAudio(modality);
  if (need_video && video == nullptr)
    throw Error(ErrorCode::kMissingModality,
                std::string(model::ModalityName(modality)) +
                    " estimator needs a video clip");

  const std::size_t bins = mixture.bins();
  const std::size_t frames = mixture.frames();
  const std::size_t chunks = (frames + kChunkFrames - 1) / kChunkFrames;

  if (need_video) {
    const std::size_t expected =
        (frames + data::kAudioFramesPerVideoFrame - 1) /
        data::kAudioFramesPerVideoFrame;
    const std::size_t have = video->num_frames();
    const std::size_t diff = have > expected ? have - expected : expected - have;
    if (have == 0 || diff > 1)
      throw Error(ErrorCode::kVideoAudioLengthMismatch,
                  "video has " + std::to_string(have) + " frames, audio needs " +
                      std::to_string(expected));
  }

  std::vector<dsp::Grid<double>> audio_chunks;
  std::vector<data::VideoClip> video_chunks;
  for (std::size_t c = 0; c < chunks; ++c) {
    if (need_audio) {
      dsp::Grid<double> chunk(bins, kChunkFrames, 0.0);
      for (std::size_t k = 0; k < bins; ++k)
        for (std::size_t l = 0; l < kChunkFrames; ++l) {
          const std::size_t src = c * kChunkFrames + l;
          if (src < frames) chunk(k, l) = mixture.values(k, src);
        }
      audio_chunks.push_back(std::move(chunk));
    }
    if (need_video) {
      data::VideoClip clip;
      clip.height = video->height;
      clip.width = video->width;
      clip.pixels.reserve(kChunkVideoFrames * video->frame_size());
      for (std::size_t v = 0; v < kChunkVideoFrames; ++v) {
        const std::size_t src =
            std::min(c * kChunkVideoFrames + v, video->num_frames() - 1);
        const auto f = video->frame(src);
        clip.pixels.insert(clip.pixels.end(), f.begin(), f.end());
      }
      video_chunks.push_back(std::move(clip));
    }
  }

  const auto masks = estimator.EstimateChunks(audio_chunks, video_chunks);
  if (masks.size() != chunks)
    throw Error(ErrorCode::kBadChunkShape, "estimator returned wrong chunk count");

  Mask out{dsp::Grid<double>(bins, frames), kDefaultClipMax};
  for (std::size_t c = 0; c < chunks; ++c) {
    const auto& m = masks[c];
    if (m.rows() != bins || m.cols() != static_cast<std::size_t>(kChunkFrames))
      throw Error(ErrorCode::kBadChunkShape, "estimated mask is not 321x20");
    for (std::size_t k = 0; k < bins; ++k)
      for (std::size_t l = 0; l < kChunkFrames; ++l) {
        const std::size_t dst = c * kChunkFrames + l;
        if (dst < frames) out.values(k, dst) = m(k, l);
      }
  }
  return out;
}

dsp::Waveform EnhanceUtterance(const dsp::Waveform& y,
                               const data::VideoClip* video,
                               const ChunkMaskEstimator& estimator) {
  const auto spec = dsp::Stft(y);
  const Mask mask = EstimateMask(dsp::Magnitude(spec), video, estimator);
  return dsp::Istft(ApplyMask(mask, spec), y.size(), y.sample_rate);
}

}  // namespace avse::masking
