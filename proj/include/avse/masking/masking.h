// include/avse/masking/masking.h

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

#ifndef AVSE_MASKING_MASKING_H_
#define AVSE_MASKING_MASKING_H_

#include <span>
#include <vector>

#include "avse/data/video.h"
#include "avse/dsp/grid.h"
#include "avse/dsp/stft.h"
#include "avse/model/modality.h"

namespace avse::masking {

inline constexpr double kDefaultClipMax = 10.0;
inline constexpr int kChunkFrames = 20;
inline constexpr int kChunkVideoFrames = kChunkFrames / data::kAudioFramesPerVideoFrame;
// Cells whose mixture magnitude falls below this are treated as silent.
inline constexpr double kSilentMagnitude = 1e-12;

struct Mask {
  dsp::Grid<double> values;
  double clip_max = kDefaultClipMax;

  std::size_t bins() const noexcept { return values.rows(); }
  std::size_t frames() const noexcept { return values.cols(); }
};

// A / R clipped to [0, clip_max]. Silent mixture cells (R < 1e-12) map to
// clip_max where A > 0 and to 0 otherwise.
Mask IdealAmplitudeMask(const dsp::MagnitudeSpectrogram& clean,
                        const dsp::MagnitudeSpectrogram& mixture,
                        double clip_max = kDefaultClipMax);

// Unclipped A / R; cells with R == 0 map to 0. clip_max is set to +inf.
Mask OracleAmplitudeMask(const dsp::MagnitudeSpectrogram& clean,
                         const dsp::MagnitudeSpectrogram& mixture);

dsp::ComplexSpectrogram ApplyMask(const Mask& mask,
                                  const dsp::ComplexSpectrogram& mixture);

// Anything that maps fixed-size chunks to masks: a trained network, or a stub
// in tests. audio_chunks hold raw (unnormalized) 321 x 20 mixture magnitudes
// and is empty for video-only estimators; video_chunks hold 5-frame clips and
// is empty for audio-only estimators.
class ChunkMaskEstimator {
 public:
  virtual ~ChunkMaskEstimator() = default;
  virtual model::Modality modality() const = 0;
  virtual std::vector<dsp::Grid<double>> EstimateChunks(
      std::span<const dsp::Grid<double>> audio_chunks,
      std::span<const data::VideoClip> video_chunks) const = 0;
};

// Splits the mixture magnitude into non-overlapping 20-frame chunks (the last
// one zero-padded), pairs each with 5 video frames and concatenates the
// estimated masks, trimmed to the utterance's frame count. Video frame v
// covers audio frames 4v .. 4v+3; a clip may differ from ceil(T / 4) frames
// by at most one and is padded by repeating its last frame.
Mask EstimateMask(const dsp::MagnitudeSpectrogram& mixture,
                  const data::VideoClip* video,
                  const ChunkMaskEstimator& estimator);

// Mask estimation, application to the noisy STFT and inverse STFT back to
// len(y) samples. video may be null for audio-only estimators.
dsp::Waveform EnhanceUtterance(const dsp::Waveform& y,
                               const data::VideoClip* video,
                               const ChunkMaskEstimator& estimator);

}  // namespace avse::masking

#endif  // AVSE_MASKING_MASKING_H_
