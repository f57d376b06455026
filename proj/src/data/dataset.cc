// src/data/dataset.cc

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

#include "avse/data/dataset.h"

#include <algorithm>
#include <random>

#include "avse/dsp/stft.h"
#include "avse/dsp/wav.h"
#include "avse/error.h"
#include "avse/masking/masking.h"
#include "avse/mixture/mixture.h"
#include "avse/model/trained_model.h"
#include "avse/seed.h"

namespace avse::data {

namespace {

constexpr std::size_t kChunk = masking::kChunkFrames;
constexpr std::size_t kVideoChunk = masking::kChunkVideoFrames;

uint64_t EntryHash(const ManifestEntry& e) {
  return HashString(e.speaker + '\x1f' + std::string(ConditionName(e.condition)) +
                    '\x1f' + e.utterance);
}

dsp::Grid<float> ToFloat(const dsp::Grid<double>& g) {
  dsp::Grid<float> f(g.rows(), g.cols());
  std::transform(g.data().begin(), g.data().end(), f.data().begin(),
                 [](double v) { return float(v); });
  return f;
}

}  // namespace

std::vector<Utterance> LoadUtterances(std::span<const ManifestEntry> entries,
                                      bool with_video) {
  std::vector<Utterance> out;
  out.reserve(entries.size());
  for (const ManifestEntry& e : entries) {
    Utterance u{e, dsp::PeakNormalize(dsp::ReadWav(e.audio)), {}};
    if (with_video) u.video = ReadVideoFrames(e.video);
    out.push_back(std::move(u));
  }
  return out;
}

std::size_t NoiseOffset(const ManifestEntry& entry, std::size_t clean_length,
                        std::size_t noise_length, NoiseOffsets policy,
                        uint64_t seed, int epoch) {
  if (noise_length < clean_length)
    throw Error(ErrorCode::kNoiseTooShort, "noise shorter than utterance");
  const uint64_t range = noise_length - clean_length + 1;
  const uint64_t s = policy == NoiseOffsets::kFixed
                         ? DeriveSeed(seed, {EntryHash(entry)})
                         : DeriveSeed(seed, {EntryHash(entry), uint64_t(epoch) + 1});
  return std::size_t(s % range);
}

VideoClip VideoChunk(const VideoClip& clip, std::size_t first) {
  if (clip.num_frames() == 0)
    throw Error(ErrorCode::kMissingModality, "empty video clip");
  VideoClip out;
  out.height = clip.height;
  out.width = clip.width;
  out.pixels.reserve(kVideoChunk * clip.frame_size());
  for (std::size_t f = 0; f < kVideoChunk; ++f) {
    const auto frame = clip.frame(std::min(first + f, clip.num_frames() - 1));
    out.pixels.insert(out.pixels.end(), frame.begin(), frame.end());
  }
  return out;
}

ChunkDataset::ChunkDataset(std::vector<Utterance> utterances,
                           const dsp::Waveform& noise, std::vector<double> snrs,
                           model::Modality modality, NoiseOffsets offsets,
                           uint64_t seed, double clip_max)
    : utterances_(std::move(utterances)),
      noise_(&noise),
      snrs_(std::move(snrs)),
      modality_(modality),
      offsets_(offsets),
      seed_(seed),
      clip_max_(clip_max) {
  if (snrs_.empty()) throw Error(ErrorCode::kInvalidArgument, "no SNRs given");
  const dsp::StftParams params = dsp::StftParams::Default();
  for (uint32_t u = 0; u < utterances_.size(); ++u) {
    const Utterance& utt = utterances_[u];
    if (model::UsesVideo(modality_) && utt.video.num_frames() == 0)
      throw Error(ErrorCode::kMissingModality,
                  "no video loaded for " + utt.entry.utterance);
    const std::size_t frames = params.NumFrames(utt.clean.size());
    for (uint32_t s = 0; s < snrs_.size(); ++s)
      for (uint32_t c = 0; c < frames / kChunk; ++c) refs_.push_back({u, s, c});
  }
}

void ChunkDataset::PrepareEpoch(int epoch) {
  if (epoch == epoch_) return;
  if (offsets_ == NoiseOffsets::kFixed && epoch_ >= 0) {
    epoch_ = epoch;
    return;
  }
  mixtures_.clear();
  targets_.clear();
  mixtures_.reserve(utterances_.size() * snrs_.size());
  targets_.reserve(utterances_.size() * snrs_.size());
  for (const Utterance& u : utterances_) {
    const std::size_t offset = NoiseOffset(u.entry, u.clean.size(), noise_->size(),
                                           offsets_, seed_, epoch);
    const auto clean_mag = dsp::Magnitude(dsp::Stft(u.clean));
    for (double snr : snrs_) {
      const auto mix = mixture::MixAtSnr(u.clean, *noise_, snr, offset);
      const auto mix_mag = dsp::Magnitude(dsp::Stft(mix.mixture));
      targets_.push_back(
          ToFloat(masking::IdealAmplitudeMask(clean_mag, mix_mag, clip_max_).values));
      mixtures_.push_back(ToFloat(mix_mag.values));
    }
  }
  epoch_ = epoch;
}

std::vector<std::size_t> ChunkDataset::Order(int epoch, bool shuffle) const {
  std::vector<std::size_t> order(refs_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (shuffle) {
    std::mt19937_64 rng(DeriveSeed(seed_, {0x5f0ffe, uint64_t(epoch)}));
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng() % i]);
  }
  return order;
}

Batch ChunkDataset::MakeBatch(std::span<const std::size_t> chunks,
                              const model::FeatureStats& stats) const {
  if (epoch_ < 0)
    throw Error(ErrorCode::kInvalidArgument, "PrepareEpoch was not called");
  const bool audio = model::UsesAudio(modality_);
  const bool video = model::UsesVideo(modality_);
  if (audio && !stats.has_audio())
    throw Error(ErrorCode::kStatsMissing, "audio feature statistics missing");
  const std::size_t n = chunks.size();
  const std::size_t bins = dsp::kNumBins;
  Batch b;
  b.target = nn::Tensor<float>({n, 1, bins, kChunk});
  std::vector<dsp::Grid<double>> audio_chunks;
  std::vector<VideoClip> video_chunks;
  for (std::size_t i = 0; i < n; ++i) {
    const Ref& r = refs_.at(chunks[i]);
    const std::size_t slot = std::size_t(r.utterance) * snrs_.size() + r.snr;
    const std::size_t first = std::size_t(r.chunk) * kChunk;
    const dsp::Grid<float>& target = targets_[slot];
    for (std::size_t k = 0; k < bins; ++k)
      for (std::size_t t = 0; t < kChunk; ++t)
        b.target.data()[(i * bins + k) * kChunk + t] = target(k, first + t);
    if (audio) {
      const dsp::Grid<float>& mix = mixtures_[slot];
      dsp::Grid<double> chunk(bins, kChunk);
      for (std::size_t k = 0; k < bins; ++k)
        for (std::size_t t = 0; t < kChunk; ++t) chunk(k, t) = mix(k, first + t);
      audio_chunks.push_back(std::move(chunk));
    }
    if (video)
      video_chunks.push_back(
          VideoChunk(utterances_[r.utterance].video, std::size_t(r.chunk) * kVideoChunk));
  }
  if (audio) b.audio = model::AudioBatch(audio_chunks, stats);
  if (video) b.video = model::VideoBatch(video_chunks, stats);
  return b;
}

void ChunkDataset::Accumulate(model::FeatureStatsAccumulator& acc) const {
  if (epoch_ < 0)
    throw Error(ErrorCode::kInvalidArgument, "PrepareEpoch was not called");
  for (const dsp::Grid<float>& m : mixtures_) {
    dsp::MagnitudeSpectrogram mag{dsp::Grid<double>(m.rows(), m.cols())};
    std::copy(m.data().begin(), m.data().end(), mag.values.data().begin());
    acc.AddAudio(mag);
  }
  if (model::UsesVideo(modality_))
    for (const Utterance& u : utterances_) acc.AddVideo(u.video);
}

}  // namespace avse::data
