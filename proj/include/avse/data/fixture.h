// include/avse/data/fixture.h

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

#ifndef AVSE_DATA_FIXTURE_H_
#define AVSE_DATA_FIXTURE_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "avse/data/manifest.h"
#include "avse/data/video.h"
#include "avse/dsp/waveform.h"

namespace avse::data {

// Level difference of the pseudo-Lombard condition over the plain one.
inline constexpr double kFixtureLombardGainDb = 6.0;

struct FixtureOptions {
  int speakers = 6;
  int utterances = 20;
  uint64_t seed = 1;
};

// One synthetic utterance before it is written out.
struct FixtureUtterance {
  dsp::Waveform plain;    // condition NL
  dsp::Waveform lombard;  // condition L: tilted, +6 dB
  VideoClip video;
  std::vector<double> envelope;  // per video frame, in [0, 1]
};

// Harmonic "speech": syllable-like bursts of a speaker-specific voice with
// moving formants. Length is a whole number of 40 ms video frames, 2-3 s.
FixtureUtterance SynthesizeUtterance(int speaker, int utterance, uint64_t seed);

// Writes audio/<spk>_<cond>_<utt>.wav, video/<spk>_<cond>_<utt>.vfr and
// manifest.tsv (relative paths) under out_dir; returns the manifest with
// resolved paths. Needs >= 2 speakers and >= 16 utterances each.
Manifest GenerateFixtureCorpus(const FixtureOptions& options,
                               const std::filesystem::path& out_dir);

// Open-mouth height in pixels of a fixture video frame.
int MouthAperture(std::span<const uint8_t> frame, int height, int width);

}  // namespace avse::data

#endif  // AVSE_DATA_FIXTURE_H_
