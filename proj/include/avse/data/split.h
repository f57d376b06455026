// include/avse/data/split.h

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

#ifndef AVSE_DATA_SPLIT_H_
#define AVSE_DATA_SPLIT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "avse/data/manifest.h"

namespace avse::data {

inline constexpr int kTestPerSpeaker = 10;
inline constexpr int kValidationPerSpeaker = 5;
inline constexpr int kFolds = 6;

struct SplitPlan {
  std::string name;
  Condition train_condition = Condition::kLombard;
  std::vector<ManifestEntry> train;
  std::vector<ManifestEntry> validation;
  std::vector<ManifestEntry> test;  // always condition L
  std::vector<double> snrs;
  uint64_t seed = 0;

  bool operator==(const SplitPlan&) const = default;
};

// Per speaker: 10 test, 5 validation and the rest for training, drawn by a
// seeded shuffle of the utterances recorded in both conditions. Training and
// validation use `train_condition`; the utterance ids depend only on the
// seed, so L and NL plans are aligned. Needs >= 16 such utterances per
// speaker (InsufficientUtterances).
SplitPlan MakeSeenSplit(const Manifest& manifest, Condition train_condition,
                        uint64_t seed);

// Speakers are shuffled and cut into 6 equal groups; fold f tests on every L
// utterance of group f and trains on the others, holding out 5 utterances
// per training speaker for validation. Throws BadSpeakerCount unless the
// speaker count is a positive multiple of 6.
std::vector<SplitPlan> MakeUnseenFolds(const Manifest& manifest,
                                       Condition train_condition,
                                       uint64_t seed);

// Same columns as the manifest, prefixed by a set tag (train, validation,
// test); plan fields go in leading "#key=value" lines.
void WriteSplit(const SplitPlan& plan, const std::filesystem::path& path);
SplitPlan ReadSplit(const std::filesystem::path& path);

// Sorted distinct speaker ids.
std::vector<std::string> Speakers(const std::vector<ManifestEntry>& entries);

}  // namespace avse::data

#endif  // AVSE_DATA_SPLIT_H_
