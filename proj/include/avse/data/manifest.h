// include/avse/data/manifest.h

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

#ifndef AVSE_DATA_MANIFEST_H_
#define AVSE_DATA_MANIFEST_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace avse::data {

enum class Condition { kLombard, kNonLombard };

// "L" / "NL".
std::string_view ConditionName(Condition c);
Condition ParseCondition(std::string_view name);

struct ManifestEntry {
  std::string speaker;
  Condition condition = Condition::kNonLombard;
  std::string utterance;
  std::filesystem::path audio;
  std::filesystem::path video;

  bool operator==(const ManifestEntry&) const = default;
};

using Manifest = std::vector<ManifestEntry>;

// Tab-separated: speaker, condition, utterance, audio path, video path.
// Relative paths are resolved against the manifest's directory. Throws
// CorruptFile on malformed lines and InvalidArgument on a repeated
// (speaker, condition, utterance) key.
Manifest ReadManifest(const std::filesystem::path& path);

// Paths are written as stored in the entries.
void WriteManifest(const Manifest& manifest, const std::filesystem::path& path);

void CheckUniqueKeys(const Manifest& manifest);

// The entry with the given key, or nullptr.
const ManifestEntry* FindEntry(const Manifest& manifest,
                               std::string_view speaker, Condition condition,
                               std::string_view utterance);

}  // namespace avse::data

#endif  // AVSE_DATA_MANIFEST_H_
