// src/data/manifest.cc

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

#include "avse/data/manifest.h"

#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "avse/error.h"

namespace avse::data {

std::string_view ConditionName(Condition c) {
  return c == Condition::kLombard ? "L" : "NL";
}

Condition ParseCondition(std::string_view name) {
  if (name == "L") return Condition::kLombard;
  if (name == "NL") return Condition::kNonLombard;
  throw Error(ErrorCode::kInvalidArgument,
              "condition must be L or NL, got '" + std::string(name) + "'");
}

void CheckUniqueKeys(const Manifest& manifest) {
  std::set<std::tuple<std::string, Condition, std::string>> seen;
  for (const ManifestEntry& e : manifest)
    if (!seen.emplace(e.speaker, e.condition, e.utterance).second)
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate manifest entry " + e.speaker + "/" +
                      std::string(ConditionName(e.condition)) + "/" +
                      e.utterance);
}

Manifest ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  const std::filesystem::path base = path.parent_path();
  Manifest manifest;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
    if (fields.size() != 5)
      throw Error(ErrorCode::kCorruptFile,
                  path.string() + ":" + std::to_string(number) +
                      ": expected 5 tab-separated fields");
    ManifestEntry e;
    e.speaker = fields[0];
    try {
      e.condition = ParseCondition(fields[1]);
    } catch (const Error&) {
      throw Error(ErrorCode::kCorruptFile,
                  path.string() + ":" + std::to_string(number) +
                      ": bad condition '" + fields[1] + "'");
    }
    e.utterance = fields[2];
    e.audio = fields[3];
    e.video = fields[4];
    if (e.audio.is_relative()) e.audio = base / e.audio;
    if (e.video.is_relative()) e.video = base / e.video;
    manifest.push_back(std::move(e));
  }
  CheckUniqueKeys(manifest);
  return manifest;
}

void WriteManifest(const Manifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const ManifestEntry& e : manifest)
    out << e.speaker << '\t' << ConditionName(e.condition) << '\t'
        << e.utterance << '\t' << e.audio.generic_string() << '\t'
        << e.video.generic_string() << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

const ManifestEntry* FindEntry(const Manifest& manifest,
                               std::string_view speaker, Condition condition,
                               std::string_view utterance) {
  for (const ManifestEntry& e : manifest)
    if (e.speaker == speaker && e.condition == condition &&
        e.utterance == utterance)
      return &e;
  return nullptr;
}

}  // namespace avse::data
