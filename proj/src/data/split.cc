// src/data/split.cc

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

#include "avse/data/split.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "avse/error.h"
#include "avse/mixture/mixture.h"

namespace avse::data {

namespace {

using Key = std::tuple<std::string, Condition, std::string>;
using Index = std::map<Key, const ManifestEntry*>;

Index BuildIndex(const Manifest& manifest) {
  CheckUniqueKeys(manifest);
  Index index;
  for (const ManifestEntry& e : manifest)
    index[{e.speaker, e.condition, e.utterance}] = &e;
  return index;
}

// Fisher-Yates with plain modulo draws, so the order does not depend on the
// standard library's distribution implementation.
template <typename T>
void Shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng() % i]);
}

// Utterance ids of `speaker` present in both conditions, sorted.
std::vector<std::string> PairedUtterances(const Manifest& manifest,
                                          const Index& index,
                                          const std::string& speaker) {
  std::set<std::string> ids;
  for (const ManifestEntry& e : manifest)
    if (e.speaker == speaker && e.condition == Condition::kLombard &&
        index.count({speaker, Condition::kNonLombard, e.utterance}))
      ids.insert(e.utterance);
  return {ids.begin(), ids.end()};
}

const ManifestEntry& Lookup(const Index& index, const std::string& speaker,
                            Condition c, const std::string& utterance) {
  return *index.at({speaker, c, utterance});
}

std::vector<double> DefaultSnrs() {
  return {mixture::kSnrGridDb.begin(), mixture::kSnrGridDb.end()};
}

}  // namespace

std::vector<std::string> Speakers(const std::vector<ManifestEntry>& entries) {
  std::set<std::string> s;
  for (const ManifestEntry& e : entries) s.insert(e.speaker);
  return {s.begin(), s.end()};
}

SplitPlan MakeSeenSplit(const Manifest& manifest, Condition train_condition,
                        uint64_t seed) {
  const Index index = BuildIndex(manifest);
  SplitPlan plan;
  plan.name = "seen-" + std::string(ConditionName(train_condition));
  plan.train_condition = train_condition;
  plan.snrs = DefaultSnrs();
  plan.seed = seed;
  std::mt19937_64 rng(seed);
  const int needed = kTestPerSpeaker + kValidationPerSpeaker + 1;
  for (const std::string& speaker : Speakers(manifest)) {
    std::vector<std::string> ids = PairedUtterances(manifest, index, speaker);
    if (int(ids.size()) < needed)
      throw Error(ErrorCode::kInsufficientUtterances,
                  "speaker " + speaker + " has " + std::to_string(ids.size()) +
                      " utterances in both conditions, needs " +
                      std::to_string(needed));
    Shuffle(ids, rng);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i < std::size_t(kTestPerSpeaker))
        plan.test.push_back(Lookup(index, speaker, Condition::kLombard, ids[i]));
      else if (i < std::size_t(kTestPerSpeaker + kValidationPerSpeaker))
        plan.validation.push_back(Lookup(index, speaker, train_condition, ids[i]));
      else
        plan.train.push_back(Lookup(index, speaker, train_condition, ids[i]));
    }
  }
  return plan;
}

std::vector<SplitPlan> MakeUnseenFolds(const Manifest& manifest,
                                       Condition train_condition,
                                       uint64_t seed) {
  const Index index = BuildIndex(manifest);
  std::vector<std::string> speakers = Speakers(manifest);
  if (speakers.empty() || speakers.size() % kFolds != 0)
    throw Error(ErrorCode::kBadSpeakerCount,
                std::to_string(speakers.size()) +
                    " speakers cannot form 6 equal folds");
  std::mt19937_64 rng(seed);
  Shuffle(speakers, rng);
  // Validation draws per speaker come from one stream in sorted speaker
  // order, so every fold (and both conditions) holds out the same ids.
  std::map<std::string, std::vector<std::string>> shuffled;
  for (const std::string& s : Speakers(manifest)) {
    std::vector<std::string> ids = PairedUtterances(manifest, index, s);
    if (int(ids.size()) < kValidationPerSpeaker + 1)
      throw Error(ErrorCode::kInsufficientUtterances,
                  "speaker " + s + " has too few paired utterances");
    Shuffle(ids, rng);
    shuffled[s] = std::move(ids);
  }
  const std::size_t group = speakers.size() / kFolds;
  std::vector<SplitPlan> folds;
  for (int f = 0; f < kFolds; ++f) {
    SplitPlan plan;
    plan.name = "unseen-" + std::string(ConditionName(train_condition)) +
                "-fold" + std::to_string(f + 1);
    plan.train_condition = train_condition;
    plan.snrs = DefaultSnrs();
    plan.seed = seed;
    std::set<std::string> test_speakers(speakers.begin() + f * group,
                                        speakers.begin() + (f + 1) * group);
    for (const auto& [speaker, ids] : shuffled) {
      if (test_speakers.count(speaker)) {
        for (const std::string& id : std::set<std::string>(ids.begin(), ids.end()))
          plan.test.push_back(Lookup(index, speaker, Condition::kLombard, id));
        continue;
      }
      for (std::size_t i = 0; i < ids.size(); ++i) {
        auto& set = i < std::size_t(kValidationPerSpeaker) ? plan.validation
                                                           : plan.train;
        set.push_back(Lookup(index, speaker, train_condition, ids[i]));
      }
    }
    folds.push_back(std::move(plan));
  }
  return folds;
}

void WriteSplit(const SplitPlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << "#name=" << plan.name << '\n'
      << "#train_condition=" << ConditionName(plan.train_condition) << '\n'
      << "#seed=" << plan.seed << '\n'
      << "#snrs=";
  for (std::size_t i = 0; i < plan.snrs.size(); ++i)
    out << (i ? "," : "") << plan.snrs[i];
  out << '\n';
  auto write = [&](const char* tag, const std::vector<ManifestEntry>& set) {
    for (const ManifestEntry& e : set)
      out << tag << '\t' << e.speaker << '\t' << ConditionName(e.condition)
          << '\t' << e.utterance << '\t' << e.audio.generic_string() << '\t'
          << e.video.generic_string() << '\n';
  };
  write("train", plan.train);
  write("validation", plan.validation);
  write("test", plan.test);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

SplitPlan ReadSplit(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  SplitPlan plan;
  std::string line;
  auto bad = [&](int number, const std::string& why) {
    return Error(ErrorCode::kCorruptFile,
                 path.string() + ":" + std::to_string(number) + ": " + why);
  };
  for (int number = 1; std::getline(in, line); ++number) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw bad(number, "bad header line");
      const std::string key = line.substr(1, eq - 1), value = line.substr(eq + 1);
      try {
        if (key == "name") {
          plan.name = value;
        } else if (key == "train_condition") {
          plan.train_condition = ParseCondition(value);
        } else if (key == "seed") {
          plan.seed = std::stoull(value);
        } else if (key == "snrs") {
          std::stringstream ss(value);
          for (std::string v; std::getline(ss, v, ',');) plan.snrs.push_back(std::stod(v));
        } else {
          throw bad(number, "unknown key " + key);
        }
      } catch (const std::logic_error&) {
        throw bad(number, "bad value for " + key);
      }
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, '\t');) f.push_back(x);
    if (f.size() != 6) throw bad(number, "expected 6 tab-separated fields");
    ManifestEntry e;
    e.speaker = f[1];
    try {
      e.condition = ParseCondition(f[2]);
    } catch (const Error&) {
      throw bad(number, "bad condition");
    }
    e.utterance = f[3];
    e.audio = f[4];
    e.video = f[5];
    if (f[0] == "train") plan.train.push_back(e);
    else if (f[0] == "validation") plan.validation.push_back(e);
    else if (f[0] == "test") plan.test.push_back(e);
    else throw bad(number, "unknown set " + f[0]);
  }
  return plan;
}

}  // namespace avse::data
