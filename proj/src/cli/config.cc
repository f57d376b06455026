// src/cli/config.cc

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

#include "avse/cli/config.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "avse/data/split.h"
#include "avse/error.h"

namespace avse::cli {

namespace {

[[noreturn]] void Fail(const std::string& msg) { throw Error(ErrorCode::kConfigError, msg); }

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    Fail(key + ": not a number: '" + v + "'");
  return out;
}

std::vector<double> ParseList(const std::string& key, std::string v) {
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') Fail(key + ": unbalanced brackets");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (item.empty()) Fail(key + ": empty list element");
    out.push_back(ParseNumber<double>(key, item));
  }
  return out;
}

bool ParseBoolChoice(const std::string& key, const std::string& v,
                     const char* when_false, const char* when_true) {
  if (v == when_false) return false;
  if (v == when_true) return true;
  Fail(key + ": expected " + when_false + " or " + when_true + ", got '" + v + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> setters = {
      {"sample_rate", [](auto& c, auto& v) { c.sample_rate = ParseNumber<int>("sample_rate", v); }},
      {"n_fft", [](auto& c, auto& v) { c.n_fft = ParseNumber<int>("n_fft", v); }},
      {"hop", [](auto& c, auto& v) { c.hop = ParseNumber<int>("hop", v); }},
      {"clip_max", [](auto& c, auto& v) { c.clip_max = ParseNumber<double>("clip_max", v); }},
      {"snrs", [](auto& c, auto& v) { c.snrs = ParseList("snrs", v); }},
      {"epochs", [](auto& c, auto& v) { c.epochs = ParseNumber<int>("epochs", v); }},
      {"batch", [](auto& c, auto& v) { c.batch = ParseNumber<int>("batch", v); }},
      {"lr", [](auto& c, auto& v) { c.lr = ParseNumber<double>("lr", v); }},
      {"lr_halving",
       [](auto& c, auto& v) { c.halve_against_best = ParseBoolChoice("lr_halving", v, "previous", "best"); }},
      {"bn_calibration_batches",
       [](auto& c, auto& v) {
         c.bn_calibration_batches = ParseNumber<int>("bn_calibration_batches", v);
       }},
      {"leaky_alpha", [](auto& c, auto& v) { c.leaky_alpha = ParseNumber<double>("leaky_alpha", v); }},
      {"dropout", [](auto& c, auto& v) { c.dropout = ParseNumber<double>("dropout", v); }},
      {"channel_divisor",
       [](auto& c, auto& v) { c.channel_divisor = ParseNumber<int>("channel_divisor", v); }},
      {"seed", [](auto& c, auto& v) { c.seed = ParseNumber<uint64_t>("seed", v); }},
      {"modality",
       [](auto& c, auto& v) {
         if (v != "AV" && v != "AO" && v != "VO") Fail("modality: expected AV, AO or VO");
         c.modality = model::ParseModality(v);
       }},
      {"train_condition",
       [](auto& c, auto& v) {
         c.train_condition = ParseBoolChoice("train_condition", v, "L", "NL")
                                 ? data::Condition::kNonLombard
                                 : data::Condition::kLombard;
       }},
      {"split",
       [](auto& c, auto& v) {
         c.split = ParseBoolChoice("split", v, "seen", "unseen") ? SplitKind::kUnseen
                                                                 : SplitKind::kSeen;
       }},
      {"fold", [](auto& c, auto& v) { c.fold = ParseNumber<int>("fold", v); }},
      {"pesq_command", [](auto& c, auto& v) { c.pesq_command = v; }},
      {"pesq_mode", [](auto& c, auto& v) { c.pesq_mode = v; }},
      {"fixture_speakers",
       [](auto& c, auto& v) { c.fixture_speakers = ParseNumber<int>("fixture_speakers", v); }},
      {"fixture_utterances",
       [](auto& c, auto& v) { c.fixture_utterances = ParseNumber<int>("fixture_utterances", v); }},
      {"data_dir", [](auto& c, auto& v) { c.data_dir = v; }},
      {"manifest", [](auto& c, auto& v) { c.manifest = v; }},
      {"work_dir", [](auto& c, auto& v) { c.work_dir = v; }},
  };
  return setters;
}

std::string ConditionTag(data::Condition c) {
  return c == data::Condition::kLombard ? "l" : "nl";
}

}  // namespace

std::filesystem::path ExperimentConfig::manifest_path() const {
  return manifest.empty() ? data_dir / "manifest.tsv" : manifest;
}

void ExperimentConfig::Validate() const {
  if (sample_rate != 16000) Fail("sample_rate: only 16000 is supported");
  if (n_fft != 640) Fail("n_fft: only 640 is supported");
  if (hop != 160) Fail("hop: only 160 is supported");
  if (!(clip_max > 0 && std::isfinite(clip_max))) Fail("clip_max: must be positive");
  if (snrs.empty()) Fail("snrs: empty SNR grid");
  std::set<double> unique;
  for (double s : snrs) {
    if (!(std::abs(s) <= 60)) Fail("snrs: values must lie in [-60, 60] dB");
    if (!unique.insert(s).second) Fail("snrs: duplicate value");
  }
  if (epochs < 1 || epochs > 100000) Fail("epochs: must be in [1, 100000]");
  if (batch < 2 || batch > 65536) Fail("batch: must be in [2, 65536]");
  if (bn_calibration_batches < 0)
    Fail("bn_calibration_batches: must be >= 0");
  if (!(lr > 0 && lr <= 1)) Fail("lr: must be in (0, 1]");
  if (!(leaky_alpha >= 0 && leaky_alpha < 1)) Fail("leaky_alpha: must be in [0, 1)");
  if (!(dropout >= 0 && dropout < 1)) Fail("dropout: must be in [0, 1)");
  if (channel_divisor < 1 || 32 % channel_divisor != 0)
    Fail("channel_divisor: must divide 32");
  if (fold < 0 || fold >= data::kFolds) Fail("fold: must be in [0, 5]");
  if (pesq_mode != "wb" && pesq_mode != "nb") Fail("pesq_mode: expected wb or nb");
  if (fixture_speakers < 2) Fail("fixture_speakers: need at least 2");
  if (fixture_utterances < 16) Fail("fixture_utterances: need at least 16");
  if (data_dir.empty()) Fail("data_dir: empty path");
  if (work_dir.empty()) Fail("work_dir: empty path");
}

ExperimentConfig ParseConfig(std::string_view text) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::stringstream ss{std::string(text)};
  for (std::string raw; std::getline(ss, raw);) {
    ++line_no;
    const std::string line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) Fail(where + "expected key=value");
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    const auto it = Setters().find(key);
    if (it == Setters().end()) Fail(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) Fail(where + "duplicate key '" + key + "'");
    try {
      it->second(config, value);
    } catch (const Error& e) {
      Fail(where + e.message());
    }
  }
  config.Validate();
  return config;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  try {
    return ParseConfig(text.str());
  } catch (const Error& e) {
    Fail(path.string() + ": " + e.message());
  }
}

void ApplyEnvironment(ExperimentConfig& config) {
  if (const char* dir = std::getenv("AVSE_DATA_DIR"); dir && *dir) config.data_dir = dir;
  if (const char* cmd = std::getenv("AVSE_PESQ_CMD"); cmd && *cmd) config.pesq_command = cmd;
}

std::string FormatConfig(const ExperimentConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "sample_rate=" << c.sample_rate << "\nn_fft=" << c.n_fft << "\nhop=" << c.hop
      << "\nclip_max=" << c.clip_max << "\nsnrs=";
  for (std::size_t i = 0; i < c.snrs.size(); ++i) out << (i ? "," : "") << c.snrs[i];
  out << "\nepochs=" << c.epochs << "\nbatch=" << c.batch << "\nlr=" << c.lr
      << "\nlr_halving=" << (c.halve_against_best ? "best" : "previous")
      << "\nbn_calibration_batches=" << c.bn_calibration_batches
      << "\nleaky_alpha=" << c.leaky_alpha << "\ndropout=" << c.dropout
      << "\nchannel_divisor=" << c.channel_divisor << "\nseed=" << c.seed
      << "\nmodality=" << model::ModalityName(c.modality)
      << "\ntrain_condition=" << data::ConditionName(c.train_condition)
      << "\nsplit=" << (c.split == SplitKind::kSeen ? "seen" : "unseen")
      << "\nfold=" << c.fold << "\npesq_command=" << c.pesq_command
      << "\npesq_mode=" << c.pesq_mode << "\nfixture_speakers=" << c.fixture_speakers
      << "\nfixture_utterances=" << c.fixture_utterances
      << "\ndata_dir=" << c.data_dir.string() << "\nmanifest=" << c.manifest.string()
      << "\nwork_dir=" << c.work_dir.string() << "\n";
  return out.str();
}

std::string SplitName(const ExperimentConfig& c) {
  const std::string cond = ConditionTag(c.train_condition);
  if (c.split == SplitKind::kSeen) return "seen_" + cond;
  return "unseen_" + cond + "_fold" + std::to_string(c.fold);
}

std::filesystem::path SplitPath(const ExperimentConfig& c) {
  return c.work_dir / "splits" / (SplitName(c) + ".tsv");
}

std::filesystem::path LtasPath(const ExperimentConfig& c) { return c.work_dir / "ltas.bin"; }
std::filesystem::path NoisePath(const ExperimentConfig& c) { return c.work_dir / "ssn.wav"; }

std::string ModelId(const ExperimentConfig& c) {
  std::string id(model::ModalityName(c.modality));
  for (char& ch : id) ch = char(std::tolower(static_cast<unsigned char>(ch)));
  id += "_" + ConditionTag(c.train_condition);
  if (c.split == SplitKind::kUnseen) id += "_fold" + std::to_string(c.fold);
  return id;
}

std::filesystem::path ModelPath(const ExperimentConfig& c) {
  return c.work_dir / "models" / (ModelId(c) + ".avse");
}

}  // namespace avse::cli
