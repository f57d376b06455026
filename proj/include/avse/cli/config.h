// include/avse/cli/config.h

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

#ifndef AVSE_CLI_CONFIG_H_
#define AVSE_CLI_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "avse/data/manifest.h"
#include "avse/model/modality.h"

namespace avse::cli {

enum class SplitKind { kSeen, kUnseen };

// Flat key=value experiment description. Lines starting with '#' are
// comments. Every key is checked on load and unknown keys are rejected.
struct ExperimentConfig {
  int sample_rate = 16000;
  int n_fft = 640;
  int hop = 160;
  double clip_max = 10.0;
  std::vector<double> snrs = {-20, -15, -10, -5, 0, 5};
  int epochs = 50;
  int batch = 64;
  double lr = 4e-4;
  bool halve_against_best = false;  // lr_halving=best
  int bn_calibration_batches = 32;
  double leaky_alpha = 0.2;
  double dropout = 0.25;
  int channel_divisor = 1;
  uint64_t seed = 1;
  model::Modality modality = model::Modality::kAudioVisual;
  data::Condition train_condition = data::Condition::kLombard;
  SplitKind split = SplitKind::kSeen;
  int fold = 0;  // unseen split only
  std::string pesq_command;
  std::string pesq_mode = "wb";
  int fixture_speakers = 6;
  int fixture_utterances = 20;
  std::filesystem::path data_dir = "data";
  std::filesystem::path manifest;  // default data_dir/manifest.tsv
  std::filesystem::path work_dir = "work";

  std::filesystem::path manifest_path() const;
  // Throws ConfigError.
  void Validate() const;
};

// Throws ConfigError naming the line and key.
ExperimentConfig ParseConfig(std::string_view text);
ExperimentConfig LoadConfig(const std::filesystem::path& path);
// AVSE_DATA_DIR and AVSE_PESQ_CMD replace data_dir and pesq_command.
void ApplyEnvironment(ExperimentConfig& config);
// Canonical text form; ParseConfig(FormatConfig(c)) reproduces c.
std::string FormatConfig(const ExperimentConfig& config);

// Artifact locations under work_dir.
std::string SplitName(const ExperimentConfig& config);
std::filesystem::path SplitPath(const ExperimentConfig& config);
std::filesystem::path LtasPath(const ExperimentConfig& config);
std::filesystem::path NoisePath(const ExperimentConfig& config);
std::string ModelId(const ExperimentConfig& config);
std::filesystem::path ModelPath(const ExperimentConfig& config);

}  // namespace avse::cli

#endif  // AVSE_CLI_CONFIG_H_
