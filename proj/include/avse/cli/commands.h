// include/avse/cli/commands.h

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

#ifndef AVSE_CLI_COMMANDS_H_
#define AVSE_CLI_COMMANDS_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "avse/cli/config.h"
#include "avse/data/split.h"

namespace avse::cli {

// Writes the synthetic corpus and its manifest under data_dir.
data::Manifest CmdFixture(const ExperimentConfig& config, std::ostream& out);

// LTAS of the training utterances' NL recordings and a seeded SSN
// realization at least 10x the longest utterance. Refuses to replace
// existing files unless `force`.
void CmdPrepare(const ExperimentConfig& config, bool force, std::ostream& out);

// Writes every plan of the configured split kind and training condition
// (one seen plan or six unseen folds) under work_dir/splits.
std::vector<data::SplitPlan> CmdSplit(const ExperimentConfig& config, std::ostream& out);

// Trains on the configured plan and saves the best-validation snapshot.
// One line per epoch: "epoch=E train_loss=X val_loss=Y lr=Z".
std::filesystem::path CmdTrain(const ExperimentConfig& config,
                               const std::optional<std::filesystem::path>& output,
                               std::ostream& out);

// Enhances one utterance. An audio-only model ignores `video` and warns on
// `err`.
void CmdEnhance(const ExperimentConfig& config, const std::filesystem::path& model_path,
                const std::filesystem::path& input,
                const std::optional<std::filesystem::path>& video,
                const std::filesystem::path& output, std::ostream& err);

// Scores the models and the unprocessed baseline on the plan's test set and
// writes the CSV report.
void CmdEvaluate(const ExperimentConfig& config,
                 const std::vector<std::filesystem::path>& models,
                 const std::filesystem::path& output, int jobs, std::ostream& out);

// One SVG chart per metric plus a text table and SNR gains.
void CmdReport(const std::vector<std::filesystem::path>& csvs,
               const std::filesystem::path& out_dir, std::ostream& out);

// Whole command line; returns the process exit code (0 ok, 1 validation
// error, 2 runtime error).
int RunCli(int argc, char** argv);

}  // namespace avse::cli

#endif  // AVSE_CLI_COMMANDS_H_
