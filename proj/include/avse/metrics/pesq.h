// include/avse/metrics/pesq.h

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

#ifndef AVSE_METRICS_PESQ_H_
#define AVSE_METRICS_PESQ_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace avse::metrics {

// External PESQ tool. `command` is a shell command template in which
// {clean}, {degraded} and {mode} are replaced by the quoted file paths and
// the mode ("wb" or "nb").
struct PesqConfig {
  std::string command;
  std::string mode = "wb";
  bool configured() const noexcept { return !command.empty(); }
};

inline constexpr double kPesqMin = -0.5;
inline constexpr double kPesqMax = 4.5;

// Last number on the last non-empty line. Throws ToolFailed.
double ParsePesqOutput(std::string_view output);

// Runs the tool on two 16 kHz WAV files. Throws ToolNotConfigured,
// ToolFailed (nonzero exit, unparseable output or score out of range).
double PesqExternal(const std::filesystem::path& clean,
                    const std::filesystem::path& processed,
                    const PesqConfig& config);

}  // namespace avse::metrics

#endif  // AVSE_METRICS_PESQ_H_
