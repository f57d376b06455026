// src/metrics/pesq.cc

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

#include "avse/metrics/pesq.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <regex>

#include "avse/error.h"

namespace avse::metrics {

namespace {

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

void ReplaceAll(std::string& s, std::string_view key, const std::string& value) {
  for (std::size_t at = s.find(key); at != std::string::npos;
       at = s.find(key, at + value.size()))
    s.replace(at, key.size(), value);
}

}  // namespace

double ParsePesqOutput(std::string_view output) {
  std::string line;
  for (std::size_t pos = 0; pos < output.size();) {
    std::size_t nl = output.find('\n', pos);
    if (nl == std::string_view::npos) nl = output.size();
    const auto candidate = output.substr(pos, nl - pos);
    if (candidate.find_first_not_of(" \t\r") != std::string_view::npos) line = candidate;
    pos = nl + 1;
  }
  static const std::regex number(R"([-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?)");
  std::string last;
  for (auto it = std::sregex_iterator(line.begin(), line.end(), number);
       it != std::sregex_iterator(); ++it)
    last = it->str();
  if (last.empty())
    throw Error(ErrorCode::kToolFailed, "no score in PESQ output: " + line);
  const double score = std::stod(last);
  if (!(score >= kPesqMin && score <= kPesqMax))
    throw Error(ErrorCode::kToolFailed, "PESQ score out of range: " + last);
  return score;
}

double PesqExternal(const std::filesystem::path& clean,
                    const std::filesystem::path& processed,
                    const PesqConfig& config) {
  if (!config.configured())
    throw Error(ErrorCode::kToolNotConfigured, "no PESQ command configured");
  std::string cmd = config.command;
  ReplaceAll(cmd, "{clean}", ShellQuote(clean.string()));
  ReplaceAll(cmd, "{degraded}", ShellQuote(processed.string()));
  ReplaceAll(cmd, "{mode}", ShellQuote(config.mode));
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw Error(ErrorCode::kToolFailed, "cannot start: " + cmd);
  std::string output;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) output.append(buf.data(), n);
  const int status = pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw Error(ErrorCode::kToolFailed, "PESQ tool failed: " + cmd);
  return ParsePesqOutput(output);
}

}  // namespace avse::metrics
