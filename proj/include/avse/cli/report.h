// include/avse/cli/report.h

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

#ifndef AVSE_CLI_REPORT_H_
#define AVSE_CLI_REPORT_H_

#include <span>
#include <string>
#include <vector>

#include "avse/metrics/report.h"

namespace avse::cli {

// One model's curve for one metric, sorted by SNR.
struct Series {
  std::string model_id;
  std::string modality;
  std::string train_condition;
  std::vector<double> snr;
  std::vector<double> mean;
};

// Series of `metric` in order of first appearance. Throws MalformedCsv when a
// model repeats an SNR.
std::vector<Series> ExtractSeries(const metrics::MetricReport& report,
                                  const std::string& metric);
std::vector<std::string> Metrics(const metrics::MetricReport& report);

// Average horizontal shift d such that b(x + d) == a(x), taken over the grid
// points x of `a` whose value b reaches (b linearly interpolated). Positive
// when b needs a higher SNR. NaN when the curves never overlap.
double SnrGain(std::span<const double> snr_a, std::span<const double> a,
               std::span<const double> snr_b, std::span<const double> b);

std::string RenderSvg(const std::vector<Series>& series, const std::string& metric);
std::string RenderTable(const metrics::MetricReport& report);

}  // namespace avse::cli

#endif  // AVSE_CLI_REPORT_H_
