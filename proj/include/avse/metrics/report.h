// include/avse/metrics/report.h

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

#ifndef AVSE_METRICS_REPORT_H_
#define AVSE_METRICS_REPORT_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace avse::metrics {

inline constexpr const char* kUnprocessedId = "unproc";

// One aggregated cell: a metric for one system at one SNR.
struct MetricRow {
  std::string model_id;
  std::string modality;         // AV, AO, VO or "-" for the baseline
  std::string train_condition;  // L, NL or "-"
  double snr_db = 0.0;
  std::string metric;  // "estoi" or "pesq"
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 0;
  bool operator==(const MetricRow&) const = default;
};

struct MetricReport {
  std::vector<MetricRow> rows;
  // Throws InvalidArgument when a row breaks the count or range rules.
  void Validate() const;
  bool operator==(const MetricReport&) const = default;
};

// CSV with header model_id,modality,train_condition,snr_db,metric,mean,std,n.
// Values are printed with 17 significant digits so a round trip is exact.
void WriteReportCsv(const MetricReport& report, std::ostream& out);
void WriteReportCsv(const MetricReport& report, const std::filesystem::path& path);
// Throws MalformedCsv.
MetricReport ReadReportCsv(std::istream& in);
MetricReport ReadReportCsv(const std::filesystem::path& path);

}  // namespace avse::metrics

#endif  // AVSE_METRICS_REPORT_H_
