// src/metrics/report.cc

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

#include "avse/metrics/report.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "avse/error.h"
#include "avse/metrics/pesq.h"

namespace avse::metrics {

namespace {

constexpr const char* kHeader = "model_id,modality,train_condition,snr_db,metric,mean,std,n";

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseDouble(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::kMalformedCsv,
                "line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  return v;
}

}  // namespace

void MetricReport::Validate() const {
  for (const MetricRow& r : rows) {
    if (r.n == 0)
      throw Error(ErrorCode::kInvalidArgument, "empty cell for " + r.model_id);
    if (r.metric == "estoi" && !(r.mean >= -1.0 && r.mean <= 1.0))
      throw Error(ErrorCode::kInvalidArgument, "ESTOI mean out of range for " + r.model_id);
    if (r.metric == "pesq" && !(r.mean >= kPesqMin && r.mean <= kPesqMax))
      throw Error(ErrorCode::kInvalidArgument, "PESQ mean out of range for " + r.model_id);
  }
}

void WriteReportCsv(const MetricReport& report, std::ostream& out) {
  out << kHeader << '\n';
  out.precision(17);
  for (const MetricRow& r : report.rows)
    out << r.model_id << ',' << r.modality << ',' << r.train_condition << ','
        << r.snr_db << ',' << r.metric << ',' << r.mean << ',' << r.std << ','
        << r.n << '\n';
}

void WriteReportCsv(const MetricReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  WriteReportCsv(report, out);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

MetricReport ReadReportCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw Error(ErrorCode::kMalformedCsv, "missing or unexpected CSV header");
  MetricReport report;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = SplitFields(line);
    if (f.size() != 8)
      throw Error(ErrorCode::kMalformedCsv,
                  "line " + std::to_string(line_no) + ": expected 8 fields");
    MetricRow r{f[0], f[1], f[2], ParseDouble(f[3], line_no), f[4],
                ParseDouble(f[5], line_no), ParseDouble(f[6], line_no), 0};
    const double n = ParseDouble(f[7], line_no);
    if (n < 1 || n != std::floor(n))
      throw Error(ErrorCode::kMalformedCsv,
                  "line " + std::to_string(line_no) + ": bad count");
    r.n = std::size_t(n);
    if (r.model_id.empty() || r.metric.empty())
      throw Error(ErrorCode::kMalformedCsv,
                  "line " + std::to_string(line_no) + ": empty field");
    report.rows.push_back(std::move(r));
  }
  return report;
}

MetricReport ReadReportCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return ReadReportCsv(in);
}

}  // namespace avse::metrics
