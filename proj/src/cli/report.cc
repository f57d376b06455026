// src/cli/report.cc

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

#include "avse/cli/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "avse/error.h"

namespace avse::cli {

namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kColors[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c",
                         "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

}  // namespace

std::vector<std::string> Metrics(const metrics::MetricReport& report) {
  std::vector<std::string> out;
  for (const auto& r : report.rows)
    if (std::find(out.begin(), out.end(), r.metric) == out.end()) out.push_back(r.metric);
  return out;
}

std::vector<Series> ExtractSeries(const metrics::MetricReport& report,
                                  const std::string& metric) {
  std::vector<Series> out;
  std::map<std::string, std::size_t> index;
  for (const auto& r : report.rows) {
    if (r.metric != metric) continue;
    auto [it, fresh] = index.emplace(r.model_id, out.size());
    if (fresh) out.push_back({r.model_id, r.modality, r.train_condition, {}, {}});
    Series& s = out[it->second];
    if (std::find(s.snr.begin(), s.snr.end(), r.snr_db) != s.snr.end())
      throw Error(ErrorCode::kMalformedCsv,
                  r.model_id + " has two " + metric + " rows at " + Fixed(r.snr_db, 1) + " dB");
    s.snr.push_back(r.snr_db);
    s.mean.push_back(r.mean);
  }
  for (Series& s : out) {
    std::vector<std::size_t> p(s.snr.size());
    std::iota(p.begin(), p.end(), 0);
    std::sort(p.begin(), p.end(), [&](auto a, auto b) { return s.snr[a] < s.snr[b]; });
    Series sorted{s.model_id, s.modality, s.train_condition, {}, {}};
    for (auto i : p) {
      sorted.snr.push_back(s.snr[i]);
      sorted.mean.push_back(s.mean[i]);
    }
    s = std::move(sorted);
  }
  return out;
}

double SnrGain(std::span<const double> snr_a, std::span<const double> a,
               std::span<const double> snr_b, std::span<const double> b) {
  if (snr_a.size() != a.size() || snr_b.size() != b.size())
    throw Error(ErrorCode::kInvalidArgument, "series and SNR grid differ in length");
  double total = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double v = a[i];
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      const double lo = std::min(b[j], b[j + 1]), hi = std::max(b[j], b[j + 1]);
      if (v < lo || v > hi) continue;
      const double t = b[j + 1] == b[j] ? 0.0 : (v - b[j]) / (b[j + 1] - b[j]);
      total += snr_b[j] + t * (snr_b[j + 1] - snr_b[j]) - snr_a[i];
      ++count;
      break;
    }
  }
  return count == 0 ? std::numeric_limits<double>::quiet_NaN() : total / count;
}

std::string RenderSvg(const std::vector<Series>& series, const std::string& metric) {
  const double width = 640, height = 420, left = 70, right = 170, top = 40, bottom = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.snr.size(); ++i) {
      x0 = std::min(x0, s.snr[i]);
      x1 = std::max(x1, s.snr[i]);
      y0 = std::min(y0, s.mean[i]);
      y1 = std::max(y1, s.mean[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 1, x1 += 1;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double pw = width - left - right, ph = height - top - bottom;
  auto X = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto Y = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << Escape(metric) << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\""
      << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";
  std::vector<double> ticks;
  for (const auto& s : series)
    for (double x : s.snr)
      if (std::find(ticks.begin(), ticks.end(), x) == ticks.end()) ticks.push_back(x);
  std::sort(ticks.begin(), ticks.end());
  for (double x : ticks)
    svg << "<text x=\"" << X(x) << "\" y=\"" << top + ph + 18
        << "\" text-anchor=\"middle\">" << Fixed(x, 0) << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double y = y0 + (y1 - y0) * k / 4;
    svg << "<line x1=\"" << left - 4 << "\" x2=\"" << left << "\" y1=\"" << Y(y) << "\" y2=\""
        << Y(y) << "\" stroke=\"#444\"/>\n<text x=\"" << left - 8 << "\" y=\"" << Y(y) + 4
        << "\" text-anchor=\"end\">" << Fixed(y, 2) << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">SNR (dB)</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kColors[i % std::size(kColors)];
    svg << "<polyline class=\"series\" data-model=\"" << Escape(s.model_id)
        << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < s.snr.size(); ++k)
      svg << (k ? " " : "") << Fixed(X(s.snr[k]), 1) << "," << Fixed(Y(s.mean[k]), 1);
    svg << "\"/>\n";
    const double ly = top + 10 + 18 * double(i);
    svg << "<line x1=\"" << width - right + 15 << "\" x2=\"" << width - right + 40
        << "\" y1=\"" << ly << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n<text x=\"" << width - right + 46 << "\" y=\"" << ly + 4
        << "\">" << Escape(s.model_id) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string RenderTable(const metrics::MetricReport& report) {
  std::ostringstream out;
  for (const std::string& metric : Metrics(report)) {
    const auto series = ExtractSeries(report, metric);
    std::vector<double> snrs;
    for (const auto& s : series)
      for (double x : s.snr)
        if (std::find(snrs.begin(), snrs.end(), x) == snrs.end()) snrs.push_back(x);
    std::sort(snrs.begin(), snrs.end());
    char buf[64];
    out << metric << "\n";
    std::snprintf(buf, sizeof buf, "%-16s %-4s %-4s", "model", "mod", "cond");
    out << buf;
    for (double x : snrs) {
      std::snprintf(buf, sizeof buf, " %15s", (Fixed(x, 0) + " dB").c_str());
      out << buf;
    }
    out << "\n";
    for (const auto& s : series) {
      std::snprintf(buf, sizeof buf, "%-16s %-4s %-4s", s.model_id.c_str(), s.modality.c_str(),
                    s.train_condition.c_str());
      out << buf;
      for (double x : snrs) {
        std::string cell = "-";
        for (const auto& r : report.rows)
          if (r.metric == metric && r.model_id == s.model_id && r.snr_db == x)
            cell = Fixed(r.mean, 3) + " +/- " + Fixed(r.std, 3);
        std::snprintf(buf, sizeof buf, " %15s", cell.c_str());
        out << buf;
      }
      out << "\n";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace avse::cli
