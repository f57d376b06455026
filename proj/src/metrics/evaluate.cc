// src/metrics/evaluate.cc

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

#include "avse/metrics/evaluate.h"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "avse/dsp/wav.h"
#include "avse/error.h"
#include "avse/masking/masking.h"
#include "avse/metrics/estoi.h"
#include "avse/mixture/mixture.h"

namespace avse::metrics {

namespace {

struct Scores {
  double estoi = 0.0;
  double pesq = 0.0;
};

MetricRow Aggregate(const SystemUnderTest& s, double snr, const char* metric,
                    const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= double(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(var / double(values.size() - 1)) : 0.0;
  return {s.model_id, s.modality, s.train_condition, snr, metric, mean, sd, values.size()};
}

}  // namespace

SystemUnderTest ModelSystem(const model::TrainedModel& model, std::string model_id) {
  SystemUnderTest s;
  s.model_id = std::move(model_id);
  s.modality = std::string(model::ModalityName(model.modality()));
  s.train_condition = model.metadata.train_condition;
  const bool video = model::UsesVideo(model.modality());
  s.enhance = [&model, video](const data::Utterance& u, const dsp::Waveform& mixture) {
    return masking::EnhanceUtterance(mixture, video ? &u.video : nullptr, model);
  };
  return s;
}

MetricReport Evaluate(std::span<const SystemUnderTest> systems,
                      std::span<const data::Utterance> test,
                      const dsp::Waveform& noise, const EvaluateOptions& options) {
  if (test.empty()) throw Error(ErrorCode::kEmptyTestSet, "no test utterances");
  if (options.snrs.empty()) throw Error(ErrorCode::kInvalidArgument, "no SNRs given");
  std::vector<SystemUnderTest> all;
  all.push_back({kUnprocessedId, "-", "-",
                 [](const data::Utterance&, const dsp::Waveform& y) { return y; }});
  all.insert(all.end(), systems.begin(), systems.end());
  const bool pesq = options.pesq.configured();
  if (pesq) std::filesystem::create_directories(options.scratch_dir);

  const std::size_t S = all.size(), Q = options.snrs.size();
  // scores[(utt * S + system) * Q + snr]
  std::vector<Scores> scores(test.size() * S * Q);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t u; (u = next++) < test.size();) {
      try {
        const data::Utterance& utt = test[u];
        const std::size_t offset =
            data::NoiseOffset(utt.entry, utt.clean.size(), noise.size(),
                              data::NoiseOffsets::kFixed, options.seed, 0);
        const auto clean_path = options.scratch_dir / ("u" + std::to_string(u) + "_clean.wav");
        if (pesq) dsp::WriteWav(utt.clean, clean_path);
        for (std::size_t q = 0; q < Q; ++q) {
          const auto mix = mixture::MixAtSnr(utt.clean, noise, options.snrs[q], offset);
          for (std::size_t s = 0; s < S; ++s) {
            const dsp::Waveform out = all[s].enhance(utt, mix.mixture);
            Scores& cell = scores[(u * S + s) * Q + q];
            cell.estoi = Estoi(utt.clean, out);
            if (pesq) {
              const auto path = options.scratch_dir /
                                ("u" + std::to_string(u) + "_s" + std::to_string(s) +
                                 "_q" + std::to_string(q) + ".wav");
              dsp::WriteWav(out, path);
              cell.pesq = PesqExternal(clean_path, path, options.pesq);
              std::filesystem::remove(path);
            }
          }
        }
        if (pesq) std::filesystem::remove(clean_path);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = test.size();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, int(test.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  MetricReport report;
  for (std::size_t s = 0; s < S; ++s)
    for (int m = 0; m < (pesq ? 2 : 1); ++m)
      for (std::size_t q = 0; q < Q; ++q) {
        std::vector<double> values(test.size());
        for (std::size_t u = 0; u < test.size(); ++u) {
          const Scores& cell = scores[(u * S + s) * Q + q];
          values[u] = m == 0 ? cell.estoi : cell.pesq;
        }
        report.rows.push_back(Aggregate(all[s], options.snrs[q], m == 0 ? "estoi" : "pesq", values));
      }
  report.Validate();
  return report;
}

}  // namespace avse::metrics
