// include/avse/metrics/evaluate.h

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

#ifndef AVSE_METRICS_EVALUATE_H_
#define AVSE_METRICS_EVALUATE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "avse/data/dataset.h"
#include "avse/dsp/waveform.h"
#include "avse/metrics/pesq.h"
#include "avse/metrics/report.h"
#include "avse/model/trained_model.h"

namespace avse::metrics {

// A system whose output is scored: maps a test utterance and its noisy
// mixture to an enhanced waveform of the same length.
struct SystemUnderTest {
  std::string model_id;
  std::string modality = "-";
  std::string train_condition = "-";
  std::function<dsp::Waveform(const data::Utterance&, const dsp::Waveform&)> enhance;
};

// Wraps a trained network; the model must outlive the returned system.
SystemUnderTest ModelSystem(const model::TrainedModel& model, std::string model_id);

struct EvaluateOptions {
  std::vector<double> snrs;
  uint64_t seed = 0;
  PesqConfig pesq;                      // PESQ rows only when configured
  std::filesystem::path scratch_dir;    // WAV files for the PESQ tool
  int jobs = 1;
};

// Scores every system plus the unprocessed mixtures ("unproc", first) on
// every test utterance at every SNR. Noise offsets are fixed per utterance.
// Rows are ordered by system, then metric, then SNR. Throws EmptyTestSet.
MetricReport Evaluate(std::span<const SystemUnderTest> systems,
                      std::span<const data::Utterance> test,
                      const dsp::Waveform& noise, const EvaluateOptions& options);

}  // namespace avse::metrics

#endif  // AVSE_METRICS_EVALUATE_H_
