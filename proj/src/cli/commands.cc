// src/cli/commands.cc

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

#include "avse/cli/commands.h"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "avse/cli/report.h"
#include "avse/data/dataset.h"
#include "avse/data/fixture.h"
#include "avse/dsp/wav.h"
#include "avse/error.h"
#include "avse/masking/masking.h"
#include "avse/metrics/evaluate.h"
#include "avse/mixture/mixture.h"
#include "avse/model/trainer.h"
#include "avse/model/weights.h"
#include "avse/seed.h"

namespace avse::cli {

namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void CreateParent(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + path.parent_path().string());
}

data::SplitPlan BuildPlan(const ExperimentConfig& c, const data::Manifest& manifest) {
  data::SplitPlan plan =
      c.split == SplitKind::kSeen
          ? data::MakeSeenSplit(manifest, c.train_condition, c.seed)
          : data::MakeUnseenFolds(manifest, c.train_condition, c.seed).at(c.fold);
  plan.name = SplitName(c);
  plan.snrs = c.snrs;
  return plan;
}

data::SplitPlan LoadPlan(const ExperimentConfig& c) {
  const auto path = SplitPath(c);
  if (!std::filesystem::exists(path))
    throw Error(ErrorCode::kIoError, "missing split plan " + path.string() + " (run split)");
  return data::ReadSplit(path);
}

dsp::Waveform LoadNoise(const ExperimentConfig& c) {
  const auto path = NoisePath(c);
  if (!std::filesystem::exists(path))
    throw Error(ErrorCode::kIoError, "missing noise " + path.string() + " (run prepare)");
  return dsp::ReadWav(path);
}

bool IsValidationError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kMissingModality:
    case ErrorCode::kVideoAudioLengthMismatch:
      return true;
    default:
      return false;
  }
}

}  // namespace

data::Manifest CmdFixture(const ExperimentConfig& c, std::ostream& out) {
  const data::Manifest m = data::GenerateFixtureCorpus(
      {c.fixture_speakers, c.fixture_utterances, c.seed}, c.data_dir);
  out << "manifest=" << (c.data_dir / "manifest.tsv").string() << " entries=" << m.size()
      << "\n";
  return m;
}

void CmdPrepare(const ExperimentConfig& c, bool force, std::ostream& out) {
  const auto ltas_path = LtasPath(c), noise_path = NoisePath(c);
  for (const auto& p : {ltas_path, noise_path})
    if (!force && std::filesystem::exists(p))
      throw Error(ErrorCode::kInvalidArgument,
                  p.string() + " exists; pass --force to replace it");
  const data::Manifest manifest = data::ReadManifest(c.manifest_path());
  const data::SplitPlan plan = BuildPlan(c, manifest);
  // Plain-condition recordings of the training utterances, whatever the
  // training condition.
  std::vector<data::ManifestEntry> plain;
  for (const auto& e : plan.train) {
    const auto* nl =
        data::FindEntry(manifest, e.speaker, data::Condition::kNonLombard, e.utterance);
    if (!nl)
      throw Error(ErrorCode::kInvalidArgument,
                  "no NL recording of " + e.speaker + "/" + e.utterance + " for the LTAS");
    plain.push_back(*nl);
  }
  std::vector<dsp::Waveform> speech;
  for (auto& u : data::LoadUtterances(plain, false)) speech.push_back(std::move(u.clean));
  const mixture::Ltas ltas = mixture::EstimateLtas(speech);
  std::size_t longest = 0;
  for (const auto& e : manifest) longest = std::max(longest, dsp::ReadWav(e.audio).size());
  const std::size_t n = std::max<std::size_t>(10 * longest, dsp::kSampleRate);
  const dsp::Waveform noise =
      mixture::GenerateSsn(ltas, n, DeriveSeed(c.seed, {HashString("ssn")}));
  CreateParent(ltas_path);
  mixture::SaveLtas(ltas, ltas_path);
  dsp::WriteWav(noise, noise_path);
  out << "ltas=" << ltas_path.string() << "\n"
      << "noise=" << noise_path.string() << " seconds=" << Num(noise.duration_seconds())
      << "\n";
}

std::vector<data::SplitPlan> CmdSplit(const ExperimentConfig& c, std::ostream& out) {
  const data::Manifest manifest = data::ReadManifest(c.manifest_path());
  std::vector<data::SplitPlan> plans;
  if (c.split == SplitKind::kSeen) {
    plans.push_back(BuildPlan(c, manifest));
  } else {
    for (int f = 0; f < data::kFolds; ++f) {
      ExperimentConfig fold = c;
      fold.fold = f;
      plans.push_back(BuildPlan(fold, manifest));
    }
  }
  for (std::size_t i = 0; i < plans.size(); ++i) {
    ExperimentConfig at = c;
    if (c.split == SplitKind::kUnseen) at.fold = int(i);
    const auto path = SplitPath(at);
    CreateParent(path);
    data::WriteSplit(plans[i], path);
    out << "split=" << path.string() << " train=" << plans[i].train.size()
        << " validation=" << plans[i].validation.size() << " test=" << plans[i].test.size()
        << "\n";
  }
  return plans;
}

std::filesystem::path CmdTrain(const ExperimentConfig& c,
                               const std::optional<std::filesystem::path>& output,
                               std::ostream& out) {
  const data::SplitPlan plan = LoadPlan(c);
  if (plan.train_condition != c.train_condition)
    throw Error(ErrorCode::kConfigError, "split plan was made for another training condition");
  const dsp::Waveform noise = LoadNoise(c);
  const bool video = model::UsesVideo(c.modality);
  data::ChunkDataset train(data::LoadUtterances(plan.train, video), noise, c.snrs, c.modality,
                           data::NoiseOffsets::kRandom, c.seed, c.clip_max);
  data::ChunkDataset validation(data::LoadUtterances(plan.validation, video), noise, c.snrs,
                                c.modality, data::NoiseOffsets::kFixed, c.seed, c.clip_max);
  train.PrepareEpoch(0);
  model::FeatureStatsAccumulator acc;
  train.Accumulate(acc);
  const model::FeatureStats stats = acc.Finish();

  model::ModelSpec spec =
      model::BuildModel(c.modality, c.channel_divisor, c.leaky_alpha, c.dropout);
  spec.clip_max = c.clip_max;
  model::TrainOptions options;
  options.epochs = c.epochs;
  options.batch = std::size_t(c.batch);
  options.lr = c.lr;
  options.seed = c.seed;
  options.halve_against_best = c.halve_against_best;
  options.bn_calibration_batches = std::size_t(c.bn_calibration_batches);

  const auto path = output.value_or(ModelPath(c));
  CreateParent(path);
  auto log_path = path;
  log_path.replace_extension(".log");
  std::ofstream log(log_path);
  if (!log) throw Error(ErrorCode::kIoError, "cannot write " + log_path.string());
  out << "model=" << ModelId(c) << " train_chunks=" << train.num_chunks()
      << " validation_chunks=" << validation.num_chunks() << "\n";
  auto outcome = model::Train(spec, stats, train, validation, options,
                              [&](const model::EpochLog& e) {
                                const std::string line =
                                    "epoch=" + std::to_string(e.epoch) +
                                    " train_loss=" + Num(e.train_loss) +
                                    " val_loss=" + Num(e.validation_loss) + " lr=" + Num(e.lr);
                                out << line << std::endl;
                                log << line << std::endl;
                              });
  outcome.model->metadata.seed = c.seed;
  outcome.model->metadata.train_condition = std::string(data::ConditionName(c.train_condition));
  model::SaveModel(*outcome.model, path);
  out << "saved=" << path.string() << " best_epoch=" << outcome.model->metadata.epoch
      << " val_loss=" << Num(outcome.model->metadata.validation_loss) << "\n";
  return path;
}

void CmdEnhance(const ExperimentConfig&, const std::filesystem::path& model_path,
                const std::filesystem::path& input,
                const std::optional<std::filesystem::path>& video,
                const std::filesystem::path& output, std::ostream& err) {
  const auto model = model::LoadModel(model_path);
  const dsp::Waveform noisy = dsp::ReadWav(input);
  if (noisy.sample_rate != dsp::kSampleRate)
    throw Error(ErrorCode::kInvalidArgument, input.string() + ": expected 16 kHz audio");
  data::VideoClip clip;
  const data::VideoClip* clip_ptr = nullptr;
  if (model::UsesVideo(model->modality())) {
    if (!video)
      throw Error(ErrorCode::kMissingModality,
                  std::string(model::ModalityName(model->modality())) + " model needs --video");
    clip = data::ReadVideoFrames(*video);
    clip_ptr = &clip;
  } else if (video) {
    err << "warning: audio-only model ignores --video\n";
  }
  const dsp::Waveform enhanced = masking::EnhanceUtterance(noisy, clip_ptr, *model);
  CreateParent(output);
  dsp::WriteWav(enhanced, output);
}

void CmdEvaluate(const ExperimentConfig& c, const std::vector<std::filesystem::path>& models,
                 const std::filesystem::path& output, int jobs, std::ostream& out) {
  const data::SplitPlan plan = LoadPlan(c);
  const dsp::Waveform noise = LoadNoise(c);
  std::vector<std::unique_ptr<model::TrainedModel>> loaded;
  std::vector<metrics::SystemUnderTest> systems;
  bool video = false;
  for (const auto& p : models) {
    loaded.push_back(model::LoadModel(p));
    video |= model::UsesVideo(loaded.back()->modality());
    systems.push_back(metrics::ModelSystem(*loaded.back(), p.stem().string()));
  }
  const auto test = data::LoadUtterances(plan.test, video);
  metrics::EvaluateOptions options{c.snrs, c.seed, {c.pesq_command, c.pesq_mode},
                                   c.work_dir / "scratch", jobs};
  if (!options.pesq.configured()) out << "note: no PESQ tool configured; ESTOI only\n";
  const metrics::MetricReport report = metrics::Evaluate(systems, test, noise, options);
  CreateParent(output);
  metrics::WriteReportCsv(report, output);
  out << "report=" << output.string() << " rows=" << report.rows.size() << "\n";
}

void CmdReport(const std::vector<std::filesystem::path>& csvs,
               const std::filesystem::path& out_dir, std::ostream& out) {
  metrics::MetricReport all;
  for (const auto& p : csvs) {
    const auto r = metrics::ReadReportCsv(p);
    for (const auto& row : r.rows) {
      // The baseline appears in every CSV; keep its first copy.
      bool dup = false;
      for (const auto& have : all.rows)
        dup |= have.model_id == row.model_id && have.metric == row.metric &&
               have.snr_db == row.snr_db && row.model_id == metrics::kUnprocessedId;
      if (!dup) all.rows.push_back(row);
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + out_dir.string());
  std::string summary = RenderTable(all);
  for (const std::string& metric : Metrics(all)) {
    const auto series = ExtractSeries(all, metric);
    const auto svg_path = out_dir / (metric + ".svg");
    std::ofstream(svg_path) << RenderSvg(series, metric);
    out << "chart=" << svg_path.string() << " series=" << series.size() << "\n";
    for (const auto& l : series) {
      if (l.train_condition != "L") continue;
      for (const auto& nl : series) {
        if (nl.train_condition != "NL" || nl.modality != l.modality) continue;
        const double gain = SnrGain(l.snr, l.mean, nl.snr, nl.mean);
        summary += "snr_gain metric=" + metric + " L=" + l.model_id + " NL=" + nl.model_id +
                   " gain_db=" + (std::isnan(gain) ? std::string("n/a") : Num(gain)) + "\n";
      }
    }
  }
  const auto table_path = out_dir / "summary.txt";
  std::ofstream table(table_path);
  table << summary;
  if (!table) throw Error(ErrorCode::kIoError, "cannot write " + table_path.string());
  out << summary;
}

int RunCli(int argc, char** argv) {
  CLI::App app{"Audio-visual speech enhancement experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::optional<uint64_t> seed;
  bool force = false;
  int jobs = 1;
  app.add_option("--config", config_path, "key=value experiment file");
  app.add_option("--seed", seed, "override the configured seed");
  app.add_flag("--force", force, "replace existing artifacts");
  app.add_option("--jobs", jobs, "worker threads for evaluation")->check(CLI::Range(1, 256));

  auto* fixture = app.add_subcommand("fixture", "write the synthetic corpus");
  auto* prepare = app.add_subcommand("prepare", "estimate LTAS and generate noise");
  auto* split = app.add_subcommand("split", "write split plans");
  auto* train = app.add_subcommand("train", "train one model");
  std::optional<std::string> train_out;
  train->add_option("--output", train_out, "model file");
  auto* enhance = app.add_subcommand("enhance", "enhance one utterance");
  std::string model_path, input, output;
  std::optional<std::string> video;
  enhance->add_option("--model", model_path)->required();
  enhance->add_option("--input", input)->required();
  enhance->add_option("--video", video);
  enhance->add_option("--output", output)->required();
  auto* evaluate = app.add_subcommand("evaluate", "score models on the test set");
  std::vector<std::string> model_paths;
  std::string eval_out;
  evaluate->add_option("models", model_paths, "model files");
  evaluate->add_option("--output", eval_out, "CSV report");
  auto* report = app.add_subcommand("report", "charts and tables from CSV reports");
  std::vector<std::string> csvs;
  std::string report_dir = "report";
  report->add_option("csvs", csvs, "CSV reports")->required();
  report->add_option("--out-dir", report_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : LoadConfig(config_path);
    ApplyEnvironment(config);
    if (seed) config.seed = *seed;
    config.Validate();
    if (fixture->parsed()) CmdFixture(config, std::cout);
    if (prepare->parsed()) CmdPrepare(config, force, std::cout);
    if (split->parsed()) CmdSplit(config, std::cout);
    if (train->parsed())
      CmdTrain(config, train_out ? std::optional<std::filesystem::path>(*train_out) : std::nullopt,
               std::cout);
    if (enhance->parsed())
      CmdEnhance(config, model_path, input,
                 video ? std::optional<std::filesystem::path>(*video) : std::nullopt, output,
                 std::cerr);
    if (evaluate->parsed()) {
      std::vector<std::filesystem::path> paths(model_paths.begin(), model_paths.end());
      CmdEvaluate(config, paths,
                  eval_out.empty() ? config.work_dir / "reports" / "evaluate.csv"
                                   : std::filesystem::path(eval_out),
                  jobs, std::cout);
    }
    if (report->parsed()) {
      std::vector<std::filesystem::path> paths(csvs.begin(), csvs.end());
      CmdReport(paths, report_dir, std::cout);
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return IsValidationError(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace avse::cli
