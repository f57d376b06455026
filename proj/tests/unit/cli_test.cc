// tests/unit/cli_test.cc

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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "avse/cli/commands.h"
#include "avse/cli/config.h"
#include "avse/cli/report.h"
#include "avse/data/split.h"
#include "avse/dsp/wav.h"
#include "avse/error.h"
#include "avse/metrics/report.h"
#include "avse/mixture/mixture.h"
#include "avse/model/weights.h"

namespace avse {
namespace {

namespace fs = std::filesystem;
using cli::ExperimentConfig;

template <typename F>
void ExpectError(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << ErrorCodeName(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

fs::path FreshDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("avse_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "avse");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::RunCli(int(argv.size()), argv.data());
}

// key=value pairs of one "epoch=..." log line.
std::map<std::string, double> ParseLogLine(const std::string& line) {
  std::map<std::string, double> kv;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    kv[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
  }
  return kv;
}

TEST(ConfigTest, DefaultsValidate) {
  const ExperimentConfig c;
  EXPECT_NO_THROW(c.Validate());
  EXPECT_EQ(c.snrs, (std::vector<double>{-20, -15, -10, -5, 0, 5}));
  EXPECT_EQ(c.manifest_path(), fs::path("data") / "manifest.tsv");
}

TEST(ConfigTest, ParsesKeysAndComments) {
  const auto c = cli::ParseConfig(
      "# experiment\n"
      "modality=AO\n"
      "train_condition = NL\n"
      "\n"
      "split=unseen\nfold=3\nsnrs=-5,0,5\nlr=1e-3\nlr_halving=best\n"
      "bn_calibration_batches=0\n"
      "channel_divisor=8\nseed=42\n");
  EXPECT_EQ(c.modality, model::Modality::kAudioOnly);
  EXPECT_EQ(c.train_condition, data::Condition::kNonLombard);
  EXPECT_EQ(c.split, cli::SplitKind::kUnseen);
  EXPECT_EQ(c.fold, 3);
  EXPECT_EQ(c.snrs, (std::vector<double>{-5, 0, 5}));
  EXPECT_DOUBLE_EQ(c.lr, 1e-3);
  EXPECT_TRUE(c.halve_against_best);
  EXPECT_EQ(c.bn_calibration_batches, 0);
  EXPECT_EQ(c.channel_divisor, 8);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(cli::ModelId(c), "ao_nl_fold3");
  EXPECT_EQ(cli::SplitName(c), "unseen_nl_fold3");
}

TEST(ConfigTest, RejectsBadInput) {
  for (const char* text :
       {"bogus=1\n", "epochs=5\nepochs=6\n", "epochs\n", "lr=-0.1\n", "snrs=\n",
        "epochs=0\n", "batch=two\n", "modality=AVX\n", "fold=6\n", "sample_rate=8000\n",
        "n_fft=512\n", "hop=128\n", "dropout=1\n", "channel_divisor=3\n",
        "pesq_mode=swb\n", "bn_calibration_batches=-1\n", "fixture_speakers=1\n",
        "fixture_utterances=15\n"})
    ExpectError(ErrorCode::kConfigError, [&] { cli::ParseConfig(text); });
}

TEST(ConfigTest, ErrorNamesLine) {
  try {
    cli::ParseConfig("epochs=3\n\nbogus=1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos) << e.what();
  }
}

TEST(ConfigTest, FormatRoundTrip) {
  ExperimentConfig c;
  c.snrs = {-7.5, 2.25};
  c.lr = 3.3e-4;
  c.modality = model::Modality::kVideoOnly;
  c.split = cli::SplitKind::kUnseen;
  c.fold = 5;
  c.pesq_command = "pesq {clean} {degraded} +16000";
  c.data_dir = "/tmp/x y";
  const std::string text = cli::FormatConfig(c);
  EXPECT_EQ(cli::FormatConfig(cli::ParseConfig(text)), text);
}

TEST(ConfigTest, EnvironmentOverrides) {
  ExperimentConfig c;
  ::setenv("AVSE_DATA_DIR", "/srv/corpus", 1);
  ::setenv("AVSE_PESQ_CMD", "mypesq {clean} {degraded}", 1);
  cli::ApplyEnvironment(c);
  ::unsetenv("AVSE_DATA_DIR");
  ::unsetenv("AVSE_PESQ_CMD");
  EXPECT_EQ(c.data_dir, fs::path("/srv/corpus"));
  EXPECT_EQ(c.pesq_command, "mypesq {clean} {degraded}");
  ExperimentConfig untouched;
  cli::ApplyEnvironment(untouched);
  EXPECT_EQ(untouched.data_dir, fs::path("data"));
}

TEST(SnrGainTest, IdenticalCurvesGiveZero) {
  const std::vector<double> x{-10, -5, 0, 5}, y{0.2, 0.4, 0.6, 0.8};
  EXPECT_NEAR(cli::SnrGain(x, y, x, y), 0.0, 1e-12);
}

TEST(SnrGainTest, ShiftedCurve) {
  // b(x) = a(x - 5): b needs 5 dB more.
  const std::vector<double> xa{-10, -5, 0, 5}, a{0.1, 0.3, 0.5, 0.7};
  const std::vector<double> xb{-20, -15, -10, -5, 0, 5, 10},
      b{0.0, 0.0, 0.0, 0.1, 0.3, 0.5, 0.7};
  EXPECT_NEAR(cli::SnrGain(xa, a, xb, b), 5.0, 1e-9);
  EXPECT_NEAR(cli::SnrGain(xb, b, xa, a), -5.0, 1e-9);
}

TEST(SnrGainTest, DisjointRangesGiveNan) {
  const std::vector<double> x{-10, 0}, a{0.8, 0.9}, b{0.1, 0.2};
  EXPECT_TRUE(std::isnan(cli::SnrGain(x, a, x, b)));
}

metrics::MetricReport TwoModelReport() {
  metrics::MetricReport r;
  for (const char* id : {"unproc", "av_l", "av_nl"})
    for (double snr : {-5.0, 0.0})
      r.rows.push_back({id, id[0] == 'u' ? "-" : "AV",
                        id[0] == 'u' ? "-" : (std::string(id) == "av_l" ? "L" : "NL"), snr,
                        "estoi", 0.5 + snr / 20, 0.01, 12});
  return r;
}

TEST(ReportTest, SeriesAndSvg) {
  const auto r = TwoModelReport();
  EXPECT_EQ(cli::Metrics(r), std::vector<std::string>{"estoi"});
  const auto series = cli::ExtractSeries(r, "estoi");
  ASSERT_EQ(series.size(), 3u);
  EXPECT_EQ(series[1].model_id, "av_l");
  EXPECT_EQ(series[1].snr, (std::vector<double>{-5, 0}));
  const std::string svg = cli::RenderSvg(series, "estoi");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t count = 0;
  for (auto p = svg.find("class=\"series\""); p != std::string::npos;
       p = svg.find("class=\"series\"", p + 1))
    ++count;
  EXPECT_EQ(count, 3u);
  const std::string table = cli::RenderTable(r);
  EXPECT_NE(table.find("av_nl"), std::string::npos);
}

TEST(ReportTest, DuplicateSnrIsMalformed) {
  auto r = TwoModelReport();
  r.rows.push_back(r.rows[0]);
  ExpectError(ErrorCode::kMalformedCsv, [&] { cli::ExtractSeries(r, "estoi"); });
}

TEST(CliTest, ExitCodes) {
  const fs::path dir = FreshDir("exit");
  std::ofstream(dir / "bad.cfg") << "bogus=1\n";
  EXPECT_EQ(RunCli({"--config", (dir / "bad.cfg").string(), "split"}), 1);
  EXPECT_EQ(RunCli({"no-such-command"}), 1);
  std::ofstream(dir / "ok.cfg") << "work_dir=" << (dir / "work").string() << "\n"
                                << "data_dir=" << (dir / "data").string() << "\n";
  // No plan on disk: a runtime failure.
  EXPECT_EQ(RunCli({"--config", (dir / "ok.cfg").string(), "train"}), 2);
  EXPECT_EQ(RunCli({"--help"}), 0);
}

TEST(CliTest, FixtureUnwritableDirectory) {
  const fs::path dir = FreshDir("unwritable");
  std::ofstream(dir / "file") << "x";
  ExperimentConfig c;
  c.data_dir = dir / "file" / "corpus";
  std::ostringstream out;
  try {
    cli::CmdFixture(c, out);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
    EXPECT_NE(std::string(e.what()).find(dir.string()), std::string::npos) << e.what();
  }
}

// fixture -> prepare -> split -> train -> enhance -> evaluate -> report on a
// small corpus and a narrow network.
class PipelineTest : public testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = FreshDir("pipeline");
    config_.data_dir = dir_ / "data";
    config_.work_dir = dir_ / "work";
    config_.fixture_speakers = 2;
    config_.fixture_utterances = 18;
    config_.snrs = {-5, 0};
    config_.epochs = 4;
    config_.batch = 32;
    config_.lr = 2e-3;
    config_.channel_divisor = 32;
    config_.seed = 11;
    std::ostringstream sink;
    cli::CmdFixture(config_, sink);
    cli::CmdPrepare(config_, false, sink);
    cli::CmdSplit(config_, sink);
    std::ostringstream log;
    model_ = cli::CmdTrain(config_, std::nullopt, log);
    train_log_ = log.str();
  }

  static inline fs::path dir_;
  static inline ExperimentConfig config_;
  static inline fs::path model_;
  static inline std::string train_log_;
};

TEST_F(PipelineTest, FixtureIsDeterministic) {
  const auto manifest = data::ReadManifest(config_.manifest_path());
  EXPECT_EQ(manifest.size(), 2u * 18 * 2);
  ExperimentConfig again = config_;
  again.data_dir = dir_ / "data2";
  std::ostringstream out;
  cli::CmdFixture(again, out);
  EXPECT_NE(out.str().find("entries=72"), std::string::npos) << out.str();
  EXPECT_EQ(Slurp(again.manifest_path()), Slurp(config_.manifest_path()));
  for (const auto& e : manifest) {
    const auto rel = fs::relative(e.audio, config_.data_dir);
    ASSERT_EQ(Slurp(e.audio), Slurp(again.data_dir / rel)) << rel;
  }
}

TEST_F(PipelineTest, PrepareArtifacts) {
  const auto noise = dsp::ReadWav(cli::NoisePath(config_));
  std::size_t longest = 0;
  for (const auto& e : data::ReadManifest(config_.manifest_path()))
    longest = std::max(longest, dsp::ReadWav(e.audio).size());
  EXPECT_GE(noise.size(), 10 * longest);
  const auto ltas = mixture::LoadLtas(cli::LtasPath(config_));
  // Estimated from the NL recordings of the (L-condition) training set.
  const auto manifest = data::ReadManifest(config_.manifest_path());
  const auto plan = data::ReadSplit(cli::SplitPath(config_));
  std::vector<dsp::Waveform> plain;
  for (const auto& e : plan.train) {
    ASSERT_EQ(e.condition, data::Condition::kLombard);
    plain.push_back(dsp::ReadWav(
        data::FindEntry(manifest, e.speaker, data::Condition::kNonLombard, e.utterance)->audio));
  }
  EXPECT_EQ(ltas.magnitudes, mixture::EstimateLtas(plain).magnitudes);

  std::ostringstream out;
  ExpectError(ErrorCode::kInvalidArgument, [&] { cli::CmdPrepare(config_, false, out); });
  const std::string before = Slurp(cli::NoisePath(config_));
  cli::CmdPrepare(config_, true, out);
  EXPECT_EQ(Slurp(cli::NoisePath(config_)), before);
}

TEST_F(PipelineTest, SplitPlanOnDisk) {
  const auto plan = data::ReadSplit(cli::SplitPath(config_));
  EXPECT_EQ(plan.test.size(), 2u * data::kTestPerSpeaker);
  EXPECT_EQ(plan.validation.size(), 2u * data::kValidationPerSpeaker);
  EXPECT_EQ(plan.train.size(), 2u * 3);
  EXPECT_EQ(plan.snrs, config_.snrs);
}

TEST_F(PipelineTest, TrainingLog) {
  std::vector<std::map<std::string, double>> epochs;
  std::istringstream in(train_log_);
  for (std::string line; std::getline(in, line);)
    if (line.rfind("epoch=", 0) == 0) epochs.push_back(ParseLogLine(line));
  ASSERT_EQ(epochs.size(), std::size_t(config_.epochs));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    EXPECT_EQ(epochs[i]["epoch"], double(i + 1));
    best = std::min(best, epochs[i]["val_loss"]);
    if (i == 0) {
      EXPECT_DOUBLE_EQ(epochs[i]["lr"], config_.lr);
      continue;
    }
    const double prev = epochs[i - 1]["lr"], lr = epochs[i]["lr"];
    EXPECT_TRUE(lr == prev || lr == prev / 2) << prev << " -> " << lr;
  }
  const auto model = model::LoadModel(model_);
  EXPECT_NEAR(model->metadata.validation_loss, best, 1e-8 * best);
  EXPECT_EQ(model->metadata.seed, config_.seed);
  EXPECT_EQ(model->metadata.train_condition, "L");
  auto log_file = model_;
  log_file.replace_extension(".log");
  EXPECT_TRUE(fs::exists(log_file));
}

TEST_F(PipelineTest, EnhanceKeepsLength) {
  const auto plan = data::ReadSplit(cli::SplitPath(config_));
  const auto& e = plan.test.front();
  const fs::path out = dir_ / "enhanced.wav";
  std::ostringstream err;
  cli::CmdEnhance(config_, model_, e.audio, e.video, out, err);
  EXPECT_EQ(dsp::ReadWav(out).size(), dsp::ReadWav(e.audio).size());
  EXPECT_TRUE(err.str().empty());
  ExpectError(ErrorCode::kMissingModality,
              [&] { cli::CmdEnhance(config_, model_, e.audio, std::nullopt, out, err); });
}

TEST_F(PipelineTest, AudioOnlyModelWarnsOnVideo) {
  ExperimentConfig ao = config_;
  ao.modality = model::Modality::kAudioOnly;
  ao.epochs = 1;
  std::ostringstream sink;
  const fs::path model = cli::CmdTrain(ao, std::nullopt, sink);
  EXPECT_EQ(model.filename(), "ao_l.avse");
  const auto plan = data::ReadSplit(cli::SplitPath(config_));
  const auto& e = plan.test.front();
  std::ostringstream err;
  cli::CmdEnhance(ao, model, e.audio, e.video, dir_ / "ao.wav", err);
  EXPECT_NE(err.str().find("warning"), std::string::npos);
  EXPECT_EQ(dsp::ReadWav(dir_ / "ao.wav").size(), dsp::ReadWav(e.audio).size());
}

TEST_F(PipelineTest, EvaluateAndReport) {
  const fs::path csv = dir_ / "eval.csv";
  std::ostringstream out;
  cli::CmdEvaluate(config_, {model_}, csv, 2, out);
  const auto report = metrics::ReadReportCsv(csv);
  ASSERT_EQ(report.rows.size(), 2u * config_.snrs.size());
  EXPECT_EQ(report.rows[0].model_id, "unproc");
  EXPECT_EQ(report.rows[2].model_id, "av_l");
  for (const auto& row : report.rows) EXPECT_EQ(row.n, 2u * data::kTestPerSpeaker);

  const fs::path report_dir = dir_ / "report";
  std::ostringstream rout;
  cli::CmdReport({csv}, report_dir, rout);
  EXPECT_TRUE(fs::exists(report_dir / "estoi.svg"));
  EXPECT_TRUE(fs::exists(report_dir / "summary.txt"));
  EXPECT_NE(rout.str().find("series=2"), std::string::npos) << rout.str();
  // Each model may appear only once across the inputs; the baseline is shared.
  ExpectError(ErrorCode::kMalformedCsv, [&] { cli::CmdReport({csv, csv}, report_dir, rout); });
}

TEST_F(PipelineTest, CommandLineEndToEnd) {
  const fs::path cfg = dir_ / "exp.cfg";
  ExperimentConfig c = config_;
  c.work_dir = dir_ / "work_cli";
  c.epochs = 1;
  std::ofstream(cfg) << cli::FormatConfig(c);
  EXPECT_EQ(RunCli({"--config", cfg.string(), "prepare"}), 0);
  EXPECT_EQ(RunCli({"--config", cfg.string(), "prepare"}), 1);
  EXPECT_EQ(RunCli({"--config", cfg.string(), "split"}), 0);
  EXPECT_EQ(RunCli({"--config", cfg.string(), "--seed", "11", "train"}), 0);
  EXPECT_TRUE(fs::exists(cli::ModelPath(c)));
  EXPECT_EQ(RunCli({"--config", cfg.string(), "--jobs", "2", "evaluate",
                 cli::ModelPath(c).string()}),
            0);
  EXPECT_TRUE(fs::exists(c.work_dir / "reports" / "evaluate.csv"));
}

}  // namespace
}  // namespace avse
