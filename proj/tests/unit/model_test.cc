// tests/unit/model_test.cc

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
#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "avse/error.h"
#include "avse/model/features.h"
#include "avse/model/network.h"
#include "avse/model/spec.h"
#include "avse/model/trained_model.h"
#include "avse/model/weights.h"
#include "avse/nn/optim.h"
#include "grad_check.h"

namespace avse::model {
namespace {

using nn::Shape;
using nn::Tensor;

template <typename F>
void ExpectError(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << ErrorCodeName(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

template <typename T>
Tensor<T> Random(Shape shape, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Tensor<T> t(std::move(shape));
  for (T& v : t.values()) v = T(g(rng));
  return t;
}

FeatureStats UnitStats() {
  FeatureStats s;
  s.audio_mean.assign(321, 0.0);
  s.audio_std.assign(321, 1.0);
  return s;
}

std::filesystem::path TempFile(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("avse_model_test_" + name);
}

TEST(ModelSpecTest, FusionWidths) {
  EXPECT_EQ(BuildModel(Modality::kAudioVisual).fusion_input(), 5888);
  EXPECT_EQ(BuildModel(Modality::kAudioOnly).fusion_input(), 3840);
  EXPECT_EQ(BuildModel(Modality::kVideoOnly).fusion_input(), 2048);
  for (Modality m : {Modality::kAudioVisual, Modality::kAudioOnly, Modality::kVideoOnly}) {
    const ModelSpec spec = BuildModel(m);
    EXPECT_EQ(spec.output(), (ActivationShape{1, 321, 20}));
    ASSERT_EQ(spec.fusion.size(), 3u);
    EXPECT_EQ(spec.fusion[0].out_features, 1312);
    EXPECT_EQ(spec.fusion[1].out_features, 1312);
    EXPECT_EQ(spec.fusion[2].out_features, 3840);
  }
}

TEST(ModelSpecTest, AudioChain) {
  const ModelSpec spec = BuildModel(Modality::kAudioOnly);
  const ActivationShape want[] = {{64, 161, 10},  {64, 81, 10},  {128, 41, 5},
                                  {128, 21, 5},   {128, 11, 5},  {128, 6, 5}};
  ASSERT_EQ(spec.audio_encoder.size(), 6u);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(spec.audio_encoder[i].output, want[i]) << i;
  EXPECT_EQ(spec.audio_features(), 3840);
}

TEST(ModelSpecTest, DecoderMirrorsEncoder) {
  const ModelSpec spec = BuildModel(Modality::kAudioVisual);
  const ActivationShape want[] = {{128, 11, 5},  {128, 21, 5},  {128, 41, 5},
                                  {64, 81, 10},  {64, 161, 10}, {1, 321, 20}};
  for (int i = 0; i < 6; ++i) EXPECT_EQ(spec.decoder[i].output, want[i]) << i;
  ASSERT_EQ(spec.skips.size(), 3u);
  EXPECT_EQ(spec.decoder[1].in_channels, 256);
  EXPECT_EQ(spec.decoder[3].in_channels, 256);
  EXPECT_EQ(spec.decoder[5].in_channels, 128);
  const ModelSpec vo = BuildModel(Modality::kVideoOnly);
  EXPECT_TRUE(vo.skips.empty());
  EXPECT_EQ(vo.decoder[1].in_channels, 128);
}

TEST(ModelSpecTest, ChannelDivisor) {
  const ModelSpec spec = BuildModel(Modality::kAudioVisual, 16);
  EXPECT_EQ(spec.audio_encoder[0].filters, 4);
  EXPECT_EQ(spec.video_encoder[5].filters, 32);
  EXPECT_EQ(spec.fusion_input(), 240 + 128);
  EXPECT_EQ(spec.fusion[0].out_features, 82);
  EXPECT_EQ(spec.output(), (ActivationShape{1, 321, 20}));
  ExpectError(ErrorCode::kInvalidArgument, [] { BuildModel(Modality::kAudioOnly, 3); });
  ExpectError(ErrorCode::kInvalidArgument, [] { BuildModel(Modality::kAudioOnly, 64); });
}

TEST(ParameterCountTest, LayerExamples) {
  const ModelSpec spec = BuildModel(Modality::kAudioVisual);
  const ConvSpec& a1 = spec.audio_encoder[0];
  EXPECT_EQ(a1.filters * a1.in_channels * a1.kernel.h * a1.kernel.w + a1.filters, 1664);
  const ConvSpec& v1 = spec.video_encoder[0];
  EXPECT_EQ(v1.filters * v1.in_channels * v1.kernel.h * v1.kernel.w + v1.filters, 16128);
}

TEST(ParameterCountTest, Golden) {
  const std::size_t av = CountParameters(BuildModel(Modality::kAudioVisual));
  EXPECT_EQ(av, 20336897u);
  EXPECT_LT(CountParameters(BuildModel(Modality::kAudioOnly)), av);
  EXPECT_LT(CountParameters(BuildModel(Modality::kVideoOnly)), av);
  // Matches the tensors a network actually allocates.
  for (Modality m : {Modality::kAudioVisual, Modality::kAudioOnly, Modality::kVideoOnly}) {
    Network<float> net(BuildModel(m, 8));
    std::size_t total = 0;
    for (const auto& p : net.Params()) total += p.value->size();
    EXPECT_EQ(total, CountParameters(net.spec()));
  }
}

TEST(NetworkTest, FullWidthShapeTrace) {
  Network<float> net(BuildModel(Modality::kAudioVisual));
  net.Init(3);
  const auto audio = Random<float>({1, 1, 321, 20}, 1);
  const auto video = Random<float>({1, 5, 128, 128}, 2);
  std::vector<TraceEntry> trace;
  const auto mask = net.Forward(&audio, &video, nn::Mode::kInference, 0, &trace);
  const std::vector<std::pair<std::string, Shape>> want = {
      {"audio_input", {1, 1, 321, 20}},   {"audio1", {1, 64, 161, 10}},
      {"audio2", {1, 64, 81, 10}},        {"audio3", {1, 128, 41, 5}},
      {"audio4", {1, 128, 21, 5}},        {"audio5", {1, 128, 11, 5}},
      {"audio6", {1, 128, 6, 5}},         {"audio_flat", {1, 3840}},
      {"video_input", {1, 5, 128, 128}},  {"video1", {1, 128, 64, 64}},
      {"video2", {1, 128, 32, 32}},       {"video3", {1, 256, 16, 16}},
      {"video4", {1, 256, 8, 8}},         {"video5", {1, 512, 4, 4}},
      {"video6", {1, 512, 2, 2}},         {"video_flat", {1, 2048}},
      {"fusion_input", {1, 5888}},        {"fusion1", {1, 1312}},
      {"fusion2", {1, 1312}},             {"fusion3", {1, 3840}},
      {"bottleneck", {1, 128, 6, 5}},     {"decoder1", {1, 128, 11, 5}},
      {"decoder1+skip", {1, 256, 11, 5}}, {"decoder2", {1, 128, 21, 5}},
      {"decoder3", {1, 128, 41, 5}},      {"decoder3+skip", {1, 256, 41, 5}},
      {"decoder4", {1, 64, 81, 10}},      {"decoder5", {1, 64, 161, 10}},
      {"decoder5+skip", {1, 128, 161, 10}}, {"decoder6", {1, 1, 321, 20}},
  };
  ASSERT_EQ(trace.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(trace[i].name, want[i].first);
    EXPECT_EQ(trace[i].shape, want[i].second) << trace[i].name;
  }
  EXPECT_EQ(mask.shape(), (Shape{1, 1, 321, 20}));
  for (float v : mask.values()) EXPECT_GE(v, 0.0f);
}

TEST(NetworkTest, DeterministicInference) {
  Network<float> a(BuildModel(Modality::kAudioVisual, 16)), b(a.spec());
  a.Init(9);
  b.Init(9);
  const auto audio = Random<float>({2, 1, 321, 20}, 1);
  const auto video = Random<float>({2, 5, 128, 128}, 2);
  const auto first = a.Forward(&audio, &video, nn::Mode::kInference);
  EXPECT_EQ(first, a.Forward(&audio, &video, nn::Mode::kInference));
  EXPECT_EQ(first, b.Forward(&audio, &video, nn::Mode::kInference));
}

TEST(NetworkTest, InputChecks) {
  Network<float> av(BuildModel(Modality::kAudioVisual, 32));
  av.Init(1);
  const auto audio = Random<float>({2, 1, 321, 20}, 1);
  const auto video = Random<float>({2, 5, 128, 128}, 2);
  ExpectError(ErrorCode::kMissingModality,
              [&] { av.Forward(&audio, nullptr, nn::Mode::kInference); });
  ExpectError(ErrorCode::kMissingModality,
              [&] { av.Forward(nullptr, &video, nn::Mode::kInference); });
  const auto wrong = Random<float>({2, 1, 320, 20}, 3);
  ExpectError(ErrorCode::kBadChunkShape,
              [&] { av.Forward(&wrong, &video, nn::Mode::kInference); });
  ExpectError(ErrorCode::kMissingForwardCache, [&] {
    Network<float> fresh(av.spec());
    fresh.Backward(Tensor<float>({2, 1, 321, 20}));
  });
}

TEST(NetworkTest, AblationIndependence) {
  const auto audio1 = Random<float>({2, 1, 321, 20}, 1);
  const auto audio2 = Random<float>({2, 1, 321, 20}, 5);
  const auto video1 = Random<float>({2, 5, 128, 128}, 2);
  const auto video2 = Random<float>({2, 5, 128, 128}, 6);
  Network<float> vo(BuildModel(Modality::kVideoOnly, 32));
  vo.Init(4);
  EXPECT_EQ(vo.Forward(&audio1, &video1, nn::Mode::kInference),
            vo.Forward(&audio2, &video1, nn::Mode::kInference));
  EXPECT_EQ(vo.Forward(&audio1, &video1, nn::Mode::kInference),
            vo.Forward(nullptr, &video1, nn::Mode::kInference));
  Network<float> ao(BuildModel(Modality::kAudioOnly, 32));
  ao.Init(4);
  EXPECT_EQ(ao.Forward(&audio1, &video1, nn::Mode::kInference),
            ao.Forward(&audio1, &video2, nn::Mode::kInference));
}

TEST(NetworkTest, SkipsAffectOutput) {
  Network<float> net(BuildModel(Modality::kAudioVisual, 16));
  net.Init(8);
  const auto audio = Random<float>({2, 1, 321, 20}, 1);
  const auto video = Random<float>({2, 5, 128, 128}, 2);
  const auto with = net.Forward(&audio, &video, nn::Mode::kInference);
  net.set_skips_enabled(false);
  const auto without = net.Forward(&audio, &video, nn::Mode::kInference);
  double diff = 0.0;
  for (std::size_t i = 0; i < with.size(); ++i) diff += std::abs(with[i] - without[i]);
  EXPECT_GT(diff, 1e-3);
}

// Central differences on a sample of parameter entries of the whole network.
void CheckNetworkGradients(Modality modality, uint64_t seed) {
  Network<double> net(BuildModel(modality, 32));
  net.Init(seed);
  // Move batchnorm scales off 1 and biases off 0 so every term is exercised.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (auto& p : net.Params())
    if (p.name.find(".bn.") != std::string::npos || p.name.find("bias") != std::string::npos)
      for (double& v : p.value->values()) v += u(rng);
  const auto audio = Random<double>({2, 1, 321, 20}, seed + 1);
  const auto video = Random<double>({2, 5, 128, 128}, seed + 2);
  const auto probe = Random<double>({2, 1, 321, 20}, seed + 3);
  const bool a = UsesAudio(modality), v = UsesVideo(modality);
  auto loss = [&] {
    const auto out = net.Forward(a ? &audio : nullptr, v ? &video : nullptr,
                                 nn::Mode::kTrain, 77);
    return testing::Dot(probe, out);
  };
  loss();
  net.Backward(probe);
  auto params = net.Params();
  double worst = 0.0, scale = 0.0;
  for (auto& p : params) {
    const Tensor<double> analytic = *p.grad;
    for (int k = 0; k < 2; ++k) {
      const std::size_t i = rng() % p.value->size();
      const double saved = (*p.value)[i];
      (*p.value)[i] = saved + 1e-6;
      const double up = loss();
      (*p.value)[i] = saved - 1e-6;
      const double down = loss();
      (*p.value)[i] = saved;
      const double numeric = (up - down) / 2e-6;
      worst = std::max(worst, std::abs(numeric - analytic[i]));
      scale = std::max(scale, std::abs(numeric));
    }
  }
  EXPECT_LT(worst / scale, 1e-4) << ModalityName(modality);
}

TEST(NetworkGradientTest, AudioVisual) { CheckNetworkGradients(Modality::kAudioVisual, 11); }
TEST(NetworkGradientTest, AudioOnly) { CheckNetworkGradients(Modality::kAudioOnly, 12); }
TEST(NetworkGradientTest, VideoOnly) { CheckNetworkGradients(Modality::kVideoOnly, 13); }

TEST(NetworkTest, OneStepDecreasesLoss) {
  int decreased = 0;
  const int trials = 20;
  for (int seed = 0; seed < trials; ++seed) {
    Network<float> net(BuildModel(Modality::kAudioVisual, 32));
    net.Init(seed);
    // One (input, target) pair, duplicated so batchnorm has two rows.
    auto audio = Random<float>({1, 1, 321, 20}, 100 + seed);
    auto video = Random<float>({1, 5, 128, 128}, 200 + seed);
    auto target = Random<float>({1, 1, 321, 20}, 300 + seed);
    for (float& t : target.values()) t = std::clamp(std::abs(t), 0.0f, 10.0f);
    auto twice = [](const Tensor<float>& t) {
      Shape s = t.shape();
      s[0] = 2;
      std::vector<float> v(t.values());
      v.insert(v.end(), t.values().begin(), t.values().end());
      return Tensor<float>(s, v);
    };
    audio = twice(audio);
    video = twice(video);
    target = twice(target);
    auto params = net.Params();
    std::vector<Tensor<float>*> values;
    std::vector<const Tensor<float>*> grads;
    for (auto& p : params) {
      values.push_back(p.value);
      grads.push_back(p.grad);
    }
    const auto before = nn::MaskMseLoss(
        net.Forward(&audio, &video, nn::Mode::kTrain, 5), target);
    net.Backward(before.grad);
    nn::AdamState<float> adam;
    adam.config.lr = 1e-4;
    nn::AdamStep<float>(values, grads, adam);
    const double after =
        nn::MaskMseLoss(net.Forward(&audio, &video, nn::Mode::kTrain, 5), target).loss;
    decreased += after < before.loss;
  }
  EXPECT_GE(decreased, 19);
}

TEST(FeatureStatsTest, ConstantFramesFloorStd) {
  FeatureStatsAccumulator acc;
  acc.AddAudio(dsp::MagnitudeSpectrogram(dsp::Grid<double>(321, 30, 0.7)));
  acc.AddAudio(dsp::MagnitudeSpectrogram(dsp::Grid<double>(321, 11, 0.7)));
  const FeatureStats s = acc.Finish();
  for (int k = 0; k < 321; ++k) {
    EXPECT_NEAR(s.audio_mean[k], 0.7, 1e-15);
    EXPECT_EQ(s.audio_std[k], 1e-6);
  }
}

TEST(FeatureStatsTest, SelfConsistencyAndOrder) {
  std::mt19937_64 rng(4);
  std::gamma_distribution<double> g(2.0, 0.3);
  std::vector<dsp::MagnitudeSpectrogram> set;
  for (int u = 0; u < 7; ++u) {
    dsp::MagnitudeSpectrogram m(dsp::Grid<double>(321, 20 + 13 * u));
    for (double& v : m.values.data()) v = g(rng) * (1 + u % 3);
    set.push_back(m);
  }
  FeatureStatsAccumulator forward, backward;
  for (const auto& m : set) forward.AddAudio(m);
  for (auto it = set.rbegin(); it != set.rend(); ++it) backward.AddAudio(*it);
  const FeatureStats s = forward.Finish(), r = backward.Finish();
  for (int k = 0; k < 321; ++k) {
    EXPECT_NEAR(s.audio_mean[k], r.audio_mean[k], 1e-12);
    EXPECT_NEAR(s.audio_std[k], r.audio_std[k], 1e-12);
    double sum = 0.0, sq = 0.0, n = 0.0;
    for (const auto& m : set)
      for (std::size_t t = 0; t < m.frames(); ++t) {
        const double z = (m.values(k, t) - s.audio_mean[k]) / s.audio_std[k];
        sum += z;
        sq += z * z;
        n += 1;
      }
    EXPECT_NEAR(sum / n, 0.0, 1e-6);
    EXPECT_NEAR(std::sqrt(sq / n - (sum / n) * (sum / n)), 1.0, 1e-3);
  }
}

TEST(FeatureStatsTest, VideoAndEmpty) {
  ExpectError(ErrorCode::kEmptySplit, [] { FeatureStatsAccumulator().Finish(); });
  FeatureStatsAccumulator acc;
  data::VideoClip clip;
  clip.pixels.assign(2 * 128 * 128, 0);
  std::fill(clip.pixels.begin(), clip.pixels.begin() + 128 * 128, 255);
  acc.AddVideo(clip);
  const FeatureStats s = acc.Finish();
  EXPECT_FALSE(s.has_audio());
  EXPECT_NEAR(s.video_mean, 0.5, 1e-12);
  EXPECT_NEAR(s.video_std, 0.5, 1e-12);
  ExpectError(ErrorCode::kStatsMissing, [&] {
    std::vector<float> out(321 * 20);
    s.NormalizeAudio(dsp::Grid<double>(321, 20), out.data());
  });
}

TEST(WeightsTest, RoundTripIsBitExact) {
  TrainedModel model(BuildModel(Modality::kAudioVisual, 16), UnitStats());
  model.network().Init(21);
  for (auto& b : model.network().Buffers())
    for (float& v : b.value->values()) v += 0.25f;
  model.metadata = {7, 0.125, 99, "NL"};
  const auto path = TempFile("av.bin");
  SaveModel(model, path);
  const auto loaded = LoadModel(path);
  EXPECT_EQ(loaded->spec(), model.spec());
  auto pa = model.network().Params(), pb = loaded->network().Params();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(*pa[i].value, *pb[i].value) << pa[i].name;
  auto ba = model.network().Buffers(), bb = loaded->network().Buffers();
  for (std::size_t i = 0; i < ba.size(); ++i) EXPECT_EQ(*ba[i].value, *bb[i].value);
  EXPECT_EQ(loaded->metadata.epoch, 7);
  EXPECT_EQ(loaded->metadata.validation_loss, 0.125);
  EXPECT_EQ(loaded->metadata.seed, 99u);
  EXPECT_EQ(loaded->metadata.train_condition, "NL");
  EXPECT_EQ(loaded->stats().audio_mean, model.stats().audio_mean);

  std::vector<dsp::Grid<double>> audio(3, dsp::Grid<double>(321, 20));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (auto& g : audio)
    for (double& v : g.data()) v = u(rng);
  std::vector<data::VideoClip> video(3);
  for (auto& c : video) {
    c.pixels.resize(5 * 128 * 128);
    for (auto& p : c.pixels) p = uint8_t(rng());
  }
  EXPECT_EQ(model.EstimateChunks(audio, video), loaded->EstimateChunks(audio, video));
  std::filesystem::remove(path);
}

TEST(WeightsTest, CorruptFiles) {
  TrainedModel model(BuildModel(Modality::kAudioOnly, 32), UnitStats());
  model.network().Init(1);
  const auto path = TempFile("ao.bin");
  SaveModel(model, path);
  const auto size = std::filesystem::file_size(path);

  const auto truncated = TempFile("truncated.bin");
  std::filesystem::copy_file(path, truncated, std::filesystem::copy_options::overwrite_existing);
  std::filesystem::resize_file(truncated, size / 2);
  ExpectError(ErrorCode::kCorruptFile, [&] { LoadModel(truncated); });

  const auto flipped = TempFile("flipped.bin");
  std::filesystem::copy_file(path, flipped, std::filesystem::copy_options::overwrite_existing);
  {
    std::fstream f(flipped, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(std::streamoff(size / 3));
    f.put('\x5a');
  }
  ExpectError(ErrorCode::kCorruptFile, [&] { LoadModel(flipped); });

  const auto garbage = TempFile("garbage.bin");
  std::ofstream(garbage) << "definitely not a model file";
  ExpectError(ErrorCode::kCorruptFile, [&] { LoadModel(garbage); });

  const ModelSpec av = BuildModel(Modality::kAudioVisual, 32);
  ExpectError(ErrorCode::kShapeMismatchOnLoad, [&] { LoadModel(path, &av); });
  const ModelSpec wider = BuildModel(Modality::kAudioOnly, 16);
  ExpectError(ErrorCode::kShapeMismatchOnLoad, [&] { LoadModel(path, &wider); });
  const ModelSpec same = BuildModel(Modality::kAudioOnly, 32);
  EXPECT_NO_THROW(LoadModel(path, &same));
  for (const auto& p : {path, truncated, flipped, garbage}) std::filesystem::remove(p);
}

TEST(WeightsTest, NoTemporaryLeftBehind) {
  TrainedModel model(BuildModel(Modality::kVideoOnly, 32), FeatureStats{});
  model.network().Init(1);
  const auto path = TempFile("vo.bin");
  SaveModel(model, path);
  auto tmp = path;
  tmp += ".tmp";
  EXPECT_TRUE(std::filesystem::exists(path));
  EXPECT_FALSE(std::filesystem::exists(tmp));
  EXPECT_EQ(LoadModel(path)->modality(), Modality::kVideoOnly);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace avse::model
