// tests/support/gradient_suite.cc

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

#include "gradient_suite.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "avse/nn/layers.h"
#include "avse/nn/ops.h"
#include "avse/nn/optim.h"
#include "grad_check.h"

namespace avse::testing {

using nn::Tensor;

namespace {

int Draw(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::size_t DrawSize(std::mt19937_64& rng, int lo, int hi) {
  return static_cast<std::size_t>(Draw(rng, lo, hi));
}

// Values bounded away from zero so that +-h never crosses a kink.
Tensor<double> AwayFromZero(nn::Shape shape, std::mt19937_64& rng) {
  auto t = RandomTensor(std::move(shape), rng, 0.1, 1.0);
  std::bernoulli_distribution sign(0.5);
  for (double& v : t.values())
    if (sign(rng)) v = -v;
  return t;
}

}  // namespace

double CheckConv2dGradients(uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = DrawSize(rng, 1, 2), c = DrawSize(rng, 1, 3),
                    f = DrawSize(rng, 1, 3);
  const std::size_t h = DrawSize(rng, 3, 7), w = DrawSize(rng, 3, 7);
  const nn::Stride2 s{Draw(rng, 1, 2), Draw(rng, 1, 2)};
  const nn::Shape wshape{f, c, DrawSize(rng, 1, 4), DrawSize(rng, 1, 4)};
  auto x = RandomTensor({n, c, h, w}, rng);
  auto weight = RandomTensor(wshape, rng);
  auto bias = RandomTensor({f}, rng);
  const auto probe = RandomTensor(nn::Conv2d(x, weight, bias, s).shape(), rng);
  auto loss = [&] { return Dot(probe, nn::Conv2d(x, weight, bias, s)); };
  const auto g = nn::Conv2dBackward(x, weight, s, probe);
  return std::max({MaxRelativeError(g.input, NumericGradient(loss, x)),
                   MaxRelativeError(g.weight, NumericGradient(loss, weight)),
                   MaxRelativeError(g.bias, NumericGradient(loss, bias))});
}

double CheckConvTranspose2dGradients(uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = DrawSize(rng, 1, 2), in_c = DrawSize(rng, 1, 3),
                    out_c = DrawSize(rng, 1, 3);
  const int out_h = Draw(rng, 3, 9), out_w = Draw(rng, 3, 9);
  const nn::Stride2 s{Draw(rng, 1, 2), Draw(rng, 1, 2)};
  const nn::Shape wshape{in_c, out_c, DrawSize(rng, 1, 4), DrawSize(rng, 1, 4)};
  auto y = RandomTensor({n, in_c, std::size_t(nn::CeilDiv(out_h, s.h)),
                         std::size_t(nn::CeilDiv(out_w, s.w))},
                        rng);
  auto weight = RandomTensor(wshape, rng);
  auto bias = RandomTensor({out_c}, rng);
  const auto probe =
      RandomTensor({n, out_c, std::size_t(out_h), std::size_t(out_w)}, rng);
  auto loss = [&] {
    return Dot(probe, nn::ConvTranspose2d(y, weight, bias, s, out_h, out_w));
  };
  const auto g = nn::ConvTranspose2dBackward(y, weight, s, probe);
  return std::max({MaxRelativeError(g.input, NumericGradient(loss, y)),
                   MaxRelativeError(g.weight, NumericGradient(loss, weight)),
                   MaxRelativeError(g.bias, NumericGradient(loss, bias))});
}

double CheckMaxPoolGradients(uint64_t seed) {
  std::mt19937_64 rng(seed);
  const nn::Shape shape{DrawSize(rng, 1, 2), DrawSize(rng, 1, 3),
                        2 * DrawSize(rng, 1, 3), 2 * DrawSize(rng, 1, 3)};
  // Distinct values 0.01 apart: no ties, and +-h never changes the argmax.
  std::vector<double> values(nn::NumElements(shape));
  std::iota(values.begin(), values.end(), 0.0);
  std::shuffle(values.begin(), values.end(), rng);
  for (double& v : values) v *= 0.01;
  Tensor<double> x(shape, values);
  const auto probe = RandomTensor(nn::MaxPool2x2(x).output.shape(), rng);
  auto loss = [&] { return Dot(probe, nn::MaxPool2x2(x).output); };
  const auto pooled = nn::MaxPool2x2(x);
  const auto gx = nn::MaxPool2x2Backward(x.shape(), pooled.argmax, probe);
  return MaxRelativeError(gx, NumericGradient(loss, x));
}

double CheckBatchNormGradients(uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t channels = DrawSize(rng, 1, 3);
  const bool spatial = Draw(rng, 0, 1) == 1;
  const nn::Shape shape =
      spatial ? nn::Shape{DrawSize(rng, 2, 3), channels, DrawSize(rng, 1, 4),
                          DrawSize(rng, 1, 4)}
              : nn::Shape{DrawSize(rng, 2, 5), channels};
  nn::BatchNormLayer<double> bn(channels);
  bn.gamma = RandomTensor({channels}, rng, 0.5, 1.5);
  bn.beta = RandomTensor({channels}, rng);
  auto x = RandomTensor(shape, rng, -2.0, 2.0);
  const auto probe = RandomTensor(shape, rng);
  auto loss = [&] { return Dot(probe, bn.Forward(x, nn::Mode::kTrain)); };
  bn.Forward(x, nn::Mode::kTrain);
  const auto gx = bn.Backward(probe);
  const auto ggamma = bn.grad_gamma, gbeta = bn.grad_beta;
  return std::max({MaxRelativeError(gx, NumericGradient(loss, x)),
                   MaxRelativeError(ggamma, NumericGradient(loss, bn.gamma)),
                   MaxRelativeError(gbeta, NumericGradient(loss, bn.beta))});
}

double CheckLeakyReluGradients(uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double alpha = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
  auto x = AwayFromZero({DrawSize(rng, 1, 3), DrawSize(rng, 2, 20)}, rng);
  const auto probe = RandomTensor(x.shape(), rng);
  auto loss = [&] { return Dot(probe, nn::LeakyRelu(x, alpha)); };
  return MaxRelativeError(nn::LeakyReluBackward(x, alpha, probe),
                          NumericGradient(loss, x));
}

double CheckReluGradients(uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto x = AwayFromZero({DrawSize(rng, 1, 3), DrawSize(rng, 2, 20)}, rng);
  const auto probe = RandomTensor(x.shape(), rng);
  auto loss = [&] { return Dot(probe, nn::Relu(x)); };
  return MaxRelativeError(nn::ReluBackward(x, probe), NumericGradient(loss, x));
}

double CheckDropoutGradients(uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto x = RandomTensor({DrawSize(rng, 1, 3), DrawSize(rng, 2, 30)}, rng);
  const auto probe = RandomTensor(x.shape(), rng);
  nn::DropoutLayer<double> layer(0.25);
  const uint64_t mask_seed = rng();
  auto loss = [&] {
    return Dot(probe, nn::Dropout(x, 0.25, nn::Mode::kTrain, mask_seed));
  };
  layer.Forward(x, nn::Mode::kTrain, mask_seed);
  return MaxRelativeError(layer.Backward(probe), NumericGradient(loss, x));
}

double CheckDenseGradients(uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = DrawSize(rng, 1, 4), d = DrawSize(rng, 1, 8),
                    m = DrawSize(rng, 1, 8);
  auto x = RandomTensor({n, d}, rng);
  auto w = RandomTensor({d, m}, rng);
  auto b = RandomTensor({m}, rng);
  const auto probe = RandomTensor({n, m}, rng);
  auto loss = [&] { return Dot(probe, nn::Dense(x, w, b)); };
  const auto g = nn::DenseBackward(x, w, probe);
  return std::max({MaxRelativeError(g.input, NumericGradient(loss, x)),
                   MaxRelativeError(g.weight, NumericGradient(loss, w)),
                   MaxRelativeError(g.bias, NumericGradient(loss, b))});
}

double CheckMaskLossGradients(uint64_t seed) {
  std::mt19937_64 rng(seed);
  const nn::Shape shape{DrawSize(rng, 1, 3), 1, DrawSize(rng, 2, 9),
                        DrawSize(rng, 2, 6)};
  auto predicted = RandomTensor(shape, rng, 0.0, 3.0);
  const auto target = RandomTensor(shape, rng, 0.0, 10.0);
  auto loss = [&] { return nn::MaskMseLoss(predicted, target).loss; };
  return MaxRelativeError(nn::MaskMseLoss(predicted, target).grad,
                          NumericGradient(loss, predicted));
}

const std::vector<GradientCheck>& AllGradientChecks() {
  static const std::vector<GradientCheck> checks = {
      {"conv2d", CheckConv2dGradients},
      {"conv_transpose2d", CheckConvTranspose2dGradients},
      {"maxpool2x2", CheckMaxPoolGradients},
      {"batchnorm", CheckBatchNormGradients},
      {"leaky_relu", CheckLeakyReluGradients},
      {"relu", CheckReluGradients},
      {"dropout", CheckDropoutGradients},
      {"dense", CheckDenseGradients},
      {"mask_mse_loss", CheckMaskLossGradients},
  };
  return checks;
}

double ConvAdjointGap(uint64_t seed, int layer_index) {
  struct Geometry {
    std::size_t h, w;
    int kh, kw;
    nn::Stride2 s;
  };
  // Input plane, kernel and stride of each encoder layer: audio L1..L6, then
  // video L1..L6 (stride 1, input halved by pooling after each block).
  static const Geometry kLayers[] = {
      {321, 20, 5, 5, {2, 2}}, {161, 10, 4, 4, {2, 1}}, {81, 10, 4, 4, {2, 2}},
      {41, 5, 2, 2, {2, 1}},   {21, 5, 2, 2, {2, 1}},   {11, 5, 2, 2, {2, 1}},
      {128, 128, 5, 5, {1, 1}}, {64, 64, 5, 5, {1, 1}}, {32, 32, 3, 3, {1, 1}},
      {16, 16, 3, 3, {1, 1}},   {8, 8, 3, 3, {1, 1}},   {4, 4, 3, 3, {1, 1}},
  };
  const Geometry& g = kLayers[layer_index % 12];
  std::mt19937_64 rng(seed);
  const std::size_t n = DrawSize(rng, 1, 2), c = DrawSize(rng, 1, 3),
                    f = DrawSize(rng, 1, 3);
  const auto x = RandomTensor({n, c, g.h, g.w}, rng);
  const auto weight =
      RandomTensor({f, c, std::size_t(g.kh), std::size_t(g.kw)}, rng);
  const Tensor<double> zero_f({f}), zero_c({c});
  const auto conv = nn::Conv2d(x, weight, zero_f, g.s);
  const auto y = RandomTensor(conv.shape(), rng);
  const auto back = nn::ConvTranspose2d(y, weight, zero_c, g.s, int(g.h), int(g.w));
  return std::abs(Dot(conv, y) - Dot(x, back));
}

}  // namespace avse::testing
