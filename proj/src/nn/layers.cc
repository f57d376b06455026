// src/nn/layers.cc

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

#include "avse/nn/layers.h"

#include <cmath>

namespace avse::nn {

namespace {

[[noreturn]] void MissingCache(const char* layer) {
  throw Error(ErrorCode::kMissingForwardCache,
              std::string(layer) + "::Backward called without Forward");
}

}  // namespace

// --- Conv2dLayer -------------------------------------------------------------

template <typename T>
Conv2dLayer<T>::Conv2dLayer(std::size_t in_channels, std::size_t filters,
                            Kernel2 kernel, Stride2 s)
    : weight({filters, in_channels, std::size_t(kernel.h), std::size_t(kernel.w)}),
      bias({filters}),
      grad_weight(weight.shape()),
      grad_bias(bias.shape()),
      stride(s) {}

template <typename T>
void Conv2dLayer<T>::Init(uint64_t seed) {
  const std::size_t area = weight.dim(2) * weight.dim(3);
  weight = XavierUniform<T>(weight.shape(), weight.dim(1) * area,
                            weight.dim(0) * area, seed);
  bias.Fill(T{0});
}

template <typename T>
Tensor<T> Conv2dLayer<T>::Forward(const Tensor<T>& x) {
  input_ = x;
  return Conv2d(x, weight, bias, stride);
}

template <typename T>
Tensor<T> Conv2dLayer<T>::Backward(const Tensor<T>& grad_out,
                                   bool need_input_grad) {
  if (!input_) MissingCache("Conv2dLayer");
  auto g = Conv2dBackward(*input_, weight, stride, grad_out, need_input_grad);
  grad_weight = std::move(g.weight);
  grad_bias = std::move(g.bias);
  return std::move(g.input);
}

template <typename T>
void Conv2dLayer<T>::CollectParams(const std::string& prefix,
                                   std::vector<Param<T>>& out) {
  out.push_back({prefix + ".weight", &weight, &grad_weight});
  out.push_back({prefix + ".bias", &bias, &grad_bias});
}

// --- ConvTranspose2dLayer ----------------------------------------------------

template <typename T>
ConvTranspose2dLayer<T>::ConvTranspose2dLayer(std::size_t in_channels,
                                              std::size_t out_channels,
                                              Kernel2 kernel, Stride2 s,
                                              int oh, int ow)
    : weight({in_channels, out_channels, std::size_t(kernel.h),
              std::size_t(kernel.w)}),
      bias({out_channels}),
      grad_weight(weight.shape()),
      grad_bias(bias.shape()),
      stride(s),
      out_h(oh),
      out_w(ow) {}

template <typename T>
void ConvTranspose2dLayer<T>::Init(uint64_t seed) {
  const std::size_t area = weight.dim(2) * weight.dim(3);
  weight = XavierUniform<T>(weight.shape(), weight.dim(0) * area,
                            weight.dim(1) * area, seed);
  bias.Fill(T{0});
}

template <typename T>
Tensor<T> ConvTranspose2dLayer<T>::Forward(const Tensor<T>& x) {
  input_ = x;
  return ConvTranspose2d(x, weight, bias, stride, out_h, out_w);
}

template <typename T>
Tensor<T> ConvTranspose2dLayer<T>::Backward(const Tensor<T>& grad_out,
                                            bool need_input_grad) {
  if (!input_) MissingCache("ConvTranspose2dLayer");
  auto g = ConvTranspose2dBackward(*input_, weight, stride, grad_out,
                                   need_input_grad);
  grad_weight = std::move(g.weight);
  grad_bias = std::move(g.bias);
  return std::move(g.input);
}

template <typename T>
void ConvTranspose2dLayer<T>::CollectParams(const std::string& prefix,
                                            std::vector<Param<T>>& out) {
  out.push_back({prefix + ".weight", &weight, &grad_weight});
  out.push_back({prefix + ".bias", &bias, &grad_bias});
}

// --- DenseLayer --------------------------------------------------------------

template <typename T>
DenseLayer<T>::DenseLayer(std::size_t in_features, std::size_t out_features)
    : weight({in_features, out_features}),
      bias({out_features}),
      grad_weight(weight.shape()),
      grad_bias(bias.shape()) {}

template <typename T>
void DenseLayer<T>::Init(uint64_t seed) {
  weight = XavierUniform<T>(weight.shape(), weight.dim(0), weight.dim(1), seed);
  bias.Fill(T{0});
}

template <typename T>
Tensor<T> DenseLayer<T>::Forward(const Tensor<T>& x) {
  input_ = x;
  return Dense(x, weight, bias);
}

template <typename T>
Tensor<T> DenseLayer<T>::Backward(const Tensor<T>& grad_out) {
  if (!input_) MissingCache("DenseLayer");
  auto g = DenseBackward(*input_, weight, grad_out);
  grad_weight = std::move(g.weight);
  grad_bias = std::move(g.bias);
  return std::move(g.input);
}

template <typename T>
void DenseLayer<T>::CollectParams(const std::string& prefix,
                                  std::vector<Param<T>>& out) {
  out.push_back({prefix + ".weight", &weight, &grad_weight});
  out.push_back({prefix + ".bias", &bias, &grad_bias});
}

// --- BatchNormLayer ----------------------------------------------------------

template <typename T>
BatchNormLayer<T>::BatchNormLayer(std::size_t channels)
    : gamma({channels}, T{1}),
      beta({channels}, T{0}),
      grad_gamma({channels}),
      grad_beta({channels}),
      running_mean({channels}, T{0}),
      running_var({channels}, T{1}) {}

namespace {

struct ChannelLayout {
  std::size_t batch, channels, plane;
};

template <typename T>
ChannelLayout LayoutOf(const Tensor<T>& x, std::size_t channels) {
  if ((x.rank() != 4 && x.rank() != 2) || x.dim(1) != channels)
    throw Error(ErrorCode::kShapeMismatch,
                "BatchNorm over " + std::to_string(channels) +
                    " channels got " + ShapeString(x.shape()));
  return {x.dim(0), x.dim(1), x.rank() == 4 ? x.dim(2) * x.dim(3) : 1};
}

// Sums in double with eight interleaved accumulators: a fixed order, so the
// result is reproducible, but short dependency chains.
template <typename T, typename F>
double LaneSum(std::size_t n, F&& term) {
  double acc[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (int k = 0; k < 8; ++k) acc[k] += term(i + k);
  for (; i < n; ++i) acc[i % 8] += term(i);
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
         ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

}  // namespace

template <typename T>
Tensor<T> BatchNormLayer<T>::Forward(const Tensor<T>& x, Mode mode) {
  const ChannelLayout lay = LayoutOf(x, gamma.size());
  const std::size_t count = lay.batch * lay.plane;
  Cache cache{Tensor<T>(x.shape()), std::vector<double>(lay.channels), mode};
  Tensor<T> y(x.shape());

  std::vector<double> mean(lay.channels), var(lay.channels);
  if (mode == Mode::kTrain) {
    if (lay.batch < 2)
      throw Error(ErrorCode::kDegenerateBatch,
                  "batchnorm training needs a batch of at least 2");
    for (std::size_t c = 0; c < lay.channels; ++c) {
      double sum = 0.0;
      for (std::size_t n = 0; n < lay.batch; ++n) {
        const T* p = x.data() + (n * lay.channels + c) * lay.plane;
        sum += LaneSum<T>(lay.plane, [p](std::size_t i) { return double(p[i]); });
      }
      mean[c] = sum / count;
      double sq = 0.0;
      for (std::size_t n = 0; n < lay.batch; ++n) {
        const T* p = x.data() + (n * lay.channels + c) * lay.plane;
        const double m = mean[c];
        sq += LaneSum<T>(lay.plane, [p, m](std::size_t i) {
          const double d = p[i] - m;
          return d * d;
        });
      }
      var[c] = sq / count;
      if (calibration_) {
        calibration_->mean_sum[c] += mean[c];
        calibration_->var_sum[c] += var[c];
        continue;
      }
      running_mean[c] = static_cast<T>(kMomentum * running_mean[c] +
                                       (1.0 - kMomentum) * mean[c]);
      running_var[c] = static_cast<T>(kMomentum * running_var[c] +
                                      (1.0 - kMomentum) * var[c]);
    }
    if (calibration_) ++calibration_->batches;
  } else {
    for (std::size_t c = 0; c < lay.channels; ++c) {
      mean[c] = running_mean[c];
      var[c] = std::max<double>(running_var[c], 0.0);
    }
  }

  for (std::size_t c = 0; c < lay.channels; ++c)
    cache.inv_std[c] = 1.0 / std::sqrt(var[c] + kEpsilon);
  for (std::size_t n = 0; n < lay.batch; ++n)
    for (std::size_t c = 0; c < lay.channels; ++c) {
      const std::size_t off = (n * lay.channels + c) * lay.plane;
      const T g = gamma[c], b = beta[c];
      const T m = static_cast<T>(mean[c]), inv = static_cast<T>(cache.inv_std[c]);
      const T* in = x.data() + off;
      T* norm = cache.normalized.data() + off;
      T* out = y.data() + off;
      for (std::size_t i = 0; i < lay.plane; ++i) {
        const T xhat = (in[i] - m) * inv;
        norm[i] = xhat;
        out[i] = g * xhat + b;
      }
    }
  cache_ = std::move(cache);
  return y;
}

template <typename T>
void BatchNormLayer<T>::BeginCalibration() {
  const std::size_t n = gamma.size();
  calibration_ = Calibration{std::vector<double>(n), std::vector<double>(n), 0};
}

template <typename T>
void BatchNormLayer<T>::EndCalibration() {
  if (!calibration_) return;
  if (const std::size_t k = calibration_->batches) {
    for (std::size_t c = 0; c < gamma.size(); ++c) {
      running_mean[c] = static_cast<T>(calibration_->mean_sum[c] / double(k));
      running_var[c] = static_cast<T>(calibration_->var_sum[c] / double(k));
    }
  }
  calibration_.reset();
}

template <typename T>
Tensor<T> BatchNormLayer<T>::Backward(const Tensor<T>& grad_out) {
  if (!cache_) MissingCache("BatchNormLayer");
  const Tensor<T>& xhat = cache_->normalized;
  ExpectShape(grad_out, xhat.shape(), "BatchNormLayer::Backward");
  const ChannelLayout lay = LayoutOf(grad_out, gamma.size());
  const double count = static_cast<double>(lay.batch * lay.plane);
  Tensor<T> gx(grad_out.shape());
  for (std::size_t c = 0; c < lay.channels; ++c) {
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (std::size_t n = 0; n < lay.batch; ++n) {
      const std::size_t off = (n * lay.channels + c) * lay.plane;
      const T* dy = grad_out.data() + off;
      const T* xh = xhat.data() + off;
      sum_dy += LaneSum<T>(lay.plane, [dy](std::size_t i) { return double(dy[i]); });
      sum_dy_xhat += LaneSum<T>(
          lay.plane, [dy, xh](std::size_t i) { return double(dy[i]) * xh[i]; });
    }
    grad_gamma[c] = static_cast<T>(sum_dy_xhat);
    grad_beta[c] = static_cast<T>(sum_dy);
    const double g = gamma[c];
    const double inv_std = cache_->inv_std[c];
    const bool train = cache_->mode == Mode::kTrain;
    // dx = g * inv_std * (dy - mean(dy) - xhat * mean(dy * xhat)) in training.
    const T scale = static_cast<T>(g * inv_std);
    const T mean_dy = train ? static_cast<T>(sum_dy / count) : T{0};
    const T mean_dy_xhat = train ? static_cast<T>(sum_dy_xhat / count) : T{0};
    for (std::size_t n = 0; n < lay.batch; ++n) {
      const std::size_t off = (n * lay.channels + c) * lay.plane;
      const T* dy = grad_out.data() + off;
      const T* xh = xhat.data() + off;
      T* dx = gx.data() + off;
      for (std::size_t i = 0; i < lay.plane; ++i)
        dx[i] = scale * (dy[i] - mean_dy - xh[i] * mean_dy_xhat);
    }
  }
  return gx;
}

template <typename T>
void BatchNormLayer<T>::CollectParams(const std::string& prefix,
                                      std::vector<Param<T>>& out) {
  out.push_back({prefix + ".gamma", &gamma, &grad_gamma});
  out.push_back({prefix + ".beta", &beta, &grad_beta});
}

template <typename T>
void BatchNormLayer<T>::CollectBuffers(const std::string& prefix,
                                       std::vector<Buffer<T>>& out) {
  out.push_back({prefix + ".running_mean", &running_mean});
  out.push_back({prefix + ".running_var", &running_var});
}

// --- Stateless layers --------------------------------------------------------

template <typename T>
Tensor<T> MaxPoolLayer<T>::Forward(const Tensor<T>& x) {
  auto r = MaxPool2x2(x);
  input_shape_ = x.shape();
  argmax_ = std::move(r.argmax);
  return std::move(r.output);
}

template <typename T>
Tensor<T> MaxPoolLayer<T>::Backward(const Tensor<T>& grad_out) {
  if (!input_shape_) MissingCache("MaxPoolLayer");
  return MaxPool2x2Backward(*input_shape_, argmax_, grad_out);
}

template <typename T>
Tensor<T> LeakyReluLayer<T>::Forward(const Tensor<T>& x) {
  input_ = x;
  return LeakyRelu(x, alpha_);
}

template <typename T>
Tensor<T> LeakyReluLayer<T>::Backward(const Tensor<T>& grad_out) {
  if (!input_) MissingCache("LeakyReluLayer");
  return LeakyReluBackward(*input_, alpha_, grad_out);
}

template <typename T>
Tensor<T> ReluLayer<T>::Forward(const Tensor<T>& x) {
  input_ = x;
  return Relu(x);
}

template <typename T>
Tensor<T> ReluLayer<T>::Backward(const Tensor<T>& grad_out) {
  if (!input_) MissingCache("ReluLayer");
  return ReluBackward(*input_, grad_out);
}

template <typename T>
Tensor<T> DropoutLayer<T>::Forward(const Tensor<T>& x, Mode mode,
                                   uint64_t seed) {
  std::vector<T> keep;
  auto y = Dropout(x, p_, mode, seed, &keep);
  keep_ = std::move(keep);
  return y;
}

template <typename T>
Tensor<T> DropoutLayer<T>::Backward(const Tensor<T>& grad_out) {
  if (!keep_) MissingCache("DropoutLayer");
  if (keep_->size() != grad_out.size())
    throw Error(ErrorCode::kShapeMismatch, "DropoutLayer::Backward size");
  Tensor<T> g = grad_out;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= (*keep_)[i];
  return g;
}

#define AVSE_INSTANTIATE_LAYERS(T)      \
  template class Conv2dLayer<T>;        \
  template class ConvTranspose2dLayer<T>; \
  template class DenseLayer<T>;         \
  template class BatchNormLayer<T>;     \
  template class MaxPoolLayer<T>;       \
  template class LeakyReluLayer<T>;     \
  template class ReluLayer<T>;          \
  template class DropoutLayer<T>;

AVSE_INSTANTIATE_LAYERS(float)
AVSE_INSTANTIATE_LAYERS(double)

}  // namespace avse::nn
