// include/avse/nn/layers.h

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

#ifndef AVSE_NN_LAYERS_H_
#define AVSE_NN_LAYERS_H_

#include <optional>
#include <string>
#include <vector>

#include "avse/nn/ops.h"

namespace avse::nn {

// A trainable tensor and its gradient, addressed by a stable name.
template <typename T>
struct Param {
  std::string name;
  Tensor<T>* value;
  Tensor<T>* grad;
};

// Non-trainable state that must be persisted (batchnorm running stats).
template <typename T>
struct Buffer {
  std::string name;
  Tensor<T>* value;
};

// Each layer caches what its backward pass needs during Forward; Backward
// without a preceding Forward throws MissingForwardCache.

template <typename T>
class Conv2dLayer {
 public:
  Conv2dLayer() = default;
  Conv2dLayer(std::size_t in_channels, std::size_t filters, Kernel2 kernel,
              Stride2 stride);

  void Init(uint64_t seed);
  Tensor<T> Forward(const Tensor<T>& x);
  Tensor<T> Backward(const Tensor<T>& grad_out, bool need_input_grad = true);
  void ClearCache() { input_.reset(); }
  void CollectParams(const std::string& prefix, std::vector<Param<T>>& out);

  Tensor<T> weight, bias, grad_weight, grad_bias;
  Stride2 stride;

 private:
  std::optional<Tensor<T>> input_;
};

template <typename T>
class ConvTranspose2dLayer {
 public:
  ConvTranspose2dLayer() = default;
  ConvTranspose2dLayer(std::size_t in_channels, std::size_t out_channels,
                       Kernel2 kernel, Stride2 stride, int out_h, int out_w);

  void Init(uint64_t seed);
  Tensor<T> Forward(const Tensor<T>& x);
  Tensor<T> Backward(const Tensor<T>& grad_out, bool need_input_grad = true);
  void ClearCache() { input_.reset(); }
  void CollectParams(const std::string& prefix, std::vector<Param<T>>& out);

  Tensor<T> weight, bias, grad_weight, grad_bias;  // weight: [in, out, kh, kw]
  Stride2 stride;
  int out_h = 0, out_w = 0;

 private:
  std::optional<Tensor<T>> input_;
};

template <typename T>
class DenseLayer {
 public:
  DenseLayer() = default;
  DenseLayer(std::size_t in_features, std::size_t out_features);

  void Init(uint64_t seed);
  Tensor<T> Forward(const Tensor<T>& x);
  Tensor<T> Backward(const Tensor<T>& grad_out);
  void ClearCache() { input_.reset(); }
  void CollectParams(const std::string& prefix, std::vector<Param<T>>& out);

  Tensor<T> weight, bias, grad_weight, grad_bias;

 private:
  std::optional<Tensor<T>> input_;
};

// Per-channel normalization over N, H, W (rank 4) or N (rank 2).
template <typename T>
class BatchNormLayer {
 public:
  static constexpr double kMomentum = 0.99;
  static constexpr double kEpsilon = 1e-5;

  BatchNormLayer() = default;
  explicit BatchNormLayer(std::size_t channels);

  // Training needs a batch of >= 2 (DegenerateBatch otherwise) and updates
  // running = momentum * running + (1 - momentum) * batch.
  Tensor<T> Forward(const Tensor<T>& x, Mode mode);
  Tensor<T> Backward(const Tensor<T>& grad_out);
  void ClearCache() { cache_.reset(); }
  void CollectParams(const std::string& prefix, std::vector<Param<T>>& out);
  void CollectBuffers(const std::string& prefix, std::vector<Buffer<T>>& out);

  // Between these calls, training-mode forwards average their batch
  // statistics instead of updating the running stats; EndCalibration
  // replaces the running stats with those averages (if any batch was seen).
  void BeginCalibration();
  void EndCalibration();

  Tensor<T> gamma, beta, grad_gamma, grad_beta;
  Tensor<T> running_mean, running_var;

 private:
  struct Calibration {
    std::vector<double> mean_sum, var_sum;
    std::size_t batches = 0;
  };
  std::optional<Calibration> calibration_;
  struct Cache {
    Tensor<T> normalized;
    std::vector<double> inv_std;
    Mode mode;
  };
  std::optional<Cache> cache_;
};

template <typename T>
class MaxPoolLayer {
 public:
  Tensor<T> Forward(const Tensor<T>& x);
  Tensor<T> Backward(const Tensor<T>& grad_out);
  void ClearCache() {
    argmax_.clear();
    input_shape_.reset();
  }

 private:
  std::optional<Shape> input_shape_;
  std::vector<std::size_t> argmax_;
};

template <typename T>
class LeakyReluLayer {
 public:
  explicit LeakyReluLayer(double alpha = 0.2) : alpha_(alpha) {}
  Tensor<T> Forward(const Tensor<T>& x);
  Tensor<T> Backward(const Tensor<T>& grad_out);
  void ClearCache() { input_.reset(); }
  double alpha() const noexcept { return alpha_; }

 private:
  double alpha_;
  std::optional<Tensor<T>> input_;
};

template <typename T>
class ReluLayer {
 public:
  Tensor<T> Forward(const Tensor<T>& x);
  Tensor<T> Backward(const Tensor<T>& grad_out);
  void ClearCache() { input_.reset(); }

 private:
  std::optional<Tensor<T>> input_;
};

template <typename T>
class DropoutLayer {
 public:
  explicit DropoutLayer(double p = 0.25) : p_(p) {}
  Tensor<T> Forward(const Tensor<T>& x, Mode mode, uint64_t seed);
  Tensor<T> Backward(const Tensor<T>& grad_out);
  void ClearCache() { keep_.reset(); }
  double p() const noexcept { return p_; }

 private:
  double p_;
  std::optional<std::vector<T>> keep_;
};

}  // namespace avse::nn

#endif  // AVSE_NN_LAYERS_H_
