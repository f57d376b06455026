// include/avse/nn/ops.h

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

#ifndef AVSE_NN_OPS_H_
#define AVSE_NN_OPS_H_

#include <cstdint>
#include <vector>

#include "avse/nn/tensor.h"

namespace avse::nn {

enum class Mode { kTrain, kInference };

struct Stride2 {
  int h = 1;
  int w = 1;
  bool operator==(const Stride2&) const = default;
};

struct Kernel2 {
  int h = 1;
  int w = 1;
  bool operator==(const Kernel2&) const = default;
};

// "same" padding: total = max((ceil(in / stride) - 1) * stride + kernel - in, 0),
// split floor before / ceil after.
struct Padding2 {
  int top = 0, bottom = 0, left = 0, right = 0;
};

inline int CeilDiv(int a, int b) { return (a + b - 1) / b; }
Padding2 SamePadding(int in_h, int in_w, Kernel2 k, Stride2 s);

// ---------------------------------------------------------------------------
// Convolution. x: [N, C, H, W], w: [F, C, kh, kw], b: [F]; output
// [N, F, ceil(H / sh), ceil(W / sw)], "same" padding, cross-correlation.
template <typename T>
Tensor<T> Conv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b,
                 Stride2 s);

template <typename T>
struct ConvGrads {
  Tensor<T> input;  // empty when not requested
  Tensor<T> weight;
  Tensor<T> bias;
};

template <typename T>
ConvGrads<T> Conv2dBackward(const Tensor<T>& x, const Tensor<T>& w, Stride2 s,
                            const Tensor<T>& grad_out,
                            bool need_input_grad = true);

// Adjoint of Conv2d. y: [N, F, h, w], w: [F, C, kh, kw] (the weights of the
// forward convolution C -> F), b: [C]; output [N, C, out_h, out_w]. The target
// shape is reachable iff ceil(out / stride) == in along both axes; otherwise
// throws UnreachableOutputShape.
template <typename T>
Tensor<T> ConvTranspose2d(const Tensor<T>& y, const Tensor<T>& w,
                          const Tensor<T>& b, Stride2 s, int out_h, int out_w);

template <typename T>
ConvGrads<T> ConvTranspose2dBackward(const Tensor<T>& y, const Tensor<T>& w,
                                     Stride2 s, const Tensor<T>& grad_out,
                                     bool need_input_grad = true);

// ---------------------------------------------------------------------------
// 2x2 max pooling with stride 2. Ties go to the lowest row-major index.
template <typename T>
struct PoolResult {
  Tensor<T> output;
  std::vector<std::size_t> argmax;  // flat input index per output cell
};

template <typename T>
PoolResult<T> MaxPool2x2(const Tensor<T>& x);

template <typename T>
Tensor<T> MaxPool2x2Backward(const Shape& input_shape,
                             const std::vector<std::size_t>& argmax,
                             const Tensor<T>& grad_out);

// ---------------------------------------------------------------------------
// Activations. The derivative at 0 takes the negative-side slope.
template <typename T>
Tensor<T> LeakyRelu(const Tensor<T>& x, double alpha);
template <typename T>
Tensor<T> LeakyReluBackward(const Tensor<T>& x, double alpha,
                            const Tensor<T>& grad_out);
template <typename T>
Tensor<T> Relu(const Tensor<T>& x);
template <typename T>
Tensor<T> ReluBackward(const Tensor<T>& x, const Tensor<T>& grad_out);

// ---------------------------------------------------------------------------
// Inverted dropout. In training the kept units are scaled by 1 / (1 - p);
// `keep` receives that scale (or 0) per element for the backward pass.
template <typename T>
Tensor<T> Dropout(const Tensor<T>& x, double p, Mode mode, uint64_t seed,
                  std::vector<T>* keep = nullptr);

// ---------------------------------------------------------------------------
// Affine map. x: [N, D], w: [D, M], b: [M].
template <typename T>
Tensor<T> Dense(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b);

template <typename T>
struct DenseGrads {
  Tensor<T> input;
  Tensor<T> weight;
  Tensor<T> bias;
};

template <typename T>
DenseGrads<T> DenseBackward(const Tensor<T>& x, const Tensor<T>& w,
                            const Tensor<T>& grad_out);

// ---------------------------------------------------------------------------
// Uniform on +-sqrt(6 / (fan_in + fan_out)).
double XavierBound(std::size_t fan_in, std::size_t fan_out);
template <typename T>
Tensor<T> XavierUniform(Shape shape, std::size_t fan_in, std::size_t fan_out,
                        uint64_t seed);

// Channel-wise concatenation of two [N, *, H, W] tensors, and its inverse.
template <typename T>
Tensor<T> ConcatChannels(const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
void SplitChannels(const Tensor<T>& g, std::size_t channels_a, Tensor<T>* ga,
                   Tensor<T>* gb);

// Concatenation along the feature axis of [N, D] matrices.
template <typename T>
Tensor<T> ConcatFeatures(const std::vector<const Tensor<T>*>& parts);

}  // namespace avse::nn

#endif  // AVSE_NN_OPS_H_
