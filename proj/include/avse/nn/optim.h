// include/avse/nn/optim.h

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

#ifndef AVSE_NN_OPTIM_H_
#define AVSE_NN_OPTIM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "avse/nn/tensor.h"

namespace avse::nn {

struct AdamConfig {
  double lr = 4e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct AdamState {
  AdamConfig config;
  int64_t step = 0;
  std::vector<Tensor<T>> m;  // lazily shaped like the parameters
  std::vector<Tensor<T>> v;
};

// One bias-corrected Adam update of every parameter in place. Throws
// ShapeMismatch when a gradient or moment disagrees with its parameter and
// NonFiniteGradient (before touching anything) on NaN/Inf gradients.
template <typename T>
void AdamStep(std::span<Tensor<T>* const> params,
              std::span<const Tensor<T>* const> grads, AdamState<T>& state);

template <typename T>
struct LossResult {
  double loss = 0.0;
  Tensor<T> grad;  // dJ / d predicted
};

// J = (1 / TF) sum (target - predicted)^2 over all cells (and, for a batch,
// over all examples); gradient 2 (predicted - target) / TF.
template <typename T>
LossResult<T> MaskMseLoss(const Tensor<T>& predicted, const Tensor<T>& target);

}  // namespace avse::nn

#endif  // AVSE_NN_OPTIM_H_
