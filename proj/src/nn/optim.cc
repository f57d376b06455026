// src/nn/optim.cc

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

#include "avse/nn/optim.h"

#include <cmath>

namespace avse::nn {

template <typename T>
void AdamStep(std::span<Tensor<T>* const> params,
              std::span<const Tensor<T>* const> grads, AdamState<T>& state) {
  if (params.size() != grads.size())
    throw Error(ErrorCode::kShapeMismatch, "AdamStep: params/grads count");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i]->shape() != grads[i]->shape())
      throw Error(ErrorCode::kShapeMismatch,
                  "AdamStep: gradient " + ShapeString(grads[i]->shape()) +
                      " for parameter " + ShapeString(params[i]->shape()));
    if (!AllFinite(*grads[i]))
      throw Error(ErrorCode::kNonFiniteGradient,
                  "AdamStep: gradient " + std::to_string(i) + " has NaN/Inf");
  }
  if (state.m.empty()) {
    for (const auto* p : params) {
      state.m.emplace_back(p->shape());
      state.v.emplace_back(p->shape());
    }
  }
  if (state.m.size() != params.size())
    throw Error(ErrorCode::kShapeMismatch, "AdamStep: state/params count");
  for (std::size_t i = 0; i < params.size(); ++i)
    if (state.m[i].shape() != params[i]->shape())
      throw Error(ErrorCode::kShapeMismatch, "AdamStep: moment shape");

  const AdamConfig& c = state.config;
  ++state.step;
  const double correction1 = 1.0 - std::pow(c.beta1, double(state.step));
  const double correction2 = 1.0 - std::pow(c.beta2, double(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor<T>& p = *params[i];
    const Tensor<T>& g = *grads[i];
    Tensor<T>& m = state.m[i];
    Tensor<T>& v = state.v[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double gj = g[j];
      const double mj = c.beta1 * m[j] + (1.0 - c.beta1) * gj;
      const double vj = c.beta2 * v[j] + (1.0 - c.beta2) * gj * gj;
      m[j] = static_cast<T>(mj);
      v[j] = static_cast<T>(vj);
      const double update =
          c.lr * (mj / correction1) / (std::sqrt(vj / correction2) + c.eps);
      p[j] = static_cast<T>(p[j] - update);
    }
  }
}

template <typename T>
LossResult<T> MaskMseLoss(const Tensor<T>& predicted, const Tensor<T>& target) {
  if (predicted.shape() != target.shape())
    throw Error(ErrorCode::kShapeMismatch,
                "MaskMseLoss: " + ShapeString(predicted.shape()) + " vs " +
                    ShapeString(target.shape()));
  if (predicted.empty())
    throw Error(ErrorCode::kInvalidArgument, "MaskMseLoss of an empty mask");
  const double count = static_cast<double>(predicted.size());
  LossResult<T> r{0.0, Tensor<T>(predicted.shape())};
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = double(predicted[i]) - double(target[i]);
    sum += d * d;
    r.grad[i] = static_cast<T>(2.0 * d / count);
  }
  r.loss = sum / count;
  return r;
}

template void AdamStep(std::span<Tensor<float>* const>,
                       std::span<const Tensor<float>* const>,
                       AdamState<float>&);
template void AdamStep(std::span<Tensor<double>* const>,
                       std::span<const Tensor<double>* const>,
                       AdamState<double>&);
template LossResult<float> MaskMseLoss(const Tensor<float>&,
                                       const Tensor<float>&);
template LossResult<double> MaskMseLoss(const Tensor<double>&,
                                        const Tensor<double>&);

}  // namespace avse::nn
