// src/model/trainer.cc

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

#include "avse/model/trainer.h"

#include <cmath>
#include <limits>

#include "avse/error.h"
#include "avse/nn/optim.h"
#include "avse/seed.h"

namespace avse::model {

namespace {

void CheckLoss(double loss, int epoch, const char* what) {
  if (!std::isfinite(loss))
    throw Error(ErrorCode::kDivergedTraining,
                std::string(what) + " loss is not finite in epoch " +
                    std::to_string(epoch));
}

}  // namespace

double ValidationLoss(TrainedModel& model, data::ChunkDataset& validation,
                      std::size_t batch) {
  validation.PrepareEpoch(0);
  const std::vector<std::size_t> order = validation.Order(0, false);
  if (order.empty())
    throw Error(ErrorCode::kEmptySplit, "validation set has no complete chunks");
  Network<float>& net = model.network();
  const bool audio = UsesAudio(model.modality()), video = UsesVideo(model.modality());
  double total = 0.0;
  for (std::size_t begin = 0; begin < order.size(); begin += batch) {
    const std::size_t count = std::min(batch, order.size() - begin);
    const data::Batch b = validation.MakeBatch(
        std::span(order).subspan(begin, count), model.stats());
    const auto out = net.Forward(audio ? &b.audio : nullptr,
                                 video ? &b.video : nullptr, nn::Mode::kInference);
    total += nn::MaskMseLoss(out, b.target).loss * double(count);
  }
  net.ClearCaches();
  return total / double(order.size());
}

TrainOutcome Train(const ModelSpec& spec, const FeatureStats& stats,
                   data::ChunkDataset& train, data::ChunkDataset& validation,
                   const TrainOptions& options,
                   const std::function<void(const EpochLog&)>& on_epoch) {
  if (options.epochs < 1 || options.batch < 2 || !(options.lr > 0.0))
    throw Error(ErrorCode::kInvalidArgument,
                "need epochs >= 1, batch >= 2 and a positive learning rate");
  TrainOutcome outcome;
  outcome.model = std::make_unique<TrainedModel>(spec, stats);
  TrainedModel& model = *outcome.model;
  Network<float>& net = model.network();
  net.Init(options.seed);
  model.metadata.seed = options.seed;

  std::vector<nn::Param<float>> params = net.Params();
  std::vector<nn::Buffer<float>> buffers = net.Buffers();
  std::vector<nn::Tensor<float>*> values;
  std::vector<const nn::Tensor<float>*> grads;
  for (auto& p : params) {
    values.push_back(p.value);
    grads.push_back(p.grad);
  }
  auto snapshot = [&] {
    std::vector<nn::Tensor<float>> s;
    for (auto& p : params) s.push_back(*p.value);
    for (auto& b : buffers) s.push_back(*b.value);
    return s;
  };

  nn::AdamState<float> adam;
  adam.config.lr = options.lr;
  const bool audio = UsesAudio(spec.modality), video = UsesVideo(spec.modality);
  double best = std::numeric_limits<double>::infinity();
  double previous = best;
  std::vector<nn::Tensor<float>> best_weights = snapshot();

  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    train.PrepareEpoch(epoch);
    const std::vector<std::size_t> order = train.Order(epoch, true);
    double sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t begin = 0, step = 0; begin < order.size();
         begin += options.batch, ++step) {
      const std::size_t count = std::min(options.batch, order.size() - begin);
      if (count < 2) break;  // batchnorm needs two examples
      const data::Batch b =
          train.MakeBatch(std::span(order).subspan(begin, count), stats);
      const auto out = net.Forward(audio ? &b.audio : nullptr,
                                   video ? &b.video : nullptr, nn::Mode::kTrain,
                                   DeriveSeed(options.seed, {uint64_t(epoch), step}));
      const auto loss = nn::MaskMseLoss(out, b.target);
      CheckLoss(loss.loss, epoch, "training");
      net.Backward(loss.grad);
      try {
        nn::AdamStep<float>(values, grads, adam);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNonFiniteGradient) throw;
        throw Error(ErrorCode::kDivergedTraining, e.message());
      }
      sum += loss.loss * double(count);
      seen += count;
    }
    net.ClearCaches();
    if (seen == 0)
      throw Error(ErrorCode::kEmptySplit, "training set has no complete chunks");

    // With few steps per epoch the 0.99 moving average trails the weights
    // by several epochs, and validation would see stale statistics.
    if (options.bn_calibration_batches > 0) {
      net.BeginBatchNormCalibration();
      for (std::size_t begin = 0, step = 0;
           step < options.bn_calibration_batches &&
           begin + options.batch <= order.size();
           begin += options.batch, ++step) {
        const data::Batch b = train.MakeBatch(
            std::span(order).subspan(begin, options.batch), stats);
        net.Forward(audio ? &b.audio : nullptr, video ? &b.video : nullptr,
                    nn::Mode::kTrain,
                    DeriveSeed(options.seed, {uint64_t(epoch), step, 1}));
      }
      net.EndBatchNormCalibration();
      net.ClearCaches();
    }

    EpochLog log{epoch, sum / double(seen), ValidationLoss(model, validation, options.batch),
                 adam.config.lr};
    CheckLoss(log.validation_loss, epoch, "validation");
    outcome.log.push_back(log);
    if (on_epoch) on_epoch(log);

    const double reference = options.halve_against_best ? best : previous;
    if (log.validation_loss < best) {
      best = log.validation_loss;
      best_weights = snapshot();
      model.metadata.epoch = epoch;
      model.metadata.validation_loss = best;
    }
    if (log.validation_loss > reference) adam.config.lr *= 0.5;
    previous = log.validation_loss;
  }

  std::size_t i = 0;
  for (auto& p : params) *p.value = best_weights[i++];
  for (auto& b : buffers) *b.value = best_weights[i++];
  return outcome;
}

}  // namespace avse::model
