// include/avse/model/trainer.h

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

#ifndef AVSE_MODEL_TRAINER_H_
#define AVSE_MODEL_TRAINER_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "avse/data/dataset.h"
#include "avse/model/trained_model.h"

namespace avse::model {

struct TrainOptions {
  int epochs = 50;
  std::size_t batch = 64;
  double lr = 4e-4;
  uint64_t seed = 1;
  // Halve the learning rate when the validation loss exceeds the best so far
  // instead of the previous epoch's.
  bool halve_against_best = false;
  // Before each validation pass the batchnorm running stats are replaced by
  // the average batch statistics of this many training batches (0 keeps the
  // plain moving average).
  std::size_t bn_calibration_batches = 32;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
  double lr = 0.0;  // rate used during this epoch
};

struct TrainOutcome {
  std::unique_ptr<TrainedModel> model;  // best-validation snapshot
  std::vector<EpochLog> log;
};

// Mean mask loss over every validation chunk, in inference mode.
double ValidationLoss(TrainedModel& model, data::ChunkDataset& validation,
                      std::size_t batch);

// Adam on the mask loss with per-epoch validation. The learning rate is
// halved after every epoch whose validation loss is higher than the
// previous one, and the weights of the best epoch are returned. Throws
// DivergedTraining on a non-finite loss.
TrainOutcome Train(const ModelSpec& spec, const FeatureStats& stats,
                   data::ChunkDataset& train, data::ChunkDataset& validation,
                   const TrainOptions& options,
                   const std::function<void(const EpochLog&)>& on_epoch = {});

}  // namespace avse::model

#endif  // AVSE_MODEL_TRAINER_H_
