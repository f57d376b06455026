// include/avse/model/weights.h

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

#ifndef AVSE_MODEL_WEIGHTS_H_
#define AVSE_MODEL_WEIGHTS_H_

#include <filesystem>
#include <memory>

#include "avse/model/trained_model.h"

namespace avse::model {

inline constexpr uint32_t kWeightFormatVersion = 1;

// Layout: "AVSE", uint32 version, uint32 modality tag, uint32 record count,
// records, uint64 FNV-1a checksum of everything before it. A record is
// uint32 name length, name bytes, uint8 dtype (1 f32, 2 f64, 3 i64, 4 u8),
// uint32 rank, uint64 dims, little-endian data. The file is written to a
// temporary sibling and renamed into place.
void SaveModel(TrainedModel& model, const std::filesystem::path& path);

// Throws CorruptFile on a bad magic, checksum or record, and
// ShapeMismatchOnLoad when the stored network differs from `expected` (if
// given) or from its own declared spec.
std::unique_ptr<TrainedModel> LoadModel(const std::filesystem::path& path,
                                        const ModelSpec* expected = nullptr);

uint64_t Fnv1a64(std::span<const uint8_t> bytes);

}  // namespace avse::model

#endif  // AVSE_MODEL_WEIGHTS_H_
