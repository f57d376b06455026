// src/model/modality.cc

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

#include "avse/model/modality.h"

#include "avse/error.h"

namespace avse::model {

std::string_view ModalityName(Modality m) {
  switch (m) {
    case Modality::kAudioVisual: return "AV";
    case Modality::kAudioOnly: return "AO";
    case Modality::kVideoOnly: return "VO";
  }
  return "?";
}

Modality ParseModality(std::string_view name) {
  if (name == "AV") return Modality::kAudioVisual;
  if (name == "AO") return Modality::kAudioOnly;
  if (name == "VO") return Modality::kVideoOnly;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown modality '" + std::string(name) + "' (AV, AO or VO)");
}

}  // namespace avse::model
