// include/avse/model/modality.h

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

#ifndef AVSE_MODEL_MODALITY_H_
#define AVSE_MODEL_MODALITY_H_

#include <string>
#include <string_view>

namespace avse::model {

enum class Modality { kAudioVisual, kAudioOnly, kVideoOnly };

inline bool UsesAudio(Modality m) { return m != Modality::kVideoOnly; }
inline bool UsesVideo(Modality m) { return m != Modality::kAudioOnly; }

// "AV", "AO", "VO".
std::string_view ModalityName(Modality m);
// Throws InvalidArgument for anything but AV/AO/VO.
Modality ParseModality(std::string_view name);

}  // namespace avse::model

#endif  // AVSE_MODEL_MODALITY_H_
