// include/avse/dsp/wav.h

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

#ifndef AVSE_DSP_WAV_H_
#define AVSE_DSP_WAV_H_

#include <filesystem>

#include "avse/dsp/waveform.h"

namespace avse::dsp {

// 16-bit PCM mono WAV. Samples map to [-1, 1) by division by 32768.
Waveform ReadWav(const std::filesystem::path& path);

// Samples are scaled by 32768, rounded and saturated to the int16 range.
void WriteWav(const Waveform& w, const std::filesystem::path& path);

}  // namespace avse::dsp

#endif  // AVSE_DSP_WAV_H_
