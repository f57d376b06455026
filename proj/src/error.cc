// src/error.cc

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

#include "avse/error.h"

namespace avse {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kAllZeroSignal: return "AllZeroSignal";
    case ErrorCode::kSignalTooShort: return "SignalTooShort";
    case ErrorCode::kZeroWindowOverlap: return "ZeroWindowOverlap";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kCorpusTooSmall: return "CorpusTooSmall";
    case ErrorCode::kZeroEnergySignal: return "ZeroEnergySignal";
    case ErrorCode::kNoiseTooShort: return "NoiseTooShort";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kMissingModality: return "MissingModality";
    case ErrorCode::kVideoAudioLengthMismatch: return "VideoAudioLengthMismatch";
    case ErrorCode::kBadChunkShape: return "BadChunkShape";
    case ErrorCode::kEmptySplit: return "EmptySplit";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kShapeMismatchOnLoad: return "ShapeMismatchOnLoad";
    case ErrorCode::kMissingForwardCache: return "MissingForwardCache";
    case ErrorCode::kUnreachableOutputShape: return "UnreachableOutputShape";
    case ErrorCode::kOddSpatialDim: return "OddSpatialDim";
    case ErrorCode::kDegenerateBatch: return "DegenerateBatch";
    case ErrorCode::kNonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::kDivergedTraining: return "DivergedTraining";
    case ErrorCode::kInsufficientUtterances: return "InsufficientUtterances";
    case ErrorCode::kBadSpeakerCount: return "BadSpeakerCount";
    case ErrorCode::kStatsMissing: return "StatsMissing";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooShortAfterVad: return "TooShortAfterVad";
    case ErrorCode::kToolNotConfigured: return "ToolNotConfigured";
    case ErrorCode::kToolFailed: return "ToolFailed";
    case ErrorCode::kEmptyTestSet: return "EmptyTestSet";
    case ErrorCode::kMalformedCsv: return "MalformedCsv";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace avse
