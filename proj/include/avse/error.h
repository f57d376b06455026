// include/avse/error.h

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

#ifndef AVSE_ERROR_H_
#define AVSE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace avse {

enum class ErrorCode {
  kInvalidArgument,
  // dsp
  kAllZeroSignal,
  kSignalTooShort,
  kZeroWindowOverlap,
  kNonFiniteValue,
  // mixture
  kCorpusTooSmall,
  kZeroEnergySignal,
  kNoiseTooShort,
  // masking / model
  kShapeMismatch,
  kMissingModality,
  kVideoAudioLengthMismatch,
  kBadChunkShape,
  kEmptySplit,
  kCorruptFile,
  kShapeMismatchOnLoad,
  // neural
  kMissingForwardCache,
  kUnreachableOutputShape,
  kOddSpatialDim,
  kDegenerateBatch,
  kNonFiniteGradient,
  kDivergedTraining,
  // data
  kInsufficientUtterances,
  kBadSpeakerCount,
  kStatsMissing,
  kDimensionMismatch,
  // metrics
  kLengthMismatch,
  kTooShortAfterVad,
  kToolNotConfigured,
  kToolFailed,
  kEmptyTestSet,
  kMalformedCsv,
  // cli
  kConfigError,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // Without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace avse

#endif  // AVSE_ERROR_H_
