// include/avse/mixture/mixture.h

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

#ifndef AVSE_MIXTURE_MIXTURE_H_
#define AVSE_MIXTURE_MIXTURE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "avse/dsp/waveform.h"

namespace avse::mixture {

// Six SNRs in uniform 5 dB steps from -20 dB to 5 dB.
inline constexpr std::array<double, 6> kSnrGridDb = {-20.0, -15.0, -10.0,
                                                     -5.0,  0.0,   5.0};

inline constexpr int kSsnFilterTaps = 1023;

// Long-term average magnitude spectrum on the 640-point analysis grid.
struct Ltas {
  std::vector<double> magnitudes;  // 321 bins

  void Validate() const;
};

// Mean of the per-frame STFT magnitudes of every peak-normalized signal.
// Throws CorpusTooSmall when the corpus holds less than 10 s of audio.
Ltas EstimateLtas(std::span<const dsp::Waveform> corpus);

// Designs the 1023-tap linear-phase FIR whose magnitude response samples the
// LTAS (frequency-sampling design, linear interpolation between LTAS bins).
std::vector<double> DesignSsnFilter(const Ltas& ltas,
                                    int sample_rate = dsp::kSampleRate);

// White Gaussian noise shaped by DesignSsnFilter; peak-normalized and
// bit-identical for equal seeds. Requires n_samples >= 16000.
dsp::Waveform GenerateSsn(const Ltas& ltas, std::size_t n_samples,
                          uint64_t seed);

struct MixResult {
  dsp::Waveform mixture;
  dsp::Waveform scaled_noise;  // exactly mixture - clean
  double gain = 0.0;
};

// mixture = clean + g * noise[offset, offset + len(clean)) with g chosen so
// the full-signal SNR equals snr_db. Throws NoiseTooShort / ZeroEnergySignal.
MixResult MixAtSnr(const dsp::Waveform& clean, const dsp::Waveform& noise,
                   double snr_db, std::size_t noise_offset = 0);

double SnrDb(std::span<const double> clean, std::span<const double> noise);

// Binary record: "LTAS" followed by 321 little-endian float64 values.
void SaveLtas(const Ltas& ltas, const std::filesystem::path& path);
Ltas LoadLtas(const std::filesystem::path& path);

}  // namespace avse::mixture

#endif  // AVSE_MIXTURE_MIXTURE_H_
