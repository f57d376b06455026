// include/avse/dsp/stft.h

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

#ifndef AVSE_DSP_STFT_H_
#define AVSE_DSP_STFT_H_

#include <complex>
#include <cstddef>
#include <vector>

#include "avse/dsp/grid.h"
#include "avse/dsp/waveform.h"

namespace avse::dsp {

inline constexpr int kFftSize = 640;
inline constexpr int kHopSize = 160;
inline constexpr int kNumBins = kFftSize / 2 + 1;  // 321

// Periodic Hamming window, w[k] = 0.54 - 0.46 cos(2 pi k / n).
std::vector<double> HammingWindow(int n);

struct StftParams {
  int n_fft = kFftSize;
  int hop = kHopSize;
  std::vector<double> window;

  // 640-point frames, 160-sample hop, periodic Hamming window.
  static StftParams Default();

  int bins() const noexcept { return n_fft / 2 + 1; }
  int win_length() const noexcept { return static_cast<int>(window.size()); }
  void Validate() const;
  // Frames needed to cover `length` samples with zero-padding of the tail.
  std::size_t NumFrames(std::size_t length) const;
};

// bins x frames grid of one-sided STFT coefficients.
struct ComplexSpectrogram {
  Grid<std::complex<double>> values;
  StftParams params;

  std::size_t bins() const noexcept { return values.rows(); }
  std::size_t frames() const noexcept { return values.cols(); }
};

// Non-negative bins x frames grid (|X|, |Y|, ...).
struct MagnitudeSpectrogram {
  Grid<double> values;

  MagnitudeSpectrogram() = default;
  explicit MagnitudeSpectrogram(Grid<double> v) : values(std::move(v)) {}
  std::size_t bins() const noexcept { return values.rows(); }
  std::size_t frames() const noexcept { return values.cols(); }
};

// Frames start at l * hop; the signal tail is zero-padded so that every sample
// lies inside some frame. Throws SignalTooShort when w has fewer than n_fft
// samples.
ComplexSpectrogram Stft(const Waveform& w, const StftParams& p);
ComplexSpectrogram Stft(const Waveform& w);

// Weighted overlap-add with division by the summed squared window; output is
// trimmed to target_length.
Waveform Istft(const ComplexSpectrogram& s, std::size_t target_length,
               int sample_rate = kSampleRate);

MagnitudeSpectrogram Magnitude(const ComplexSpectrogram& s);
// Per-cell argument; 0 for zero-valued cells.
Grid<double> Phase(const ComplexSpectrogram& s);
ComplexSpectrogram FromPolar(const MagnitudeSpectrogram& magnitude,
                             const Grid<double>& phase,
                             const StftParams& params);

}  // namespace avse::dsp

#endif  // AVSE_DSP_STFT_H_
