// include/avse/dsp/fft.h

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

#ifndef AVSE_DSP_FFT_H_
#define AVSE_DSP_FFT_H_

#include <complex>
#include <span>

namespace avse::dsp {

// Real-input DFT of fixed length n backed by FFTW. An instance owns its plans
// and scratch buffers and must not be shared between threads; constructing
// instances concurrently is safe.
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const noexcept { return n_; }
  int bins() const noexcept { return n_ / 2 + 1; }

  // X[k] = sum_t x[t] exp(-2 pi i k t / n), k = 0 .. n/2. `in` may be shorter
  // than n, in which case it is zero-padded.
  void Forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;

  // Inverse of Forward, including the 1/n factor.
  void Inverse(std::span<const std::complex<double>> in,
               std::span<double> out) const;

 private:
  int n_;
  double* real_ = nullptr;
  void* spec_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace avse::dsp

#endif  // AVSE_DSP_FFT_H_
