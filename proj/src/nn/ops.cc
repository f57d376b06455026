// src/nn/ops.cc

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

#include "avse/nn/ops.h"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <random>

namespace avse::nn {

namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapMat = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMapMat = Eigen::Map<const RowMat<T>>;
template <typename T>
using ColVec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

struct ConvGeometry {
  int channels, height, width;  // image side
  Kernel2 kernel;
  Stride2 stride;
  Padding2 pad;
  int out_h, out_w;  // column side

  int patch() const { return channels * kernel.h * kernel.w; }
  int positions() const { return out_h * out_w; }
};

// cols[(c * kh + i) * kw + j][oh * out_w + ow] = x[c][oh * sh + i - top][ow * sw + j - left]
// Output columns [lo, hi) whose input column ow * stride + j - pad is inside
// the plane.
inline void ValidColumns(const ConvGeometry& g, int j, int* lo, int* hi) {
  const int shift = j - g.pad.left;
  *lo = shift >= 0 ? 0 : CeilDiv(-shift, g.stride.w);
  *hi = g.width - shift <= 0 ? 0 : CeilDiv(g.width - shift, g.stride.w);
  *hi = std::min(*hi, g.out_w);
  *lo = std::min(*lo, *hi);
}

template <typename T>
void Im2Col(const T* x, const ConvGeometry& g, T* cols) {
  const int positions = g.positions();
  for (int c = 0; c < g.channels; ++c)
    for (int i = 0; i < g.kernel.h; ++i)
      for (int j = 0; j < g.kernel.w; ++j) {
        T* row = cols + ((c * g.kernel.h + i) * g.kernel.w + j) * positions;
        int lo, hi;
        ValidColumns(g, j, &lo, &hi);
        const int shift = j - g.pad.left;
        for (int oh = 0; oh < g.out_h; ++oh) {
          const int ih = oh * g.stride.h + i - g.pad.top;
          T* dst = row + oh * g.out_w;
          if (ih < 0 || ih >= g.height) {
            std::fill(dst, dst + g.out_w, T{0});
            continue;
          }
          const T* src = x + (c * g.height + ih) * g.width + shift;
          std::fill(dst, dst + lo, T{0});
          if (g.stride.w == 1) {
            std::copy(src + lo, src + hi, dst + lo);
          } else {
            for (int ow = lo; ow < hi; ++ow) dst[ow] = src[ow * g.stride.w];
          }
          std::fill(dst + hi, dst + g.out_w, T{0});
        }
      }
}

// Adjoint of Im2Col: accumulates cols back into x (x must be zeroed first).
template <typename T>
void Col2Im(const T* cols, const ConvGeometry& g, T* x) {
  const int positions = g.positions();
  for (int c = 0; c < g.channels; ++c)
    for (int i = 0; i < g.kernel.h; ++i)
      for (int j = 0; j < g.kernel.w; ++j) {
        const T* row = cols + ((c * g.kernel.h + i) * g.kernel.w + j) * positions;
        int lo, hi;
        ValidColumns(g, j, &lo, &hi);
        const int shift = j - g.pad.left;
        for (int oh = 0; oh < g.out_h; ++oh) {
          const int ih = oh * g.stride.h + i - g.pad.top;
          if (ih < 0 || ih >= g.height) continue;
          T* dst = x + (c * g.height + ih) * g.width + shift;
          const T* src = row + oh * g.out_w;
          if (g.stride.w == 1) {
            for (int ow = lo; ow < hi; ++ow) dst[ow] += src[ow];
          } else {
            for (int ow = lo; ow < hi; ++ow) dst[ow * g.stride.w] += src[ow];
          }
        }
      }
}

// Direct stride-1 convolution, used where the im2col matrix would dwarf the
// weights (few filters, large planes). Accumulation order is fixed, so
// results are reproducible, though not bit-equal to the GEMM path.
constexpr int kLanes = 16;
constexpr int kFilterBlock = 4;
constexpr int kDirectMaxFilters = 32;

inline bool UseDirect(Stride2 s, std::size_t filters, int kw) {
  return s.h == 1 && s.w == 1 && filters <= std::size_t(kDirectMaxFilters) && kw <= 5;
}

// Zero-padded copy: rows oh + i, columns ow + j address input
// (oh + i - top, ow + j - left). Extra columns keep full-lane reads in bounds.
template <typename T>
void PadPlanes(const T* x, int channels, int height, int width, int top, int left,
               int rows, int cols, std::vector<T>& xp) {
  xp.assign(std::size_t(channels) * rows * cols + kLanes, T{0});
  for (int c = 0; c < channels; ++c)
    for (int r = 0; r < height; ++r) {
      const int pr = r + top;
      if (pr < 0 || pr >= rows) continue;
      const T* src = x + (std::size_t(c) * height + r) * width;
      T* dst = xp.data() + (std::size_t(c) * rows + pr) * cols;
      for (int col = 0; col < width; ++col) {
        const int pc = col + left;
        if (pc >= 0 && pc < cols) dst[pc] = src[col];
      }
    }
}

template <typename T>
using Lanes = Eigen::Array<T, kLanes, 1>;
template <typename T>
using LaneMap = Eigen::Map<const Lanes<T>, Eigen::Unaligned>;

// out[f][oh][ow] = bias[f] + sum_{c,i,j} wt[((c * kh + i) * kw + j) * F + f]
//                                      * xp[c][oh + i][ow + j]
template <typename T>
void DirectConvPlane(const T* xp, int channels, int rows, int cols, const T* wt,
                     int filters, int kh, int kw, const T* bias, int out_h,
                     int out_w, T* out) {
  for (int f0 = 0; f0 < filters; f0 += kFilterBlock) {
    const int fb = std::min(kFilterBlock, filters - f0);
    for (int oh = 0; oh < out_h; ++oh)
      for (int ow0 = 0; ow0 < out_w; ow0 += kLanes) {
        Lanes<T> acc[kFilterBlock];
        for (int k = 0; k < kFilterBlock; ++k)
          acc[k].setConstant(k < fb && bias ? bias[f0 + k] : T{0});
        const T* w = wt + f0;
        for (int c = 0; c < channels; ++c)
          for (int i = 0; i < kh; ++i) {
            const T* src = xp + (std::size_t(c) * rows + oh + i) * cols + ow0;
            for (int j = 0; j < kw; ++j, w += filters) {
              const LaneMap<T> v(src + j);
              if (fb == kFilterBlock) {
                acc[0] += w[0] * v;
                acc[1] += w[1] * v;
                acc[2] += w[2] * v;
                acc[3] += w[3] * v;
              } else {
                for (int k = 0; k < fb; ++k) acc[k] += w[k] * v;
              }
            }
          }
        const int n = std::min(kLanes, out_w - ow0);
        for (int k = 0; k < fb; ++k)
          std::copy(acc[k].data(), acc[k].data() + n,
                    out + (std::size_t(f0 + k) * out_h + oh) * out_w + ow0);
      }
  }
}

// gw[f][c][i][j] += sum_{oh,ow} go[f][oh][ow] * xp[c][oh + i][ow + j]
template <typename T, int KW>
void DirectWeightGradPlaneKw(const T* xp, int channels, int rows, int cols,
                             const T* go, int filters, int kh, int out_h,
                             int out_w, T* gw) {
  const int taps = channels * kh * KW;
  const int full = out_w / kLanes * kLanes;
  for (int f0 = 0; f0 < filters; f0 += kFilterBlock) {
    const int fb = std::min(kFilterBlock, filters - f0);
    for (int c = 0; c < channels; ++c)
      for (int i = 0; i < kh; ++i) {
        Lanes<T> acc[kFilterBlock][KW];
        T tail[kFilterBlock][KW] = {};
        for (auto& row : acc)
          for (auto& a : row) a.setZero();
        for (int oh = 0; oh < out_h; ++oh) {
          const T* src = xp + (std::size_t(c) * rows + oh + i) * cols;
          const T* g[kFilterBlock];
          for (int k = 0; k < kFilterBlock; ++k)
            g[k] = go + (std::size_t(f0 + std::min(k, fb - 1)) * out_h + oh) *
                            out_w;
          for (int ow0 = 0; ow0 < full; ow0 += kLanes) {
            Lanes<T> gk[kFilterBlock];
            for (int k = 0; k < kFilterBlock; ++k) gk[k] = LaneMap<T>(g[k] + ow0);
            for (int j = 0; j < KW; ++j) {
              const LaneMap<T> v(src + ow0 + j);
              for (int k = 0; k < kFilterBlock; ++k) acc[k][j] += gk[k] * v;
            }
          }
          for (int ow = full; ow < out_w; ++ow)
            for (int k = 0; k < kFilterBlock; ++k)
              for (int j = 0; j < KW; ++j) tail[k][j] += g[k][ow] * src[ow + j];
        }
        for (int k = 0; k < fb; ++k)
          for (int j = 0; j < KW; ++j)
            gw[std::size_t(f0 + k) * taps + (c * kh + i) * KW + j] +=
                tail[k][j] + acc[k][j].sum();
      }
  }
}

template <typename T>
void DirectWeightGradPlane(const T* xp, int channels, int rows, int cols,
                           const T* go, int filters, int kh, int kw, int out_h,
                           int out_w, T* gw) {
  switch (kw) {
#define AVSE_KW(n)                                                        \
  case n:                                                                 \
    return DirectWeightGradPlaneKw<T, n>(xp, channels, rows, cols, go,    \
                                         filters, kh, out_h, out_w, gw);
    AVSE_KW(1) AVSE_KW(2) AVSE_KW(3) AVSE_KW(4) AVSE_KW(5)
#undef AVSE_KW
  }
  throw Error(ErrorCode::kInvalidArgument, "direct conv: unsupported kernel width");
}

template <typename T>
void ExpectRank(const Tensor<T>& t, std::size_t rank, const char* what) {
  if (t.rank() != rank)
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": expected rank " + std::to_string(rank) +
                    ", got " + ShapeString(t.shape()));
}

template <typename T>
ConvGeometry ConvInputGeometry(const Tensor<T>& x, const Tensor<T>& w,
                               Stride2 s, const char* what) {
  ExpectRank(x, 4, what);
  ExpectRank(w, 4, what);
  if (s.h < 1 || s.w < 1)
    throw Error(ErrorCode::kInvalidArgument, "stride must be >= 1");
  if (x.dim(1) != w.dim(1))
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": input channels " + ShapeString(x.shape()) +
                    " vs weights " + ShapeString(w.shape()));
  ConvGeometry g;
  g.channels = static_cast<int>(x.dim(1));
  g.height = static_cast<int>(x.dim(2));
  g.width = static_cast<int>(x.dim(3));
  g.kernel = {static_cast<int>(w.dim(2)), static_cast<int>(w.dim(3))};
  g.stride = s;
  g.pad = SamePadding(g.height, g.width, g.kernel, s);
  g.out_h = CeilDiv(g.height, s.h);
  g.out_w = CeilDiv(g.width, s.w);
  return g;
}

}  // namespace

Padding2 SamePadding(int in_h, int in_w, Kernel2 k, Stride2 s) {
  auto total = [](int in, int kernel, int stride) {
    return std::max((CeilDiv(in, stride) - 1) * stride + kernel - in, 0);
  };
  const int ph = total(in_h, k.h, s.h);
  const int pw = total(in_w, k.w, s.w);
  return {ph / 2, ph - ph / 2, pw / 2, pw - pw / 2};
}

template <typename T>
Tensor<T> Conv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b,
                 Stride2 s) {
  const ConvGeometry g = ConvInputGeometry(x, w, s, "Conv2d");
  const auto filters = static_cast<int>(w.dim(0));
  ExpectShape(b, {w.dim(0)}, "Conv2d bias");
  const auto batch = x.dim(0);
  Tensor<T> out({batch, w.dim(0), std::size_t(g.out_h), std::size_t(g.out_w)});
  const std::size_t in_stride = x.size() / std::max<std::size_t>(batch, 1);
  if (UseDirect(s, w.dim(0), int(w.dim(3)))) {
    // weights as [c][i][j][f]
    std::vector<T> wt(w.size());
    for (int f = 0; f < filters; ++f)
      for (int t = 0; t < g.patch(); ++t) wt[std::size_t(t) * filters + f] = w[std::size_t(f) * g.patch() + t];
    const int rows = g.out_h + g.kernel.h - 1, cols = g.out_w + g.kernel.w - 1;
    std::vector<T> xp;
    for (std::size_t n = 0; n < batch; ++n) {
      PadPlanes(x.data() + n * in_stride, g.channels, g.height, g.width, g.pad.top,
                g.pad.left, rows, cols, xp);
      DirectConvPlane(xp.data(), g.channels, rows, cols, wt.data(), filters, g.kernel.h,
                      g.kernel.w, b.data(), g.out_h, g.out_w,
                      out.data() + n * filters * g.positions());
    }
    return out;
  }
  std::vector<T> cols(std::size_t(g.patch()) * g.positions());
  ConstMapMat<T> weights(w.data(), filters, g.patch());
  Eigen::Map<const ColVec<T>> bias(b.data(), filters);
  for (std::size_t n = 0; n < batch; ++n) {
    Im2Col(x.data() + n * in_stride, g, cols.data());
    MapMat<T> o(out.data() + n * filters * g.positions(), filters,
                g.positions());
    o.noalias() = weights * ConstMapMat<T>(cols.data(), g.patch(), g.positions());
    o.colwise() += bias;
  }
  return out;
}

template <typename T>
ConvGrads<T> Conv2dBackward(const Tensor<T>& x, const Tensor<T>& w, Stride2 s,
                            const Tensor<T>& grad_out, bool need_input_grad) {
  const ConvGeometry g = ConvInputGeometry(x, w, s, "Conv2dBackward");
  const auto filters = static_cast<int>(w.dim(0));
  const auto batch = x.dim(0);
  ExpectShape(grad_out,
              {batch, w.dim(0), std::size_t(g.out_h), std::size_t(g.out_w)},
              "Conv2dBackward grad_out");
  ConvGrads<T> grads;
  grads.weight = Tensor<T>(w.shape());
  grads.bias = Tensor<T>({w.dim(0)});
  if (need_input_grad) grads.input = Tensor<T>(x.shape());
  const std::size_t in_stride = x.size() / std::max<std::size_t>(batch, 1);
  const std::size_t out_stride = std::size_t(filters) * g.positions();

  if (UseDirect(s, w.dim(0), int(w.dim(3)))) {
    const int kh = g.kernel.h, kw = g.kernel.w;
    const int rows = g.out_h + kh - 1, cols = g.out_w + kw - 1;
    // Input gradient: stride-1 correlation of grad_out with the flipped
    // weights, as [f][i][j][c].
    std::vector<T> flipped(need_input_grad ? w.size() : 0);
    if (need_input_grad)
      for (int f = 0; f < filters; ++f)
        for (int c = 0; c < g.channels; ++c)
          for (int i = 0; i < kh; ++i)
            for (int j = 0; j < kw; ++j)
              flipped[((std::size_t(f) * kh + (kh - 1 - i)) * kw + (kw - 1 - j)) * g.channels + c] =
                  w[((std::size_t(f) * g.channels + c) * kh + i) * kw + j];
    const int grows = g.height + kh - 1, gcols = g.width + kw - 1;
    std::vector<T> xp, gp;
    for (std::size_t n = 0; n < batch; ++n) {
      const T* go = grad_out.data() + n * out_stride;
      PadPlanes(x.data() + n * in_stride, g.channels, g.height, g.width, g.pad.top,
                g.pad.left, rows, cols, xp);
      DirectWeightGradPlane(xp.data(), g.channels, rows, cols, go, filters, kh, kw,
                            g.out_h, g.out_w, grads.weight.data());
      for (int f = 0; f < filters; ++f) {
        T sum{0};
        for (int p = 0; p < g.positions(); ++p) sum += go[std::size_t(f) * g.positions() + p];
        grads.bias[f] += sum;
      }
      if (need_input_grad) {
        PadPlanes(go, filters, g.out_h, g.out_w, kh - 1 - g.pad.top, kw - 1 - g.pad.left,
                  grows, gcols, gp);
        DirectConvPlane<T>(gp.data(), filters, grows, gcols, flipped.data(), g.channels, kh,
                           kw, nullptr, g.height, g.width,
                           grads.input.data() + n * in_stride);
      }
    }
    return grads;
  }

  std::vector<T> cols(std::size_t(g.patch()) * g.positions());
  std::vector<T> grad_cols(need_input_grad ? cols.size() : 0);
  ConstMapMat<T> weights(w.data(), filters, g.patch());
  MapMat<T> gw(grads.weight.data(), filters, g.patch());
  Eigen::Map<ColVec<T>> gb(grads.bias.data(), filters);
  for (std::size_t n = 0; n < batch; ++n) {
    Im2Col(x.data() + n * in_stride, g, cols.data());
    ConstMapMat<T> go(grad_out.data() + n * filters * g.positions(), filters,
                      g.positions());
    ConstMapMat<T> c(cols.data(), g.patch(), g.positions());
    gw.noalias() += go * c.transpose();
    // Plain loop: Eigen's vectorized sum depends on pointer alignment.
    for (int f = 0; f < filters; ++f) {
      T sum{0};
      for (const T& v : go.row(f)) sum += v;
      gb[f] += sum;
    }
    if (need_input_grad) {
      MapMat<T>(grad_cols.data(), g.patch(), g.positions()).noalias() =
          weights.transpose() * go;
      Col2Im(grad_cols.data(), g, grads.input.data() + n * in_stride);
    }
  }
  return grads;
}

namespace {

template <typename T>
ConvGeometry TransposeGeometry(const Tensor<T>& y, const Tensor<T>& w,
                               Stride2 s, int out_h, int out_w,
                               const char* what) {
  ExpectRank(y, 4, what);
  ExpectRank(w, 4, what);
  if (s.h < 1 || s.w < 1)
    throw Error(ErrorCode::kInvalidArgument, "stride must be >= 1");
  if (y.dim(1) != w.dim(0))
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": input channels " + ShapeString(y.shape()) +
                    " vs weights " + ShapeString(w.shape()));
  if (out_h < 1 || out_w < 1 ||
      CeilDiv(out_h, s.h) != static_cast<int>(y.dim(2)) ||
      CeilDiv(out_w, s.w) != static_cast<int>(y.dim(3)))
    throw Error(ErrorCode::kUnreachableOutputShape,
                std::string(what) + ": cannot map " + std::to_string(y.dim(2)) +
                    "x" + std::to_string(y.dim(3)) + " to " +
                    std::to_string(out_h) + "x" + std::to_string(out_w) +
                    " with stride " + std::to_string(s.h) + "x" +
                    std::to_string(s.w));
  ConvGeometry g;
  g.channels = static_cast<int>(w.dim(1));
  g.height = out_h;
  g.width = out_w;
  g.kernel = {static_cast<int>(w.dim(2)), static_cast<int>(w.dim(3))};
  g.stride = s;
  g.pad = SamePadding(out_h, out_w, g.kernel, s);
  g.out_h = static_cast<int>(y.dim(2));
  g.out_w = static_cast<int>(y.dim(3));
  return g;
}

}  // namespace

template <typename T>
Tensor<T> ConvTranspose2d(const Tensor<T>& y, const Tensor<T>& w,
                          const Tensor<T>& b, Stride2 s, int out_h, int out_w) {
  const ConvGeometry g =
      TransposeGeometry(y, w, s, out_h, out_w, "ConvTranspose2d");
  ExpectShape(b, {w.dim(1)}, "ConvTranspose2d bias");
  const auto in_channels = static_cast<int>(w.dim(0));
  const auto batch = y.dim(0);
  Tensor<T> out({batch, w.dim(1), std::size_t(out_h), std::size_t(out_w)});
  std::vector<T> cols(std::size_t(g.patch()) * g.positions());
  ConstMapMat<T> weights(w.data(), in_channels, g.patch());
  const std::size_t plane = std::size_t(out_h) * out_w;
  const std::size_t out_stride = w.dim(1) * plane;
  for (std::size_t n = 0; n < batch; ++n) {
    ConstMapMat<T> yn(y.data() + n * in_channels * g.positions(), in_channels,
                      g.positions());
    MapMat<T>(cols.data(), g.patch(), g.positions()).noalias() =
        weights.transpose() * yn;
    T* dst = out.data() + n * out_stride;
    Col2Im(cols.data(), g, dst);
    for (std::size_t c = 0; c < w.dim(1); ++c)
      for (std::size_t i = 0; i < plane; ++i) dst[c * plane + i] += b[c];
  }
  return out;
}

template <typename T>
ConvGrads<T> ConvTranspose2dBackward(const Tensor<T>& y, const Tensor<T>& w,
                                     Stride2 s, const Tensor<T>& grad_out,
                                     bool need_input_grad) {
  ExpectRank(grad_out, 4, "ConvTranspose2dBackward");
  const ConvGeometry g = TransposeGeometry(
      y, w, s, static_cast<int>(grad_out.dim(2)),
      static_cast<int>(grad_out.dim(3)), "ConvTranspose2dBackward");
  const auto batch = y.dim(0);
  if (grad_out.dim(0) != batch || grad_out.dim(1) != w.dim(1))
    throw Error(ErrorCode::kShapeMismatch,
                "ConvTranspose2dBackward grad_out " +
                    ShapeString(grad_out.shape()));
  const auto in_channels = static_cast<int>(w.dim(0));
  ConvGrads<T> grads;
  grads.weight = Tensor<T>(w.shape());
  grads.bias = Tensor<T>({w.dim(1)});
  if (need_input_grad) grads.input = Tensor<T>(y.shape());

  std::vector<T> cols(std::size_t(g.patch()) * g.positions());
  ConstMapMat<T> weights(w.data(), in_channels, g.patch());
  MapMat<T> gw(grads.weight.data(), in_channels, g.patch());
  const std::size_t plane = std::size_t(g.height) * g.width;
  const std::size_t go_stride = w.dim(1) * plane;
  for (std::size_t n = 0; n < batch; ++n) {
    const T* go = grad_out.data() + n * go_stride;
    Im2Col(go, g, cols.data());
    ConstMapMat<T> c(cols.data(), g.patch(), g.positions());
    ConstMapMat<T> yn(y.data() + n * in_channels * g.positions(), in_channels,
                      g.positions());
    gw.noalias() += yn * c.transpose();
    for (std::size_t ch = 0; ch < w.dim(1); ++ch) {
      T acc{0};
      for (std::size_t i = 0; i < plane; ++i) acc += go[ch * plane + i];
      grads.bias[ch] += acc;
    }
    if (need_input_grad)
      MapMat<T>(grads.input.data() + n * in_channels * g.positions(),
                in_channels, g.positions())
          .noalias() = weights * c;
  }
  return grads;
}

template <typename T>
PoolResult<T> MaxPool2x2(const Tensor<T>& x) {
  ExpectRank(x, 4, "MaxPool2x2");
  const std::size_t n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  if (h % 2 != 0 || w % 2 != 0)
    throw Error(ErrorCode::kOddSpatialDim,
                "MaxPool2x2 needs even H and W, got " + ShapeString(x.shape()));
  PoolResult<T> r;
  r.output = Tensor<T>({n, c, h / 2, w / 2});
  r.argmax.resize(r.output.size());
  std::size_t o = 0;
  for (std::size_t nc = 0; nc < n * c; ++nc) {
    const std::size_t base = nc * h * w;
    for (std::size_t i = 0; i < h / 2; ++i)
      for (std::size_t j = 0; j < w / 2; ++j, ++o) {
        std::size_t best = base + (2 * i) * w + 2 * j;
        const std::size_t candidates[3] = {best + 1, best + w, best + w + 1};
        for (std::size_t cand : candidates)
          if (x[cand] > x[best]) best = cand;
        r.output[o] = x[best];
        r.argmax[o] = best;
      }
  }
  return r;
}

template <typename T>
Tensor<T> MaxPool2x2Backward(const Shape& input_shape,
                             const std::vector<std::size_t>& argmax,
                             const Tensor<T>& grad_out) {
  if (argmax.size() != grad_out.size())
    throw Error(ErrorCode::kShapeMismatch, "MaxPool2x2Backward grad size");
  Tensor<T> g(input_shape);
  for (std::size_t i = 0; i < argmax.size(); ++i) g[argmax[i]] += grad_out[i];
  return g;
}

template <typename T>
Tensor<T> LeakyRelu(const Tensor<T>& x, double alpha) {
  Tensor<T> y = x;
  const T a = static_cast<T>(alpha);
  for (T& v : y.values()) v = v > T{0} ? v : a * v;
  return y;
}

template <typename T>
Tensor<T> LeakyReluBackward(const Tensor<T>& x, double alpha,
                            const Tensor<T>& grad_out) {
  ExpectShape(grad_out, x.shape(), "LeakyReluBackward");
  Tensor<T> g = grad_out;
  const T a = static_cast<T>(alpha);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(x[i] > T{0})) g[i] *= a;
  return g;
}

template <typename T>
Tensor<T> Relu(const Tensor<T>& x) {
  Tensor<T> y = x;
  for (T& v : y.values()) v = v > T{0} ? v : T{0};
  return y;
}

template <typename T>
Tensor<T> ReluBackward(const Tensor<T>& x, const Tensor<T>& grad_out) {
  ExpectShape(grad_out, x.shape(), "ReluBackward");
  Tensor<T> g = grad_out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!(x[i] > T{0})) g[i] = T{0};
  return g;
}

template <typename T>
Tensor<T> Dropout(const Tensor<T>& x, double p, Mode mode, uint64_t seed,
                  std::vector<T>* keep) {
  if (!(p >= 0.0 && p < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "dropout p must be in [0, 1)");
  if (mode == Mode::kInference || p == 0.0) {
    if (keep) keep->assign(x.size(), T{1});
    return x;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const T scale = static_cast<T>(1.0 / (1.0 - p));
  Tensor<T> y = x;
  if (keep) keep->resize(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const T k = uniform(rng) >= p ? scale : T{0};
    y[i] *= k;
    if (keep) (*keep)[i] = k;
  }
  return y;
}

template <typename T>
Tensor<T> Dense(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b) {
  ExpectRank(x, 2, "Dense input");
  ExpectRank(w, 2, "Dense weight");
  if (x.dim(1) != w.dim(0) || b.shape() != Shape{w.dim(1)})
    throw Error(ErrorCode::kShapeMismatch,
                "Dense: x " + ShapeString(x.shape()) + ", W " +
                    ShapeString(w.shape()) + ", b " + ShapeString(b.shape()));
  const auto n = static_cast<Eigen::Index>(x.dim(0));
  const auto d = static_cast<Eigen::Index>(w.dim(0));
  const auto m = static_cast<Eigen::Index>(w.dim(1));
  Tensor<T> y({x.dim(0), w.dim(1)});
  MapMat<T> out(y.data(), n, m);
  out.noalias() = ConstMapMat<T>(x.data(), n, d) * ConstMapMat<T>(w.data(), d, m);
  out.rowwise() += Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>>(b.data(), m);
  return y;
}

template <typename T>
DenseGrads<T> DenseBackward(const Tensor<T>& x, const Tensor<T>& w,
                            const Tensor<T>& grad_out) {
  ExpectShape(grad_out, {x.dim(0), w.dim(1)}, "DenseBackward grad_out");
  const auto n = static_cast<Eigen::Index>(x.dim(0));
  const auto d = static_cast<Eigen::Index>(w.dim(0));
  const auto m = static_cast<Eigen::Index>(w.dim(1));
  DenseGrads<T> g{Tensor<T>(x.shape()), Tensor<T>(w.shape()),
                  Tensor<T>({w.dim(1)})};
  ConstMapMat<T> go(grad_out.data(), n, m);
  ConstMapMat<T> xm(x.data(), n, d);
  MapMat<T>(g.weight.data(), d, m).noalias() = xm.transpose() * go;
  for (Eigen::Index j = 0; j < m; ++j) g.bias[j] = T{0};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) g.bias[j] += go(i, j);
  MapMat<T>(g.input.data(), n, d).noalias() =
      go * ConstMapMat<T>(w.data(), d, m).transpose();
  return g;
}

double XavierBound(std::size_t fan_in, std::size_t fan_out) {
  if (fan_in == 0 || fan_out == 0)
    throw Error(ErrorCode::kInvalidArgument, "Xavier fans must be > 0");
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

template <typename T>
Tensor<T> XavierUniform(Shape shape, std::size_t fan_in, std::size_t fan_out,
                        uint64_t seed) {
  const double bound = XavierBound(fan_in, fan_out);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-bound, bound);
  Tensor<T> t(std::move(shape));
  for (T& v : t.values()) v = static_cast<T>(uniform(rng));
  return t;
}

template <typename T>
Tensor<T> ConcatChannels(const Tensor<T>& a, const Tensor<T>& b) {
  ExpectRank(a, 4, "ConcatChannels");
  ExpectRank(b, 4, "ConcatChannels");
  if (a.dim(0) != b.dim(0) || a.dim(2) != b.dim(2) || a.dim(3) != b.dim(3))
    throw Error(ErrorCode::kShapeMismatch,
                "ConcatChannels " + ShapeString(a.shape()) + " + " +
                    ShapeString(b.shape()));
  const std::size_t plane = a.dim(2) * a.dim(3);
  const std::size_t sa = a.dim(1) * plane, sb = b.dim(1) * plane;
  Tensor<T> out({a.dim(0), a.dim(1) + b.dim(1), a.dim(2), a.dim(3)});
  for (std::size_t n = 0; n < a.dim(0); ++n) {
    T* dst = out.data() + n * (sa + sb);
    std::copy_n(a.data() + n * sa, sa, dst);
    std::copy_n(b.data() + n * sb, sb, dst + sa);
  }
  return out;
}

template <typename T>
void SplitChannels(const Tensor<T>& g, std::size_t channels_a, Tensor<T>* ga,
                   Tensor<T>* gb) {
  ExpectRank(g, 4, "SplitChannels");
  const std::size_t plane = g.dim(2) * g.dim(3);
  const std::size_t cb = g.dim(1) - channels_a;
  const std::size_t sa = channels_a * plane, sb = cb * plane;
  *ga = Tensor<T>({g.dim(0), channels_a, g.dim(2), g.dim(3)});
  *gb = Tensor<T>({g.dim(0), cb, g.dim(2), g.dim(3)});
  for (std::size_t n = 0; n < g.dim(0); ++n) {
    const T* src = g.data() + n * (sa + sb);
    std::copy_n(src, sa, ga->data() + n * sa);
    std::copy_n(src + sa, sb, gb->data() + n * sb);
  }
}

template <typename T>
Tensor<T> ConcatFeatures(const std::vector<const Tensor<T>*>& parts) {
  if (parts.empty())
    throw Error(ErrorCode::kInvalidArgument, "ConcatFeatures of nothing");
  const std::size_t n = parts.front()->dim(0);
  std::size_t width = 0;
  for (const auto* p : parts) {
    ExpectRank(*p, 2, "ConcatFeatures");
    if (p->dim(0) != n)
      throw Error(ErrorCode::kShapeMismatch, "ConcatFeatures batch sizes");
    width += p->dim(1);
  }
  Tensor<T> out({n, width});
  for (std::size_t i = 0; i < n; ++i) {
    T* dst = out.data() + i * width;
    for (const auto* p : parts) {
      dst = std::copy_n(p->data() + i * p->dim(1), p->dim(1), dst);
    }
  }
  return out;
}

#define AVSE_INSTANTIATE_OPS(T)                                                \
  template Tensor<T> Conv2d(const Tensor<T>&, const Tensor<T>&,                \
                            const Tensor<T>&, Stride2);                        \
  template ConvGrads<T> Conv2dBackward(const Tensor<T>&, const Tensor<T>&,     \
                                       Stride2, const Tensor<T>&, bool);       \
  template Tensor<T> ConvTranspose2d(const Tensor<T>&, const Tensor<T>&,       \
                                     const Tensor<T>&, Stride2, int, int);     \
  template ConvGrads<T> ConvTranspose2dBackward(                               \
      const Tensor<T>&, const Tensor<T>&, Stride2, const Tensor<T>&, bool);    \
  template PoolResult<T> MaxPool2x2(const Tensor<T>&);                         \
  template Tensor<T> MaxPool2x2Backward(                                       \
      const Shape&, const std::vector<std::size_t>&, const Tensor<T>&);        \
  template Tensor<T> LeakyRelu(const Tensor<T>&, double);                      \
  template Tensor<T> LeakyReluBackward(const Tensor<T>&, double,               \
                                       const Tensor<T>&);                      \
  template Tensor<T> Relu(const Tensor<T>&);                                   \
  template Tensor<T> ReluBackward(const Tensor<T>&, const Tensor<T>&);         \
  template Tensor<T> Dropout(const Tensor<T>&, double, Mode, uint64_t,         \
                             std::vector<T>*);                                 \
  template Tensor<T> Dense(const Tensor<T>&, const Tensor<T>&,                 \
                           const Tensor<T>&);                                  \
  template DenseGrads<T> DenseBackward(const Tensor<T>&, const Tensor<T>&,     \
                                       const Tensor<T>&);                      \
  template Tensor<T> XavierUniform(Shape, std::size_t, std::size_t, uint64_t); \
  template Tensor<T> ConcatChannels(const Tensor<T>&, const Tensor<T>&);       \
  template void SplitChannels(const Tensor<T>&, std::size_t, Tensor<T>*,       \
                              Tensor<T>*);                                     \
  template Tensor<T> ConcatFeatures(const std::vector<const Tensor<T>*>&);

AVSE_INSTANTIATE_OPS(float)
AVSE_INSTANTIATE_OPS(double)

}  // namespace avse::nn
