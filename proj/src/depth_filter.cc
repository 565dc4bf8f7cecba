// Copyright 2026 The occfilter Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "occfilter/depth_filter.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace occfilter {

namespace {

struct MaxOp {
  static constexpr float kIdentity = -std::numeric_limits<float>::infinity();
  float operator()(float a, float b) const { return a > b ? a : b; }
};

struct MinOp {
  static constexpr float kIdentity = std::numeric_limits<float>::infinity();
  float operator()(float a, float b) const { return a < b ? a : b; }
};

// Running extremum along a row: out[i] = op(in[i+lo .. i+hi]) restricted to
// [0, n). Windows of width 2^p are built by doubling; two overlapping ones
// then cover the full width, which is exact because op is idempotent.
template <typename Op>
void RunningExtremum1D(const float* in, int n, int lo, int hi, float* out,
                       std::vector<float>& buffer) {
  Op op;
  const int w = hi - lo + 1;
  const int m = n + w - 1;
  buffer.resize(m);
  float* a = buffer.data();
  for (int j = 0; j < m; ++j) {
    const int src = j + lo;
    a[j] = (src >= 0 && src < n) ? in[src] : Op::kIdentity;
  }
  int p = 1;
  for (; 2 * p <= w; p *= 2) {
    for (int j = 0; j + p < m; ++j) a[j] = op(a[j], a[j + p]);
  }
  const int shift = w - p;
  for (int i = 0; i < n; ++i) out[i] = op(a[i], a[i + shift]);
}

// Same filter down the columns. Rows are streamed in blocks of w, keeping
// the suffix extrema of the previous block and the prefix extrema of the
// current one.
template <typename Op>
void RunningExtremumColumns(const DepthMap& in, int lo, int hi, DepthMap& out,
                            std::vector<float>& prefix,
                            std::vector<float>& suffix) {
  Op op;
  const int width = in.width();
  const int n = in.height();
  const int w = hi - lo + 1;
  const std::size_t stride = static_cast<std::size_t>(width);
  prefix.resize(w * stride);
  suffix.resize(w * stride);
  std::vector<float> previous(w * stride);
  const std::vector<float> identity(stride, Op::kIdentity);
  auto source = [&](int j) {
    const int src = j + lo;
    return (src >= 0 && src < n) ? in.row(src).data() : identity.data();
  };
  // Block B covers padded rows [B * w, B * w + w). Output row i = B' * w + t
  // combines suffix[t] of its block with prefix[t - 1] of the next one.
  const int blocks = (n + w - 1) / w + 1;
  for (int b = 0; b < blocks; ++b) {
    const int base = b * w;
    std::copy_n(source(base), width, prefix.data());
    for (int t = 1; t < w; ++t) {
      const float* src = source(base + t);
      const float* pp = prefix.data() + (t - 1) * stride;
      float* pr = prefix.data() + t * stride;
      for (int x = 0; x < width; ++x) pr[x] = op(pp[x], src[x]);
    }
    if (b > 0) {
      const int first = base - w;
      for (int t = 0; t < w && first + t < n; ++t) {
        std::span<float> dst = out.row(first + t);
        const float* sr = previous.data() + t * stride;
        if (t == 0) {
          std::copy_n(sr, width, dst.data());
          continue;
        }
        const float* pr = prefix.data() + (t - 1) * stride;
        for (int x = 0; x < width; ++x) dst[x] = op(sr[x], pr[x]);
      }
    }
    if (base >= n) break;
    std::copy_n(source(base + w - 1), width, suffix.data() + (w - 1) * stride);
    for (int t = w - 2; t >= 0; --t) {
      const float* src = source(base + t);
      const float* sn = suffix.data() + (t + 1) * stride;
      float* sr = suffix.data() + t * stride;
      for (int x = 0; x < width; ++x) sr[x] = op(src[x], sn[x]);
    }
    std::swap(previous, suffix);
  }
}

// Square-window extremum: columns into a fresh raster, then rows in place.
template <typename Op>
DepthMap SquareExtremum(const DepthMap& in, int lo, int hi) {
  DepthMap out(in.width(), in.height());
  std::vector<float> prefix;
  std::vector<float> suffix;
  RunningExtremumColumns<Op>(in, lo, hi, out, prefix, suffix);
  for (int y = 0; y < out.height(); ++y) {
    float* row = out.row(y).data();
    RunningExtremum1D<Op>(row, out.width(), lo, hi, row, prefix);
  }
  return out;
}

// Vertical Sobel response written over `values` (width x height, row-major).
// Smoothed rows live in a ring of k rows; row y is consumed into the ring
// before output row y is written, so the update can run in place.
void SobelYRows(std::vector<float>& values, int width, int height, int k) {
  const SobelKernels kernels = MakeSobelKernels(k);
  const int r = k / 2;
  std::vector<float> smooth(kernels.smooth.begin(), kernels.smooth.end());
  std::vector<float> deriv(kernels.derivative.begin(),
                           kernels.derivative.end());
  const std::size_t stride = static_cast<std::size_t>(width);
  std::vector<float> ring(k * stride);
  std::vector<float> padded(stride + 2 * r);
  auto smoothed = [&](int sy) { return ring.data() + (sy % k) * stride; };

  int ready = 0;  // Source rows [0, ready) are in the ring.
  for (int y = 0; y < height; ++y) {
    for (; ready <= std::min(height - 1, y + r); ++ready) {
      const float* src = values.data() + ready * stride;
      for (int x = 0; x < width + 2 * r; ++x) {
        padded[x] = src[std::clamp(x - r, 0, width - 1)];
      }
      float* dst = smoothed(ready);
      for (int x = 0; x < width; ++x) dst[x] = smooth[0] * padded[x];
      for (int i = 1; i < k; ++i) {
        const float wgt = smooth[i];
        const float* p = padded.data() + i;
        for (int x = 0; x < width; ++x) dst[x] += wgt * p[x];
      }
    }
    float* dst = values.data() + y * stride;
    std::fill(dst, dst + width, 0.0f);
    for (int j = 0; j < k; ++j) {
      if (deriv[j] == 0.0f) continue;
      const float* src = smoothed(std::clamp(y + j - r, 0, height - 1));
      const float wgt = deriv[j];
      for (int x = 0; x < width; ++x) dst[x] += wgt * src[x];
    }
  }
}

double Binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

void DfrConfig::Validate() const {
  if (close_kernel < 1) {
    throw std::invalid_argument("close_kernel must be >= 1, got " +
                                std::to_string(close_kernel));
  }
  if (sobel_kernel < 3 || sobel_kernel % 2 == 0) {
    throw std::invalid_argument("sobel_kernel must be odd and >= 3, got " +
                                std::to_string(sobel_kernel));
  }
  if (!(change_threshold > 0.0)) {
    throw std::invalid_argument("change_threshold must be positive");
  }
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw std::invalid_argument("mu must lie in [0, 1], got " +
                                std::to_string(mu));
  }
}

DepthMap MorphologicalClose(const DepthMap& depth, int k) {
  if (k < 1) {
    throw std::invalid_argument("closing kernel must be >= 1, got " +
                                std::to_string(k));
  }
  if (depth.empty() || k == 1) return depth;
  const int lo = -(k / 2);
  const int hi = lo + k - 1;
  const DepthMap dilated = SquareExtremum<MaxOp>(depth, lo, hi);
  return SquareExtremum<MinOp>(dilated, -hi, -lo);
}

SobelKernels MakeSobelKernels(int k) {
  if (k < 3 || k % 2 == 0) {
    throw std::invalid_argument("Sobel kernel size must be odd and >= 3, got " +
                                std::to_string(k));
  }
  SobelKernels kernels;
  kernels.smooth.resize(k);
  for (int i = 0; i < k; ++i) kernels.smooth[i] = Binomial(k - 1, i);
  std::vector<double> base(k - 2);
  for (int i = 0; i < k - 2; ++i) base[i] = Binomial(k - 3, i);
  kernels.derivative.assign(k, 0.0);
  for (int i = 0; i < k - 2; ++i) {
    kernels.derivative[i] -= base[i];
    kernels.derivative[i + 2] += base[i];
  }
  return kernels;
}

DepthChangeMap SobelY(const DepthMap& depth, int k) {
  MakeSobelKernels(k);
  DepthMap copy = depth;
  return SobelYInPlace(std::move(copy), k);
}

DepthChangeMap SobelYInPlace(DepthMap&& depth, int k) {
  const int width = depth.width();
  const int height = depth.height();
  std::vector<float> values = std::move(depth).Release();
  SobelYRows(values, width, height, k);
  return DepthChangeMap(width, height, std::move(values));
}

DepthChangeMap ComputeDepthChange(const DepthMap& depth, const DfrConfig& cfg) {
  return SobelYInPlace(MorphologicalClose(depth, cfg.close_kernel),
                       cfg.sobel_kernel);
}

double FlatnessProportion(const DepthChangeMap& change, const BoundingBox& box,
                          const DfrConfig& cfg) {
  if (!box.IsValid()) throw std::invalid_argument("invalid box");
  const PixelRect r = PixelCover(box, change.width(), change.height());
  if (r.area() <= 0) {
    throw std::invalid_argument("box covers no pixel of the depth raster");
  }
  const float threshold = static_cast<float>(cfg.change_threshold);
  long flat = 0;
  for (int y = r.y0; y < r.y1; ++y) {
    std::span<const float> row = change.row(y);
    for (int x = r.x0; x < r.x1; ++x) {
      flat += std::fabs(row[x]) < threshold;
    }
  }
  return static_cast<double>(flat) / r.area();
}

std::vector<DfrDecision> EvaluateDfr(std::span<const Detection> dets,
                                     const DepthChangeMap& change,
                                     const DfrConfig& cfg) {
  std::vector<DfrDecision> decisions(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    try {
      decisions[i].flatness = FlatnessProportion(change, dets[i].box, cfg);
      decisions[i].accepted = decisions[i].flatness >= cfg.mu;
    } catch (const std::invalid_argument& e) {
      decisions[i].error = e.what();
    }
  }
  return decisions;
}

std::vector<Detection> DfrFilter(std::span<const Detection> dets,
                                 const DepthMap& depth, const DfrConfig& cfg,
                                 std::vector<std::string>* diagnostics) {
  cfg.Validate();
  const DepthChangeMap change = ComputeDepthChange(depth, cfg);
  const std::vector<DfrDecision> decisions = EvaluateDfr(dets, change, cfg);
  std::vector<Detection> kept;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (!decisions[i].error.empty()) {
      if (diagnostics != nullptr) {
        diagnostics->push_back("detection " + std::to_string(i) +
                               " rejected: " + decisions[i].error);
      }
      continue;
    }
    if (decisions[i].accepted) kept.push_back(dets[i]);
  }
  return kept;
}

}  // namespace occfilter
