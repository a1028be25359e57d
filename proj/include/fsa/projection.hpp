// Copyright 2026 The fsa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "fsa/dct.hpp"

// Linear maps between spatial position tokens and frequency tokens. P is the
// (H*W) x k^2 matrix with f' = X' P (compression) and X_f' = f' P^T
// (reconstruction); its columns are orthonormal (P^T P = I) and its transpose
// is the reconstruction map G.

namespace fsa {

template <typename T>
struct ProjectionMatrix {
  Index h = 0;
  Index w = 0;
  Index k = 0;
  Matrix<T> values;  // (h*w) x k^2

  Index tokens() const { return h * w; }
  Index freq_tokens() const { return k * k; }
};

// Closed-form construction: entry (m, n) is the product of one horizontal
// and one vertical basis entry,
//   P[m, n] = D_{H,k}[m / W, n / k] * D_{W,k}[m % W, n % k].
template <typename T>
ProjectionMatrix<T> build_projection(Index h, Index w, Index k) {
  if (k < 1 || k > std::min(h, w))
    throw std::invalid_argument("build_projection: need 1 <= k <= min(H, W)");
  const auto& dh = dct_basis_cached<T>(h, k);
  const auto& dw = dct_basis_cached<T>(w, k);
  ProjectionMatrix<T> p;
  p.h = h;
  p.w = w;
  p.k = k;
  p.values = Matrix<T>(h * w, k * k);
  for (Index m = 0; m < h * w; ++m) {
    const Index row_h = m / w;
    const Index row_w = m % w;
    for (Index n = 0; n < k * k; ++n)
      p.values(m, n) = dh.values(row_h, n / k) * dw.values(row_w, n % k);
  }
  return p;
}

// Identity-probing construction, used as an independent oracle against
// build_projection: row m of P is the vectorized 2D transform of the
// delta map with a single 1 at position (m / W, m % W).
template <typename T>
ProjectionMatrix<T> probe_projection(Index h, Index w, Index k) {
  if (k < 1 || k > std::min(h, w))
    throw std::invalid_argument("probe_projection: need 1 <= k <= min(H, W)");
  ProjectionMatrix<T> p;
  p.h = h;
  p.w = w;
  p.k = k;
  p.values = Matrix<T>(h * w, k * k);
  FeatureMap<T> delta(1, h, w);
  for (Index m = 0; m < h * w; ++m) {
    delta.values(0, m) = T(1);
    FreqBlock<T> coef = dct2d_lowfreq(delta, k);
    for (Index n = 0; n < k * k; ++n) p.values(m, n) = coef.values(0, n);
    delta.values(0, m) = T(0);
  }
  return p;
}

// Process-wide projection cache keyed by (H, W, k); same single-init
// semantics as the basis cache.
template <typename T>
const ProjectionMatrix<T>& projection_cached(Index h, Index w, Index k) {
  static std::mutex mutex;
  static std::map<std::tuple<Index, Index, Index>,
                  std::unique_ptr<ProjectionMatrix<T>>>
      cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{h, w, k}];
  if (!slot)
    slot = std::make_unique<ProjectionMatrix<T>>(build_projection<T>(h, w, k));
  return *slot;
}

// Row-wise vectorization: output[c, i*W + j] = X[c, i, j]. Storage is
// already row-major per channel, so this is a relabel.
template <typename T>
TokenMatrix<T> vectorize(const FeatureMap<T>& x) {
  TokenMatrix<T> t;
  t.origin_h = x.height;
  t.origin_w = x.width;
  t.values = x.values;
  return t;
}

template <typename T>
TokenMatrix<T> vectorize(const FreqBlock<T>& f) {
  TokenMatrix<T> t;
  t.origin_h = f.k;
  t.origin_w = f.k;
  t.values = f.values;
  return t;
}

template <typename T>
FeatureMap<T> devectorize(const TokenMatrix<T>& t, Index h, Index w) {
  if (t.tokens() != h * w)
    throw std::invalid_argument("devectorize: token count != H*W");
  FeatureMap<T> x;
  x.height = h;
  x.width = w;
  x.values = t.values;
  return x;
}

template <typename T>
FreqBlock<T> devectorize_freq(const TokenMatrix<T>& t, Index k) {
  if (t.tokens() != k * k)
    throw std::invalid_argument("devectorize_freq: token count != k^2");
  FreqBlock<T> f;
  f.k = k;
  f.values = t.values;
  return f;
}

// Linear operation 1: f' = X' P (C x HW -> C x k^2).
template <typename T>
TokenMatrix<T> project_lowfreq(const TokenMatrix<T>& x,
                               const ProjectionMatrix<T>& p) {
  if (x.tokens() != p.tokens())
    throw std::invalid_argument("project_lowfreq: token count != H*W of P");
  TokenMatrix<T> f;
  f.origin_h = p.k;
  f.origin_w = p.k;
  f.values = matmul(x.values, p.values);
  return f;
}

// Linear operation 2 core: X_f' = f' P^T (C x k^2 -> C x HW).
template <typename T>
TokenMatrix<T> reconstruct(const TokenMatrix<T>& f,
                           const ProjectionMatrix<T>& p) {
  if (f.tokens() != p.freq_tokens())
    throw std::invalid_argument("reconstruct: token count != k^2 of P");
  TokenMatrix<T> x;
  x.origin_h = p.h;
  x.origin_w = p.w;
  x.values = matmul_nt(f.values, p.values);
  return x;
}

// Same result as project_lowfreq, computed by per-channel separable
// transforms instead of one big matrix product.
template <typename T>
TokenMatrix<T> project_separable(const FeatureMap<T>& x, Index k) {
  return vectorize(dct2d_lowfreq(x, k));
}

// Same result again, via the complete separable transform followed by a
// crop of the k x k low-frequency corner.
template <typename T>
TokenMatrix<T> project_fullcrop(const FeatureMap<T>& x, Index k) {
  const Index h = x.height, w = x.width;
  if (k < 1 || k > std::min(h, w))
    throw std::invalid_argument("project_fullcrop: need 1 <= k <= min(H, W)");
  const auto& dh = dct_basis_cached<T>(h, h);
  const auto& dw = dct_basis_cached<T>(w, w);
  TokenMatrix<T> out(x.channels(), k, k);
  Matrix<T> full(h, w);
  for (Index c = 0; c < x.channels(); ++c) {
    detail::two_sided_tn(dh.values, x.values.row_data(c), h, w, dw.values,
                         full.data());
    for (Index u = 0; u < k; ++u)
      for (Index v = 0; v < k; ++v) out.values(c, u * k + v) = full(u, v);
  }
  return out;
}

}  // namespace fsa
