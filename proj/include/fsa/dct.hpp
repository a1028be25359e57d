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

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "fsa/tensor.hpp"

// Orthonormal DCT-II bases and the per-channel 2D low-frequency transform
// pair: dct2d_lowfreq keeps the k x k lowest-frequency block, idct2d_pad
// reconstructs an H x W map from it (zero padding the dropped frequencies).

namespace fsa {

// n x k matrix whose column j is the j-th lowest-frequency orthonormal
// DCT-II basis vector: entry (i, j) = c_j * cos(pi/n * (i + 1/2) * j) with
// c_0 = sqrt(1/n) and c_j = sqrt(2/n) otherwise. Column 0 is the constant
// (DC) basis with positive entries, and columns are orthonormal: D^T D = I.
template <typename T>
struct DctBasis {
  Index n = 0;
  Index k = 0;
  Matrix<T> values;  // n x k
};

template <typename T>
DctBasis<T> dct_basis(Index n, Index k) {
  if (n < 1 || k < 1 || k > n)
    throw std::invalid_argument("dct_basis: need 1 <= k <= n");
  DctBasis<T> basis;
  basis.n = n;
  basis.k = k;
  basis.values = Matrix<T>(n, k);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Index j = 0; j < k; ++j) {
    const double scale = std::sqrt((j == 0 ? 1.0 : 2.0) * inv_n);
    for (Index i = 0; i < n; ++i) {
      const double angle =
          M_PI * inv_n * (static_cast<double>(i) + 0.5) * static_cast<double>(j);
      basis.values(i, j) = static_cast<T>(scale * std::cos(angle));
    }
  }
  return basis;
}

// Process-wide basis cache. Bases depend only on (n, k) and are immutable
// once built; first concurrent callers race on the mutex, everyone observes
// one consistent value.
template <typename T>
const DctBasis<T>& dct_basis_cached(Index n, Index k) {
  static std::mutex mutex;
  static std::map<std::pair<Index, Index>, std::unique_ptr<DctBasis<T>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n, k}];
  if (!slot) slot = std::make_unique<DctBasis<T>>(dct_basis<T>(n, k));
  return *slot;
}

namespace detail {

// Counted per-channel transform L^T * X_c * R, written into `out_row`
// (row-major k_l x k_r). Association order follows the cheaper side so the
// cost is |X| * k_l + min-side * k_l * k_r multiply-accumulates.
template <typename T>
void two_sided_tn(const Matrix<T>& left, const T* src, Index h, Index w,
                  const Matrix<T>& right, T* out_row) {
  using EMap = typename Matrix<T>::ConstMap;
  using OMap = typename Matrix<T>::Map;
  EMap x(src, h, w);
  OMap out(out_row, left.cols(), right.cols());
  if (h <= w) {
    // (X * R) first: the k^2-sized product runs over the shorter side.
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> t =
        x * right.map();
    count_matmul(h, w, right.cols());
    out.noalias() = left.map().transpose() * t;
    count_matmul(left.cols(), h, right.cols());
  } else {
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> t =
        left.map().transpose() * x;
    count_matmul(left.cols(), h, w);
    out.noalias() = t * right.map();
    count_matmul(left.cols(), w, right.cols());
  }
}

// Counted per-channel reconstruction L * F_c * R^T into out_row (h x w).
template <typename T>
void two_sided_nt(const Matrix<T>& left, const T* src, Index k,
                  const Matrix<T>& right, T* out_row, Index h, Index w) {
  using EMap = typename Matrix<T>::ConstMap;
  using OMap = typename Matrix<T>::Map;
  EMap f(src, k, k);
  OMap out(out_row, h, w);
  if (h <= w) {
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> t =
        left.map() * f;
    count_matmul(h, k, k);
    out.noalias() = t * right.map().transpose();
    count_matmul(h, k, w);
  } else {
    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> t =
        f * right.map().transpose();
    count_matmul(k, k, w);
    out.noalias() = left.map() * t;
    count_matmul(h, k, w);
  }
}

}  // namespace detail

// Per-channel D_{H,k}^T * X_c * D_{W,k}: the k x k lowest-frequency block.
template <typename T>
FreqBlock<T> dct2d_lowfreq(const FeatureMap<T>& x, Index k) {
  const Index h = x.height, w = x.width;
  if (k < 1 || k > std::min(h, w))
    throw std::invalid_argument("dct2d_lowfreq: need 1 <= k <= min(H, W)");
  const auto& dh = dct_basis_cached<T>(h, k);
  const auto& dw = dct_basis_cached<T>(w, k);
  FreqBlock<T> out(x.channels(), k);
  for (Index c = 0; c < x.channels(); ++c)
    detail::two_sided_tn(dh.values, x.values.row_data(c), h, w, dw.values,
                         out.values.row_data(c));
  return out;
}

// Per-channel D_{H,k} * F_c * D_{W,k}^T: reconstruction with zero padding of
// the dropped frequencies.
template <typename T>
FeatureMap<T> idct2d_pad(const FreqBlock<T>& f, Index h, Index w) {
  const Index k = f.k;
  if (k < 1 || k > std::min(h, w))
    throw std::invalid_argument("idct2d_pad: need 1 <= k <= min(H, W)");
  const auto& dh = dct_basis_cached<T>(h, k);
  const auto& dw = dct_basis_cached<T>(w, k);
  FeatureMap<T> out(f.channels(), h, w);
  for (Index c = 0; c < f.channels(); ++c)
    detail::two_sided_nt(dh.values, f.values.row_data(c), k, dw.values,
                         out.values.row_data(c), h, w);
  return out;
}

}  // namespace fsa
