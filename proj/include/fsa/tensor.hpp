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

#include "fsa/matrix.hpp"

namespace fsa {

// C x H x W feature stack. Channel c is stored row-major in row c of
// `values` (shape C x H*W), so row-wise vectorization is a relabel.
template <typename T>
struct FeatureMap {
  Index height = 0;
  Index width = 0;
  Matrix<T> values;  // C x (height * width)

  FeatureMap() = default;
  FeatureMap(Index channels, Index h, Index w)
      : height(h), width(w), values(channels, h * w) {}

  Index channels() const { return values.rows(); }

  T& at(Index c, Index i, Index j) { return values(c, i * width + j); }
  const T& at(Index c, Index i, Index j) const {
    return values(c, i * width + j);
  }
};

// C x k x k block of low-frequency coefficients, stored like FeatureMap.
template <typename T>
struct FreqBlock {
  Index k = 0;
  Matrix<T> values;  // C x k^2

  FreqBlock() = default;
  FreqBlock(Index channels, Index k_) : k(k_), values(channels, k_ * k_) {}

  Index channels() const { return values.rows(); }

  T& at(Index c, Index u, Index v) { return values(c, u * k + v); }
  const T& at(Index c, Index u, Index v) const { return values(c, u * k + v); }
};

// C x N token matrix. Each column is one token: a spatial position when the
// matrix was vectorized from an H x W map (origin_h = H, origin_w = W), or a
// frequency coefficient when it came from a k x k block (origin_h =
// origin_w = k). The origin dims travel with the data so shape checks can
// catch mismatched reshapes.
template <typename T>
struct TokenMatrix {
  Index origin_h = 0;
  Index origin_w = 0;
  Matrix<T> values;  // C x (origin_h * origin_w)

  TokenMatrix() = default;
  TokenMatrix(Index channels, Index h, Index w)
      : origin_h(h), origin_w(w), values(channels, h * w) {}

  Index channels() const { return values.rows(); }
  Index tokens() const { return values.cols(); }
};

}  // namespace fsa
