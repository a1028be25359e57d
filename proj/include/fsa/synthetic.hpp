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
#include <cstdint>

#include "fsa/attention.hpp"

// Deterministic counter-based randomness and synthetic inputs. Every value
// is a pure function of (seed, stream, index) through the SplitMix64
// finalizer, so any draw can be reproduced independently of call order:
//
//   mix(z): z += 0x9E3779B97F4A7C15
//           z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//           z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//           return z ^ (z >> 31)
//   raw(seed, stream, index) = mix(mix(seed ^ mix(stream)) + index)
//   uniform01 = (raw >> 11) * 2^-53
//
// Normal draws are Box-Muller on uniform01 pairs at indices (2i, 2i+1).

namespace fsa {

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t raw(std::uint64_t stream, std::uint64_t index) const {
    return mix(mix(seed_ ^ mix(stream)) + index);
  }

  double uniform01(std::uint64_t stream, std::uint64_t index) const {
    return static_cast<double>(raw(stream, index) >> 11) * 0x1.0p-53;
  }

  // Uniform on [-1, 1).
  double uniform_sym(std::uint64_t stream, std::uint64_t index) const {
    return 2.0 * uniform01(stream, index) - 1.0;
  }

  double normal(std::uint64_t stream, std::uint64_t index) const {
    const double u1 = uniform01(stream, 2 * index);
    const double u2 = uniform01(stream, 2 * index + 1);
    const double r = std::sqrt(-2.0 * std::log(u1 + 1e-300));
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t seed_;
};

// Stable stream ids for the standard drawing order.
namespace streams {
inline constexpr std::uint64_t kInput = 1;
inline constexpr std::uint64_t kWq = 2;
inline constexpr std::uint64_t kWk = 3;
inline constexpr std::uint64_t kWv = 4;
inline constexpr std::uint64_t kSpectrum = 5;
}  // namespace streams

template <typename T>
TokenMatrix<T> random_token_matrix(const CounterRng& rng, Index c, Index h,
                                   Index w,
                                   std::uint64_t stream = streams::kInput) {
  TokenMatrix<T> x(c, h, w);
  for (Index i = 0; i < x.values.size(); ++i)
    x.values.data()[i] =
        static_cast<T>(rng.uniform_sym(stream, static_cast<std::uint64_t>(i)));
  return x;
}

template <typename T>
FeatureMap<T> random_feature_map(const CounterRng& rng, Index c, Index h,
                                 Index w,
                                 std::uint64_t stream = streams::kInput) {
  FeatureMap<T> x(c, h, w);
  for (Index i = 0; i < x.values.size(); ++i)
    x.values.data()[i] =
        static_cast<T>(rng.uniform_sym(stream, static_cast<std::uint64_t>(i)));
  return x;
}

template <typename T>
AttentionParams<T> random_params(const CounterRng& rng, Index c, Index dk,
                                 Index dv, std::uint64_t stream_offset = 0) {
  AttentionParams<T> params;
  params.w_q = Matrix<T>(dk, c);
  params.w_k = Matrix<T>(dk, c);
  params.w_v = Matrix<T>(dv, c);
  for (Index i = 0; i < params.w_q.size(); ++i)
    params.w_q.data()[i] = static_cast<T>(rng.uniform_sym(
        streams::kWq + stream_offset, static_cast<std::uint64_t>(i)));
  for (Index i = 0; i < params.w_k.size(); ++i)
    params.w_k.data()[i] = static_cast<T>(rng.uniform_sym(
        streams::kWk + stream_offset, static_cast<std::uint64_t>(i)));
  for (Index i = 0; i < params.w_v.size(); ++i)
    params.w_v.data()[i] = static_cast<T>(rng.uniform_sym(
        streams::kWv + stream_offset, static_cast<std::uint64_t>(i)));
  return params;
}

// CNN-feature-like synthetic input: per channel, random coefficients with
// amplitude proportional to 1 / (1 + radial frequency), reconstructed by
// the full inverse transform. Low frequencies dominate, as they do in real
// feature maps.
template <typename T>
FeatureMap<T> onef_feature_map(const CounterRng& rng, Index c, Index h,
                               Index w) {
  FeatureMap<double> coeffs(c, h, w);
  for (Index ch = 0; ch < c; ++ch) {
    for (Index u = 0; u < h; ++u) {
      for (Index v = 0; v < w; ++v) {
        const double radius = std::sqrt(static_cast<double>(u) * u +
                                        static_cast<double>(v) * v);
        const double amp = 1.0 / (1.0 + radius);
        const std::uint64_t idx =
            static_cast<std::uint64_t>((ch * h + u) * w + v);
        coeffs.at(ch, u, v) = amp * rng.normal(streams::kSpectrum, idx);
      }
    }
  }
  // Full inverse transform: coeffs is the complete spectrum.
  const auto& dh = dct_basis_cached<double>(h, h);
  const auto& dw = dct_basis_cached<double>(w, w);
  FeatureMap<T> out(c, h, w);
  for (Index ch = 0; ch < c; ++ch) {
    typename Matrix<double>::ConstMap f(coeffs.values.row_data(ch), h, w);
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
        chan = dh.values.map() * f * dw.values.map().transpose();
    for (Index i = 0; i < h * w; ++i)
      out.values(ch, i) = static_cast<T>(chan.data()[i]);
  }
  return out;
}

}  // namespace fsa
