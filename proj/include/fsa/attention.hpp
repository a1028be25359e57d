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

#include <optional>
#include <vector>

#include "fsa/projection.hpp"

// Spatial-domain reference attention. These are the straightforward
// quadratic implementations (the N x N attention map is fair game here);
// they serve as ground truth for the compressed frequency-domain paths.

namespace fsa {

inline constexpr double kDegenerateEps = 1e-12;

enum class AttentionVariant {
  kSoftmax,
  kDot,
  kLinSoftmax,
  kNormalizedLinSoftmax,
};

// How normalized weights are produced from the linearized logits: divide by
// the token count (the default) or by the exact per-column sum.
enum class NormMode { kDivideByTokens, kExactSum };

// Token-mapping parameters. W_q, W_k are d_k x C; W_v is d_v x C with
// d_v in {C, d_k}. Biases are optional per-output-channel vectors.
template <typename T>
struct AttentionParams {
  Matrix<T> w_q;
  Matrix<T> w_k;
  Matrix<T> w_v;
  std::optional<std::vector<T>> b_q;
  std::optional<std::vector<T>> b_k;
  std::optional<std::vector<T>> b_v;

  Index channels() const { return w_q.cols(); }
  Index d_k() const { return w_q.rows(); }
  Index d_v() const { return w_v.rows(); }

  bool has_bias() const {
    return b_q.has_value() || b_k.has_value() || b_v.has_value();
  }
};

template <typename T>
struct QkvTokens {
  Matrix<T> q;  // d_k x N
  Matrix<T> k;  // d_k x N
  Matrix<T> v;  // d_v x N
};

namespace detail {

template <typename T>
void validate_params(const AttentionParams<T>& params, Index channels) {
  require(params.w_q.rows() > 0 && params.w_k.rows() > 0 && params.w_v.rows() > 0,
          "attention params: empty mapping");
  require(params.w_q.cols() == channels && params.w_k.cols() == channels &&
              params.w_v.cols() == channels,
          "attention params: input channel mismatch");
  require(params.w_q.rows() == params.w_k.rows(),
          "attention params: W_q and W_k must share d_k");
  require(params.w_v.rows() == channels || params.w_v.rows() == params.w_q.rows(),
          "attention params: d_v must be C or d_k");
  if (params.b_q)
    require(static_cast<Index>(params.b_q->size()) == params.w_q.rows(),
            "attention params: B_q size");
  if (params.b_k)
    require(static_cast<Index>(params.b_k->size()) == params.w_k.rows(),
            "attention params: B_k size");
  if (params.b_v)
    require(static_cast<Index>(params.b_v->size()) == params.w_v.rows(),
            "attention params: B_v size");
}

template <typename T>
void validate_qkv(const Matrix<T>& q, const Matrix<T>& k, const Matrix<T>& v) {
  require(q.rows() == k.rows(), "attention: Q and K channel mismatch");
  require(q.cols() == k.cols() && q.cols() == v.cols(),
          "attention: token count mismatch");
  require(q.cols() > 0, "attention: empty token sequence");
}

}  // namespace detail

// Q = W_q X' (+ B_q broadcast over tokens), and likewise K, V.
template <typename T>
QkvTokens<T> token_map(const TokenMatrix<T>& x, const AttentionParams<T>& params) {
  detail::validate_params(params, x.channels());
  QkvTokens<T> out;
  out.q = matmul(params.w_q, x.values);
  out.k = matmul(params.w_k, x.values);
  out.v = matmul(params.w_v, x.values);
  if (params.b_q) add_row_broadcast_inplace(out.q, *params.b_q);
  if (params.b_k) add_row_broadcast_inplace(out.k, *params.b_k);
  if (params.b_v) add_row_broadcast_inplace(out.v, *params.b_v);
  return out;
}

// O' = V Softmax(K^T Q), softmax applied per column of the map.
template <typename T>
Matrix<T> softmax_attention(const Matrix<T>& q, const Matrix<T>& k,
                            const Matrix<T>& v) {
  detail::validate_qkv(q, k, v);
  Matrix<T> map = matmul_tn(k, q);  // N x N
  softmax_columns_inplace(map);
  return matmul(v, map);
}

// First-order softmax replacement on one weight vector:
// out_i = (1 + x_i) / sum_j (1 + x_j).
template <typename T>
std::vector<T> linsoftmax(const std::vector<T>& x) {
  std::vector<T> out(x.size());
  T sum = T(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = T(1) + x[i];
    sum += out[i];
  }
  detail::count_adds(2 * x.size());
  if (std::abs(static_cast<double>(sum)) < kDegenerateEps)
    throw std::domain_error("linsoftmax: degenerate denominator");
  for (auto& o : out) o /= sum;
  detail::count_divs(x.size());
  return out;
}

// O' = V K^T Q / N, the plain trilinear form.
template <typename T>
Matrix<T> dot_attention(const Matrix<T>& q, const Matrix<T>& k,
                        const Matrix<T>& v) {
  detail::validate_qkv(q, k, v);
  Matrix<T> map = matmul_tn(k, q);
  Matrix<T> out = matmul(v, map);
  scale_inplace(out, T(1) / static_cast<T>(q.cols()));
  return out;
}

// Linearized softmax attention.
//   kDivideByTokens: O' = V 1 1^T / N + V K^T Q / N
//   kExactSum:       O' = V (1 1^T + K^T Q) rho with rho the diagonal of
//                    per-column inverse sums (weights per column sum to 1).
template <typename T>
Matrix<T> linsoftmax_attention(const Matrix<T>& q, const Matrix<T>& k,
                               const Matrix<T>& v,
                               NormMode mode = NormMode::kDivideByTokens) {
  detail::validate_qkv(q, k, v);
  const Index n = q.cols();
  if (mode == NormMode::kDivideByTokens) {
    Matrix<T> out = matmul(v, matmul_tn(k, q));
    std::vector<T> vmean = row_sums(v);
    add_row_broadcast_inplace(out, vmean);
    scale_inplace(out, T(1) / static_cast<T>(n));
    return out;
  }
  // Exact-sum mode materializes the implied map (1 1^T + K^T Q) rho.
  Matrix<T> map = matmul_tn(k, q);
  std::vector<T> sums = col_sums(map);
  std::vector<T> lambda(sums.size());
  for (std::size_t j = 0; j < sums.size(); ++j) {
    const T denom = static_cast<T>(n) + sums[j];
    detail::count_adds(1);
    if (std::abs(static_cast<double>(denom)) < kDegenerateEps)
      throw std::domain_error("linsoftmax_attention: degenerate column sum");
    lambda[j] = T(1) / denom;
    detail::count_divs(1);
  }
  for (Index i = 0; i < map.rows(); ++i)
    for (Index j = 0; j < map.cols(); ++j)
      map(i, j) = (T(1) + map(i, j)) * lambda[static_cast<std::size_t>(j)];
  detail::count_adds(static_cast<std::uint64_t>(map.size()));
  detail::count_muls(static_cast<std::uint64_t>(map.size()));
  return matmul(v, map);
}

// The implied attention map of the exact-sum linsoftmax variant,
// (1 1^T + K^T Q) rho; exposed for map dumps and normalization checks.
template <typename T>
Matrix<T> linsoftmax_attention_map(const Matrix<T>& q, const Matrix<T>& k,
                                   NormMode mode = NormMode::kDivideByTokens) {
  detail::require(q.rows() == k.rows() && q.cols() == k.cols(),
                  "linsoftmax_attention_map: shape mismatch");
  const Index n = q.cols();
  Matrix<T> map = matmul_tn(k, q);
  if (mode == NormMode::kDivideByTokens) {
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        map(i, j) = (T(1) + map(i, j)) / static_cast<T>(n);
    return map;
  }
  std::vector<T> sums = col_sums(map);
  for (Index j = 0; j < n; ++j) {
    const T denom = static_cast<T>(n) + sums[static_cast<std::size_t>(j)];
    if (std::abs(static_cast<double>(denom)) < kDegenerateEps)
      throw std::domain_error("linsoftmax_attention_map: degenerate column sum");
    for (Index i = 0; i < n; ++i) map(i, j) = (T(1) + map(i, j)) / denom;
  }
  return map;
}

// Column norms of q and k as inverse scalings; throws on (near-)zero norms.
template <typename T>
std::vector<T> inverse_col_norms(const Matrix<T>& m, const char* what) {
  std::vector<T> norms = col_l2_norms(m);
  for (const T& x : norms)
    if (static_cast<double>(x) < kDegenerateEps)
      throw std::domain_error(std::string(what) + ": zero-norm column");
  return reciprocals(norms);
}

// l2-normalized linearized attention:
//   O' = V [1 1^T + (K rho_k)^T (Q rho_q)] / N
// with rho_q, rho_k the diagonal inverse column-norm scalings; the cosine
// block (K rho_k)^T (Q rho_q) has entries in [-1, 1]. kExactSum divides by
// exact column sums instead of N.
template <typename T>
Matrix<T> normalized_linsoftmax_attention(
    const Matrix<T>& q, const Matrix<T>& k, const Matrix<T>& v,
    NormMode mode = NormMode::kDivideByTokens) {
  detail::validate_qkv(q, k, v);
  const Index n = q.cols();
  std::vector<T> lambda_q = inverse_col_norms(q, "normalized_linsoftmax: Q");
  std::vector<T> lambda_k = inverse_col_norms(k, "normalized_linsoftmax: K");
  Matrix<T> qn = q;
  Matrix<T> kn = k;
  scale_columns_inplace(qn, lambda_q);
  scale_columns_inplace(kn, lambda_k);
  Matrix<T> cos_map = matmul_tn(kn, qn);
  if (mode == NormMode::kDivideByTokens) {
    Matrix<T> out = matmul(v, cos_map);
    std::vector<T> vmean = row_sums(v);
    add_row_broadcast_inplace(out, vmean);
    scale_inplace(out, T(1) / static_cast<T>(n));
    return out;
  }
  std::vector<T> sums = col_sums(cos_map);
  std::vector<T> lambda(sums.size());
  for (std::size_t j = 0; j < sums.size(); ++j) {
    const T denom = static_cast<T>(n) + sums[j];
    detail::count_adds(1);
    if (std::abs(static_cast<double>(denom)) < kDegenerateEps)
      throw std::domain_error(
          "normalized_linsoftmax_attention: degenerate column sum");
    lambda[j] = T(1) / denom;
    detail::count_divs(1);
  }
  Matrix<T> out = matmul(v, cos_map);
  std::vector<T> vsum = row_sums(v);
  add_row_broadcast_inplace(out, vsum);
  scale_columns_inplace(out, lambda);
  return out;
}

template <typename T>
Matrix<T> attend(const Matrix<T>& q, const Matrix<T>& k, const Matrix<T>& v,
                 AttentionVariant variant) {
  switch (variant) {
    case AttentionVariant::kSoftmax:
      return softmax_attention(q, k, v);
    case AttentionVariant::kDot:
      return dot_attention(q, k, v);
    case AttentionVariant::kLinSoftmax:
      return linsoftmax_attention(q, k, v);
    case AttentionVariant::kNormalizedLinSoftmax:
      return normalized_linsoftmax_attention(q, k, v);
  }
  throw std::invalid_argument("attend: unknown variant");
}

// The explicit low-pass-filter-then-attend reference: reconstructs
// X_f' = f' P^T from f' = X' P and runs the chosen spatial variant on it.
// Ground truth for the compressed frequency-domain paths.
template <typename T>
TokenMatrix<T> lowpass_then_attend(const TokenMatrix<T>& x,
                                   const ProjectionMatrix<T>& p,
                                   const AttentionParams<T>& params,
                                   AttentionVariant variant) {
  TokenMatrix<T> filtered = reconstruct(project_lowfreq(x, p), p);
  QkvTokens<T> qkv = token_map(filtered, params);
  TokenMatrix<T> out;
  out.origin_h = p.h;
  out.origin_w = p.w;
  out.values = attend(qkv.q, qkv.k, qkv.v, variant);
  return out;
}

}  // namespace fsa
