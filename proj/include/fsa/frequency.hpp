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

#include <iostream>

#include "fsa/attention.hpp"

// Frequency self-attention: attention computed entirely on the k^2
// frequency tokens f' = X' P, expanded back to HW tokens by a single P^T
// product at the end. Mathematically equal to low-pass filtering the input
// and attending in the spatial domain, at a fraction of the cost. No
// intermediate of size HW x HW (or HW x k^2 beyond the final output) is
// ever formed.

namespace fsa {

enum class FsaVariant { kDot, kLin };

struct FsaConfig {
  Index k = 8;
  FsaVariant variant = FsaVariant::kDot;
  Index recurrence = 1;   // sequential applications of the module
  bool residual = false;  // add the input back onto each application
};

namespace detail {

template <typename T>
void warn_biases_ignored(const AttentionParams<T>& params, const char* op) {
  if (params.has_bias())
    std::cerr << "warning: " << op << " is bias-free; biases ignored\n";
}

}  // namespace detail

// Dot-product frequency self-attention:
//   O' = (W_v f') (W_k f')^T (W_q f') / (HW) * P^T,  f' = X' P.
// Everything left of the final P^T runs at k^2 token width, and the chain
// is evaluated leftmost-first, so the largest live object is d_v x k^2
// (or the d_v x HW output) -- in particular no k^2 x k^2 similarity matrix.
template <typename T>
TokenMatrix<T> fsa_dot(const TokenMatrix<T>& x, const ProjectionMatrix<T>& p,
                       const AttentionParams<T>& params) {
  detail::validate_params(params, x.channels());
  detail::require(x.tokens() == p.tokens(), "fsa_dot: token count != H*W of P");
  detail::warn_biases_ignored(params, "fsa_dot");

  TokenMatrix<T> f = project_lowfreq(x, p);     // C x k^2
  Matrix<T> qf = matmul(params.w_q, f.values);  // d_k x k^2
  Matrix<T> kf = matmul(params.w_k, f.values);
  Matrix<T> vf = matmul(params.w_v, f.values);  // d_v x k^2

  Matrix<T> mixed = matmul_nt(vf, kf);  // d_v x d_k
  mixed = matmul(mixed, qf);            // d_v x k^2
  scale_inplace(mixed, T(1) / static_cast<T>(p.tokens()));

  TokenMatrix<T> out;
  out.origin_h = p.h;
  out.origin_w = p.w;
  out.values = matmul_nt(mixed, p.values);  // d_v x HW
  return out;
}

// l2-normalized frequency self-attention:
//   O' = (W_v f' (P^T rho_k P) (W_k f')^T (W_q f') P^T rho_q
//         + W_v f' P^T 1 1^T) / (HW)
// rho_k enters through the k^2 x k^2 weighted Gram of P's rows; rho_q is a
// per-column scaling applied after the P^T expansion. The ones term is the
// row sums of W_v f' P^T, obtained as W_v f' * (column sums of P) without
// forming the d_v x HW product.
template <typename T>
TokenMatrix<T> fsa_lin(const TokenMatrix<T>& x, const ProjectionMatrix<T>& p,
                       const AttentionParams<T>& params) {
  detail::validate_params(params, x.channels());
  detail::require(x.tokens() == p.tokens(), "fsa_lin: token count != H*W of P");
  detail::warn_biases_ignored(params, "fsa_lin");
  const T inv_n = T(1) / static_cast<T>(p.tokens());

  TokenMatrix<T> f = project_lowfreq(x, p);
  Matrix<T> qf = matmul(params.w_q, f.values);
  Matrix<T> kf = matmul(params.w_k, f.values);
  Matrix<T> vf = matmul(params.w_v, f.values);

  // Column norms of the expanded K and Q (d x HW, the largest objects here).
  Matrix<T> k_full = matmul_nt(kf, p.values);
  std::vector<T> lambda_k = inverse_col_norms(k_full, "fsa_lin: K");
  Matrix<T> q_full = matmul_nt(qf, p.values);
  std::vector<T> lambda_q = inverse_col_norms(q_full, "fsa_lin: Q");

  // gram = P^T rho_k P: scale row m of P by lambda_k[m], then P_s^T P.
  Matrix<T> p_scaled = p.values;  // HW x k^2
  scale_rows_inplace(p_scaled, lambda_k);
  Matrix<T> gram = matmul_tn(p_scaled, p.values);  // k^2 x k^2

  Matrix<T> t = matmul(vf, gram);     // d_v x k^2
  t = matmul_nt(t, kf);               // d_v x d_k
  t = matmul(t, qf);                  // d_v x k^2
  Matrix<T> out = matmul_nt(t, p.values);  // d_v x HW
  scale_columns_inplace(out, lambda_q);

  std::vector<T> p_colsums = col_sums(p.values);  // k^2 entries
  Matrix<T> ones_coef(static_cast<Index>(p_colsums.size()), 1);
  for (Index i = 0; i < ones_coef.rows(); ++i)
    ones_coef(i, 0) = p_colsums[static_cast<std::size_t>(i)];
  Matrix<T> ones_term = matmul(vf, ones_coef);  // d_v x 1 row sums
  std::vector<T> vrow(static_cast<std::size_t>(ones_term.rows()));
  for (Index i = 0; i < ones_term.rows(); ++i)
    vrow[static_cast<std::size_t>(i)] = ones_term(i, 0);
  add_row_broadcast_inplace(out, vrow);

  scale_inplace(out, inv_n);

  TokenMatrix<T> result;
  result.origin_h = p.h;
  result.origin_w = p.w;
  result.values = std::move(out);
  return result;
}

// Full module application: vectorize, run the chosen variant R times
// (adding the input back each round when cfg.residual), devectorize.
// Recurrence or residual feeding requires d_v = C.
template <typename T>
FeatureMap<T> fsa_apply(const FeatureMap<T>& x, const FsaConfig& cfg,
                        const AttentionParams<T>& params) {
  if (cfg.recurrence < 1)
    throw std::invalid_argument("fsa_apply: recurrence must be >= 1");
  if (cfg.k < 1 || cfg.k > std::min(x.height, x.width))
    throw std::invalid_argument("fsa_apply: need 1 <= k <= min(H, W)");
  if ((cfg.recurrence > 1 || cfg.residual) && params.d_v() != x.channels())
    throw std::invalid_argument(
        "fsa_apply: recurrence/residual require d_v = C");

  const ProjectionMatrix<T>& p = projection_cached<T>(x.height, x.width, cfg.k);
  TokenMatrix<T> tokens = vectorize(x);
  for (Index r = 0; r < cfg.recurrence; ++r) {
    TokenMatrix<T> y = (cfg.variant == FsaVariant::kDot)
                           ? fsa_dot(tokens, p, params)
                           : fsa_lin(tokens, p, params);
    if (cfg.residual) add_inplace(y.values, tokens.values);
    tokens = std::move(y);
  }
  return devectorize(tokens, x.height, x.width);
}

}  // namespace fsa
