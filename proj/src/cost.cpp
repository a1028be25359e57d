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

#include "fsa/cost.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fsa::cost {

namespace {

u64 u(Index x) { return static_cast<u64>(x); }

// m*n*p multiply-accumulates under the chosen convention.
u64 mac(MacConvention conv, u64 m, u64 n, u64 p) {
  return static_cast<u64>(conv) * m * n * p;
}

u64 finish(CostReport& r) {
  r.total_flops =
      r.conv_flops + r.reduce_flops + r.mix_flops + r.reconstruct_flops;
  return r.total_flops;
}

u64 reduce_count(ReduceAlgorithm alg, u64 n, u64 h, u64 w, u64 c, u64 k,
                 MacConvention mac_conv) {
  const u64 m = static_cast<u64>(mac_conv);
  switch (alg) {
    case ReduceAlgorithm::kMatrixProjection:
      return m * n * k * k * c;
    case ReduceAlgorithm::kSeparable:
      return m * (n * k * c + std::min(h, w) * k * k * c);
    case ReduceAlgorithm::kFullDct: {
      const u64 log2n = static_cast<u64>(std::ceil(std::log2(
          static_cast<double>(n))));
      return m * n * log2n * c;
    }
  }
  return 0;
}

}  // namespace

std::string CostReport::to_kv() const {
  std::ostringstream os;
  os << "method=" << method << '\n'
     << "convention=MAC" << static_cast<int>(convention) << '\n'
     << "conv_flops=" << conv_flops << '\n'
     << "reduce_flops=" << reduce_flops << '\n'
     << "mix_flops=" << mix_flops << '\n'
     << "reconstruct_flops=" << reconstruct_flops << '\n'
     << "total_flops=" << total_flops << '\n'
     << "peak_floats=" << peak_floats << '\n';
  return os.str();
}

CostReport cost_nonlocal(Index h, Index w, Index c, Index d,
                         MacConvention conv) {
  if (h < 1 || w < 1 || c < 1 || d < 0)
    throw std::invalid_argument("cost_nonlocal: bad dims");
  const u64 n = u(h) * u(w), cc = u(c), dd = u(d);
  CostReport r;
  r.method = "nonlocal";
  r.convention = conv;
  // Four 1x1 convolutions (query, key, value, restore) at N tokens.
  r.conv_flops = 4 * mac(conv, n, cc, dd);
  r.reduce_flops = 0;
  // K^T Q and V * map, plus per-entry softmax cost (subtract-max,
  // exponential, sum, divide) on the N x N map.
  r.mix_flops = mac(conv, n, dd, n) + mac(conv, dd, n, n) + (d > 0 ? 4 * n * n : 0);
  r.reconstruct_flops = 0;
  finish(r);
  // Peak live floats at the mixing step: input, conv parameters, Q/K/V,
  // the N x N map, and the d x N mix output.
  r.peak_floats = cc * n + 4 * dd * cc + 3 * dd * n + n * n + dd * n;
  return r;
}

CostReport cost_fsa(Index h, Index w, Index c, Index d, Index k,
                    FsaCostVariant variant, MacConvention conv,
                    ReduceAlgorithm reduce) {
  if (h < 1 || w < 1 || c < 1 || d < 0 || k < 1 || k > std::min(h, w))
    throw std::invalid_argument("cost_fsa: bad dims");
  const u64 n = u(h) * u(w), cc = u(c), dd = u(d), k2 = u(k) * u(k);
  CostReport r;
  r.method = variant == FsaCostVariant::kDot ? "fsa-dot" : "fsa-lin";
  r.convention = conv;
  // Four 1x1 convolutions at k^2 tokens.
  r.conv_flops = 4 * mac(conv, k2, cc, dd);
  r.reduce_flops = reduce_count(reduce, n, u(h), u(w), cc, u(k), conv);
  if (variant == FsaCostVariant::kDot) {
    // (W_k f')^T (W_q f') and V_f * sim.
    r.mix_flops = mac(conv, k2, dd, k2) + mac(conv, dd, k2, k2);
    // o' P^T expansion plus the 1/(HW) normalization.
    r.reconstruct_flops = mac(conv, dd, k2, n) + dd * k2;
    finish(r);
  } else {
    // Token mixing: the K-side norm materialization (W_k f') P^T with its
    // column norms, the weighted Gram P^T rho_k P, and the k^2-wide chain
    // V_f * gram * K_f^T * Q_f.
    r.mix_flops = mac(conv, dd, k2, n)       // (W_k f') P^T
                  + (2 * dd * n + 2 * n)     // column norms + reciprocals
                  + k2 * n                   // row scaling of P
                  + mac(conv, k2, n, k2)     // gram
                  + mac(conv, dd, k2, k2)    // V_f * gram
                  + mac(conv, dd, k2, dd)    // ... * K_f^T
                  + mac(conv, dd, dd, k2);   // ... * Q_f
    // Reconstruction: the Q-side norm materialization, the P^T expansion,
    // the rho_q column scaling, the ones term, and the 1/(HW) scaling.
    r.reconstruct_flops = mac(conv, dd, k2, n)    // (W_q f') P^T
                          + (2 * dd * n + 2 * n)  // column norms + recips
                          + mac(conv, dd, k2, n)  // expansion
                          + dd * n                // rho_q scaling
                          + k2 * n                // column sums of P
                          + mac(conv, dd, k2, 1)  // V_f * colsums
                          + dd * n                // ones broadcast
                          + dd * n;               // 1/(HW)
    finish(r);
  }
  // Peak live floats at the reconstruction step (4-conv module: the restore
  // conv runs at k^2 tokens, so reconstruction and output carry C channels):
  // input, P, parameters, f', Q/K/V_f, mix intermediates, restored o'',
  // and the C x N output.
  u64 peak = cc * n + n * k2 + 4 * dd * cc + cc * k2 + 3 * dd * k2 +
             dd * k2 + cc * k2 + cc * n;
  if (variant == FsaCostVariant::kLin)
    peak += 2 * dd * n + 2 * n + k2 * k2;  // K/Q expansions, scalings, gram
  r.peak_floats = peak;
  return r;
}

CostReport cost_baseline(const std::string& method, Index h, Index w, Index c,
                         Index d, MacConvention conv,
                         const BaselineConstants& constants) {
  if (h < 1 || w < 1 || c < 1 || d < 1)
    throw std::invalid_argument("cost_baseline: bad dims");
  const u64 n = u(h) * u(w), cc = u(c), dd = u(d);
  CostReport r;
  r.method = method;
  r.convention = conv;
  if (method == "nonlocal") return cost_nonlocal(h, w, c, d, conv);
  if (method == "ccnet") {
    r.conv_flops = 4 * mac(conv, n, cc, dd);
    // Criss-cross token mixing, two passes over row + column neighbours.
    r.mix_flops = 2 * mac(conv, n, u(h) + u(w), dd);
  } else if (method == "isanet") {
    r.conv_flops = 8 * mac(conv, n, cc, dd);
    // Window area P: long-range (N/P) plus short-range (P) attention.
    long double p = constants.isa_window > 0
                        ? static_cast<long double>(constants.isa_window)
                        : std::llround(std::sqrt(static_cast<double>(n)));
    const long double mix =
        2.0L * static_cast<long double>(n) *
        (static_cast<long double>(n) / p + p) * static_cast<long double>(dd);
    r.mix_flops = static_cast<u64>(conv) * static_cast<u64>(std::llround(mix));
  } else if (method == "ann") {
    const u64 ch = constants.c_high > 0 ? u(constants.c_high) : cc;
    const u64 cl = constants.c_low > 0 ? u(constants.c_low) : cc;
    const u64 s = u(constants.pool_bases);
    r.conv_flops = 2 * mac(conv, n, ch, dd) + 2 * mac(conv, n, cl, dd) +
                   2 * mac(conv, n, ch, ch);
    r.reduce_flops = 4 * mac(conv, n, dd, 1);
    r.mix_flops = 2 * mac(conv, n, s, dd);
  } else if (method == "emanet") {
    const u64 kb = u(constants.em_bases), t = u(constants.em_iters);
    r.conv_flops = 2 * mac(conv, n, cc, cc);
    r.reduce_flops = 2 * mac(conv, n, kb * t, cc);
    r.mix_flops = mac(conv, n, kb, cc);
  } else if (method == "ocrnet") {
    const u64 kb = u(constants.ocr_classes);
    r.conv_flops = 2 * mac(conv, n, cc, dd) + 2 * mac(conv, kb, cc, dd) +
                   2 * mac(conv, n, cc, cc);
    r.reduce_flops = mac(conv, n, kb, cc);
    r.mix_flops = 2 * mac(conv, n, kb, dd);
  } else {
    throw std::invalid_argument("cost_baseline: unknown method '" + method +
                                "'");
  }
  finish(r);
  return r;
}

u64 measured_flops(const FlopCounts& trace) { return trace.total(); }

namespace ops {

namespace {
u64 mm(u64 m, u64 n, u64 p) { return 2 * m * n * p; }  // MAC=2
}  // namespace

u64 token_map(Index c, Index n, Index dk, Index dv, bool bq, bool bk,
              bool bv) {
  const u64 cc = u(c), nn = u(n), dkk = u(dk), dvv = u(dv);
  u64 total = mm(dkk, cc, nn) + mm(dkk, cc, nn) + mm(dvv, cc, nn);
  if (bq) total += dkk * nn;
  if (bk) total += dkk * nn;
  if (bv) total += dvv * nn;
  return total;
}

u64 softmax_attention(Index n, Index dk, Index dv) {
  const u64 nn = u(n), dkk = u(dk), dvv = u(dv);
  return mm(nn, dkk, nn) + 4 * nn * nn + mm(dvv, nn, nn);
}

u64 dot_attention(Index n, Index dk, Index dv) {
  const u64 nn = u(n), dkk = u(dk), dvv = u(dv);
  return mm(nn, dkk, nn) + mm(dvv, nn, nn) + dvv * nn;
}

u64 linsoftmax_attention(Index n, Index dk, Index dv, bool exact_sum) {
  const u64 nn = u(n), dkk = u(dk), dvv = u(dv);
  if (!exact_sum)
    return mm(nn, dkk, nn) + mm(dvv, nn, nn) + 3 * dvv * nn;
  return mm(nn, dkk, nn)    // K^T Q
         + nn * nn          // column sums
         + 2 * nn           // lambda: add + divide per column
         + 2 * nn * nn      // (1 + x) * lambda per map entry
         + mm(dvv, nn, nn); // V * map
}

u64 normalized_linsoftmax_attention(Index n, Index dk, Index dv,
                                    bool exact_sum) {
  const u64 nn = u(n), dkk = u(dk), dvv = u(dv);
  u64 total = 2 * (2 * dkk * nn + nn)  // column norms of Q and K
              + 2 * nn                 // reciprocals
              + 2 * dkk * nn           // column scalings
              + mm(nn, dkk, nn);       // cosine map
  if (!exact_sum) {
    total += mm(dvv, nn, nn) + 3 * dvv * nn;
  } else {
    total += nn * nn + 2 * nn                // column sums + lambda
             + mm(dvv, nn, nn) + dvv * nn    // V * map + row sums
             + dvv * nn + dvv * nn;          // broadcast + column scaling
  }
  return total;
}

u64 linsoftmax_vector(Index n) { return 3 * u(n); }

u64 project_lowfreq(Index c, Index n, Index k) {
  return mm(u(c), u(n), u(k) * u(k));
}

u64 reconstruct(Index c, Index n, Index k) {
  return mm(u(c), u(k) * u(k), u(n));
}

u64 dct2d_lowfreq(Index c, Index h, Index w, Index k) {
  const u64 cc = u(c), hh = u(h), ww = u(w), kk = u(k);
  return cc * (2 * kk * hh * ww + 2 * std::min(hh, ww) * kk * kk);
}

u64 idct2d_pad(Index c, Index h, Index w, Index k) {
  const u64 cc = u(c), hh = u(h), ww = u(w), kk = u(k);
  return cc * (2 * kk * hh * ww + 2 * std::min(hh, ww) * kk * kk);
}

u64 project_fullcrop(Index c, Index h, Index w) {
  const u64 cc = u(c), hh = u(h), ww = u(w);
  return cc * 2 * hh * ww * (hh + ww);
}

u64 fsa_dot(Index h, Index w, Index c, Index dk, Index dv, Index k) {
  const u64 n = u(h) * u(w), cc = u(c), dkk = u(dk), dvv = u(dv),
            k2 = u(k) * u(k);
  return mm(cc, n, k2)                       // f' = X' P
         + 2 * mm(dkk, cc, k2) + mm(dvv, cc, k2)  // Q_f, K_f, V_f
         + mm(dvv, k2, dkk) + mm(dvv, dkk, k2)    // leftmost-first chain
         + dvv * k2                               // 1/(HW)
         + mm(dvv, k2, n);                        // expansion
}

u64 fsa_lin(Index h, Index w, Index c, Index dk, Index dv, Index k) {
  const u64 n = u(h) * u(w), cc = u(c), dkk = u(dk), dvv = u(dv),
            k2 = u(k) * u(k);
  return mm(cc, n, k2)                            // f'
         + 2 * mm(dkk, cc, k2) + mm(dvv, cc, k2)  // Q_f, K_f, V_f
         + mm(dkk, k2, n) + (2 * dkk * n + 2 * n) // K expansion + lambda_k
         + mm(dkk, k2, n) + (2 * dkk * n + 2 * n) // Q expansion + lambda_q
         + k2 * n                                 // row scaling of P
         + mm(k2, n, k2)                          // gram
         + mm(dvv, k2, k2)                        // V_f * gram
         + mm(dvv, k2, dkk)                       // ... * K_f^T
         + mm(dvv, dkk, k2)                       // ... * Q_f
         + mm(dvv, k2, n)                         // expansion
         + dvv * n                                // rho_q scaling
         + k2 * n                                 // column sums of P
         + mm(dvv, k2, 1)                         // ones coefficients
         + dvv * n                                // ones broadcast
         + dvv * n;                               // 1/(HW)
}

u64 lowpass_then_attend(Index h, Index w, Index c, Index dk, Index dv,
                        Index k, int variant) {
  const u64 n = u(h) * u(w);
  u64 total = project_lowfreq(c, static_cast<Index>(n), k) +
              reconstruct(c, static_cast<Index>(n), k) +
              token_map(c, static_cast<Index>(n), dk, dv, false, false, false);
  switch (variant) {
    case 0: total += softmax_attention(static_cast<Index>(n), dk, dv); break;
    case 1: total += dot_attention(static_cast<Index>(n), dk, dv); break;
    case 2: total += linsoftmax_attention(static_cast<Index>(n), dk, dv, false); break;
    case 3: total += normalized_linsoftmax_attention(static_cast<Index>(n), dk, dv, false); break;
    default: throw std::invalid_argument("lowpass_then_attend: variant");
  }
  return total;
}

}  // namespace ops

}  // namespace fsa::cost
