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

#include <cstdint>
#include <string>

#include "fsa/matrix.hpp"

// Analytic FLOP and memory accounting for attention modules.
//
// Counting rule: multiply, add, divide, exponential and square-root each
// count as one FLOP. Matrix products count m*n*p multiply-accumulates;
// under kMac2 a multiply-accumulate is two FLOPs (the default), under
// kMac1 it is one. Elementwise operations are convention-independent.
// Transposes and reshapes are free.
//
// Two layers are provided:
//   * ops::* -- exact mirrors of what the library kernels execute, per
//     operation, at MAC=2. These match instrumented runs bit for bit.
//   * cost_* -- module-level stage reports (1x1 conv / reduce dim /
//     token mix / reconstruct) in the four-convolution module convention
//     (query, key, value, and an output-restoring convolution, all at the
//     reduced token width). The memory model follows the same convention.

namespace fsa::cost {

using u64 = std::uint64_t;

enum class MacConvention { kMac1 = 1, kMac2 = 2 };

// How the dimension-reduction (spatial tokens -> frequency tokens) stage is
// counted. The runtime library projects through the materialized P matrix
// (fastest wall-clock at small k); the separable per-channel transform is
// the FLOP-minimal route at small k and is the report default; the full-DCT
// count assumes a fast transform of all HW coefficients.
enum class ReduceAlgorithm { kMatrixProjection, kSeparable, kFullDct };

enum class FsaCostVariant { kDot, kLin };

struct CostReport {
  std::string method;
  u64 conv_flops = 0;         // 1x1 convolutions (token mapping + restore)
  u64 reduce_flops = 0;       // dimension reduction
  u64 mix_flops = 0;          // token mixing
  u64 reconstruct_flops = 0;  // expansion back to spatial tokens
  u64 total_flops = 0;        // sum of the four stages
  u64 peak_floats = 0;        // peak live float elements (0 = not modeled)
  MacConvention convention = MacConvention::kMac2;

  // Line-oriented key=value serialization.
  std::string to_kv() const;
};

// Non-local (softmax) self-attention at N = H*W tokens, embedding d,
// value channels d. Includes softmax exponential/normalization ops.
CostReport cost_nonlocal(Index h, Index w, Index c, Index d,
                         MacConvention mac = MacConvention::kMac2);

// Frequency self-attention with k^2 frequency tokens.
CostReport cost_fsa(Index h, Index w, Index c, Index d, Index k,
                    FsaCostVariant variant,
                    MacConvention mac = MacConvention::kMac2,
                    ReduceAlgorithm reduce = ReduceAlgorithm::kSeparable);

// Published complexity formulas of other context modules; constants default
// to the usual reported settings.
struct BaselineConstants {
  Index pool_bases = 110;    // ANN: pyramid pool scales (1,3,6,8)
  Index em_bases = 64;       // EMANet K
  Index em_iters = 3;        // EMANet T
  Index ocr_classes = 19;    // OCRNet K (Cityscapes classes)
  Index c_high = -1;         // ANN C_h; -1 = use C
  Index c_low = -1;          // ANN C_l; -1 = use C
  Index isa_window = -1;     // ISANet window area P; -1 = round(sqrt(N))
};

CostReport cost_baseline(const std::string& method, Index h, Index w, Index c,
                         Index d, MacConvention mac = MacConvention::kMac2,
                         const BaselineConstants& constants = {});

// Total operation count of an instrumented trace (see FlopScope). Under the
// MAC=2 convention this equals the matching ops::* formula exactly.
u64 measured_flops(const FlopCounts& trace);

// ---- exact per-operation counts (MAC=2, mirroring the kernels) ---------

namespace ops {

u64 token_map(Index c, Index n, Index dk, Index dv, bool bq, bool bk, bool bv);
u64 softmax_attention(Index n, Index dk, Index dv);
u64 dot_attention(Index n, Index dk, Index dv);
u64 linsoftmax_attention(Index n, Index dk, Index dv, bool exact_sum);
u64 normalized_linsoftmax_attention(Index n, Index dk, Index dv,
                                    bool exact_sum);
u64 linsoftmax_vector(Index n);
u64 project_lowfreq(Index c, Index n, Index k);
u64 reconstruct(Index c, Index n, Index k);
u64 dct2d_lowfreq(Index c, Index h, Index w, Index k);
u64 idct2d_pad(Index c, Index h, Index w, Index k);
u64 project_fullcrop(Index c, Index h, Index w);
u64 fsa_dot(Index h, Index w, Index c, Index dk, Index dv, Index k);
u64 fsa_lin(Index h, Index w, Index c, Index dk, Index dv, Index k);
u64 lowpass_then_attend(Index h, Index w, Index c, Index dk, Index dv, Index k,
                        int variant);  // variant: AttentionVariant order

}  // namespace ops

}  // namespace fsa::cost
