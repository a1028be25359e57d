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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "fsa/cost.hpp"
#include "fsa/frequency.hpp"
#include "fsa/synthetic.hpp"

using namespace fsa::cost;
using fsa::CounterRng;
using fsa::FlopScope;
using fsa::Index;

namespace {

template <typename Fn>
u64 measure(Fn&& fn) {
  FlopScope scope;
  fn();
  return measured_flops(scope.counts());
}

}  // namespace

TEST_CASE("nonlocal report: formula structure") {
  SUBCASE("d=0 degenerates to zero") {
    auto r = cost_nonlocal(4, 4, 8, 0);
    CHECK(r.total_flops == 0);
  }
  SUBCASE("doubling N quadruples the mix term exactly") {
    auto a = cost_nonlocal(4, 8, 16, 4);
    auto b = cost_nonlocal(8, 8, 16, 4);  // N doubled
    CHECK(b.mix_flops == 4 * a.mix_flops);
  }
  SUBCASE("total is the sum of the stages") {
    auto r = cost_nonlocal(5, 7, 12, 3);
    CHECK(r.total_flops == r.conv_flops + r.reduce_flops + r.mix_flops +
                               r.reconstruct_flops);
  }
}

TEST_CASE("nonlocal calibration at the working point") {
  auto r = cost_nonlocal(97, 97, 512, 64, MacConvention::kMac2);
  const double gflops = static_cast<double>(r.total_flops) / 1e9;
  CHECK(gflops >= 25.30 * 0.85);
  CHECK(gflops <= 25.30 * 1.15);
}

TEST_CASE("fsa report: structure and reduction") {
  SUBCASE("k=1 mix term is 2d under MAC=1") {
    auto r = cost_fsa(8, 8, 16, 5, 1, FsaCostVariant::kDot,
                      MacConvention::kMac1);
    CHECK(r.mix_flops == 2 * 5);
  }
  SUBCASE("reduction vs nonlocal at the working point >= 96%") {
    auto nl = cost_nonlocal(97, 97, 512, 64);
    for (auto variant : {FsaCostVariant::kDot, FsaCostVariant::kLin}) {
      auto r = cost_fsa(97, 97, 512, 64, 8, variant);
      const double reduction =
          1.0 - static_cast<double>(r.total_flops) /
                    static_cast<double>(nl.total_flops);
      CHECK(reduction >= 0.96);
    }
  }
  SUBCASE("lin exceeds dot with ratio in [1.5, 3.0] at the working point") {
    auto dot = cost_fsa(97, 97, 512, 64, 8, FsaCostVariant::kDot);
    auto lin = cost_fsa(97, 97, 512, 64, 8, FsaCostVariant::kLin);
    CHECK(lin.total_flops > dot.total_flops);
    const double ratio = static_cast<double>(lin.total_flops) /
                         static_cast<double>(dot.total_flops);
    CHECK(ratio >= 1.5);
    CHECK(ratio <= 3.0);
  }
  SUBCASE("lin total exceeds dot total across dims") {
    for (auto [h, w, c, d, k] :
         {std::tuple<Index, Index, Index, Index, Index>{8, 8, 16, 4, 2},
          {24, 24, 64, 16, 8}, {97, 97, 512, 64, 16}, {5, 9, 3, 2, 2}})
      CHECK(cost_fsa(h, w, c, d, k, FsaCostVariant::kLin).total_flops >
            cost_fsa(h, w, c, d, k, FsaCostVariant::kDot).total_flops);
  }
}

TEST_CASE("MAC convention doubles pure-matmul totals exactly") {
  for (const std::string& method : {"ccnet", "isanet", "ann", "emanet",
                                    "ocrnet"}) {
    auto one = cost_baseline(method, 32, 32, 64, 16, MacConvention::kMac1);
    auto two = cost_baseline(method, 32, 32, 64, 16, MacConvention::kMac2);
    CHECK(two.total_flops == 2 * one.total_flops);
  }
}

TEST_CASE("baseline formulas at MAC=1 match the published forms") {
  const Index h = 16, w = 16, c = 32, d = 8;
  const u64 n = 256;
  SUBCASE("ccnet mix = 4 N sqrt(N) d for square maps") {
    auto r = cost_baseline("ccnet", h, w, c, d, MacConvention::kMac1);
    CHECK(r.mix_flops == 4 * n * 16 * 8);
  }
  SUBCASE("isanet mix minimized at 4 N sqrt(N) d when P = sqrt(N)") {
    auto r = cost_baseline("isanet", h, w, c, d, MacConvention::kMac1);
    CHECK(r.mix_flops == 4 * n * 16 * 8);
    BaselineConstants wider;
    wider.isa_window = 64;
    auto off = cost_baseline("isanet", h, w, c, d, MacConvention::kMac1, wider);
    CHECK(off.mix_flops >= r.mix_flops);
  }
  SUBCASE("emanet reduce = 2NKTC") {
    auto r = cost_baseline("emanet", h, w, c, d, MacConvention::kMac1);
    CHECK(r.reduce_flops == 2 * n * 64 * 3 * 32);
  }
  SUBCASE("unknown method throws") {
    CHECK_THROWS_AS(cost_baseline("segmenter", h, w, c, d),
                    std::invalid_argument);
  }
}

TEST_CASE("analytic equals instrumented on all operations (dims <= 16)") {
  CounterRng rng(99);
  for (auto [h, w, c, dk, dv, k] :
       {std::tuple<Index, Index, Index, Index, Index, Index>{4, 4, 2, 2, 2, 2},
        {6, 3, 3, 2, 3, 2}, {16, 16, 8, 8, 8, 8}, {5, 7, 4, 3, 3, 3}}) {
    auto x = fsa::random_token_matrix<double>(rng, c, h, w);
    const auto& p = fsa::projection_cached<double>(h, w, k);
    auto params = fsa::random_params<double>(rng, c, dk, dv);
    auto qkv = fsa::token_map(x, params);
    const Index n = h * w;

    CHECK(measure([&] { fsa::token_map(x, params); }) ==
          ops::token_map(c, n, dk, dv, false, false, false));
    CHECK(measure([&] { fsa::softmax_attention(qkv.q, qkv.k, qkv.v); }) ==
          ops::softmax_attention(n, dk, dv));
    CHECK(measure([&] { fsa::dot_attention(qkv.q, qkv.k, qkv.v); }) ==
          ops::dot_attention(n, dk, dv));
    CHECK(measure([&] { fsa::linsoftmax_attention(qkv.q, qkv.k, qkv.v); }) ==
          ops::linsoftmax_attention(n, dk, dv, false));
    CHECK(measure([&] {
            fsa::linsoftmax_attention(qkv.q, qkv.k, qkv.v,
                                      fsa::NormMode::kExactSum);
          }) == ops::linsoftmax_attention(n, dk, dv, true));
    CHECK(measure([&] {
            fsa::normalized_linsoftmax_attention(qkv.q, qkv.k, qkv.v);
          }) == ops::normalized_linsoftmax_attention(n, dk, dv, false));
    CHECK(measure([&] {
            fsa::normalized_linsoftmax_attention(qkv.q, qkv.k, qkv.v,
                                                 fsa::NormMode::kExactSum);
          }) == ops::normalized_linsoftmax_attention(n, dk, dv, true));
    CHECK(measure([&] { fsa::fsa_dot(x, p, params); }) ==
          ops::fsa_dot(h, w, c, dk, dv, k));
    CHECK(measure([&] { fsa::fsa_lin(x, p, params); }) ==
          ops::fsa_lin(h, w, c, dk, dv, k));
    CHECK(measure([&] { fsa::project_lowfreq(x, p); }) ==
          ops::project_lowfreq(c, n, k));
    auto f = fsa::project_lowfreq(x, p);
    CHECK(measure([&] { fsa::reconstruct(f, p); }) ==
          ops::reconstruct(c, n, k));
    auto fm = fsa::devectorize(x, h, w);
    CHECK(measure([&] { fsa::dct2d_lowfreq(fm, k); }) ==
          ops::dct2d_lowfreq(c, h, w, k));
    auto fb = fsa::dct2d_lowfreq(fm, k);
    CHECK(measure([&] { fsa::idct2d_pad(fb, h, w); }) ==
          ops::idct2d_pad(c, h, w, k));
    CHECK(measure([&] { fsa::project_fullcrop(fm, k); }) ==
          ops::project_fullcrop(c, h, w));
    for (int variant = 0; variant < 4; ++variant)
      CHECK(measure([&] {
              fsa::lowpass_then_attend(
                  x, p, params, static_cast<fsa::AttentionVariant>(variant));
            }) == ops::lowpass_then_attend(h, w, c, dk, dv, k, variant));
  }
}

TEST_CASE("softmax attention at N=2 executes exactly 4 exponentials") {
  CounterRng rng(100);
  auto x = fsa::random_token_matrix<double>(rng, 2, 1, 2);
  auto params = fsa::random_params<double>(rng, 2, 2, 2);
  auto qkv = fsa::token_map(x, params);
  FlopScope scope;
  fsa::softmax_attention(qkv.q, qkv.k, qkv.v);
  CHECK(scope.counts().exps == 4);
}

TEST_CASE("cost_fsa is nondecreasing in every dimension") {
  const Index h = 12, w = 10, c = 24, d = 6, k = 4;
  for (auto variant : {FsaCostVariant::kDot, FsaCostVariant::kLin}) {
    const u64 base = cost_fsa(h, w, c, d, k, variant).total_flops;
    CHECK(cost_fsa(h + 3, w, c, d, k, variant).total_flops >= base);
    CHECK(cost_fsa(h, w + 3, c, d, k, variant).total_flops >= base);
    CHECK(cost_fsa(h, w, c + 8, d, k, variant).total_flops >= base);
    CHECK(cost_fsa(h, w, c, d + 2, k, variant).total_flops >= base);
    CHECK(cost_fsa(h, w, c, d, k + 2, variant).total_flops >= base);
  }
}

TEST_CASE("fsa beats nonlocal over the operating range of k") {
  const u64 nl = cost_nonlocal(97, 97, 512, 64).total_flops;
  for (Index k = 1; k <= 16; ++k) {
    CHECK(cost_fsa(97, 97, 512, 64, k, FsaCostVariant::kDot).total_flops < nl);
    CHECK(cost_fsa(97, 97, 512, 64, k, FsaCostVariant::kLin).total_flops < nl);
  }
  for (Index k : {24, 32, 48, 64})
    CHECK(cost_fsa(97, 97, 512, 64, k, FsaCostVariant::kDot).total_flops < nl);
}

TEST_CASE("memory model ratio at the working point") {
  auto nl = cost_nonlocal(97, 97, 512, 64);
  auto dot = cost_fsa(97, 97, 512, 64, 8, FsaCostVariant::kDot);
  const double ratio = static_cast<double>(dot.peak_floats) /
                       static_cast<double>(nl.peak_floats);
  CHECK(ratio <= 0.15);
  CHECK(ratio >= 0.05);
}

TEST_CASE("key=value serialization carries every field") {
  auto r = cost_nonlocal(8, 8, 4, 2);
  const std::string kv = r.to_kv();
  CHECK(kv.find("method=nonlocal") != std::string::npos);
  CHECK(kv.find("conv_flops=") != std::string::npos);
  CHECK(kv.find("total_flops=") != std::string::npos);
  CHECK(kv.find("peak_floats=") != std::string::npos);
  CHECK(kv.find("convention=MAC2") != std::string::npos);
}
