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

#include <cmath>
#include <thread>
#include <vector>

#include "fsa/dct.hpp"
#include "fsa/projection.hpp"
#include "fsa/synthetic.hpp"

using fsa::CounterRng;
using fsa::DctBasis;
using fsa::FeatureMap;
using fsa::FreqBlock;
using fsa::Index;
using fsa::Matrix;

namespace {

// Brute-force full 2D transform, independent of the library kernels:
// F[u,v] = sum_ij c_u c_v cos(pi/H (i+1/2) u) cos(pi/W (j+1/2) v) X[i,j].
std::vector<double> oracle_dct2d_full(const std::vector<double>& x, int h,
                                      int w) {
  std::vector<double> f(static_cast<std::size_t>(h) * w, 0.0);
  for (int u = 0; u < h; ++u) {
    for (int v = 0; v < w; ++v) {
      const double cu = std::sqrt((u == 0 ? 1.0 : 2.0) / h);
      const double cv = std::sqrt((v == 0 ? 1.0 : 2.0) / w);
      double acc = 0.0;
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
          acc += x[static_cast<std::size_t>(i) * w + j] *
                 std::cos(M_PI / h * (i + 0.5) * u) *
                 std::cos(M_PI / w * (j + 0.5) * v);
      f[static_cast<std::size_t>(u) * w + v] = cu * cv * acc;
    }
  }
  return f;
}

double gram_max_dev(const Matrix<double>& d) {
  double worst = 0.0;
  for (Index a = 0; a < d.cols(); ++a) {
    for (Index b = 0; b < d.cols(); ++b) {
      double acc = 0.0;
      for (Index i = 0; i < d.rows(); ++i) acc += d(i, a) * d(i, b);
      worst = std::max(worst, std::abs(acc - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("basis: single point is the unit DC basis") {
  auto d = fsa::dct_basis<double>(1, 1);
  CHECK(d.values.rows() == 1);
  CHECK(d.values.cols() == 1);
  CHECK(d.values(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("basis: 2x2 closed form") {
  auto d = fsa::dct_basis<double>(2, 2);
  const double r = 0.70711;
  CHECK(d.values(0, 0) == doctest::Approx(r).epsilon(1e-4));
  CHECK(d.values(1, 0) == doctest::Approx(r).epsilon(1e-4));
  CHECK(d.values(0, 1) == doctest::Approx(r).epsilon(1e-4));
  CHECK(d.values(1, 1) == doctest::Approx(-r).epsilon(1e-4));
}

TEST_CASE("basis: 8x3 Gram matrix is the identity") {
  auto d = fsa::dct_basis<double>(8, 3);
  CHECK(gram_max_dev(d.values) <= 1e-6);
}

TEST_CASE("basis: orthonormality over 1 <= k <= n <= 64") {
  for (Index n : {1, 2, 3, 5, 8, 13, 21, 33, 48, 64}) {
    for (Index k = 1; k <= n; k = (k < 4 ? k + 1 : k * 2)) {
      auto d = fsa::dct_basis<double>(n, k);
      CHECK(gram_max_dev(d.values) <= 1e-6);
      auto df = fsa::dct_basis<float>(n, k);
      Matrix<double> wide(df.values.rows(), df.values.cols());
      for (Index i = 0; i < wide.size(); ++i)
        wide.data()[i] = static_cast<double>(df.values.data()[i]);
      CHECK(gram_max_dev(wide) <= 1e-4);
    }
  }
}

TEST_CASE("basis: DC column is constant and positive") {
  auto d = fsa::dct_basis<double>(17, 5);
  for (Index i = 0; i < 17; ++i) {
    CHECK(d.values(i, 0) > 0.0);
    CHECK(d.values(i, 0) == doctest::Approx(d.values(0, 0)).epsilon(1e-15));
  }
}

TEST_CASE("basis: invalid arguments throw") {
  CHECK_THROWS_AS(fsa::dct_basis<double>(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(fsa::dct_basis<double>(4, 5), std::invalid_argument);
  CHECK_THROWS_AS(fsa::dct_basis<double>(4, 0), std::invalid_argument);
}

TEST_CASE("basis cache: concurrent first calls observe one value") {
  std::vector<std::thread> pool;
  std::vector<const DctBasis<double>*> seen(8, nullptr);
  for (int t = 0; t < 8; ++t)
    pool.emplace_back(
        [&, t] { seen[static_cast<std::size_t>(t)] = &fsa::dct_basis_cached<double>(31, 7); });
  for (auto& th : pool) th.join();
  for (int t = 1; t < 8; ++t) CHECK(seen[static_cast<std::size_t>(t)] == seen[0]);
}

TEST_CASE("forward: constant map concentrates at DC") {
  const double a = 0.37;
  FeatureMap<double> x(2, 6, 4);
  for (Index i = 0; i < x.values.size(); ++i) x.values.data()[i] = a;
  for (Index k : {1, 2, 4}) {
    auto f = fsa::dct2d_lowfreq(x, k);
    for (Index c = 0; c < 2; ++c) {
      CHECK(f.at(c, 0, 0) == doctest::Approx(a * std::sqrt(24.0)).epsilon(1e-9));
      for (Index u = 0; u < k; ++u)
        for (Index v = 0; v < k; ++v)
          if (u || v) CHECK(std::abs(f.at(c, u, v)) <= 1e-6);
    }
  }
}

TEST_CASE("forward: full-rank transform preserves the Frobenius norm") {
  CounterRng rng(11);
  auto x = fsa::random_feature_map<double>(rng, 3, 5, 5);
  auto f = fsa::dct2d_lowfreq(x, 5);
  CHECK(fsa::frobenius_norm(f.values) ==
        doctest::Approx(fsa::frobenius_norm(x.values)).epsilon(1e-12));
}

TEST_CASE("forward: low block equals cropped full transform") {
  CounterRng rng(5);
  auto x = fsa::random_feature_map<double>(rng, 1, 4, 4);
  std::vector<double> chan(16);
  for (Index i = 0; i < 16; ++i) chan[static_cast<std::size_t>(i)] = x.values(0, i);
  auto oracle = oracle_dct2d_full(chan, 4, 4);
  auto f = fsa::dct2d_lowfreq(x, 2);
  for (Index u = 0; u < 2; ++u)
    for (Index v = 0; v < 2; ++v)
      CHECK(f.at(0, u, v) ==
            doctest::Approx(oracle[static_cast<std::size_t>(u) * 4 + v]).epsilon(1e-10));
}

TEST_CASE("inverse: full-rank round trip returns the input") {
  CounterRng rng(6);
  auto x = fsa::random_feature_map<double>(rng, 2, 7, 7);
  auto back = fsa::idct2d_pad(fsa::dct2d_lowfreq(x, 7), 7, 7);
  for (Index i = 0; i < x.values.size(); ++i)
    CHECK(back.values.data()[i] ==
          doctest::Approx(x.values.data()[i]).epsilon(1e-5));
}

TEST_CASE("inverse: zero block reconstructs the zero map") {
  FreqBlock<double> f(3, 2);
  auto x = fsa::idct2d_pad(f, 6, 6);
  CHECK(fsa::max_abs(x.values) == 0.0);
}

TEST_CASE("inverse: round trip is the low-frequency subspace projection") {
  CounterRng rng(7);
  const Index h = 6, w = 6, k = 3;
  auto x = fsa::random_feature_map<double>(rng, 1, h, w);
  auto filtered = fsa::idct2d_pad(fsa::dct2d_lowfreq(x, k), h, w);

  // Independent subspace oracle: project x onto the 9 basis outer products.
  auto dh = fsa::dct_basis<double>(h, k);
  auto dw = fsa::dct_basis<double>(w, k);
  std::vector<double> projected(static_cast<std::size_t>(h) * w, 0.0);
  for (Index u = 0; u < k; ++u) {
    for (Index v = 0; v < k; ++v) {
      double coef = 0.0;
      for (Index i = 0; i < h; ++i)
        for (Index j = 0; j < w; ++j)
          coef += x.at(0, i, j) * dh.values(i, u) * dw.values(j, v);
      for (Index i = 0; i < h; ++i)
        for (Index j = 0; j < w; ++j)
          projected[static_cast<std::size_t>(i) * w + j] +=
              coef * dh.values(i, u) * dw.values(j, v);
    }
  }
  for (Index i = 0; i < h * w; ++i)
    CHECK(filtered.values(0, i) ==
          doctest::Approx(projected[static_cast<std::size_t>(i)]).epsilon(1e-10));

  // Residual orthogonal to every retained basis map.
  for (Index u = 0; u < k; ++u) {
    for (Index v = 0; v < k; ++v) {
      double inner = 0.0;
      for (Index i = 0; i < h; ++i)
        for (Index j = 0; j < w; ++j)
          inner += (x.at(0, i, j) - filtered.at(0, i, j)) * dh.values(i, u) *
                   dw.values(j, v);
      CHECK(std::abs(inner) <= 1e-6);
    }
  }
}

TEST_CASE("property: filtering twice equals filtering once") {
  CounterRng rng(8);
  for (auto [h, w, k] : {std::tuple<Index, Index, Index>{4, 4, 2},
                         {9, 5, 3}, {8, 12, 5}}) {
    auto x = fsa::random_feature_map<double>(rng, 2, h, w);
    auto f1 = fsa::dct2d_lowfreq(x, k);
    auto f2 = fsa::dct2d_lowfreq(fsa::idct2d_pad(f1, h, w), k);
    CHECK(fsa::relative_error(f2.values, f1.values) <= 1e-12);
  }
}

TEST_CASE("property: low-pass never increases energy") {
  CounterRng rng(9);
  const Index h = 7, w = 10;
  auto x = fsa::random_feature_map<double>(rng, 3, h, w);
  for (Index k = 1; k <= 7; ++k) {
    auto filtered = fsa::idct2d_pad(fsa::dct2d_lowfreq(x, k), h, w);
    CHECK(fsa::frobenius_norm(filtered.values) <=
          fsa::frobenius_norm(x.values) * (1.0 + 1e-12));
  }
}

TEST_CASE("property: transforms are linear") {
  CounterRng rng(10);
  const Index h = 6, w = 8, k = 3;
  auto x = fsa::random_feature_map<double>(rng, 2, h, w, 21);
  auto y = fsa::random_feature_map<double>(rng, 2, h, w, 22);
  const double alpha = 1.37, beta = -0.61;
  FeatureMap<double> mix(2, h, w);
  for (Index i = 0; i < mix.values.size(); ++i)
    mix.values.data()[i] =
        alpha * x.values.data()[i] + beta * y.values.data()[i];
  auto fx = fsa::dct2d_lowfreq(x, k);
  auto fy = fsa::dct2d_lowfreq(y, k);
  auto fmix = fsa::dct2d_lowfreq(mix, k);
  for (Index i = 0; i < fmix.values.size(); ++i)
    CHECK(fmix.values.data()[i] ==
          doctest::Approx(alpha * fx.values.data()[i] +
                          beta * fy.values.data()[i]).epsilon(1e-10));
}

TEST_CASE("range errors throw") {
  FeatureMap<double> x(1, 4, 6);
  CHECK_THROWS_AS(fsa::dct2d_lowfreq(x, 5), std::invalid_argument);
  CHECK_THROWS_AS(fsa::dct2d_lowfreq(x, 0), std::invalid_argument);
  FreqBlock<double> f(1, 5);
  CHECK_THROWS_AS(fsa::idct2d_pad(f, 4, 6), std::invalid_argument);
}
