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

// Command-line harness: equivalence checking, k-sweep ablation, projection
// algorithm benchmarking, attention-map dumps, cost reports.
//
// Exit codes: 0 success, 1 tolerance failure, 2 usage or input error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fsa/cost.hpp"
#include "fsa/frequency.hpp"
#include "fsa/synthetic.hpp"
#include "fsa/tensor_file.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  fsa::Index h = 24, w = 24, c = 512;
  fsa::Index dk = 64, dv = 64;
  fsa::Index k = 8;
  fsa::Index recurrence = 1;
  std::string variant = "both";
  std::uint64_t seed = 42;
  std::string precision = "f64";
  double tolerance = 1e-6;
  int threads = 1;
  int trials = 1;
};

void add_dim_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--H", cfg.h, "feature map height");
  cmd->add_option("--W", cfg.w, "feature map width");
  cmd->add_option("--C", cfg.c, "input channels");
  cmd->add_option("--dk", cfg.dk, "query/key embedding dimension");
  cmd->add_option("--dv", cfg.dv, "value channel dimension");
  cmd->add_option("--k", cfg.k, "retained frequencies per axis");
  cmd->add_option("--seed", cfg.seed, "RNG seed");
  cmd->add_option("--precision", cfg.precision, "f32 or f64")
      ->check(CLI::IsMember({"f32", "f64"}));
  cmd->add_option("--threads", cfg.threads, "worker threads");
}

int validate_dims(const RunConfig& cfg) {
  if (cfg.h < 1 || cfg.w < 1 || cfg.c < 1 || cfg.dk < 1 || cfg.dv < 1) {
    std::cerr << "error: dimensions must be positive\n";
    return kExitUsage;
  }
  if (cfg.k < 1 || cfg.k > std::min(cfg.h, cfg.w)) {
    std::cerr << "error: need 1 <= k <= min(H, W) = " << std::min(cfg.h, cfg.w)
              << "\n";
    return kExitUsage;
  }
  if (cfg.recurrence < 1) {
    std::cerr << "error: R must be >= 1\n";
    return kExitUsage;
  }
  if ((cfg.recurrence > 1) && cfg.dv != cfg.c) {
    std::cerr << "error: R > 1 requires dv = C\n";
    return kExitUsage;
  }
  return kExitOk;
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_csv_matrix(const std::string& path, const fsa::Matrix<double>& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (fsa::Index i = 0; i < m.rows(); ++i) {
    for (fsa::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_g(m(i, j));
    }
    out << '\n';
  }
}

// Plain-text PGM (P2), max-normalized to 0..255.
void write_pgm(const std::string& path, const fsa::Matrix<double>& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  double lo = m(0, 0), hi = m(0, 0);
  for (fsa::Index i = 0; i < m.size(); ++i) {
    lo = std::min(lo, m.data()[i]);
    hi = std::max(hi, m.data()[i]);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  out << "P2\n" << m.cols() << ' ' << m.rows() << "\n255\n";
  for (fsa::Index i = 0; i < m.rows(); ++i) {
    for (fsa::Index j = 0; j < m.cols(); ++j) {
      const int v = static_cast<int>(255.0 * (m(i, j) - lo) / span + 0.5);
      out << v << (j + 1 == m.cols() ? '\n' : ' ');
    }
  }
}

// ---- equiv ---------------------------------------------------------------

template <typename T>
double equiv_error(const RunConfig& cfg, fsa::FsaVariant variant,
                   std::uint64_t trial) {
  fsa::CounterRng rng(cfg.seed);
  const std::uint64_t off = 16 * trial;
  auto x = fsa::random_token_matrix<T>(rng, cfg.c, cfg.h, cfg.w,
                                       fsa::streams::kInput + off);
  auto params = fsa::random_params<T>(rng, cfg.c, cfg.dk, cfg.dv, off);
  const auto& p = fsa::projection_cached<T>(cfg.h, cfg.w, cfg.k);

  fsa::TokenMatrix<T> green = x;
  fsa::TokenMatrix<T> red = x;
  for (fsa::Index r = 0; r < cfg.recurrence; ++r) {
    green = (variant == fsa::FsaVariant::kDot) ? fsa::fsa_dot(green, p, params)
                                               : fsa::fsa_lin(green, p, params);
    red = fsa::lowpass_then_attend(
        red, p, params,
        variant == fsa::FsaVariant::kDot
            ? fsa::AttentionVariant::kDot
            : fsa::AttentionVariant::kNormalizedLinSoftmax);
  }
  return static_cast<double>(fsa::relative_error(green.values, red.values));
}

template <typename T>
int run_equiv(const RunConfig& cfg) {
  std::vector<fsa::FsaVariant> variants;
  if (cfg.variant == "dot" || cfg.variant == "both")
    variants.push_back(fsa::FsaVariant::kDot);
  if (cfg.variant == "lin" || cfg.variant == "both")
    variants.push_back(fsa::FsaVariant::kLin);

  bool ok = true;
  std::printf("H=%lld W=%lld C=%lld dk=%lld dv=%lld k=%lld R=%lld seed=%llu "
              "precision=%s trials=%d\n",
              static_cast<long long>(cfg.h), static_cast<long long>(cfg.w),
              static_cast<long long>(cfg.c), static_cast<long long>(cfg.dk),
              static_cast<long long>(cfg.dv), static_cast<long long>(cfg.k),
              static_cast<long long>(cfg.recurrence),
              static_cast<unsigned long long>(cfg.seed),
              cfg.precision.c_str(), cfg.trials);
  for (fsa::FsaVariant variant : variants) {
    std::vector<double> errors(static_cast<std::size_t>(cfg.trials), 0.0);
    const int workers = std::max(1, std::min(cfg.threads, cfg.trials));
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        for (int i = t; i < cfg.trials; i += workers)
          errors[static_cast<std::size_t>(i)] =
              equiv_error<T>(cfg, variant, static_cast<std::uint64_t>(i));
      });
    }
    for (auto& th : pool) th.join();
    const double max_err = *std::max_element(errors.begin(), errors.end());
    const bool pass = max_err <= cfg.tolerance;
    ok = ok && pass;
    std::printf("variant=%s max_rel_error=%s tolerance=%s %s\n",
                variant == fsa::FsaVariant::kDot ? "dot" : "lin",
                format_g(max_err).c_str(), format_g(cfg.tolerance).c_str(),
                pass ? "PASS" : "FAIL");
  }
  return ok ? kExitOk : kExitTolerance;
}

// ---- ablate-k --------------------------------------------------------------

template <typename T>
int run_ablate(const RunConfig& cfg, const std::string& input,
               std::vector<fsa::Index> ks, const std::string& out_path) {
  fsa::CounterRng rng(cfg.seed);
  fsa::FeatureMap<T> map;
  if (input.empty()) {
    map = fsa::onef_feature_map<T>(rng, cfg.c, cfg.h, cfg.w);
  } else {
    map = fsa::feature_map_from_tensor<T>(fsa::read_tensor_file(input));
  }
  const fsa::Index h = map.height, w = map.width;
  auto params = fsa::random_params<T>(rng, map.channels(), cfg.dk, cfg.dv);
  if (ks.empty())
    for (fsa::Index k = 1; k <= std::min(h, w); k *= 2) ks.push_back(k);
  for (fsa::Index k : ks)
    if (k < 1 || k > std::min(h, w)) {
      std::cerr << "error: k=" << k << " out of range for " << h << "x" << w
                << "\n";
      return kExitUsage;
    }

  const bool lin = cfg.variant == "lin";
  auto tokens = fsa::vectorize(map);
  auto qkv = fsa::token_map(tokens, params);
  fsa::Matrix<T> full = lin ? fsa::normalized_linsoftmax_attention(qkv.q, qkv.k, qkv.v)
                            : fsa::dot_attention(qkv.q, qkv.k, qkv.v);
  const T full_norm = fsa::frobenius_norm(full);

  std::ostringstream csv;
  csv << "k,retained_pct,deviation\n";
  for (fsa::Index k : ks) {
    const auto& p = fsa::projection_cached<T>(h, w, k);
    auto compressed = lin ? fsa::fsa_lin(tokens, p, params)
                          : fsa::fsa_dot(tokens, p, params);
    fsa::Matrix<T> diff = compressed.values;
    fsa::sub_inplace(diff, full);
    const double deviation =
        static_cast<double>(fsa::frobenius_norm(diff) /
                            (full_norm == T(0) ? T(1) : full_norm));
    const double retained =
        100.0 * static_cast<double>(k) * static_cast<double>(k) /
        (static_cast<double>(h) * static_cast<double>(w));
    csv << k << ',' << format_g(retained) << ',' << format_g(deviation)
        << '\n';
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    out << csv.str();
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

// ---- bench-dct -------------------------------------------------------------

template <typename T>
int run_bench(const RunConfig& cfg, std::vector<fsa::Index> ks, int reps,
              const std::string& out_path) {
  if (reps < 3) {
    std::cerr << "error: reps must be >= 3\n";
    return kExitUsage;
  }
  fsa::CounterRng rng(cfg.seed);
  auto map = fsa::random_feature_map<T>(rng, cfg.c, cfg.h, cfg.w);
  auto tokens = fsa::vectorize(map);
  if (ks.empty()) ks = {1, 2, 4, 8, 16, 32, 64};
  for (fsa::Index k : ks)
    if (k < 1 || k > std::min(cfg.h, cfg.w)) {
      std::cerr << "error: k=" << k << " out of range\n";
      return kExitUsage;
    }

  // Agreement check across the three algorithms before any timing.
  for (fsa::Index k : ks) {
    const auto& p = fsa::projection_cached<T>(cfg.h, cfg.w, k);
    auto a = fsa::project_lowfreq(tokens, p);
    auto b = fsa::project_separable(map, k);
    auto c = fsa::project_fullcrop(map, k);
    const double eab = fsa::relative_error(a.values, b.values);
    const double eac = fsa::relative_error(a.values, c.values);
    if (eab > 1e-6 || eac > 1e-6) {
      std::cerr << "error: projection algorithms disagree at k=" << k
                << " (" << eab << ", " << eac << ")\n";
      return kExitTolerance;
    }
  }
  std::printf("agreement check passed for %zu k values (<= 1e-6)\n",
              ks.size());

  std::ostringstream csv;
  csv << "method,k,median_ms\n";
  auto time_median = [&](auto&& fn) {
    std::vector<double> times;
    for (int r = 0; r < reps; ++r) {
      const auto start = std::chrono::steady_clock::now();
      fn();
      const auto stop = std::chrono::steady_clock::now();
      times.push_back(
          std::chrono::duration<double, std::milli>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
  };
  for (fsa::Index k : ks) {
    const auto& p = fsa::projection_cached<T>(cfg.h, cfg.w, k);
    const double t_matrix =
        time_median([&] { fsa::project_lowfreq(tokens, p); });
    csv << "matrix," << k << ',' << format_g(t_matrix) << '\n';
    const double t_sep = time_median([&] { fsa::project_separable(map, k); });
    csv << "separable," << k << ',' << format_g(t_sep) << '\n';
    const double t_full = time_median([&] { fsa::project_fullcrop(map, k); });
    csv << "fullcrop," << k << ',' << format_g(t_full) << '\n';
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    out << csv.str();
    std::cout << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

// ---- attnmap ---------------------------------------------------------------

template <typename T>
int run_attnmap(const RunConfig& cfg, const std::string& input,
                fsa::Index point_row, fsa::Index point_col,
                const std::string& prefix, bool pgm) {
  fsa::CounterRng rng(cfg.seed);
  fsa::FeatureMap<T> map;
  if (input.empty()) {
    map = fsa::onef_feature_map<T>(rng, cfg.c, cfg.h, cfg.w);
  } else {
    map = fsa::feature_map_from_tensor<T>(fsa::read_tensor_file(input));
  }
  const fsa::Index h = map.height, w = map.width, n = h * w;
  if (point_row < 0 || point_row >= h || point_col < 0 || point_col >= w) {
    std::cerr << "error: point (" << point_row << "," << point_col
              << ") outside " << h << "x" << w << "\n";
    return kExitUsage;
  }
  auto params = fsa::random_params<T>(rng, map.channels(), cfg.dk, cfg.dv);
  auto qkv = fsa::token_map(fsa::vectorize(map), params);

  // Full N x N maps, softmax vs linearized, from the same Q and K.
  fsa::Matrix<T> soft_map = fsa::matmul_tn(qkv.k, qkv.q);
  fsa::softmax_columns_inplace(soft_map);
  fsa::Matrix<T> lin_map = fsa::linsoftmax_attention_map(qkv.q, qkv.k);

  auto to_double = [](const fsa::Matrix<T>& m) {
    fsa::Matrix<double> out(m.rows(), m.cols());
    for (fsa::Index i = 0; i < m.size(); ++i)
      out.data()[i] = static_cast<double>(m.data()[i]);
    return out;
  };
  auto point_map = [&](const fsa::Matrix<T>& full) {
    fsa::Matrix<double> out(h, w);
    const fsa::Index col = point_row * w + point_col;
    for (fsa::Index i = 0; i < n; ++i)
      out.data()[i] = static_cast<double>(full(i, col));
    return out;
  };

  const fsa::Matrix<double> soft = to_double(soft_map);
  const fsa::Matrix<double> lin = to_double(lin_map);
  write_csv_matrix(prefix + "_softmax_map.csv", soft);
  write_csv_matrix(prefix + "_linsoftmax_map.csv", lin);
  write_csv_matrix(prefix + "_softmax_point.csv", point_map(soft_map));
  write_csv_matrix(prefix + "_linsoftmax_point.csv", point_map(lin_map));

  {
    std::ofstream out(prefix + "_qk_norms.csv", std::ios::trunc);
    out << "token,q_norm,k_norm\n";
    auto qn = fsa::col_l2_norms(qkv.q);
    auto kn = fsa::col_l2_norms(qkv.k);
    for (fsa::Index i = 0; i < n; ++i)
      out << i << ',' << format_g(static_cast<double>(qn[static_cast<std::size_t>(i)]))
          << ',' << format_g(static_cast<double>(kn[static_cast<std::size_t>(i)]))
          << '\n';
  }
  if (pgm) {
    write_pgm(prefix + "_softmax_map.pgm", soft);
    write_pgm(prefix + "_linsoftmax_map.pgm", lin);
    write_pgm(prefix + "_softmax_point.pgm", point_map(soft_map));
    write_pgm(prefix + "_linsoftmax_point.pgm", point_map(lin_map));
  }

  fsa::Index argmax_agree = 0;
  for (fsa::Index j = 0; j < n; ++j) {
    fsa::Index sa = 0, la = 0;
    for (fsa::Index i = 1; i < n; ++i) {
      if (soft(i, j) > soft(sa, j)) sa = i;
      if (lin(i, j) > lin(la, j)) la = i;
    }
    if (sa == la) ++argmax_agree;
  }
  std::printf("wrote %s_{softmax,linsoftmax}_{map,point}.csv and %s_qk_norms.csv\n",
              prefix.c_str(), prefix.c_str());
  std::printf("argmax agreement: %lld / %lld columns\n",
              static_cast<long long>(argmax_agree), static_cast<long long>(n));
  return kExitOk;
}

// ---- cost ------------------------------------------------------------------

int run_cost(const RunConfig& cfg, std::vector<std::string> methods, int mac,
             const std::string& reduce_alg, bool kv) {
  using namespace fsa::cost;
  const MacConvention conv =
      mac == 1 ? MacConvention::kMac1 : MacConvention::kMac2;
  ReduceAlgorithm reduce = ReduceAlgorithm::kSeparable;
  if (reduce_alg == "matrix") reduce = ReduceAlgorithm::kMatrixProjection;
  else if (reduce_alg == "separable") reduce = ReduceAlgorithm::kSeparable;
  else if (reduce_alg == "fulldct") reduce = ReduceAlgorithm::kFullDct;
  else {
    std::cerr << "error: unknown reduce algorithm '" << reduce_alg << "'\n";
    return kExitUsage;
  }
  if (methods.empty())
    methods = {"nonlocal", "ccnet",  "isanet",  "ann",
               "emanet",   "ocrnet", "fsa-dot", "fsa-lin"};

  std::vector<CostReport> reports;
  for (const std::string& m : methods) {
    try {
      if (m == "fsa-dot")
        reports.push_back(cost_fsa(cfg.h, cfg.w, cfg.c, cfg.dk, cfg.k,
                                   FsaCostVariant::kDot, conv, reduce));
      else if (m == "fsa-lin")
        reports.push_back(cost_fsa(cfg.h, cfg.w, cfg.c, cfg.dk, cfg.k,
                                   FsaCostVariant::kLin, conv, reduce));
      else
        reports.push_back(cost_baseline(m, cfg.h, cfg.w, cfg.c, cfg.dk, conv));
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  const auto nonlocal = cost_nonlocal(cfg.h, cfg.w, cfg.c, cfg.dk, conv);
  if (kv) {
    for (const auto& r : reports) std::cout << r.to_kv() << "\n";
  }
  std::cout << "method,convention,conv_flops,reduce_flops,mix_flops,"
               "reconstruct_flops,total_flops,peak_floats,"
               "reduction_vs_nonlocal_pct\n";
  for (const auto& r : reports) {
    const double red =
        100.0 * (1.0 - static_cast<double>(r.total_flops) /
                           static_cast<double>(nonlocal.total_flops));
    std::printf("%s,MAC%d,%llu,%llu,%llu,%llu,%llu,%llu,%.2f\n",
                r.method.c_str(), static_cast<int>(r.convention),
                static_cast<unsigned long long>(r.conv_flops),
                static_cast<unsigned long long>(r.reduce_flops),
                static_cast<unsigned long long>(r.mix_flops),
                static_cast<unsigned long long>(r.reconstruct_flops),
                static_cast<unsigned long long>(r.total_flops),
                static_cast<unsigned long long>(r.peak_floats), red);
  }
  for (const auto& r : reports) {
    if (r.method == "fsa-dot" || r.method == "fsa-lin") {
      const double red =
          100.0 * (1.0 - static_cast<double>(r.total_flops) /
                             static_cast<double>(nonlocal.total_flops));
      std::printf("%s reduction vs nonlocal: %.2f%%\n", r.method.c_str(), red);
    }
  }
  return kExitOk;
}

std::vector<fsa::Index> parse_klist(const std::string& s) {
  std::vector<fsa::Index> ks;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) ks.push_back(std::stoll(item));
  return ks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frequency self-attention lab"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string input, out_path, klist_str, point_str = "0,0";
  std::string methods_str, reduce_alg = "separable";
  int reps = 5, mac = 2;
  bool synthetic = false, pgm = false, kv = false;

  auto* equiv = app.add_subcommand(
      "equiv", "verify compressed path == filter-then-attend reference");
  add_dim_flags(equiv, cfg);
  equiv->add_option("--R", cfg.recurrence, "recurrence count");
  equiv->add_option("--variant", cfg.variant, "dot, lin or both")
      ->check(CLI::IsMember({"dot", "lin", "both"}));
  equiv->add_option("--tolerance", cfg.tolerance, "max relative error");
  equiv->add_option("--trials", cfg.trials, "independent seeded instances");

  auto* ablate = app.add_subcommand(
      "ablate-k", "output deviation vs retained frequencies");
  add_dim_flags(ablate, cfg);
  ablate->add_option("--input", input, "rank-3 tensor file (C x H x W)");
  ablate->add_flag("--synthetic", synthetic, "use the 1/f synthetic input");
  ablate->add_option("--ks", klist_str, "comma-separated k list");
  ablate->add_option("--variant", cfg.variant, "dot or lin");
  ablate->add_option("--out", out_path, "output CSV path (default stdout)");

  auto* bench = app.add_subcommand(
      "bench-dct", "time the three projection algorithms");
  add_dim_flags(bench, cfg);
  bench->add_option("--ks", klist_str, "comma-separated k list");
  bench->add_option("--reps", reps, "repetitions per timing (>= 3)");
  bench->add_option("--out", out_path, "output CSV path (default stdout)");

  auto* attn = app.add_subcommand("attnmap", "dump attention maps");
  add_dim_flags(attn, cfg);
  attn->add_option("--input", input, "rank-3 tensor file (C x H x W)");
  attn->add_flag("--synthetic", synthetic, "use the 1/f synthetic input");
  attn->add_option("--point", point_str, "query point as row,col");
  attn->add_option("--out", out_path, "output file prefix");
  attn->add_flag("--pgm", pgm, "also write PGM images");

  auto* cost = app.add_subcommand("cost", "analytic FLOP/memory reports");
  add_dim_flags(cost, cfg);
  cost->add_option("--methods", methods_str, "comma-separated method list");
  cost->add_option("--mac", mac, "FLOPs per multiply-accumulate (1 or 2)")
      ->check(CLI::IsMember({1, 2}));
  cost->add_option("--reduce-alg", reduce_alg,
                   "matrix, separable or fulldct");
  cost->add_flag("--kv", kv, "also print key=value blocks");

  // Working-point defaults for the benchmarking/cost commands.
  bench->parse_complete_callback([&] {
    if (!bench->count("--H")) cfg.h = 97;
    if (!bench->count("--W")) cfg.w = 97;
  });
  cost->parse_complete_callback([&] {
    if (!cost->count("--H")) cfg.h = 97;
    if (!cost->count("--W")) cfg.w = 97;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const bool f32 = cfg.precision == "f32";
  try {
    if (app.got_subcommand(equiv)) {
      if (int rc = validate_dims(cfg)) return rc;
      if (cfg.trials < 1) {
        std::cerr << "error: trials must be >= 1\n";
        return kExitUsage;
      }
      return f32 ? run_equiv<float>(cfg) : run_equiv<double>(cfg);
    }
    if (app.got_subcommand(ablate)) {
      if (input.empty() && !synthetic) synthetic = true;
      if (int rc = validate_dims(cfg)) return rc;
      auto ks = parse_klist(klist_str);
      return f32 ? run_ablate<float>(cfg, input, ks, out_path)
                 : run_ablate<double>(cfg, input, ks, out_path);
    }
    if (app.got_subcommand(bench)) {
      if (int rc = validate_dims(cfg)) return rc;
      auto ks = parse_klist(klist_str);
      return f32 ? run_bench<float>(cfg, ks, reps, out_path)
                 : run_bench<double>(cfg, ks, reps, out_path);
    }
    if (app.got_subcommand(attn)) {
      if (input.empty() && !synthetic) synthetic = true;
      if (int rc = validate_dims(cfg)) return rc;
      fsa::Index pr = 0, pc = 0;
      if (std::sscanf(point_str.c_str(), "%lld,%lld",
                      reinterpret_cast<long long*>(&pr),
                      reinterpret_cast<long long*>(&pc)) != 2) {
        std::cerr << "error: --point expects row,col\n";
        return kExitUsage;
      }
      const std::string prefix = out_path.empty() ? "attnmap" : out_path;
      return f32 ? run_attnmap<float>(cfg, input, pr, pc, prefix, pgm)
                 : run_attnmap<double>(cfg, input, pr, pc, prefix, pgm);
    }
    if (app.got_subcommand(cost)) {
      if (int rc = validate_dims(cfg)) return rc;
      std::vector<std::string> methods;
      if (!methods_str.empty()) {
        std::stringstream ss(methods_str);
        std::string item;
        while (std::getline(ss, item, ','))
          if (!item.empty()) methods.push_back(item);
      }
      return run_cost(cfg, methods, mac, reduce_alg, kv);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
