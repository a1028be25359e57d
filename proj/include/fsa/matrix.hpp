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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Dense row-major matrix with optional instrumentation. Every arithmetic
// kernel reports its operation count to the active FlopScope (if any), and
// every Matrix allocation reports its element count to the active AllocScope.
// Counting rule: multiply / add / divide / exponential / square-root each
// count as one operation; a matrix product A(m x n) * B(n x p) counts m*n*p
// multiplies and m*n*p adds (accumulation into zero). Transposes, reshapes
// and copies count nothing.

namespace fsa {

using Index = std::int64_t;

struct FlopCounts {
  std::uint64_t muls = 0;
  std::uint64_t adds = 0;
  std::uint64_t divs = 0;
  std::uint64_t exps = 0;
  std::uint64_t sqrts = 0;

  std::uint64_t total() const { return muls + adds + divs + exps + sqrts; }
};

struct AllocStats {
  std::uint64_t live_elems = 0;     // currently allocated matrix elements
  std::uint64_t peak_elems = 0;     // high-water mark of live_elems
  std::uint64_t largest_alloc = 0;  // largest single matrix allocated
};

namespace detail {

inline thread_local FlopCounts* g_flops = nullptr;
inline thread_local AllocStats* g_alloc = nullptr;

inline void count_muls(std::uint64_t n) {
  if (g_flops) g_flops->muls += n;
}
inline void count_adds(std::uint64_t n) {
  if (g_flops) g_flops->adds += n;
}
inline void count_divs(std::uint64_t n) {
  if (g_flops) g_flops->divs += n;
}
inline void count_exps(std::uint64_t n) {
  if (g_flops) g_flops->exps += n;
}
inline void count_sqrts(std::uint64_t n) {
  if (g_flops) g_flops->sqrts += n;
}
inline void count_matmul(Index m, Index n, Index p) {
  if (g_flops) {
    const auto work = static_cast<std::uint64_t>(m) *
                      static_cast<std::uint64_t>(n) *
                      static_cast<std::uint64_t>(p);
    g_flops->muls += work;
    g_flops->adds += work;
  }
}

inline void audit_alloc(std::uint64_t n) {
  if (g_alloc && n > 0) {
    g_alloc->live_elems += n;
    g_alloc->peak_elems = std::max(g_alloc->peak_elems, g_alloc->live_elems);
    g_alloc->largest_alloc = std::max(g_alloc->largest_alloc, n);
  }
}
inline void audit_free(std::uint64_t n) {
  if (g_alloc && n > 0) g_alloc->live_elems -= n;
}

}  // namespace detail

// Activates FLOP counting on the current thread for its lifetime.
class FlopScope {
 public:
  FlopScope() : prev_(detail::g_flops) { detail::g_flops = &counts_; }
  ~FlopScope() { detail::g_flops = prev_; }
  FlopScope(const FlopScope&) = delete;
  FlopScope& operator=(const FlopScope&) = delete;

  const FlopCounts& counts() const { return counts_; }
  std::uint64_t total() const { return counts_.total(); }

 private:
  FlopCounts counts_;
  FlopCounts* prev_;
};

// Activates allocation auditing on the current thread for its lifetime.
class AllocScope {
 public:
  AllocScope() : prev_(detail::g_alloc) { detail::g_alloc = &stats_; }
  ~AllocScope() { detail::g_alloc = prev_; }
  AllocScope(const AllocScope&) = delete;
  AllocScope& operator=(const AllocScope&) = delete;

  const AllocStats& stats() const { return stats_; }

 private:
  AllocStats stats_;
  AllocStats* prev_;
};

template <typename T>
class Matrix {
 public:
  using Scalar = T;
  using EigenType =
      Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Map = Eigen::Map<EigenType>;
  using ConstMap = Eigen::Map<const EigenType>;

  Matrix() = default;

  Matrix(Index rows, Index cols)
      : rows_(rows), cols_(cols), data_(check_size(rows, cols), T(0)) {
    detail::audit_alloc(tracked_ = data_.size());
  }

  Matrix(const Matrix& other)
      : rows_(other.rows_), cols_(other.cols_), data_(other.data_) {
    detail::audit_alloc(tracked_ = data_.size());
  }

  Matrix(Matrix&& other) noexcept
      : rows_(other.rows_), cols_(other.cols_), data_(std::move(other.data_)),
        tracked_(other.tracked_) {
    other.rows_ = other.cols_ = 0;
    other.tracked_ = 0;
  }

  Matrix& operator=(const Matrix& other) {
    if (this != &other) {
      detail::audit_free(tracked_);
      rows_ = other.rows_;
      cols_ = other.cols_;
      data_ = other.data_;
      detail::audit_alloc(tracked_ = data_.size());
    }
    return *this;
  }

  Matrix& operator=(Matrix&& other) noexcept {
    if (this != &other) {
      detail::audit_free(tracked_);
      rows_ = other.rows_;
      cols_ = other.cols_;
      data_ = std::move(other.data_);
      tracked_ = other.tracked_;
      other.rows_ = other.cols_ = 0;
      other.tracked_ = 0;
    }
    return *this;
  }

  ~Matrix() { detail::audit_free(tracked_); }

  static Matrix identity(Index n) {
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index size() const { return rows_ * cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(Index r, Index c) { return data_[r * cols_ + c]; }
  const T& operator()(Index r, Index c) const { return data_[r * cols_ + c]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  T* row_data(Index r) { return data_.data() + r * cols_; }
  const T* row_data(Index r) const { return data_.data() + r * cols_; }

  Map map() { return Map(data_.data(), rows_, cols_); }
  ConstMap map() const { return ConstMap(data_.data(), rows_, cols_); }

 private:
  static std::size_t check_size(Index rows, Index cols) {
    if (rows < 0 || cols < 0)
      throw std::invalid_argument("Matrix: negative dimension");
    return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  }

  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<T> data_;
  std::uint64_t tracked_ = 0;
};

namespace detail {
inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}
}  // namespace detail

// ---- counted kernels --------------------------------------------------

template <typename T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
  detail::require(a.cols() == b.rows(), "matmul: inner dimension mismatch");
  Matrix<T> out(a.rows(), b.cols());
  out.map().noalias() = a.map() * b.map();
  detail::count_matmul(a.rows(), a.cols(), b.cols());
  return out;
}

// a^T * b without materializing the transpose.
template <typename T>
Matrix<T> matmul_tn(const Matrix<T>& a, const Matrix<T>& b) {
  detail::require(a.rows() == b.rows(), "matmul_tn: inner dimension mismatch");
  Matrix<T> out(a.cols(), b.cols());
  out.map().noalias() = a.map().transpose() * b.map();
  detail::count_matmul(a.cols(), a.rows(), b.cols());
  return out;
}

// a * b^T without materializing the transpose.
template <typename T>
Matrix<T> matmul_nt(const Matrix<T>& a, const Matrix<T>& b) {
  detail::require(a.cols() == b.cols(), "matmul_nt: inner dimension mismatch");
  Matrix<T> out(a.rows(), b.rows());
  out.map().noalias() = a.map() * b.map().transpose();
  detail::count_matmul(a.rows(), a.cols(), b.rows());
  return out;
}

template <typename T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> out(a.cols(), a.rows());
  out.map() = a.map().transpose();  // data movement only, not counted
  return out;
}

template <typename T>
void scale_inplace(Matrix<T>& a, T s) {
  a.map() *= s;
  detail::count_muls(static_cast<std::uint64_t>(a.size()));
}

template <typename T>
void add_inplace(Matrix<T>& a, const Matrix<T>& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(),
                  "add_inplace: shape mismatch");
  a.map() += b.map();
  detail::count_adds(static_cast<std::uint64_t>(a.size()));
}

template <typename T>
void sub_inplace(Matrix<T>& a, const Matrix<T>& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(),
                  "sub_inplace: shape mismatch");
  a.map() -= b.map();
  detail::count_adds(static_cast<std::uint64_t>(a.size()));
}

template <typename T>
void hadamard_inplace(Matrix<T>& a, const Matrix<T>& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(),
                  "hadamard_inplace: shape mismatch");
  a.map().array() *= b.map().array();
  detail::count_muls(static_cast<std::uint64_t>(a.size()));
}

// Column-wise l2 norms (norm of each column across rows).
template <typename T>
std::vector<T> col_l2_norms(const Matrix<T>& a) {
  std::vector<T> norms(static_cast<std::size_t>(a.cols()), T(0));
  for (Index j = 0; j < a.cols(); ++j) {
    T acc = T(0);
    for (Index i = 0; i < a.rows(); ++i) {
      const T v = a(i, j);
      acc += v * v;
    }
    norms[static_cast<std::size_t>(j)] = std::sqrt(acc);
  }
  detail::count_muls(static_cast<std::uint64_t>(a.size()));
  detail::count_adds(static_cast<std::uint64_t>(a.size()));
  detail::count_sqrts(static_cast<std::uint64_t>(a.cols()));
  return norms;
}

// Element-wise reciprocals of a vector.
template <typename T>
std::vector<T> reciprocals(const std::vector<T>& v) {
  std::vector<T> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = T(1) / v[i];
  detail::count_divs(v.size());
  return out;
}

// Scales row i of a by s[i].
template <typename T>
void scale_rows_inplace(Matrix<T>& a, const std::vector<T>& s) {
  detail::require(static_cast<Index>(s.size()) == a.rows(),
                  "scale_rows_inplace: size mismatch");
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) *= s[static_cast<std::size_t>(i)];
  detail::count_muls(static_cast<std::uint64_t>(a.size()));
}

// Scales column j of a by s[j].
template <typename T>
void scale_columns_inplace(Matrix<T>& a, const std::vector<T>& s) {
  detail::require(static_cast<Index>(s.size()) == a.cols(),
                  "scale_columns_inplace: size mismatch");
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) *= s[static_cast<std::size_t>(j)];
  detail::count_muls(static_cast<std::uint64_t>(a.size()));
}

template <typename T>
std::vector<T> col_sums(const Matrix<T>& a) {
  std::vector<T> out(static_cast<std::size_t>(a.cols()), T(0));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out[static_cast<std::size_t>(j)] += a(i, j);
  detail::count_adds(static_cast<std::uint64_t>(a.size()));
  return out;
}

template <typename T>
std::vector<T> row_sums(const Matrix<T>& a) {
  std::vector<T> out(static_cast<std::size_t>(a.rows()), T(0));
  for (Index i = 0; i < a.rows(); ++i) {
    T acc = T(0);
    for (Index j = 0; j < a.cols(); ++j) acc += a(i, j);
    out[static_cast<std::size_t>(i)] = acc;
  }
  detail::count_adds(static_cast<std::uint64_t>(a.size()));
  return out;
}

// Adds v[i] to every entry of row i.
template <typename T>
void add_row_broadcast_inplace(Matrix<T>& a, const std::vector<T>& v) {
  detail::require(static_cast<Index>(v.size()) == a.rows(),
                  "add_row_broadcast_inplace: size mismatch");
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) += v[static_cast<std::size_t>(i)];
  detail::count_adds(static_cast<std::uint64_t>(a.size()));
}

// Adds v[j] to every entry of column j.
template <typename T>
void add_col_broadcast_inplace(Matrix<T>& a, const std::vector<T>& v) {
  detail::require(static_cast<Index>(v.size()) == a.cols(),
                  "add_col_broadcast_inplace: size mismatch");
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) += v[static_cast<std::size_t>(j)];
  detail::count_adds(static_cast<std::uint64_t>(a.size()));
}

// Column-wise softmax in place, with the usual max-shift for stability.
// Per entry: one subtract, one exp, one add into the column sum, one divide.
// The max scan is a comparison pass and is not counted.
template <typename T>
void softmax_columns_inplace(Matrix<T>& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    T mx = a(0, j);
    for (Index i = 1; i < a.rows(); ++i) mx = std::max(mx, a(i, j));
    T sum = T(0);
    for (Index i = 0; i < a.rows(); ++i) {
      const T e = std::exp(a(i, j) - mx);
      a(i, j) = e;
      sum += e;
    }
    for (Index i = 0; i < a.rows(); ++i) a(i, j) /= sum;
  }
  const auto n = static_cast<std::uint64_t>(a.size());
  detail::count_adds(2 * n);
  detail::count_exps(n);
  detail::count_divs(n);
}

template <typename T>
T frobenius_norm(const Matrix<T>& a) {
  return std::sqrt(a.map().squaredNorm());
}

template <typename T>
T max_abs(const Matrix<T>& a) {
  if (a.size() == 0) return T(0);
  return a.map().cwiseAbs().maxCoeff();
}

// || a - b ||_F / || b ||_F, with an absolute fallback when b ~ 0.
template <typename T>
T relative_error(const Matrix<T>& a, const Matrix<T>& b) {
  detail::require(a.rows() == b.rows() && a.cols() == b.cols(),
                  "relative_error: shape mismatch");
  const T denom = frobenius_norm(b);
  T num = T(0);
  {
    Matrix<T> d = a;
    d.map() -= b.map();
    num = frobenius_norm(d);
  }
  if (denom == T(0)) return num;
  return num / denom;
}

}  // namespace fsa
