/*
 * Copyright 2026 The orthofactor Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ORTHOFACTOR_MATRIX_HPP_
#define ORTHOFACTOR_MATRIX_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "orthofactor/error.hpp"
#include "orthofactor/ring.hpp"

namespace orthofactor {

template <RingElement R>
using Vec = std::vector<R>;

/// Dense row-major matrix over one ring. Square matrices carry group
/// elements and Gram matrices; rectangular ones carry the linear maps
/// alpha: Q -> P of the DSER generators.
template <RingElement R>
class Matrix {
 public:
  using Context = typename R::Context;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const Context& ctx)
      : rows_(rows), cols_(cols), ctx_(ctx), data_(rows * cols, R::zero(ctx)) {}

  static Matrix zero(std::size_t rows, std::size_t cols, const Context& ctx) {
    return Matrix(rows, cols, ctx);
  }
  static Matrix identity(std::size_t n, const Context& ctx) {
    Matrix m(n, n, ctx);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = R::one(ctx);
    return m;
  }
  /// Builds from nested rows; all entries must share one context.
  static Matrix from_rows(const std::vector<std::vector<R>>& rows, const Context& ctx) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows[0].size();
    Matrix m(r, c, ctx);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) raise(ErrorCode::kDimensionMismatch, "ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) {
        if (!(rows[i][j].context() == ctx)) raise(ErrorCode::kDescriptorMismatch, "matrix entry");
        m(i, j) = rows[i][j];
      }
    }
    return m;
  }
  static Matrix column(const Vec<R>& v, const Context& ctx) {
    Matrix m(v.size(), 1, ctx);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const Context& context() const { return ctx_; }

  R& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const R& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_, ctx_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Vec<R> column_vector(std::size_t j) const {
    Vec<R> v;
    v.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
  }
  Vec<R> row_vector(std::size_t i) const {
    return Vec<R>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  bool is_identity() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const R& e = (*this)(i, j);
        if (i == j ? !(e == R::one(ctx_)) : !e.is_zero()) return false;
      }
    return true;
  }
  bool is_zero() const {
    for (const R& e : data_)
      if (!e.is_zero()) return false;
    return true;
  }
  bool is_symmetric() const { return is_square() && *this == transpose(); }

  const std::vector<R>& data() const { return data_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.ctx_ == b.ctx_ && a.data_ == b.data_;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    same_shape(a, b);
    Matrix s = a;
    for (std::size_t k = 0; k < s.data_.size(); ++k) s.data_[k] = s.data_[k] + b.data_[k];
    return s;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    same_shape(a, b);
    Matrix s = a;
    for (std::size_t k = 0; k < s.data_.size(); ++k) s.data_[k] = s.data_[k] - b.data_[k];
    return s;
  }
  friend Matrix operator-(const Matrix& a) {
    Matrix s = a;
    for (R& e : s.data_) e = -e;
    return s;
  }
  friend Matrix operator*(const R& c, const Matrix& a) {
    Matrix s = a;
    for (R& e : s.data_) e = c * e;
    return s;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      raise(ErrorCode::kDimensionMismatch,
            "product of " + shape(a) + " and " + shape(b));
    }
    if (!(a.ctx_ == b.ctx_)) raise(ErrorCode::kDescriptorMismatch, "matrix product rings differ");
    Matrix p(a.rows_, b.cols_, a.ctx_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const R& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) p(i, j) = p(i, j) + aik * b(k, j);
      }
    }
    return p;
  }

  static std::string shape(const Matrix& m) {
    return std::to_string(m.rows_) + "x" + std::to_string(m.cols_);
  }

 private:
  static void same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
      raise(ErrorCode::kDimensionMismatch, shape(a) + " vs " + shape(b));
    }
    if (!(a.ctx_ == b.ctx_)) raise(ErrorCode::kDescriptorMismatch, "matrix rings differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Context ctx_{};
  std::vector<R> data_;
};

template <RingElement R>
Matrix<R> mat_mul(const Matrix<R>& a, const Matrix<R>& b) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    raise(ErrorCode::kDimensionMismatch,
          "mat_mul needs equal square shapes, got " + Matrix<R>::shape(a) + " and " +
              Matrix<R>::shape(b));
  }
  return a * b;
}

template <RingElement R>
Vec<R> mat_vec(const Matrix<R>& m, const Vec<R>& v) {
  if (m.cols() != v.size()) raise(ErrorCode::kDimensionMismatch, "matrix-vector shape");
  Vec<R> out(m.rows(), R::zero(m.context()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] = out[i] + m(i, j) * v[j];
  return out;
}

template <RingElement R>
Vec<R> add(const Vec<R>& a, const Vec<R>& b) {
  if (a.size() != b.size()) raise(ErrorCode::kDimensionMismatch, "vector lengths");
  Vec<R> out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = out[i] + b[i];
  return out;
}

template <RingElement R>
Vec<R> scale(const R& c, const Vec<R>& a) {
  Vec<R> out = a;
  for (R& e : out) e = c * e;
  return out;
}

template <RingElement R>
bool is_zero_vector(const Vec<R>& v) {
  for (const R& e : v)
    if (!e.is_zero()) return false;
  return true;
}

/// Coefficients of det(tI - A), leading coefficient first, computed by the
/// division-free Samuelson-Berkowitz recursion. Valid over any commutative
/// ring.
template <RingElement R>
std::vector<R> characteristic_polynomial(const Matrix<R>& a) {
  if (!a.is_square()) raise(ErrorCode::kDimensionMismatch, "charpoly of non-square matrix");
  const auto& ctx = a.context();
  const std::size_t n = a.rows();
  if (n == 0) return {R::one(ctx)};
  // Work on trailing principal submatrices A[k..n, k..n], from the smallest up.
  std::vector<R> poly = {R::one(ctx), -a(n - 1, n - 1)};
  for (std::size_t k = n - 1; k-- > 0;) {
    const std::size_t m = n - k - 1;  // size of the trailing block A1
    // Toeplitz column: 1, -a_kk, -R C, -R A1 C, ..., -R A1^{m-1} C.
    std::vector<R> col;
    col.reserve(m + 2);
    col.push_back(R::one(ctx));
    col.push_back(-a(k, k));
    Vec<R> power(m, R::zero(ctx));  // A1^t C
    for (std::size_t i = 0; i < m; ++i) power[i] = a(k + 1 + i, k);
    for (std::size_t t = 0; t < m; ++t) {
      R rc = R::zero(ctx);
      for (std::size_t i = 0; i < m; ++i) rc = rc + a(k, k + 1 + i) * power[i];
      col.push_back(-rc);
      if (t + 1 < m) {
        Vec<R> next(m, R::zero(ctx));
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j)
            next[i] = next[i] + a(k + 1 + i, k + 1 + j) * power[j];
        power = std::move(next);
      }
    }
    // New poly (length m+2) = T * old poly (length m+1), T lower triangular Toeplitz.
    std::vector<R> next(m + 2, R::zero(ctx));
    for (std::size_t i = 0; i < m + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, m); ++j) next[i] = next[i] + col[i - j] * poly[j];
    poly = std::move(next);
  }
  return poly;
}

template <RingElement R>
R determinant(const Matrix<R>& a) {
  std::vector<R> p = characteristic_polynomial(a);
  const R& c = p.back();  // (-1)^n det(A)
  return a.rows() % 2 == 0 ? c : -c;
}

/// adj(A) from Cayley-Hamilton: adj(A) = (-1)^{n+1} (A^{n-1} + c1 A^{n-2} + ... + c_{n-1} I).
template <RingElement R>
Matrix<R> adjugate(const Matrix<R>& a) {
  const auto& ctx = a.context();
  const std::size_t n = a.rows();
  std::vector<R> p = characteristic_polynomial(a);
  if (n == 0) return a;
  Matrix<R> acc = Matrix<R>::identity(n, ctx);  // Horner: ((I)A + c1 I)A + ...
  for (std::size_t k = 1; k < n; ++k) {
    acc = acc * a;
    for (std::size_t i = 0; i < n; ++i) acc(i, i) = acc(i, i) + p[k];
  }
  return n % 2 == 1 ? acc : -acc;
}

template <RingElement R>
Matrix<R> mat_inverse(const Matrix<R>& a) {
  if (!a.is_square()) raise(ErrorCode::kDimensionMismatch, "inverse of non-square matrix");
  R det = determinant(a);
  if (!det.is_unit()) {
    raise(ErrorCode::kNonUnitDeterminant, "determinant " + det.to_string() + " is not a unit");
  }
  return det.inverse() * adjugate(a);
}

/// Entry-wise image under a ring homomorphism.
template <RingElement S, RingElement R, class F>
Matrix<S> map_entries(const Matrix<R>& m, const typename S::Context& ctx, F&& f) {
  Matrix<S> out(m.rows(), m.cols(), ctx);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = f(m(i, j));
  return out;
}

template <RingElement B>
B poly_eval(const Poly<B>& p, const B& t) {
  return p.eval(t);
}

template <RingElement B>
Matrix<B> poly_eval(const Matrix<Poly<B>>& m, const B& t) {
  if (!(m.context().base == t.context())) raise(ErrorCode::kDescriptorMismatch, "poly_eval base");
  return map_entries<B>(m, t.context(), [&](const Poly<B>& p) { return p.eval(t); });
}

/// Constant embedding R -> R[X].
template <RingElement B>
Matrix<Poly<B>> lift_constant(const Matrix<B>& m, char variable = 'X') {
  typename Poly<B>::Context ctx{m.context(), variable};
  return map_entries<Poly<B>>(m, ctx, [&](const B& b) { return Poly<B>::constant(b, ctx); });
}

/// Elementary matrix I + value e_{i,j}, 0-based (i, j) with i != j.
template <RingElement R>
Matrix<R> elementary_unit(std::size_t n, std::size_t i, std::size_t j, const R& value) {
  if (i >= n || j >= n || i == j) raise(ErrorCode::kBadIndices, "elementary matrix needs distinct i, j < n");
  Matrix<R> m = Matrix<R>::identity(n, value.context());
  m(i, j) = value;
  return m;
}

}  // namespace orthofactor

#endif  // ORTHOFACTOR_MATRIX_HPP_
