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

// Quadratic spaces over rings with 2 invertible. The quadratic form is
// always q(x) = <x, x> / 2, so the Gram entry 2 of the odd standard form
// gives q(z) = z^2.

#ifndef ORTHOFACTOR_QUADSPACE_HPP_
#define ORTHOFACTOR_QUADSPACE_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "orthofactor/error.hpp"
#include "orthofactor/matrix.hpp"
#include "orthofactor/ring.hpp"

namespace orthofactor {

/// phi~_n: psi~_r for n = 2r, (2) _|_ psi~_r for n = 2r + 1, where psi~_r
/// pairs coordinates (2i-1, 2i).
template <RingElement R>
Matrix<R> standard_gram(std::size_t n, const typename R::Context& ctx) {
  if (n == 0) raise(ErrorCode::kDimensionMismatch, "standard form needs n >= 1");
  Matrix<R> g(n, n, ctx);
  std::size_t offset = 0;
  if (n % 2 == 1) {
    g(0, 0) = R::from_int(ctx, 2);
    offset = 1;
  }
  for (std::size_t k = offset; k + 1 < n; k += 2) {
    g(k, k + 1) = R::one(ctx);
    g(k + 1, k) = R::one(ctx);
  }
  return g;
}

template <RingElement R>
class QuadraticSpace {
 public:
  using Context = typename R::Context;

  QuadraticSpace() = default;
  explicit QuadraticSpace(Matrix<R> gram) : gram_(std::move(gram)) {
    if (!gram_.is_square() || gram_.rows() == 0) {
      raise(ErrorCode::kDimensionMismatch, "Gram matrix must be square of positive size");
    }
    if (!gram_.is_symmetric()) raise(ErrorCode::kNotSymmetric, "Gram matrix is not symmetric");
    R det = determinant(gram_);
    if (!det.is_unit()) {
      raise(ErrorCode::kNonUnitDeterminant, "degenerate form: det = " + det.to_string());
    }
  }

  static QuadraticSpace standard(std::size_t n, const Context& ctx) {
    return QuadraticSpace(standard_gram<R>(n, ctx));
  }

  std::size_t rank() const { return gram_.rows(); }
  const Matrix<R>& gram() const { return gram_; }
  Context context() const { return gram_.context(); }

  R bilinear(const Vec<R>& x, const Vec<R>& y) const {
    if (x.size() != rank() || y.size() != rank()) {
      raise(ErrorCode::kDimensionMismatch, "vector length does not match space rank");
    }
    R acc = R::zero(context());
    for (std::size_t i = 0; i < rank(); ++i) {
      if (x[i].is_zero()) continue;
      for (std::size_t j = 0; j < rank(); ++j) acc = acc + x[i] * gram_(i, j) * y[j];
    }
    return acc;
  }
  R quad(const Vec<R>& x) const { return bilinear(x, x).halve(); }

  friend bool operator==(const QuadraticSpace& a, const QuadraticSpace& b) {
    return a.gram_ == b.gram_;
  }

 private:
  Matrix<R> gram_;
};

enum class BasisOrder { kBlock, kInterleaved };

inline const char* basis_order_name(BasisOrder o) {
  return o == BasisOrder::kBlock ? "block" : "interleaved";
}

/// M = Q _|_ H(R)^m. Internally the block order is (z_1..z_n | x_1..x_m |
/// f_1..f_m); the interleaved order is (z_1..z_n | x_1 f_1 | ... | x_m f_m).
/// All matrices and vectors attached to a space are expressed in its
/// declared `order()`.
template <RingElement R>
class AmbientSpace {
 public:
  using Context = typename R::Context;

  AmbientSpace() = default;
  AmbientSpace(QuadraticSpace<R> q, std::size_t m, BasisOrder order = BasisOrder::kInterleaved)
      : q_(std::move(q)), m_(m), order_(order) {
    const std::size_t n = q_.rank();
    to_order_.resize(n + 2 * m_);
    for (std::size_t k = 0; k < n; ++k) to_order_[k] = k;
    for (std::size_t i = 0; i < m_; ++i) {
      to_order_[n + i] = order_ == BasisOrder::kBlock ? n + i : n + 2 * i;
      to_order_[n + m_ + i] = order_ == BasisOrder::kBlock ? n + m_ + i : n + 2 * i + 1;
    }
    Matrix<R> block(dim(), dim(), q_.context());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) block(i, j) = q_.gram()(i, j);
    for (std::size_t i = 0; i < m_; ++i) {
      block(n + i, n + m_ + i) = R::one(q_.context());
      block(n + m_ + i, n + i) = R::one(q_.context());
    }
    gram_ = from_block(block);
    total_ = QuadraticSpace<R>(gram_);
  }

  /// Space whose total Gram matrix is phi~_dim in the interleaved order:
  /// odd dim -> Q = (2), m = (dim-1)/2; even dim >= 4 -> Q = phi~_{dim-2},
  /// m = 1; dim 2 -> Q = psi~_1, m = 0.
  static AmbientSpace standard(std::size_t dim, const Context& ctx) {
    if (dim == 0) raise(ErrorCode::kDimensionMismatch, "dimension must be positive");
    if (dim % 2 == 1) {
      return AmbientSpace(QuadraticSpace<R>::standard(1, ctx), (dim - 1) / 2);
    }
    if (dim == 2) return AmbientSpace(QuadraticSpace<R>::standard(2, ctx), 0);
    return AmbientSpace(QuadraticSpace<R>::standard(dim - 2, ctx), 1);
  }

  /// A bare quadratic space with no distinguished hyperbolic summand.
  static AmbientSpace plain(const Matrix<R>& gram) {
    return AmbientSpace(QuadraticSpace<R>(gram), 0);
  }

  std::size_t dim() const { return q_.rank() + 2 * m_; }
  std::size_t q_rank() const { return q_.rank(); }
  std::size_t hyperbolic_rank() const { return m_; }
  BasisOrder order() const { return order_; }
  const QuadraticSpace<R>& q_space() const { return q_; }
  const QuadraticSpace<R>& total() const { return total_; }
  const Matrix<R>& gram() const { return gram_; }
  Context context() const { return q_.context(); }

  /// 0-based positions in the declared order.
  std::size_t z_index(std::size_t k) const { return to_order_[k]; }
  std::size_t x_index(std::size_t i) const { return to_order_[q_.rank() + i]; }
  std::size_t f_index(std::size_t i) const { return to_order_[q_.rank() + m_ + i]; }

  bool is_standard() const { return gram_ == standard_gram<R>(dim(), context()); }

  R bilinear(const Vec<R>& x, const Vec<R>& y) const { return total_.bilinear(x, y); }
  R quad(const Vec<R>& x) const { return total_.quad(x); }

  Matrix<R> from_block(const Matrix<R>& block) const {
    check_dim(block);
    Matrix<R> out(dim(), dim(), block.context());
    for (std::size_t a = 0; a < dim(); ++a)
      for (std::size_t b = 0; b < dim(); ++b) out(to_order_[a], to_order_[b]) = block(a, b);
    return out;
  }
  Matrix<R> to_block(const Matrix<R>& ordered) const {
    check_dim(ordered);
    Matrix<R> out(dim(), dim(), ordered.context());
    for (std::size_t a = 0; a < dim(); ++a)
      for (std::size_t b = 0; b < dim(); ++b) out(a, b) = ordered(to_order_[a], to_order_[b]);
    return out;
  }
  Vec<R> vector_from_block(const Vec<R>& v) const {
    Vec<R> out(v.size(), R::zero(context()));
    for (std::size_t a = 0; a < v.size(); ++a) out[to_order_[a]] = v[a];
    return out;
  }
  Vec<R> vector_to_block(const Vec<R>& v) const {
    Vec<R> out(v.size(), R::zero(context()));
    for (std::size_t a = 0; a < v.size(); ++a) out[a] = v[to_order_[a]];
    return out;
  }

  AmbientSpace with_order(BasisOrder o) const { return AmbientSpace(q_, m_, o); }

  friend bool operator==(const AmbientSpace& a, const AmbientSpace& b) {
    return a.q_ == b.q_ && a.m_ == b.m_ && a.order_ == b.order_;
  }

 private:
  void check_dim(const Matrix<R>& m) const {
    if (m.rows() != dim() || m.cols() != dim()) {
      raise(ErrorCode::kDimensionMismatch, "matrix does not match ambient dimension");
    }
  }

  QuadraticSpace<R> q_;
  std::size_t m_ = 0;
  BasisOrder order_ = BasisOrder::kInterleaved;
  std::vector<std::size_t> to_order_;
  Matrix<R> gram_;
  QuadraticSpace<R> total_;
};

template <RingElement R>
bool is_orthogonal(const Matrix<R>& t, const Matrix<R>& gram) {
  if (!t.is_square() || t.rows() != gram.rows()) {
    raise(ErrorCode::kDimensionMismatch,
          "transformation " + Matrix<R>::shape(t) + " vs form " + Matrix<R>::shape(gram));
  }
  return t.transpose() * gram * t == gram;
}

template <RingElement R>
bool is_orthogonal(const Matrix<R>& t, const QuadraticSpace<R>& space) {
  return is_orthogonal(t, space.gram());
}

template <RingElement R>
bool is_orthogonal(const Matrix<R>& t, const AmbientSpace<R>& space) {
  return is_orthogonal(t, space.gram());
}

/// Coordinates generate the unit ideal. Over R[X] this is the content test:
/// all coefficients of all coordinates generate the unit ideal of the base.
template <RingElement R>
bool is_unimodular(const Vec<R>& u) {
  if constexpr (std::is_same_v<R, Rational>) {
    return !is_zero_vector(u);
  } else if constexpr (std::is_same_v<R, ModInt>) {
    if (u.empty()) return false;
    std::int64_t g = u[0].modulus();
    for (const ModInt& c : u) g = std::gcd(g, c.value());
    return g == 1;
  } else {
    using B = typename R::Base;
    Vec<B> coeffs;
    for (const R& p : u)
      for (const B& c : p.coefficients()) coeffs.push_back(c);
    if (coeffs.empty()) return false;
    return is_unimodular(coeffs);
  }
}

template <RingElement R>
struct TransvectionData {
  Vec<R> u;
  Vec<R> v;
  R r;  // q(v)
};

/// Validates the data of sigma_{u,v}: q(u) = 0, <u,v> = 0, u unimodular.
template <RingElement R>
TransvectionData<R> check_transvection_data(const Vec<R>& u, const Vec<R>& v,
                                            const QuadraticSpace<R>& space) {
  if (u.size() != space.rank() || v.size() != space.rank()) {
    raise(ErrorCode::kDimensionMismatch, "transvection vectors do not match space rank");
  }
  if (!is_unimodular(u)) raise(ErrorCode::kNotUnimodular, "u is not unimodular");
  if (!space.quad(u).is_zero()) raise(ErrorCode::kNotIsotropic, "q(u) != 0");
  if (!space.bilinear(u, v).is_zero()) raise(ErrorCode::kNotOrthogonalPair, "<u,v> != 0");
  return {u, v, space.quad(v)};
}

template <RingElement R>
TransvectionData<R> check_transvection_data(const Vec<R>& u, const Vec<R>& v,
                                            const AmbientSpace<R>& space) {
  return check_transvection_data(u, v, space.total());
}

namespace detail {

/// Some y with a . y = 1, or NotUnimodular.
template <RingElement R>
Vec<R> solve_unit_functional(const Vec<R>& a, const typename R::Context& ctx) {
  Vec<R> y(a.size(), R::zero(ctx));
  if constexpr (std::is_same_v<R, Rational>) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (!a[k].is_zero()) {
        y[k] = a[k].inverse();
        return y;
      }
    }
    raise(ErrorCode::kNotUnimodular, "functional is zero");
  } else if constexpr (std::is_same_v<R, ModInt>) {
    // Iterated Bezout over the integers: g = sum coef_k a_k, then fold in N.
    const std::int64_t n = ctx.modulus;
    std::vector<std::int64_t> coef(a.size(), 0);
    std::int64_t g = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      std::int64_t s = 0, t = 0;
      std::int64_t ng = ext_gcd(g, a[k].value(), s, t);
      for (std::size_t j = 0; j < k; ++j) coef[j] = mul_mod(floor_mod(coef[j], n), floor_mod(s, n), n);
      coef[k] = floor_mod(t, n);
      g = ng;
    }
    std::int64_t s = 0, t = 0;
    if (ext_gcd(g, n, s, t) != 1) raise(ErrorCode::kNotUnimodular, "functional is not unimodular");
    for (std::size_t k = 0; k < a.size(); ++k) y[k] = ModInt(mul_mod(coef[k], floor_mod(s, n), n), ctx);
    return y;
  } else {
    raise(ErrorCode::kUnsupportedRing, "hyperbolic completion over polynomial rings");
  }
}

/// Kernel basis of m over a field, one vector per free column in increasing
/// column order.
template <RingElement R>
std::vector<Vec<R>> kernel_basis(Matrix<R> m) {
  const auto ctx = m.context();
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m(p, c).is_zero()) ++p;
    if (p == rows) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(m(r, j), m(p, j));
    R inv = m(r, c).inverse();
    for (std::size_t j = 0; j < cols; ++j) m(r, j) = inv * m(r, j);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      R f = m(i, c);
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = m(i, j) - f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<Vec<R>> basis;
  std::size_t pi = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    if (pi < pivots.size() && pivots[pi] == c) {
      ++pi;
      continue;
    }
    Vec<R> v(cols, R::zero(ctx));
    v[c] = R::one(ctx);
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -m(k, c);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <RingElement R>
Vec<R> combine(const std::vector<Vec<R>>& basis, const Vec<R>& coeffs, std::size_t dim,
               const typename R::Context& ctx) {
  Vec<R> out(dim, R::zero(ctx));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (coeffs[j].is_zero()) continue;
    for (std::size_t i = 0; i < dim; ++i) out[i] = out[i] + coeffs[j] * basis[j][i];
  }
  return out;
}

/// Basis of { x in span(basis) : <g, x> = 0 for every g in functionals }.
template <RingElement R>
std::vector<Vec<R>> restrict_orthogonal(const std::vector<Vec<R>>& basis,
                                        const std::vector<Vec<R>>& functionals,
                                        const QuadraticSpace<R>& space) {
  const auto ctx = space.context();
  Matrix<R> m(functionals.size(), basis.size(), ctx);
  for (std::size_t i = 0; i < functionals.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) m(i, j) = space.bilinear(functionals[i], basis[j]);
  std::vector<Vec<R>> out;
  for (const Vec<R>& c : kernel_basis(m)) out.push_back(combine(basis, c, space.rank(), ctx));
  return out;
}

/// Smallest coefficient vector c != 0 over Z/p with pred(sum c_j b_j), in
/// the order that counts c_0 fastest. A vector already equal to a single
/// leading basis element is therefore found first.
template <class Pred>
Vec<ModInt> search_span(const std::vector<Vec<ModInt>>& basis, const QuadraticSpace<ModInt>& space,
                        Pred&& pred) {
  const auto ctx = space.context();
  const std::int64_t p = ctx.modulus;
  const std::size_t k = basis.size();
  std::vector<std::int64_t> digits(k, 0);
  Vec<ModInt> coeffs(k, ModInt::zero(ctx));
  while (true) {
    std::size_t pos = 0;
    while (pos < k && digits[pos] == p - 1) {
      digits[pos] = 0;
      coeffs[pos] = ModInt::zero(ctx);
      ++pos;
    }
    if (pos == k) break;
    ++digits[pos];
    coeffs[pos] = ModInt(digits[pos], ctx);
    Vec<ModInt> x = combine(basis, coeffs, space.rank(), ctx);
    if (pred(x)) return x;
  }
  raise(ErrorCode::kSearchExhausted, "no vector in the subspace satisfies the search predicate");
}

}  // namespace detail

/// w with <u,w> = 1 and q(w) = 0: solve (u^T G) y = 1, then w = y - q(y) u.
template <RingElement R>
Vec<R> complete_hyperbolic_pair(const Vec<R>& u, const QuadraticSpace<R>& space) {
  if (u.size() != space.rank()) raise(ErrorCode::kDimensionMismatch, "u does not match space");
  if (!space.quad(u).is_zero()) raise(ErrorCode::kNotIsotropic, "q(u) != 0");
  if (!is_unimodular(u)) raise(ErrorCode::kNotUnimodular, "u is not unimodular");
  const auto ctx = space.context();
  Vec<R> a = mat_vec(space.gram(), u);
  Vec<R> y = detail::solve_unit_functional(a, ctx);
  Vec<R> w = add(y, scale(-space.quad(y), u));
  if (!(space.bilinear(u, w) == R::one(ctx)) || !space.quad(w).is_zero()) {
    raise(ErrorCode::kNoSolution, "hyperbolic completion postcondition failed");
  }
  return w;
}

template <RingElement R>
Vec<R> complete_hyperbolic_pair(const Vec<R>& u, const AmbientSpace<R>& space) {
  return complete_hyperbolic_pair(u, space.total());
}

/// Largest prime accepted by the exhaustive frame search.
inline constexpr std::int64_t kMaxWittPrime = 13;

/// Orthogonal change of basis eps whose columns are (z', u, w, x_1, y_1,
/// ...), so that eps^T phi~ eps = phi~ for the odd standard form phi~.
/// z' has q(z') = 1; each (x_i, y_i) is a hyperbolic pair found by search.
inline Matrix<ModInt> witt_frame(const Vec<ModInt>& u, const Vec<ModInt>& w,
                                 const AmbientSpace<ModInt>& space) {
  const auto ctx = space.context();
  if (!ctx.is_field() || ctx.modulus > kMaxWittPrime) {
    raise(ErrorCode::kUnsupportedRing,
          "Witt frame search runs over Z/p with p <= 13, got Z/" + std::to_string(ctx.modulus));
  }
  const std::size_t dim = space.dim();
  if (dim % 2 == 0 || dim < 3 || !space.is_standard()) {
    raise(ErrorCode::kNotStandardForm, "Witt frame needs the odd standard form");
  }
  const QuadraticSpace<ModInt>& q = space.total();
  if (u.size() != dim || w.size() != dim) raise(ErrorCode::kDimensionMismatch, "frame vectors");
  if (!q.quad(u).is_zero() || !q.quad(w).is_zero() || !(q.bilinear(u, w) == ModInt::one(ctx))) {
    raise(ErrorCode::kNotIsotropic, "(u, w) is not a hyperbolic pair");
  }
  std::vector<Vec<ModInt>> standard;
  for (std::size_t i = 0; i < dim; ++i) {
    Vec<ModInt> e(dim, ModInt::zero(ctx));
    e[i] = ModInt::one(ctx);
    standard.push_back(std::move(e));
  }
  std::vector<Vec<ModInt>> complement = detail::restrict_orthogonal(standard, {u, w}, q);

  const ModInt one = ModInt::one(ctx);
  Vec<ModInt> z = detail::search_span(complement, q, [&](const Vec<ModInt>& x) {
    return q.quad(x) == one;
  });
  complement = detail::restrict_orthogonal(complement, {z}, q);

  std::vector<Vec<ModInt>> columns = {z, u, w};
  while (!complement.empty()) {
    Vec<ModInt> x = detail::search_span(complement, q, [&](const Vec<ModInt>& c) {
      return q.quad(c).is_zero();
    });
    Vec<ModInt> y0;
    for (const Vec<ModInt>& b : complement) {
      ModInt pairing = q.bilinear(x, b);
      if (!pairing.is_zero()) {
        y0 = scale(pairing.inverse(), b);
        break;
      }
    }
    if (y0.empty()) raise(ErrorCode::kSearchExhausted, "degenerate complement in Witt frame");
    Vec<ModInt> y = add(y0, scale(-q.quad(y0), x));
    columns.push_back(x);
    columns.push_back(y);
    complement = detail::restrict_orthogonal(complement, {x, y}, q);
  }
  Matrix<ModInt> eps(dim, dim, ctx);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < dim; ++i) eps(i, j) = columns[j][i];
  if (!is_orthogonal(eps, q)) {
    raise(ErrorCode::kInternalInconsistency, "Witt frame is not orthogonal");
  }
  return eps;
}

}  // namespace orthofactor

#endif  // ORTHOFACTOR_QUADSPACE_HPP_
