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

// Orthogonal generator families and words of generators. All index
// arguments are 1-based, matching e_{i,j} notation. Every token is checked
// for orthogonality against its space when it is built.

#ifndef ORTHOFACTOR_GENERATORS_HPP_
#define ORTHOFACTOR_GENERATORS_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "orthofactor/error.hpp"
#include "orthofactor/matrix.hpp"
#include "orthofactor/quadspace.hpp"
#include "orthofactor/ring.hpp"

namespace orthofactor {

enum class Family {
  kOe,
  kF1,
  kF2,
  kF3,
  kF4,
  kF5,
  kEAlpha,
  kEBetaStar,
  kE1W,
  kE2W,
  kSigma,
  kGLBlock,
  kAltBlockI,
  kAltBlockII,
  kConj,
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::kOe: return "oe";
    case Family::kF1: return "F1";
    case Family::kF2: return "F2";
    case Family::kF3: return "F3";
    case Family::kF4: return "F4";
    case Family::kF5: return "F5";
    case Family::kEAlpha: return "E_alpha";
    case Family::kEBetaStar: return "E_beta_star";
    case Family::kE1W: return "E1w";
    case Family::kE2W: return "E2w";
    case Family::kSigma: return "sigma";
    case Family::kGLBlock: return "gl_block";
    case Family::kAltBlockI: return "alt_block_I";
    case Family::kAltBlockII: return "alt_block_II";
    case Family::kConj: return "conj";
  }
  return "unknown";
}

inline Family fasel_family(int kind) {
  switch (kind) {
    case 1: return Family::kF1;
    case 2: return Family::kF2;
    case 3: return Family::kF3;
    case 4: return Family::kF4;
    case 5: return Family::kF5;
  }
  raise(ErrorCode::kBadIndices, "Fasel kind must be 1..5, got " + std::to_string(kind));
}

inline int fasel_kind(Family f) {
  switch (f) {
    case Family::kF1: return 1;
    case Family::kF2: return 2;
    case Family::kF3: return 3;
    case Family::kF4: return 4;
    case Family::kF5: return 5;
    default: return 0;
  }
}

inline bool is_fasel(Family f) { return fasel_kind(f) != 0; }

enum class AltKind { kI, kII };

// ---------------------------------------------------------------------------
// Raw matrices.

/// sigma on indices of phi~_n: pairs (2i-1, 2i) for even n; fixes 1 and
/// pairs (2i, 2i+1) for odd n.
inline std::size_t pair_partner(std::size_t n, std::size_t i) {
  if (n % 2 == 0) return i % 2 == 1 ? i + 1 : i - 1;
  if (i == 1) return 1;
  return i % 2 == 0 ? i + 1 : i - 1;
}

inline void check_oe_indices(std::size_t n, std::size_t i, std::size_t j) {
  const std::size_t lo = n % 2 == 0 ? 1 : 2;
  if (i < lo || j < lo || i > n || j > n || i == j || i == pair_partner(n, j)) {
    raise(ErrorCode::kBadIndices, "oe_{" + std::to_string(i) + "," + std::to_string(j) +
                                      "} invalid at size " + std::to_string(n));
  }
}

/// I + z e_{i,j} - z e_{sigma(j), sigma(i)}.
template <RingElement R>
Matrix<R> oe_matrix(std::size_t i, std::size_t j, const R& z, std::size_t n) {
  check_oe_indices(n, i, j);
  Matrix<R> m = Matrix<R>::identity(n, z.context());
  m(i - 1, j - 1) = m(i - 1, j - 1) + z;
  const std::size_t a = pair_partner(n, j), b = pair_partner(n, i);
  m(a - 1, b - 1) = m(a - 1, b - 1) - z;
  return m;
}

inline void check_fasel_indices(int kind, std::size_t i, std::size_t j, std::size_t r) {
  if (kind < 1 || kind > 5 || i < 1 || i > r) {
    raise(ErrorCode::kBadIndices, "Fasel generator index out of range");
  }
  if (kind >= 3 && (j < 1 || j > r || i == j)) {
    raise(ErrorCode::kBadIndices, "Fasel generator needs distinct i, j in 1..r");
  }
}

/// Odd generators on phi~_{2r+1}:
///   F1_i   = I + l (e_{1,2i+1} - 2 e_{2i,1} - l e_{2i,2i+1})
///   F2_i   = I + l (e_{1,2i} - 2 e_{2i+1,1} - l e_{2i+1,2i})
///   F3_ij  = I + l (e_{2i,2j} - e_{2j+1,2i+1})
///   F4_ij  = I + l (e_{2i,2j+1} - e_{2j,2i+1})
///   F5_ij  = I + l (e_{2i+1,2j} - e_{2j+1,2i})
template <RingElement R>
Matrix<R> fasel_matrix(int kind, std::size_t i, std::size_t j, const R& l, std::size_t r) {
  check_fasel_indices(kind, i, j, r);
  const auto ctx = l.context();
  const std::size_t n = 2 * r + 1;
  Matrix<R> m = Matrix<R>::identity(n, ctx);
  auto add = [&](std::size_t a, std::size_t b, const R& c) { m(a - 1, b - 1) = m(a - 1, b - 1) + c; };
  const R two = R::from_int(ctx, 2);
  switch (kind) {
    case 1:
      add(1, 2 * i + 1, l);
      add(2 * i, 1, -(two * l));
      add(2 * i, 2 * i + 1, -(l * l));
      break;
    case 2:
      add(1, 2 * i, l);
      add(2 * i + 1, 1, -(two * l));
      add(2 * i + 1, 2 * i, -(l * l));
      break;
    case 3:
      add(2 * i, 2 * j, l);
      add(2 * j + 1, 2 * i + 1, -l);
      break;
    case 4:
      add(2 * i, 2 * j + 1, l);
      add(2 * j, 2 * i + 1, -l);
      break;
    case 5:
      add(2 * i + 1, 2 * j, l);
      add(2 * j + 1, 2 * i, -l);
      break;
  }
  return m;
}

template <RingElement R>
bool is_alternating(const Matrix<R>& a) {
  if (!a.is_square()) return false;
  for (std::size_t k = 0; k < a.rows(); ++k) {
    if (!a(k, k).is_zero()) return false;
    for (std::size_t l = 0; l < k; ++l)
      if (!(a(k, l) == -a(l, k))) return false;
  }
  return true;
}

/// GL: 1 _|_ A at (2k, 2l) _|_ (A^T)^{-1} at (2k+1, 2l+1).
template <RingElement R>
Matrix<R> block_embed_gl(const Matrix<R>& a) {
  if (!a.is_square()) raise(ErrorCode::kDimensionMismatch, "GL block must be square");
  const std::size_t r = a.rows();
  Matrix<R> dual = mat_inverse(a).transpose();
  Matrix<R> m = Matrix<R>::identity(2 * r + 1, a.context());
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t l = 0; l < r; ++l) {
      m(2 * k + 1, 2 * l + 1) = a(k, l);
      m(2 * k + 2, 2 * l + 2) = dual(k, l);
    }
  }
  return m;
}

/// AltI: I + a_{kl} at (2k, 2l+1). AltII: I + a_{kl} at (2k+1, 2l).
template <RingElement R>
Matrix<R> block_embed_alt(AltKind kind, const Matrix<R>& a) {
  if (!is_alternating(a)) raise(ErrorCode::kNotAlternating, "block is not alternating");
  const std::size_t r = a.rows();
  Matrix<R> m = Matrix<R>::identity(2 * r + 1, a.context());
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t l = 0; l < r; ++l) {
      if (kind == AltKind::kI) {
        m(2 * k + 1, 2 * l + 2) = a(k, l);
      } else {
        m(2 * k + 2, 2 * l + 1) = a(k, l);
      }
    }
  }
  return m;
}

/// E_alpha (dual = false) or E*_beta (dual = true) for a map from the Q
/// block to P or P*, given as an m x n matrix, with alpha* = D alpha^T and
/// D the inverse Gram matrix of Q. Block form (Q | P | P*):
///   E_alpha  = [[I, 0, -alpha*], [alpha, I, -1/2 alpha alpha*], [0, 0, I]]
///   E*_beta  = [[I, -beta*, 0], [0, I, 0], [beta, -1/2 beta beta*, I]]
template <RingElement R>
Matrix<R> dser_matrix(const Matrix<R>& alpha, bool dual, const AmbientSpace<R>& space) {
  const std::size_t n = space.q_rank(), m = space.hyperbolic_rank();
  if (alpha.rows() != m || alpha.cols() != n) {
    raise(ErrorCode::kDimensionMismatch, "DSER map must be " + std::to_string(m) + "x" +
                                             std::to_string(n) + ", got " +
                                             Matrix<R>::shape(alpha));
  }
  const auto ctx = space.context();
  Matrix<R> star = mat_inverse(space.q_space().gram()) * alpha.transpose();
  Matrix<R> corr = alpha * star;  // m x m
  Matrix<R> block = Matrix<R>::identity(space.dim(), ctx);
  const std::size_t row0 = dual ? n + m : n;  // rows receiving alpha
  const std::size_t col0 = dual ? n : n + m;  // columns receiving -alpha*
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t k = 0; k < n; ++k) {
      block(row0 + a, k) = alpha(a, k);
      block(k, col0 + a) = -star(k, a);
    }
    for (std::size_t b = 0; b < m; ++b) block(row0 + a, col0 + b) = -corr(a, b).halve();
  }
  return space.from_block(block);
}

/// Elementary orthogonal transvection on slot i from its coordinate action:
/// which = 1: (z - <s, x_i> w, x + (<z, w> - <s, x_i> q(w)) x_i, s);
/// which = 2 swaps the roles of x_i and f_i.
template <RingElement R>
Matrix<R> e_transvection_matrix(int which, const Vec<R>& w, std::size_t slot,
                                const AmbientSpace<R>& space) {
  const std::size_t n = space.q_rank(), m = space.hyperbolic_rank();
  if (w.size() != n) raise(ErrorCode::kDimensionMismatch, "w must lie in the Q block");
  if (slot < 1 || slot > m) raise(ErrorCode::kDimensionMismatch, "hyperbolic slot out of range");
  if (which != 1 && which != 2) raise(ErrorCode::kBadIndices, "transvection kind must be 1 or 2");
  const auto ctx = space.context();
  const QuadraticSpace<R>& q = space.q_space();
  Vec<R> gw = mat_vec(q.gram(), w);
  const std::size_t x = space.x_index(slot - 1), f = space.f_index(slot - 1);
  const std::size_t target = which == 1 ? x : f;  // row picking up <z, w>
  const std::size_t source = which == 1 ? f : x;  // column feeding -w
  Matrix<R> mat = Matrix<R>::identity(space.dim(), ctx);
  for (std::size_t k = 0; k < n; ++k) {
    mat(space.z_index(k), source) = -w[k];
    mat(target, space.z_index(k)) = gw[k];
  }
  mat(target, source) = -q.quad(w);
  return mat;
}

/// I + u (v^T G) - v (u^T G) - q(v) u (u^T G).
template <RingElement R>
Matrix<R> sigma_matrix(const Vec<R>& u, const Vec<R>& v, const AmbientSpace<R>& space) {
  TransvectionData<R> data = check_transvection_data(u, v, space);
  const auto ctx = space.context();
  const std::size_t d = space.dim();
  Vec<R> gu = mat_vec(space.gram(), u);  // G symmetric, so u^T G = (G u)^T
  Vec<R> gv = mat_vec(space.gram(), v);
  Matrix<R> mat = Matrix<R>::identity(d, ctx);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      mat(a, b) = mat(a, b) + u[a] * gv[b] - v[a] * gu[b] - data.r * u[a] * gu[b];
    }
  }
  return mat;
}

// ---------------------------------------------------------------------------
// Tokens and words.

template <RingElement R>
struct Word;

/// One generator with its parameters and its realized matrix. Unused
/// parameter fields are left empty.
template <RingElement R>
struct Token {
  Family family = Family::kOe;
  std::size_t i = 0;  // oe/Fasel index, hyperbolic slot for E1w/E2w
  std::size_t j = 0;
  R scalar{};       // z for oe, lambda for Fasel
  Matrix<R> map;    // alpha/beta, block A, or the conjugator
  Vec<R> u;         // sigma
  Vec<R> v;         // sigma v, or w for E1w/E2w
  std::shared_ptr<const Word<R>> inner;  // conj
  Matrix<R> matrix;

  const Matrix<R>& realized() const { return matrix; }
};

/// A left-to-right product of tokens over one space.
template <RingElement R>
struct Word {
  AmbientSpace<R> space;
  std::vector<Token<R>> tokens;

  Word() = default;
  explicit Word(AmbientSpace<R> s) : space(std::move(s)) {}
  Word(AmbientSpace<R> s, std::vector<Token<R>> t) : space(std::move(s)), tokens(std::move(t)) {}

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  void push(Token<R> t) { tokens.push_back(std::move(t)); }
  void append(const Word& other) {
    tokens.insert(tokens.end(), other.tokens.begin(), other.tokens.end());
  }
};

template <RingElement R>
Matrix<R> word_eval(const Word<R>& word) {
  Matrix<R> acc = Matrix<R>::identity(word.space.dim(), word.space.context());
  for (const Token<R>& t : word.tokens) {
    if (t.matrix.rows() != acc.rows()) {
      raise(ErrorCode::kDimensionMismatch, "token does not match the word's space");
    }
    acc = acc * t.matrix;
  }
  return acc;
}

namespace detail {

template <RingElement R>
Token<R> finish(Token<R> t, const AmbientSpace<R>& space) {
  if (!is_orthogonal(t.matrix, space)) {
    raise(ErrorCode::kNotOrthogonal,
          std::string(family_name(t.family)) + " token is not orthogonal for its space");
  }
  return t;
}

template <RingElement R>
void require_standard(const AmbientSpace<R>& space, bool odd) {
  if (!space.is_standard() || (space.dim() % 2 == 1) != odd) {
    raise(ErrorCode::kNotStandardForm, std::string("generator needs the ") +
                                           (odd ? "odd" : "even") + " standard form");
  }
}

}  // namespace detail

template <RingElement R>
Token<R> make_oe(const AmbientSpace<R>& space, std::size_t i, std::size_t j, const R& z) {
  if (!space.is_standard()) raise(ErrorCode::kNotStandardForm, "oe needs a standard form");
  Token<R> t;
  t.family = Family::kOe;
  t.i = i;
  t.j = j;
  t.scalar = z;
  t.matrix = oe_matrix(i, j, z, space.dim());
  return detail::finish(std::move(t), space);
}

template <RingElement R>
Token<R> make_fasel(const AmbientSpace<R>& space, int kind, std::size_t i, std::size_t j,
                    const R& l) {
  detail::require_standard(space, true);
  Token<R> t;
  t.family = fasel_family(kind);
  t.i = i;
  t.j = kind >= 3 ? j : 0;
  t.scalar = l;
  t.matrix = fasel_matrix(kind, i, t.j, l, (space.dim() - 1) / 2);
  return detail::finish(std::move(t), space);
}

template <RingElement R>
Token<R> make_dser(const AmbientSpace<R>& space, const Matrix<R>& alpha, bool dual) {
  Token<R> t;
  t.family = dual ? Family::kEBetaStar : Family::kEAlpha;
  t.map = alpha;
  t.matrix = dser_matrix(alpha, dual, space);
  return detail::finish(std::move(t), space);
}

template <RingElement R>
Token<R> make_e_transvection(const AmbientSpace<R>& space, int which, const Vec<R>& w,
                             std::size_t slot) {
  Token<R> t;
  t.family = which == 1 ? Family::kE1W : Family::kE2W;
  t.i = slot;
  t.v = w;
  t.matrix = e_transvection_matrix(which, w, slot, space);
  return detail::finish(std::move(t), space);
}

template <RingElement R>
Token<R> make_sigma(const AmbientSpace<R>& space, const Vec<R>& u, const Vec<R>& v) {
  Token<R> t;
  t.family = Family::kSigma;
  t.u = u;
  t.v = v;
  t.matrix = sigma_matrix(u, v, space);
  return detail::finish(std::move(t), space);
}

template <RingElement R>
Token<R> make_gl_block(const AmbientSpace<R>& space, const Matrix<R>& a) {
  detail::require_standard(space, true);
  if (a.rows() * 2 + 1 != space.dim()) raise(ErrorCode::kDimensionMismatch, "GL block size");
  Token<R> t;
  t.family = Family::kGLBlock;
  t.map = a;
  t.matrix = block_embed_gl(a);
  return detail::finish(std::move(t), space);
}

template <RingElement R>
Token<R> make_alt_block(const AmbientSpace<R>& space, AltKind kind, const Matrix<R>& a) {
  detail::require_standard(space, true);
  if (a.rows() * 2 + 1 != space.dim()) raise(ErrorCode::kDimensionMismatch, "alternating block size");
  Token<R> t;
  t.family = kind == AltKind::kI ? Family::kAltBlockI : Family::kAltBlockII;
  t.map = a;
  t.matrix = block_embed_alt(kind, a);
  return detail::finish(std::move(t), space);
}

/// Evaluates to eps^{-1} eval(inner) eps.
template <RingElement R>
Token<R> make_conj(const AmbientSpace<R>& space, const Matrix<R>& eps, Word<R> inner) {
  if (eps.rows() != space.dim() || inner.space.dim() != space.dim()) {
    raise(ErrorCode::kDimensionMismatch, "conjugator does not match the space");
  }
  Token<R> t;
  t.family = Family::kConj;
  t.map = eps;
  t.matrix = mat_inverse(eps) * word_eval(inner) * eps;
  t.inner = std::make_shared<const Word<R>>(std::move(inner));
  return detail::finish(std::move(t), space);
}

template <RingElement R>
Word<R> inverse(const Word<R>& word);

/// Structural inverse: negated parameter, inverse block, or inverted inner
/// word.
template <RingElement R>
Token<R> inverse(const Token<R>& t, const AmbientSpace<R>& space) {
  switch (t.family) {
    case Family::kOe: return make_oe(space, t.i, t.j, -t.scalar);
    case Family::kF1:
    case Family::kF2:
    case Family::kF3:
    case Family::kF4:
    case Family::kF5: return make_fasel(space, fasel_kind(t.family), t.i, t.j, -t.scalar);
    case Family::kEAlpha: return make_dser(space, -t.map, false);
    case Family::kEBetaStar: return make_dser(space, -t.map, true);
    case Family::kE1W: return make_e_transvection(space, 1, scale(-R::one(space.context()), t.v), t.i);
    case Family::kE2W: return make_e_transvection(space, 2, scale(-R::one(space.context()), t.v), t.i);
    case Family::kSigma: return make_sigma(space, t.u, scale(-R::one(space.context()), t.v));
    case Family::kGLBlock: return make_gl_block(space, mat_inverse(t.map));
    case Family::kAltBlockI: return make_alt_block(space, AltKind::kI, -t.map);
    case Family::kAltBlockII: return make_alt_block(space, AltKind::kII, -t.map);
    case Family::kConj: return make_conj(space, t.map, inverse(*t.inner));
  }
  raise(ErrorCode::kUnsupportedToken, "unknown token family");
}

template <RingElement R>
Word<R> inverse(const Word<R>& word) {
  Word<R> out(word.space);
  for (std::size_t k = word.tokens.size(); k-- > 0;) out.push(inverse(word.tokens[k], word.space));
  return out;
}

/// [g, h] = g h g^{-1} h^{-1}.
template <RingElement R>
Matrix<R> commutator(const Matrix<R>& g, const Matrix<R>& h) {
  return g * h * mat_inverse(g) * mat_inverse(h);
}

}  // namespace orthofactor

#endif  // ORTHOFACTOR_GENERATORS_HPP_
