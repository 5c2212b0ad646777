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

// Factorization of orthogonal transformations into words of generators.
// Every routine recomputes the product of the word it returns and compares
// it with the target; a mismatch raises InternalInconsistency, so returned
// certificates are always verified.

#ifndef ORTHOFACTOR_FACTOR_HPP_
#define ORTHOFACTOR_FACTOR_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "orthofactor/error.hpp"
#include "orthofactor/generators.hpp"
#include "orthofactor/matrix.hpp"
#include "orthofactor/quadspace.hpp"
#include "orthofactor/ring.hpp"

namespace orthofactor {

enum class Justification {
  kEq1,
  kEq2,
  kCommutator,
  kSplitting,
  kOddCorrespondence,
  kSigmaAxis,
  kGLElementarize,
  kAltElementarize,
  kWittConjugate,
  kHomotopyLift,
};

inline const char* justification_name(Justification j) {
  switch (j) {
    case Justification::kEq1: return "Eq1";
    case Justification::kEq2: return "Eq2";
    case Justification::kCommutator: return "Commutator";
    case Justification::kSplitting: return "Splitting";
    case Justification::kOddCorrespondence: return "OddCorrespondence";
    case Justification::kSigmaAxis: return "SigmaAxis";
    case Justification::kGLElementarize: return "GLElementarize";
    case Justification::kAltElementarize: return "AltElementarize";
    case Justification::kWittConjugate: return "WittConjugate";
    case Justification::kHomotopyLift: return "HomotopyLift";
  }
  return "unknown";
}

/// `path` addresses a token: "3" is the fourth top-level token, "0/5" the
/// sixth token inside the first (conjugation) token.
struct ProvenanceEntry {
  std::string path;
  Justification tag;
  std::string note;
};

template <RingElement R>
struct Certificate {
  Matrix<R> target;
  Word<R> word;
  bool verified = false;
  std::vector<ProvenanceEntry> provenance;
};

namespace detail {

template <RingElement R>
Certificate<R> certify(Matrix<R> target, Word<R> word, std::vector<ProvenanceEntry> provenance,
                       const std::string& what) {
  if (!(word_eval(word) == target)) {
    raise(ErrorCode::kInternalInconsistency, what + ": word product differs from the target");
  }
  return {std::move(target), std::move(word), true, std::move(provenance)};
}

template <RingElement R>
std::vector<ProvenanceEntry> tag_all(const Word<R>& word, Justification tag,
                                     const std::string& note = "", const std::string& prefix = "",
                                     std::size_t offset = 0) {
  std::vector<ProvenanceEntry> out;
  for (std::size_t k = 0; k < word.size(); ++k) {
    out.push_back({prefix + std::to_string(offset + k), tag, note});
  }
  return out;
}

template <RingElement R>
void require_field(const typename R::Context& ctx, const char* what) {
  if (!is_field<R>(ctx)) {
    raise(ErrorCode::kUnsupportedRing, std::string(what) + " needs a field");
  }
}

/// Even standard space Q = phi~_n, m = 1, interleaved.
template <RingElement R>
void require_even_hyperbolic(const AmbientSpace<R>& space) {
  if (space.dim() % 2 != 0 || space.dim() < 4 || space.hyperbolic_rank() != 1 ||
      space.order() != BasisOrder::kInterleaved || !space.is_standard()) {
    raise(ErrorCode::kNotStandardForm, "needs Q = phi~_n (n even) plus one hyperbolic plane");
  }
}

/// Odd standard space Q = (2), m = r, interleaved.
template <RingElement R>
void require_odd_standard(const AmbientSpace<R>& space) {
  if (space.dim() % 2 != 1 || space.dim() < 3 || space.q_rank() != 1 ||
      space.order() != BasisOrder::kInterleaved || !space.is_standard()) {
    raise(ErrorCode::kNotStandardForm, "needs the odd standard space Q = (2) plus H^r");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Elementary transvections as oe words.

/// E1^w on phi~_{n+2} as
///   prod_{i<n} oe_{i,n+2}(-w_i/2) . oe_{n,n+2}(-w_n) . prod_{i<n} oe_{n-i,n+2}(-w_{n-i}/2);
/// `which` = 2 uses column n+1 and targets E2^w.
template <RingElement R>
Certificate<R> factor_e_to_oe(int which, const Vec<R>& w, const AmbientSpace<R>& space) {
  detail::require_even_hyperbolic(space);
  const std::size_t n = space.q_rank();
  if (w.size() != n) raise(ErrorCode::kDimensionMismatch, "w must lie in the Q block");
  const std::size_t col = which == 1 ? n + 2 : n + 1;
  Word<R> word(space);
  for (std::size_t i = 1; i < n; ++i) word.push(make_oe(space, i, col, -w[i - 1].halve()));
  word.push(make_oe(space, n, col, -w[n - 1]));
  for (std::size_t i = 1; i < n; ++i) word.push(make_oe(space, n - i, col, -w[n - i - 1].halve()));
  Matrix<R> target = e_transvection_matrix(which, w, 1, space);
  auto prov = detail::tag_all(word, which == 1 ? Justification::kEq1 : Justification::kEq2);
  return detail::certify(std::move(target), std::move(word), std::move(prov),
                         which == 1 ? "factor_e1_to_oe" : "factor_e2_to_oe");
}

template <RingElement R>
Certificate<R> factor_e1_to_oe(const Vec<R>& w, const AmbientSpace<R>& space) {
  return factor_e_to_oe(1, w, space);
}

template <RingElement R>
Certificate<R> factor_e2_to_oe(const Vec<R>& w, const AmbientSpace<R>& space) {
  return factor_e_to_oe(2, w, space);
}

/// oe_{i,j}(z) = [E1^{s z e_i}, E2^{t e_sigma(j)}] for the first sign pair
/// (s, t) in (-,+), (+,-), (+,+), (-,-) that verifies; the pair used is
/// recorded in the provenance note.
template <RingElement R>
Certificate<R> factor_oe_to_transvections(std::size_t i, std::size_t j, const R& z,
                                          const AmbientSpace<R>& space) {
  detail::require_even_hyperbolic(space);
  const std::size_t n = space.q_rank();
  if (i > n || j > n) raise(ErrorCode::kBadIndices, "oe indices must lie in the Q block");
  Matrix<R> target = oe_matrix(i, j, z, space.dim());
  const auto ctx = space.context();
  const std::array<std::pair<int, int>, 4> variants = {{{-1, 1}, {1, -1}, {1, 1}, {-1, -1}}};
  for (const auto& [s, t] : variants) {
    Vec<R> a(n, R::zero(ctx)), b(n, R::zero(ctx));
    a[i - 1] = s > 0 ? z : -z;
    b[pair_partner(n, j) - 1] = t > 0 ? R::one(ctx) : -R::one(ctx);
    Token<R> g = make_e_transvection(space, 1, a, 1);
    Token<R> h = make_e_transvection(space, 2, b, 1);
    Word<R> word(space, {g, h, inverse(g, space), inverse(h, space)});
    if (!(word_eval(word) == target)) continue;
    std::string note = std::string("signs (") + (s > 0 ? "+" : "-") + "z e_i, " +
                       (t > 0 ? "+" : "-") + "e_sigma(j))";
    auto prov = detail::tag_all(word, Justification::kCommutator, note);
    return detail::certify(std::move(target), std::move(word), std::move(prov),
                           "factor_oe_to_transvections");
  }
  raise(ErrorCode::kInternalInconsistency, "no commutator sign variant reproduces oe");
}

// ---------------------------------------------------------------------------
// DSER splitting and the odd correspondence.

namespace detail {

template <RingElement R>
void split_into(const Matrix<R>& alpha, bool dual, const AmbientSpace<R>& space, Word<R>& out) {
  std::size_t first = alpha.rows() * alpha.cols();
  for (std::size_t k = 0; k < alpha.rows() * alpha.cols(); ++k) {
    if (!alpha.data()[k].is_zero()) {
      first = k;
      break;
    }
  }
  if (first == alpha.rows() * alpha.cols()) return;
  const std::size_t r = first / alpha.cols(), c = first % alpha.cols();
  Matrix<R> head(alpha.rows(), alpha.cols(), alpha.context());
  head(r, c) = alpha(r, c);
  Matrix<R> rest = alpha;
  rest(r, c) = R::zero(alpha.context());
  if (rest.is_zero()) {
    out.push(make_dser(space, head, dual));
    return;
  }
  // E_{a1 + a2} = E_{a1/2} E_{a2} E_{a1/2}.
  Matrix<R> half = head;
  half(r, c) = head(r, c).halve();
  Token<R> outer = make_dser(space, half, dual);
  out.push(outer);
  split_into(rest, dual, space, out);
  out.push(outer);
}

}  // namespace detail

/// Word of single-entry DSER tokens, peeling entries in row-major order.
template <RingElement R>
Certificate<R> split_dser(const Matrix<R>& alpha, bool dual, const AmbientSpace<R>& space) {
  Word<R> word(space);
  detail::split_into(alpha, dual, space, word);
  Matrix<R> target = dser_matrix(alpha, dual, space);
  auto prov = detail::tag_all(word, Justification::kSplitting);
  return detail::certify(std::move(target), std::move(word), std::move(prov), "split_dser");
}

/// F1_i(l) = E_{(-2l) alpha_i} and F2_i(l) = E*_{(-2l) beta_i}, with
/// alpha_i(1) = x_i, beta_i(1) = f_i.
template <RingElement R>
Certificate<R> odd_correspondence(const Token<R>& fasel, const AmbientSpace<R>& space) {
  detail::require_odd_standard(space);
  if (fasel.family != Family::kF1 && fasel.family != Family::kF2) {
    raise(ErrorCode::kUnsupportedToken, "odd correspondence applies to F1 and F2");
  }
  const auto ctx = space.context();
  Matrix<R> alpha(space.hyperbolic_rank(), 1, ctx);
  alpha(fasel.i - 1, 0) = -(R::from_int(ctx, 2) * fasel.scalar);
  Token<R> dser = make_dser(space, alpha, fasel.family == Family::kF2);
  if (!(dser.matrix == fasel.matrix)) {
    raise(ErrorCode::kConventionMismatch,
          std::string(family_name(fasel.family)) + " does not match its DSER counterpart");
  }
  Word<R> word(space, {dser});
  auto prov = detail::tag_all(word, Justification::kOddCorrespondence);
  return detail::certify(fasel.matrix, std::move(word), std::move(prov), "odd_correspondence");
}

/// Inverse direction: a single-entry (or zero) E_{c alpha_i} (resp. E*) becomes
/// F1_i(-c/2) (resp. F2), checked by matrix comparison.
template <RingElement R>
Token<R> dser_to_fasel(const Token<R>& dser, const AmbientSpace<R>& space) {
  detail::require_odd_standard(space);
  if (dser.family != Family::kEAlpha && dser.family != Family::kEBetaStar) {
    raise(ErrorCode::kUnsupportedToken, "expected a DSER token");
  }
  std::size_t slot = 0, count = 0;
  for (std::size_t k = 0; k < dser.map.rows(); ++k) {
    if (!dser.map(k, 0).is_zero()) {
      slot = k;
      ++count;
    }
  }
  if (count > 1) raise(ErrorCode::kUnsupportedShape, "DSER token is not single-entry");
  const int kind = dser.family == Family::kEAlpha ? 1 : 2;  // zero map: F_1(0) = I
  Token<R> f = make_fasel(space, kind, slot + 1, 0, -dser.map(slot, 0).halve());
  if (!(f.matrix == dser.matrix)) {
    raise(ErrorCode::kConventionMismatch, "DSER token does not match its Fasel counterpart");
  }
  return f;
}

// ---------------------------------------------------------------------------
// Block elementarization on the odd standard space.

/// Row reduction of A to I by additions row_i += t row_j only; with
/// E_s ... E_1 A = I, the word is F3(E_1^{-1}) ... F3(E_s^{-1}).
template <RingElement R>
Certificate<R> elementarize_gl_block(const Matrix<R>& a, const AmbientSpace<R>& space) {
  detail::require_odd_standard(space);
  detail::require_field<R>(space.context(), "GL elementarization");
  const std::size_t r = a.rows();
  if (!a.is_square() || 2 * r + 1 != space.dim()) {
    raise(ErrorCode::kDimensionMismatch, "GL block size does not match the space");
  }
  const auto ctx = a.context();
  R det = determinant(a);
  if (!det.is_unit()) raise(ErrorCode::kNonUnitDeterminant, "GL block is singular");
  if (!(det == R::one(ctx))) raise(ErrorCode::kDetNotOne, "GL block has det " + det.to_string());

  Matrix<R> m = a;
  Word<R> word(space);
  auto row_add = [&](std::size_t i, std::size_t j, const R& t) {  // row_i += t row_j, 0-based
    if (t.is_zero()) return;
    for (std::size_t c = 0; c < r; ++c) m(i, c) = m(i, c) + t * m(j, c);
    word.push(make_fasel(space, 3, i + 1, j + 1, -t));
  };
  for (std::size_t c = 0; c < r; ++c) {
    if (m(c, c).is_zero()) {
      std::size_t p = c + 1;
      while (p < r && m(p, c).is_zero()) ++p;
      if (p == r) raise(ErrorCode::kInternalInconsistency, "no pivot in GL elementarization");
      row_add(c, p, R::one(ctx));
    }
    if (!(m(c, c) == R::one(ctx)) && c + 1 < r) {
      if (m(c + 1, c).is_zero()) row_add(c + 1, c, R::one(ctx));
      row_add(c, c + 1, (R::one(ctx) - m(c, c)) * m(c + 1, c).inverse());
    }
    for (std::size_t i = 0; i < r; ++i) {
      if (i != c && !m(i, c).is_zero()) row_add(i, c, -m(i, c));
    }
  }
  if (!m.is_identity()) raise(ErrorCode::kInternalInconsistency, "GL reduction did not reach I");
  auto prov = detail::tag_all(word, Justification::kGLElementarize);
  return detail::certify(block_embed_gl(a), std::move(word), std::move(prov),
                         "elementarize_gl_block");
}

/// One F4 (kind I) or F5 (kind II) token per entry a_{kl}, k < l.
template <RingElement R>
Certificate<R> elementarize_alt_block(const Matrix<R>& a, AltKind kind,
                                      const AmbientSpace<R>& space) {
  detail::require_odd_standard(space);
  if (!is_alternating(a)) raise(ErrorCode::kNotAlternating, "block is not alternating");
  if (2 * a.rows() + 1 != space.dim()) raise(ErrorCode::kDimensionMismatch, "alternating block size");
  Word<R> word(space);
  for (std::size_t k = 0; k < a.rows(); ++k)
    for (std::size_t l = k + 1; l < a.rows(); ++l)
      if (!a(k, l).is_zero()) word.push(make_fasel(space, kind == AltKind::kI ? 4 : 5, k + 1, l + 1, a(k, l)));
  auto prov = detail::tag_all(word, Justification::kAltElementarize);
  return detail::certify(block_embed_alt(kind, a), std::move(word), std::move(prov),
                         "elementarize_alt_block");
}

// ---------------------------------------------------------------------------
// sigma_{u,v} on the odd standard space.

/// Coordinates of a vector of the odd standard space: head z, x-part u',
/// f-part u''.
template <RingElement R>
struct OddSplit {
  R head;
  Vec<R> x;
  Vec<R> f;
};

template <RingElement R>
OddSplit<R> odd_split(const Vec<R>& v, const AmbientSpace<R>& space) {
  OddSplit<R> s{v[space.z_index(0)], {}, {}};
  for (std::size_t k = 0; k < space.hyperbolic_rank(); ++k) {
    s.x.push_back(v[space.x_index(k)]);
    s.f.push_back(v[space.f_index(k)]);
  }
  return s;
}

/// sigma_{u,v} = s1 s2 s1 s3 s4 for u with zero head coordinate and v with
/// v' = 0 or v'' = 0:
///   s1 = E*_{v1 u''}, s2 = E_{2 v1 u'},
///   v' = 0:  s3 = GL(I + u' v''^T), s4 = AltII(u'' v''^T - v'' u''^T),
///   v'' = 0: s3 = GL(I - v' u''^T), s4 = AltI(u' v'^T - v' u'^T).
/// Returns the empty word when sigma_{u,v} = I.
template <RingElement R>
Certificate<R> factor_sigma_axis(const Vec<R>& u, const Vec<R>& v, const AmbientSpace<R>& space) {
  detail::require_odd_standard(space);
  Matrix<R> target = sigma_matrix(u, v, space);
  if (target.is_identity()) {
    return detail::certify(std::move(target), Word<R>(space), {}, "factor_sigma_axis");
  }
  const auto ctx = space.context();
  const std::size_t m = space.hyperbolic_rank();
  OddSplit<R> su = odd_split(u, space), sv = odd_split(v, space);
  if (!su.head.is_zero()) raise(ErrorCode::kUnsupportedShape, "u must have zero head coordinate");
  const bool x_free = is_zero_vector(sv.x), f_free = is_zero_vector(sv.f);
  if (!x_free && !f_free) {
    raise(ErrorCode::kUnsupportedShape, "v must vanish on the x-part or on the f-part");
  }
  auto column = [&](const Vec<R>& c, const R& factor) {
    Matrix<R> out(m, 1, ctx);
    for (std::size_t k = 0; k < m; ++k) out(k, 0) = factor * c[k];
    return out;
  };
  auto outer = [&](const Vec<R>& a, const Vec<R>& b) {  // a b^T
    Matrix<R> out(m, m, ctx);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l) out(k, l) = a[k] * b[l];
    return out;
  };
  Matrix<R> id = Matrix<R>::identity(m, ctx);
  Token<R> s1 = make_dser(space, column(su.f, sv.head), true);
  Token<R> s2 = make_dser(space, column(su.x, R::from_int(ctx, 2) * sv.head), false);
  Word<R> word(space, {s1, s2, s1});
  if (x_free) {
    word.push(make_gl_block(space, id + outer(su.x, sv.f)));
    word.push(make_alt_block(space, AltKind::kII, outer(su.f, sv.f) - outer(sv.f, su.f)));
  } else {
    word.push(make_gl_block(space, id - outer(sv.x, su.f)));
    word.push(make_alt_block(space, AltKind::kI, outer(su.x, sv.x) - outer(sv.x, su.x)));
  }
  auto prov = detail::tag_all(word, Justification::kSigmaAxis);
  return detail::certify(std::move(target), std::move(word), std::move(prov), "factor_sigma_axis");
}

namespace detail {

/// Rewrites an axis word into Fasel generators, appending provenance.
template <RingElement R>
void elementarize_axis(const Word<R>& axis, const AmbientSpace<R>& space, Word<R>& out,
                       std::vector<ProvenanceEntry>& prov, const std::string& prefix) {
  auto push = [&](const Token<R>& t, Justification tag, const std::string& note) {
    prov.push_back({prefix + std::to_string(out.size()), tag, note});
    out.push(t);
  };
  for (const Token<R>& t : axis.tokens) {
    switch (t.family) {
      case Family::kEAlpha:
      case Family::kEBetaStar: {
        Certificate<R> split = split_dser(t.map, t.family == Family::kEBetaStar, space);
        for (const Token<R>& piece : split.word.tokens) {
          push(dser_to_fasel(piece, space), Justification::kOddCorrespondence, "split DSER entry");
        }
        break;
      }
      case Family::kGLBlock:
        for (const Token<R>& piece : elementarize_gl_block(t.map, space).word.tokens) {
          push(piece, Justification::kGLElementarize, "");
        }
        break;
      case Family::kAltBlockI:
      case Family::kAltBlockII: {
        AltKind kind = t.family == Family::kAltBlockI ? AltKind::kI : AltKind::kII;
        for (const Token<R>& piece : elementarize_alt_block(t.map, kind, space).word.tokens) {
          push(piece, Justification::kAltElementarize, "");
        }
        break;
      }
      default:
        raise(ErrorCode::kInternalInconsistency, "unexpected token in axis word");
    }
  }
}

}  // namespace detail

/// sigma_{u,v} over Z/p (p <= 13) on the odd standard space as a word of
/// Fasel generators, conjugated by the Witt frame of (u, w) when that frame
/// is not the standard one.
inline Certificate<ModInt> factor_sigma_full(const Vec<ModInt>& u, const Vec<ModInt>& v,
                                             const AmbientSpace<ModInt>& space) {
  detail::require_odd_standard(space);
  const auto ctx = space.context();
  if (!ctx.is_field() || ctx.modulus > kMaxWittPrime) {
    raise(ErrorCode::kUnsupportedRing, "full sigma factorization runs over Z/p with p <= 13");
  }
  Matrix<ModInt> target = sigma_matrix(u, v, space);
  if (is_zero_vector(v)) {
    return detail::certify(std::move(target), Word<ModInt>(space), {}, "factor_sigma_full");
  }
  Vec<ModInt> w = complete_hyperbolic_pair(u, space);
  Matrix<ModInt> eps = witt_frame(u, w, space);
  Matrix<ModInt> eps_inv = mat_inverse(eps);
  Vec<ModInt> u_frame = mat_vec(eps_inv, u);
  Vec<ModInt> v_frame = mat_vec(eps_inv, v);
  const std::size_t slot_x = space.x_index(0), slot_f = space.f_index(0);
  for (std::size_t k = 0; k < u_frame.size(); ++k) {
    const bool expected = k == slot_x;
    if (u_frame[k] == (expected ? ModInt::one(ctx) : ModInt::zero(ctx))) continue;
    raise(ErrorCode::kInternalInconsistency, "Witt frame does not send u to the first x slot");
  }
  if (!v_frame[slot_f].is_zero()) {
    raise(ErrorCode::kInternalInconsistency, "v has a nonzero pairing coordinate in the frame");
  }

  const bool framed = !eps.is_identity();
  const std::string prefix = framed ? "0/" : "";
  Word<ModInt> inner(space);
  std::vector<ProvenanceEntry> prov;
  for (std::size_t k = 0; k < v_frame.size(); ++k) {
    if (k == slot_f || v_frame[k].is_zero()) continue;
    Vec<ModInt> piece(v_frame.size(), ModInt::zero(ctx));
    piece[k] = v_frame[k];
    Certificate<ModInt> axis = factor_sigma_axis(u_frame, piece, space);
    detail::elementarize_axis(axis.word, space, inner, prov, prefix);
  }
  Word<ModInt> word(space);
  if (framed) {
    word.push(make_conj(space, eps_inv, std::move(inner)));
    prov.insert(prov.begin(), {"0", Justification::kWittConjugate, "conjugation by the Witt frame"});
  } else {
    word = std::move(inner);
  }
  return detail::certify(std::move(target), std::move(word), std::move(prov), "factor_sigma_full");
}

// ---------------------------------------------------------------------------
// Base change and lifting.

/// Transports a word over the form phi* to phi' = eps^T phi* eps, so that
/// eval(result) = eps^{-1} eval(word) eps. Sigma tokens move their vectors;
/// when eps = eps_Q _|_ I, DSER and E1w/E2w tokens move their parameters;
/// everything else is wrapped in a conjugation token.
template <RingElement R>
Word<R> conjugate_word(const Word<R>& word, const Matrix<R>& eps, const Matrix<R>& source_form,
                       const Matrix<R>& target_form) {
  const AmbientSpace<R>& src = word.space;
  if (!(src.gram() == source_form) || !(eps.transpose() * source_form * eps == target_form)) {
    raise(ErrorCode::kFormMismatch, "eps^T phi* eps does not equal the target form");
  }
  const auto ctx = src.context();
  const std::size_t n = src.q_rank();
  Matrix<R> block = src.to_block(eps);
  bool split = true;
  for (std::size_t a = 0; a < src.dim() && split; ++a) {
    for (std::size_t b = 0; b < src.dim(); ++b) {
      const bool in_q = a < n && b < n;
      if (in_q) continue;
      if (!(block(a, b) == (a == b ? R::one(ctx) : R::zero(ctx)))) {
        split = false;
        break;
      }
    }
  }
  Matrix<R> eps_q(n, n, ctx);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) eps_q(a, b) = block(a, b);

  AmbientSpace<R> dst = split ? AmbientSpace<R>(QuadraticSpace<R>(eps_q.transpose() * src.q_space().gram() * eps_q),
                                                src.hyperbolic_rank(), src.order())
                              : AmbientSpace<R>::plain(target_form);
  Matrix<R> eps_inv = mat_inverse(eps);
  Matrix<R> eps_q_inv = split ? mat_inverse(eps_q) : eps_q;
  Word<R> out(dst);
  for (const Token<R>& t : word.tokens) {
    if (t.family == Family::kSigma) {
      out.push(make_sigma(dst, mat_vec(eps_inv, t.u), mat_vec(eps_inv, t.v)));
    } else if (split && (t.family == Family::kEAlpha || t.family == Family::kEBetaStar)) {
      out.push(make_dser(dst, t.map * eps_q, t.family == Family::kEBetaStar));
    } else if (split && (t.family == Family::kE1W || t.family == Family::kE2W)) {
      out.push(make_e_transvection(dst, t.family == Family::kE1W ? 1 : 2, mat_vec(eps_q_inv, t.v), t.i));
    } else {
      out.push(make_conj(dst, eps, Word<R>(src, {t})));
    }
  }
  return out;
}

/// sigma_{u,v} -> sigma_{u, vX} over R[X]. Evaluating the product at X = 0
/// gives I and at X = 1 the original product.
template <RingElement R>
Word<Poly<R>> homotopy_lift(const Word<R>& word, char variable = 'X') {
  static_assert(!is_poly_v<R>, "lift base must not be a polynomial ring");
  const AmbientSpace<R>& src = word.space;
  typename Poly<R>::Context pctx{src.context(), variable};
  AmbientSpace<Poly<R>> dst(QuadraticSpace<Poly<R>>(lift_constant(src.q_space().gram(), variable)),
                            src.hyperbolic_rank(), src.order());
  const Poly<R> x = Poly<R>::variable(pctx);
  auto lift = [&](const Vec<R>& v) {
    Vec<Poly<R>> out;
    for (const R& c : v) out.push_back(Poly<R>::constant(c, pctx));
    return out;
  };
  Word<Poly<R>> out(dst);
  for (const Token<R>& t : word.tokens) {
    if (t.family != Family::kSigma) {
      raise(ErrorCode::kUnsupportedToken,
            std::string("homotopy lift accepts sigma tokens only, got ") + family_name(t.family));
    }
    out.push(make_sigma(dst, lift(t.u), scale(x, lift(t.v))));
  }
  return out;
}

}  // namespace orthofactor

#endif  // ORTHOFACTOR_FACTOR_HPP_
