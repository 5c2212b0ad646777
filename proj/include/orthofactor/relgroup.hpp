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

// Ideal levels of tokens, shape certificates for relative words, CRT
// localization over Z/N, and breadth-first closure of finite matrix groups.

#ifndef ORTHOFACTOR_RELGROUP_HPP_
#define ORTHOFACTOR_RELGROUP_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <numeric>
#include <optional>
#include <string>
#include <type_traits>
#include <unordered_set>
#include <utility>
#include <vector>

#include "orthofactor/error.hpp"
#include "orthofactor/generators.hpp"
#include "orthofactor/matrix.hpp"
#include "orthofactor/quadspace.hpp"
#include "orthofactor/ring.hpp"

namespace orthofactor {

/// An ideal of Q (zero or unit), of Z/N (the ideal dZ/N for d | N; d = N is
/// the zero ideal), or its extension to R[X]. `generator` is 0 or 1 over Q
/// and d over Z/N; for R[X] it refers to the base ring.
struct IdealSpec {
  RingDescriptor ring;
  std::int64_t generator = 0;

  static IdealSpec zero(const RingDescriptor& ring) { return {ring, base_modulus(ring)}; }
  static IdealSpec unit(const RingDescriptor& ring) { return {ring, 1}; }
  static IdealSpec divisor(const RingDescriptor& ring, std::int64_t d) {
    const std::int64_t n = base_modulus(ring);
    if (n == 0) {
      if (d != 0 && d != 1) raise(ErrorCode::kUnsupportedRing, "ideals of QQ are 0 or QQ");
      return {ring, d};
    }
    if (d <= 0 || n % d != 0) {
      raise(ErrorCode::kNotUnimodular, "ideal generator must divide the modulus");
    }
    return {ring, d};
  }

  bool is_zero() const { return generator == base_modulus(ring); }
  bool is_unit() const { return generator == 1; }

  /// I subset J.
  bool subset_of(const IdealSpec& other) const {
    if (base_modulus(ring) == 0) return generator == 0 || other.generator == 1;
    return generator % other.generator == 0;
  }

  /// I + J.
  IdealSpec join(const IdealSpec& other) const {
    if (base_modulus(ring) == 0) return {ring, generator == 1 || other.generator == 1 ? 1 : 0};
    return {ring, std::gcd(generator, other.generator)};
  }

  std::string to_string() const {
    if (base_modulus(ring) == 0) return generator == 0 ? "0" : "(1)";
    return "(" + std::to_string(generator) + ")";
  }

  friend bool operator==(const IdealSpec& a, const IdealSpec& b) {
    return a.ring == b.ring && a.generator == b.generator;
  }

  /// N for Z/N and Z/N[X], 0 for Q and Q[X].
  static std::int64_t base_modulus(const RingDescriptor& ring) {
    const RingDescriptor& base =
        ring.kind() == RingDescriptor::Kind::kPolynomial ? ring.base() : ring;
    return base.kind() == RingDescriptor::Kind::kModular ? base.modulus() : 0;
  }
};

/// Smallest ideal containing x.
template <RingElement R>
IdealSpec element_level(const R& x) {
  const RingDescriptor desc = x.context().descriptor();
  if constexpr (std::is_same_v<R, Rational>) {
    return {desc, x.is_zero() ? 0 : 1};
  } else if constexpr (std::is_same_v<R, ModInt>) {
    return {desc, std::gcd(x.value(), x.modulus())};
  } else {
    IdealSpec level = IdealSpec::zero(desc);
    for (const auto& c : x.coefficients()) level = level.join({desc, element_level(c).generator});
    return level;
  }
}

template <RingElement R>
bool ideal_contains(const IdealSpec& ideal, const R& x) {
  return element_level(x).subset_of(ideal);
}

namespace detail {

template <RingElement R>
IdealSpec join_entries(IdealSpec level, const Matrix<R>& m) {
  for (const R& e : m.data()) level = level.join(element_level(e));
  return level;
}

template <RingElement R>
IdealSpec join_entries(IdealSpec level, const Vec<R>& v) {
  for (const R& e : v) level = level.join(element_level(e));
  return level;
}

}  // namespace detail

/// Ideal generated by the level-carrying parameters of a token: z or
/// lambda, entries of alpha/beta, w, the v vector of sigma (u carries no
/// level), the entries of A - I for GL blocks and of A for alternating
/// blocks, and the join over the inner word for conjugations.
template <RingElement R>
IdealSpec token_level(const Token<R>& t) {
  const auto ctx = t.matrix.context();
  IdealSpec level = IdealSpec::zero(ctx.descriptor());
  switch (t.family) {
    case Family::kOe:
    case Family::kF1:
    case Family::kF2:
    case Family::kF3:
    case Family::kF4:
    case Family::kF5: return element_level(t.scalar);
    case Family::kEAlpha:
    case Family::kEBetaStar:
    case Family::kAltBlockI:
    case Family::kAltBlockII: return detail::join_entries(level, t.map);
    case Family::kE1W:
    case Family::kE2W:
    case Family::kSigma: return detail::join_entries(level, t.v);
    case Family::kGLBlock:
      return detail::join_entries(level, t.map - Matrix<R>::identity(t.map.rows(), ctx));
    case Family::kConj:
      for (const Token<R>& s : t.inner->tokens) level = level.join(token_level(s));
      return level;
  }
  return level;
}

enum class RelativeShape { kTrueRelative, kNormalClosure };

inline const char* relative_shape_name(RelativeShape s) {
  return s == RelativeShape::kTrueRelative ? "true-relative" : "relative-normal-closure";
}

template <RingElement R>
struct LevelledWord {
  Word<R> word;
  IdealSpec level;
  RelativeShape shape = RelativeShape::kTrueRelative;
};

struct ShapeCheck {
  bool ok = true;
  std::optional<std::size_t> offending;  // first token that breaks the shape
};

/// Syntactic certificate check. True-relative: every token has level in I.
/// Normal closure: tokens outside I must be closed, innermost first, by
/// their inverse token, so that the word is a concatenation of blocks
/// e g e^{-1} with g of level I.
template <RingElement R>
ShapeCheck check_relative_shape(const LevelledWord<R>& lw) {
  const auto& tokens = lw.word.tokens;
  if (lw.shape == RelativeShape::kTrueRelative) {
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      if (!token_level(tokens[k]).subset_of(lw.level)) return {false, k};
    }
    return {true, std::nullopt};
  }
  std::vector<std::size_t> open;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (token_level(tokens[k]).subset_of(lw.level)) continue;
    if (!open.empty() && (tokens[open.back()].matrix * tokens[k].matrix).is_identity()) {
      open.pop_back();
    } else {
      open.push_back(k);
    }
  }
  if (open.empty()) return {true, std::nullopt};
  return {false, open.front()};
}

// ---------------------------------------------------------------------------
// CRT localization.

namespace detail {

template <RingElement S, RingElement R, class F>
Vec<S> map_vec(const Vec<R>& v, F&& f) {
  Vec<S> out;
  out.reserve(v.size());
  for (const R& x : v) out.push_back(f(x));
  return out;
}

/// Rebuilds a token over another ring by mapping every parameter through a
/// ring homomorphism f.
template <RingElement S, RingElement R, class F>
Token<S> rebuild_token(const Token<R>& t, const AmbientSpace<S>& dst, const typename S::Context& ctx,
                       F&& f);

template <RingElement S, RingElement R, class F>
Word<S> rebuild_word(const Word<R>& word, const typename S::Context& ctx, F&& f) {
  const AmbientSpace<R>& src = word.space;
  AmbientSpace<S> dst(QuadraticSpace<S>(map_entries<S>(src.q_space().gram(), ctx, f)),
                      src.hyperbolic_rank(), src.order());
  Word<S> out(dst);
  for (const Token<R>& t : word.tokens) out.push(rebuild_token<S>(t, dst, ctx, f));
  return out;
}

template <RingElement S, RingElement R, class F>
Token<S> rebuild_token(const Token<R>& t, const AmbientSpace<S>& dst, const typename S::Context& ctx,
                       F&& f) {
  switch (t.family) {
    case Family::kOe: return make_oe(dst, t.i, t.j, f(t.scalar));
    case Family::kF1:
    case Family::kF2:
    case Family::kF3:
    case Family::kF4:
    case Family::kF5: return make_fasel(dst, fasel_kind(t.family), t.i, t.j, f(t.scalar));
    case Family::kEAlpha:
    case Family::kEBetaStar:
      return make_dser(dst, map_entries<S>(t.map, ctx, f), t.family == Family::kEBetaStar);
    case Family::kE1W:
    case Family::kE2W:
      return make_e_transvection(dst, t.family == Family::kE1W ? 1 : 2, map_vec<S>(t.v, f), t.i);
    case Family::kSigma: return make_sigma(dst, map_vec<S>(t.u, f), map_vec<S>(t.v, f));
    case Family::kGLBlock: return make_gl_block(dst, map_entries<S>(t.map, ctx, f));
    case Family::kAltBlockI:
    case Family::kAltBlockII:
      return make_alt_block(dst, t.family == Family::kAltBlockI ? AltKind::kI : AltKind::kII,
                            map_entries<S>(t.map, ctx, f));
    case Family::kConj:
      return make_conj(dst, map_entries<S>(t.map, ctx, f), rebuild_word<S>(*t.inner, ctx, f));
  }
  raise(ErrorCode::kUnsupportedToken, "unknown token family");
}

}  // namespace detail

struct LocalComponent {
  std::int64_t modulus;  // p^e
  Word<ModInt> word;
};

/// One word per prime-power factor p^e of N, with every parameter reduced
/// mod p^e.
inline std::vector<LocalComponent> crt_localize(const Word<ModInt>& word) {
  const std::int64_t n = word.space.context().modulus;
  std::vector<LocalComponent> out;
  for (const auto& [p, e] : detail::factorize(n)) {
    std::int64_t q = 1;
    for (int k = 0; k < e; ++k) q *= p;
    ModContext ctx = ModContext::make(q);
    auto reduce = [&](const ModInt& x) { return ModInt(x.value() % q, ctx); };
    out.push_back({q, detail::rebuild_word<ModInt>(word, ctx, reduce)});
  }
  return out;
}

/// Reassembles a matrix over Z/N from its components over pairwise coprime
/// moduli whose product is N.
inline Matrix<ModInt> crt_reconstruct(const std::vector<Matrix<ModInt>>& parts) {
  if (parts.empty()) raise(ErrorCode::kDimensionMismatch, "no components to reconstruct");
  std::int64_t n = 1;
  for (const auto& m : parts) n *= m.context().modulus;
  ModContext ctx = ModContext::make(n);
  Matrix<ModInt> out(parts[0].rows(), parts[0].cols(), ctx);
  for (const auto& m : parts) {
    const std::int64_t q = m.context().modulus;
    if (m.rows() != out.rows() || m.cols() != out.cols()) {
      raise(ErrorCode::kDimensionMismatch, "component shapes differ");
    }
    // Idempotent e = (N/q) * ((N/q)^{-1} mod q), so e = 1 mod q and 0 mod N/q.
    const std::int64_t cofactor = n / q;
    std::int64_t s = 0, t = 0;
    detail::ext_gcd(cofactor % q, q, s, t);
    const std::int64_t e = detail::mul_mod(cofactor, detail::floor_mod(s, q), n);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        out(i, j) = out(i, j) + ModInt(detail::mul_mod(e, m(i, j).value(), n), ctx);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closure oracle.

inline constexpr std::size_t kDefaultClosureCap = 1000000;

struct ClosureResult {
  std::size_t order = 0;
  std::uint64_t hash = 0;
  std::vector<std::string> elements;  // sorted canonical keys

  std::string hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
  }
};

namespace detail {

/// Canonical key: one byte per residue for N <= 256, two otherwise.
inline std::string matrix_key(const std::vector<std::int64_t>& entries, std::int64_t modulus) {
  std::string key;
  const bool wide = modulus > 256;
  key.reserve(entries.size() * (wide ? 2 : 1));
  for (std::int64_t v : entries) {
    if (wide) key.push_back(static_cast<char>((v >> 8) & 0xff));
    key.push_back(static_cast<char>(v & 0xff));
  }
  return key;
}

inline std::uint64_t fnv1a(const std::vector<std::string>& keys) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (const std::string& k : keys) {
    for (unsigned char c : k) mix(c);
    mix(0xff);
  }
  return h;
}

}  // namespace detail

/// Subgroup generated by `generators` and their inverses, by breadth-first
/// search from I with right multiplication in generator order. Raises
/// CapExceeded once more than `cap` elements are found.
inline ClosureResult closure_enumerate(const std::vector<Matrix<ModInt>>& generators,
                                       std::size_t cap = kDefaultClosureCap) {
  if (generators.empty()) raise(ErrorCode::kDimensionMismatch, "closure needs a generator");
  const std::int64_t n = generators[0].context().modulus;
  const std::size_t d = generators[0].rows();
  using Raw = std::vector<std::int64_t>;
  auto raw = [&](const Matrix<ModInt>& m) {
    if (m.rows() != d || !m.is_square() || m.context().modulus != n) {
      raise(ErrorCode::kDimensionMismatch, "closure generators must share shape and ring");
    }
    Raw out;
    for (const ModInt& x : m.data()) out.push_back(x.value());
    return out;
  };
  std::vector<Raw> gens;
  std::unordered_set<std::string> gen_keys;
  for (const auto& g : generators) {
    for (const Matrix<ModInt>& h : {g, mat_inverse(g)}) {
      Raw r = raw(h);
      if (gen_keys.insert(detail::matrix_key(r, n)).second) gens.push_back(std::move(r));
    }
  }
  Raw id(d * d, 0);
  for (std::size_t k = 0; k < d; ++k) id[k * d + k] = 1;
  std::unordered_set<std::string> seen = {detail::matrix_key(id, n)};
  std::deque<Raw> frontier = {id};
  Raw prod(d * d);
  while (!frontier.empty()) {
    Raw cur = std::move(frontier.front());
    frontier.pop_front();
    for (const Raw& g : gens) {
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          std::int64_t acc = 0;
          for (std::size_t k = 0; k < d; ++k) acc += cur[i * d + k] * g[k * d + j];
          prod[i * d + j] = acc % n;
        }
      }
      if (seen.insert(detail::matrix_key(prod, n)).second) {
        if (seen.size() > cap) {
          raise(ErrorCode::kCapExceeded, "closure exceeds cap of " + std::to_string(cap));
        }
        frontier.push_back(prod);
      }
    }
  }
  ClosureResult result;
  result.elements.assign(seen.begin(), seen.end());
  std::sort(result.elements.begin(), result.elements.end());
  result.order = result.elements.size();
  result.hash = detail::fnv1a(result.elements);
  return result;
}

// ---------------------------------------------------------------------------
// Generator families on phi~_dim over Z/p.

inline const std::vector<std::string>& closure_families() {
  static const std::vector<std::string> names = {"elementary", "etrans", "dser"};
  return names;
}

namespace detail {

/// All vectors of (Z/N)^k in counting order.
inline std::vector<Vec<ModInt>> all_vectors(std::size_t k, const ModContext& ctx) {
  std::vector<Vec<ModInt>> out;
  std::vector<std::int64_t> digits(k, 0);
  while (true) {
    Vec<ModInt> v;
    for (std::int64_t dgt : digits) v.push_back(ModInt(dgt, ctx));
    out.push_back(std::move(v));
    std::size_t pos = 0;
    while (pos < k && digits[pos] == ctx.modulus - 1) digits[pos++] = 0;
    if (pos == k) break;
    ++digits[pos];
  }
  return out;
}

}  // namespace detail

/// Generator matrices of a family acting on phi~_dim:
///   elementary: oe_{i,j}(z) (even dim) or F1..F5 (odd dim), all z != 0;
///   etrans:     E1^w, E2^w on phi~_{dim-2} _|_ H, all w in the Q block;
///   dser:       single-entry E_alpha, E*_beta on the standard splitting
///               ((2) _|_ H^r for odd dim, phi~_{dim-2} _|_ H for even dim).
inline std::vector<Matrix<ModInt>> family_generators(const std::string& family, std::size_t dim,
                                                     const ModContext& ctx) {
  if (dim < 3) raise(ErrorCode::kDimensionMismatch, "closure families need dim >= 3");
  std::vector<Matrix<ModInt>> out;
  std::vector<ModInt> units;
  for (std::int64_t z = 1; z < ctx.modulus; ++z) units.push_back(ModInt(z, ctx));
  if (family == "elementary") {
    AmbientSpace<ModInt> space = AmbientSpace<ModInt>::standard(dim, ctx);
    if (dim % 2 == 0) {
      for (std::size_t i = 1; i <= dim; ++i)
        for (std::size_t j = 1; j <= dim; ++j) {
          if (i == j || i == pair_partner(dim, j)) continue;
          for (const ModInt& z : units) out.push_back(make_oe(space, i, j, z).matrix);
        }
    } else {
      const std::size_t r = (dim - 1) / 2;
      for (int kind = 1; kind <= 5; ++kind)
        for (std::size_t i = 1; i <= r; ++i)
          for (std::size_t j = kind >= 3 ? 1 : 0; j <= (kind >= 3 ? r : 0); ++j) {
            if (kind >= 3 && i == j) continue;
            for (const ModInt& z : units) out.push_back(make_fasel(space, kind, i, j, z).matrix);
          }
    }
  } else if (family == "etrans") {
    AmbientSpace<ModInt> space(QuadraticSpace<ModInt>::standard(dim - 2, ctx), 1);
    for (const Vec<ModInt>& w : detail::all_vectors(dim - 2, ctx)) {
      if (is_zero_vector(w)) continue;
      out.push_back(make_e_transvection(space, 1, w, 1).matrix);
      out.push_back(make_e_transvection(space, 2, w, 1).matrix);
    }
  } else if (family == "dser") {
    AmbientSpace<ModInt> space =
        dim % 2 == 1 ? AmbientSpace<ModInt>::standard(dim, ctx)
                     : AmbientSpace<ModInt>(QuadraticSpace<ModInt>::standard(dim - 2, ctx), 1);
    const std::size_t m = space.hyperbolic_rank(), n = space.q_rank();
    for (bool dual : {false, true})
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (const ModInt& z : units) {
            Matrix<ModInt> alpha(m, n, ctx);
            alpha(a, b) = z;
            out.push_back(make_dser(space, alpha, dual).matrix);
          }
  } else {
    raise(ErrorCode::kUnsupportedToken, "unknown closure family '" + family + "'");
  }
  return out;
}

}  // namespace orthofactor

#endif  // ORTHOFACTOR_RELGROUP_HPP_
