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

// JSON encoding of rings, values, matrices, spaces, tokens, words and
// certificates.
//
//   ring      "QQ" | {"mod": N} | {"poly": <ring>, "var": "X"}
//   value     "p/q" or integer over QQ, integer over Z/N, coefficient array
//             (constant first) over R[X]
//   matrix    {"entries": [[...], ...]}
//   space     {"ring", "rank", "gram", "hyperbolic", "basis"} with the Gram
//             matrix of the Q block, or {"ring", "standard": dim}
//   token     {"kind": "oe", "i": 1, "j": 3, "z": ...} and so on
//   word      {"space": ..., "tokens": [...]}

#ifndef ORTHOFACTOR_IO_HPP_
#define ORTHOFACTOR_IO_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "orthofactor/error.hpp"
#include "orthofactor/factor.hpp"
#include "orthofactor/generators.hpp"
#include "orthofactor/matrix.hpp"
#include "orthofactor/quadspace.hpp"
#include "orthofactor/ring.hpp"

namespace orthofactor {

using Json = nlohmann::json;

/// Malformed input: wrong JSON shape, missing field, unparsable value.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace io {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

inline std::int64_t as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

inline std::size_t as_index(const Json& j, const char* what) {
  std::int64_t v = as_int(j, what);
  if (v < 0) throw InputError(std::string(what) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

// ---------------------------------------------------------------------------
// Rings.

/// Accepts "QQ", {"mod": N}, {"poly": ...}, and the flag forms "qq",
/// "mod:N".
inline RingDescriptor ring_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "QQ" || s == "qq") return RingDescriptor::rationals();
    if (s.rfind("mod:", 0) == 0 || s.rfind("Z/", 0) == 0) {
      try {
        return RingDescriptor::modular(std::stoll(s.substr(s[0] == 'm' ? 4 : 2)));
      } catch (const std::logic_error&) {
        throw InputError("bad modulus in ring '" + s + "'");
      }
    }
    throw InputError("unknown ring '" + s + "'");
  }
  if (j.is_object() && j.contains("mod")) return RingDescriptor::modular(as_int(j.at("mod"), "mod"));
  if (j.is_object() && j.contains("poly")) {
    char var = 'X';
    if (j.contains("var")) {
      const std::string v = j.at("var").get<std::string>();
      if (v.size() != 1) throw InputError("polynomial variable must be one character");
      var = v[0];
    }
    return RingDescriptor::polynomial(ring_from_json(j.at("poly")), var);
  }
  throw InputError("unrecognized ring descriptor");
}

inline Json ring_to_json(const RingDescriptor& d) {
  switch (d.kind()) {
    case RingDescriptor::Kind::kRationals: return "QQ";
    case RingDescriptor::Kind::kModular: return Json{{"mod", d.modulus()}};
    case RingDescriptor::Kind::kPolynomial:
      return Json{{"poly", ring_to_json(d.base())}, {"var", std::string(1, d.variable())}};
  }
  return nullptr;
}

template <RingElement R>
typename R::Context context_from(const RingDescriptor& d) {
  if constexpr (std::is_same_v<R, Rational>) {
    if (d.kind() != RingDescriptor::Kind::kRationals) throw InputError("expected ring QQ");
    return {};
  } else if constexpr (std::is_same_v<R, ModInt>) {
    if (d.kind() != RingDescriptor::Kind::kModular) throw InputError("expected ring Z/N");
    return ModContext::make(d.modulus());
  } else {
    if (d.kind() != RingDescriptor::Kind::kPolynomial) throw InputError("expected polynomial ring");
    return {context_from<typename R::Base>(d.base()), d.variable()};
  }
}

// ---------------------------------------------------------------------------
// Values, vectors, matrices.

template <RingElement R>
R value_from_json(const Json& j, const typename R::Context& ctx) {
  if constexpr (std::is_same_v<R, Rational>) {
    if (j.is_number_integer()) return Rational::from_int(ctx, j.get<std::int64_t>());
    if (!j.is_string()) throw InputError("rational values are \"p/q\" strings or integers");
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    try {
      Rational::Integer p(s.substr(0, slash));
      Rational::Integer q(slash == std::string::npos ? std::string("1") : s.substr(slash + 1));
      return Rational::from_fraction(p, q);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw InputError("cannot parse rational '" + s + "'");
    }
  } else if constexpr (std::is_same_v<R, ModInt>) {
    if (j.is_number_integer()) return ModInt(j.get<std::int64_t>(), ctx);
    if (j.is_string()) {
      try {
        std::size_t used = 0;
        const std::string s = j.get<std::string>();
        std::int64_t v = std::stoll(s, &used);
        if (used == s.size()) return ModInt(v, ctx);
      } catch (const std::logic_error&) {
      }
    }
    throw InputError("residues are integers");
  } else {
    using B = typename R::Base;
    if (!j.is_array()) throw InputError("polynomials are coefficient arrays");
    std::vector<B> coeffs;
    for (const Json& c : j) coeffs.push_back(value_from_json<B>(c, ctx.base));
    return R(std::move(coeffs), ctx);
  }
}

template <RingElement R>
Json value_to_json(const R& x) {
  if constexpr (std::is_same_v<R, Rational>) {
    return x.to_string();
  } else if constexpr (std::is_same_v<R, ModInt>) {
    return x.value();
  } else {
    Json out = Json::array();
    for (const auto& c : x.coefficients()) out.push_back(value_to_json(c));
    return out;
  }
}

template <RingElement R>
Vec<R> vector_from_json(const Json& j, const typename R::Context& ctx) {
  if (!j.is_array()) throw InputError("vectors are coordinate arrays");
  Vec<R> out;
  for (const Json& e : j) out.push_back(value_from_json<R>(e, ctx));
  return out;
}

template <RingElement R>
Json vector_to_json(const Vec<R>& v) {
  Json out = Json::array();
  for (const R& e : v) out.push_back(value_to_json(e));
  return out;
}

/// Accepts {"entries": rows} or a bare array of rows.
template <RingElement R>
Matrix<R> matrix_from_json(const Json& j, const typename R::Context& ctx) {
  const Json& rows = j.is_object() ? field(j, "entries") : j;
  if (!rows.is_array() || rows.empty()) throw InputError("matrix needs a non-empty row array");
  std::vector<std::vector<R>> data;
  for (const Json& row : rows) data.push_back(vector_from_json<R>(row, ctx));
  for (const auto& row : data) {
    if (row.size() != data[0].size()) throw InputError("matrix rows have different lengths");
  }
  return Matrix<R>::from_rows(data, ctx);
}

template <RingElement R>
Json matrix_to_json(const Matrix<R>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row_vector(i)));
  return Json{{"entries", rows}};
}

// ---------------------------------------------------------------------------
// Spaces.

inline BasisOrder basis_from_json(const Json& j) {
  const std::string s = j.get<std::string>();
  if (s == "block") return BasisOrder::kBlock;
  if (s == "interleaved") return BasisOrder::kInterleaved;
  throw InputError("basis must be 'block' or 'interleaved'");
}

template <RingElement R>
AmbientSpace<R> space_from_json(const Json& j, const typename R::Context& ctx) {
  if (j.contains("standard")) {
    return AmbientSpace<R>::standard(as_index(j.at("standard"), "standard"), ctx);
  }
  Matrix<R> gram = matrix_from_json<R>(field(j, "gram"), ctx);
  if (j.contains("rank") && as_index(j.at("rank"), "rank") != gram.rows()) {
    throw InputError("rank does not match the Gram matrix");
  }
  std::size_t m = j.contains("hyperbolic") ? as_index(j.at("hyperbolic"), "hyperbolic") : 0;
  BasisOrder order = j.contains("basis") ? basis_from_json(j.at("basis")) : BasisOrder::kInterleaved;
  return AmbientSpace<R>(QuadraticSpace<R>(gram), m, order);
}

template <RingElement R>
Json space_to_json(const AmbientSpace<R>& s) {
  return Json{{"ring", ring_to_json(s.context().descriptor())},
              {"rank", s.q_rank()},
              {"gram", matrix_to_json(s.q_space().gram())},
              {"hyperbolic", s.hyperbolic_rank()},
              {"basis", basis_order_name(s.order())}};
}

/// Ring named inside a JSON object, or `fallback` when absent.
inline RingDescriptor ring_of(const Json& j, const RingDescriptor& fallback) {
  if (j.is_object() && j.contains("ring")) return ring_from_json(j.at("ring"));
  return fallback;
}

// ---------------------------------------------------------------------------
// Tokens and words.

inline Family family_from_name(const std::string& s) {
  for (int f = 0; f <= static_cast<int>(Family::kConj); ++f) {
    if (s == family_name(static_cast<Family>(f))) return static_cast<Family>(f);
  }
  throw InputError("unknown token kind '" + s + "'");
}

template <RingElement R>
Word<R> word_from_json(const Json& j, const AmbientSpace<R>& fallback);

template <RingElement R>
Token<R> token_from_json(const Json& j, const AmbientSpace<R>& space) {
  const auto ctx = space.context();
  const Family f = family_from_name(field(j, "kind").get<std::string>());
  auto idx = [&](const char* key) { return as_index(field(j, key), key); };
  switch (f) {
    case Family::kOe:
      return make_oe(space, idx("i"), idx("j"), value_from_json<R>(field(j, "z"), ctx));
    case Family::kF1:
    case Family::kF2:
    case Family::kF3:
    case Family::kF4:
    case Family::kF5: {
      const int kind = fasel_kind(f);
      return make_fasel(space, kind, idx("i"), kind >= 3 ? idx("j") : 0,
                        value_from_json<R>(field(j, "lambda"), ctx));
    }
    case Family::kEAlpha:
      return make_dser(space, matrix_from_json<R>(field(j, "alpha"), ctx), false);
    case Family::kEBetaStar:
      return make_dser(space, matrix_from_json<R>(field(j, "beta"), ctx), true);
    case Family::kE1W:
    case Family::kE2W:
      return make_e_transvection(space, f == Family::kE1W ? 1 : 2,
                                 vector_from_json<R>(field(j, "w"), ctx),
                                 j.contains("slot") ? idx("slot") : 1);
    case Family::kSigma:
      return make_sigma(space, vector_from_json<R>(field(j, "u"), ctx),
                        vector_from_json<R>(field(j, "v"), ctx));
    case Family::kGLBlock: return make_gl_block(space, matrix_from_json<R>(field(j, "A"), ctx));
    case Family::kAltBlockI:
      return make_alt_block(space, AltKind::kI, matrix_from_json<R>(field(j, "A"), ctx));
    case Family::kAltBlockII:
      return make_alt_block(space, AltKind::kII, matrix_from_json<R>(field(j, "A"), ctx));
    case Family::kConj:
      return make_conj(space, matrix_from_json<R>(field(j, "eps"), ctx),
                       word_from_json<R>(field(j, "inner"), space));
  }
  throw InputError("unknown token kind");
}

template <RingElement R>
Json word_to_json(const Word<R>& w);

template <RingElement R>
Json token_to_json(const Token<R>& t) {
  Json j{{"kind", family_name(t.family)}};
  switch (t.family) {
    case Family::kOe:
      j["i"] = t.i;
      j["j"] = t.j;
      j["z"] = value_to_json(t.scalar);
      break;
    case Family::kF1:
    case Family::kF2:
      j["i"] = t.i;
      j["lambda"] = value_to_json(t.scalar);
      break;
    case Family::kF3:
    case Family::kF4:
    case Family::kF5:
      j["i"] = t.i;
      j["j"] = t.j;
      j["lambda"] = value_to_json(t.scalar);
      break;
    case Family::kEAlpha: j["alpha"] = matrix_to_json(t.map); break;
    case Family::kEBetaStar: j["beta"] = matrix_to_json(t.map); break;
    case Family::kE1W:
    case Family::kE2W:
      j["w"] = vector_to_json(t.v);
      j["slot"] = t.i;
      break;
    case Family::kSigma:
      j["u"] = vector_to_json(t.u);
      j["v"] = vector_to_json(t.v);
      break;
    case Family::kGLBlock:
    case Family::kAltBlockI:
    case Family::kAltBlockII: j["A"] = matrix_to_json(t.map); break;
    case Family::kConj:
      j["eps"] = matrix_to_json(t.map);
      j["inner"] = word_to_json(*t.inner);
      break;
  }
  return j;
}

/// Tokens are read against the word's own "space" if present, else
/// against `fallback`.
template <RingElement R>
Word<R> word_from_json(const Json& j, const AmbientSpace<R>& fallback) {
  AmbientSpace<R> space = j.contains("space") ? space_from_json<R>(j.at("space"), fallback.context())
                                              : fallback;
  Word<R> out(space);
  const Json& tokens = field(j, "tokens");
  if (!tokens.is_array()) throw InputError("tokens must be an array");
  for (const Json& t : tokens) out.push(token_from_json<R>(t, space));
  return out;
}

template <RingElement R>
Json word_to_json(const Word<R>& w) {
  Json tokens = Json::array();
  for (const Token<R>& t : w.tokens) tokens.push_back(token_to_json(t));
  return Json{{"space", space_to_json(w.space)}, {"tokens", tokens}};
}

template <RingElement R>
Json certificate_to_json(const Certificate<R>& c) {
  Json prov = Json::array();
  for (const ProvenanceEntry& p : c.provenance) {
    Json e{{"path", p.path}, {"tag", justification_name(p.tag)}};
    if (!p.note.empty()) e["note"] = p.note;
    prov.push_back(e);
  }
  return Json{{"target", matrix_to_json(c.target)},
              {"word", word_to_json(c.word)},
              {"provenance", prov},
              {"verified", c.verified}};
}

}  // namespace io
}  // namespace orthofactor

#endif  // ORTHOFACTOR_IO_HPP_
