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

// Exact commutative rings in which 2 is a unit: the rationals, Z/N for odd
// N >= 3, and univariate polynomials over either. Every element type carries
// a small context value (its descriptor) and keeps a canonical payload, so
// structural equality is value equality.

#ifndef ORTHOFACTOR_RING_HPP_
#define ORTHOFACTOR_RING_HPP_

#include <boost/multiprecision/cpp_int.hpp>

#include <concepts>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "orthofactor/error.hpp"

namespace orthofactor {

// ---------------------------------------------------------------------------
// Runtime descriptor
// ---------------------------------------------------------------------------

/// Runtime description of a supported ring. Used by the serialization layer
/// and the CLI; the typed element classes below carry the same information
/// in their `Context`.
class RingDescriptor {
 public:
  enum class Kind { kRationals, kModular, kPolynomial };

  static RingDescriptor rationals() { return RingDescriptor(Kind::kRationals, 0, nullptr, 'X'); }

  static RingDescriptor modular(std::int64_t n) {
    if (n < 3 || n % 2 == 0) {
      raise(ErrorCode::kInvalidRing,
            "Z/N requires odd N >= 3 so that 2 is a unit, got N = " + std::to_string(n));
    }
    return RingDescriptor(Kind::kModular, n, nullptr, 'X');
  }

  static RingDescriptor polynomial(const RingDescriptor& base, char variable = 'X') {
    if (base.kind() == Kind::kPolynomial) {
      raise(ErrorCode::kInvalidRing, "polynomial rings nest at most one level");
    }
    return RingDescriptor(Kind::kPolynomial, 0, std::make_shared<RingDescriptor>(base), variable);
  }

  Kind kind() const { return kind_; }
  std::int64_t modulus() const { return modulus_; }
  const RingDescriptor& base() const { return *base_; }
  char variable() const { return variable_; }

  std::string to_string() const {
    switch (kind_) {
      case Kind::kRationals: return "QQ";
      case Kind::kModular: return "Z/" + std::to_string(modulus_);
      case Kind::kPolynomial: return base_->to_string() + "[" + std::string(1, variable_) + "]";
    }
    return "?";
  }

  friend bool operator==(const RingDescriptor& a, const RingDescriptor& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::kRationals: return true;
      case Kind::kModular: return a.modulus_ == b.modulus_;
      case Kind::kPolynomial: return a.variable_ == b.variable_ && *a.base_ == *b.base_;
    }
    return false;
  }

 private:
  RingDescriptor(Kind kind, std::int64_t modulus, std::shared_ptr<const RingDescriptor> base,
                 char variable)
      : kind_(kind), modulus_(modulus), base_(std::move(base)), variable_(variable) {}

  Kind kind_;
  std::int64_t modulus_;
  std::shared_ptr<const RingDescriptor> base_;
  char variable_;
};

// ---------------------------------------------------------------------------
// Integer helpers
// ---------------------------------------------------------------------------

namespace detail {

inline std::int64_t floor_mod(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t n) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % n);
}

/// Extended Euclid: returns g = gcd(a, b) >= 0 and x, y with a*x + b*y = g.
inline std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Prime-power factorization in increasing prime order.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

struct RationalContext {
  RingDescriptor descriptor() const { return RingDescriptor::rationals(); }
  friend bool operator==(const RationalContext&, const RationalContext&) { return true; }
};

class Rational {
 public:
  using Context = RationalContext;
  using Value = boost::multiprecision::cpp_rational;
  using Integer = boost::multiprecision::cpp_int;

  Rational() = default;
  explicit Rational(Value v) : v_(std::move(v)) {}

  static Rational zero(const Context&) { return Rational(); }
  static Rational one(const Context&) { return Rational(Value(1)); }
  static Rational from_int(const Context&, std::int64_t k) { return Rational(Value(k)); }
  static Rational from_fraction(const Integer& p, const Integer& q) {
    if (q == 0) raise(ErrorCode::kNonUnit, "zero denominator");
    return q < 0 ? Rational(Value(Integer(-p), Integer(-q))) : Rational(Value(p, q));
  }

  Context context() const { return {}; }
  const Value& value() const { return v_; }
  Integer numerator() const { return boost::multiprecision::numerator(v_); }
  Integer denominator() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_ == 0; }
  bool is_unit() const { return v_ != 0; }

  Rational inverse() const {
    if (v_ == 0) raise(ErrorCode::kNonUnit, "0 is not invertible in QQ");
    return Rational(Value(1) / v_);
  }
  Rational halve() const { return Rational(v_ / 2); }

  std::string to_string() const {
    if (denominator() == 1) return numerator().str();
    return numerator().str() + "/" + denominator().str();
  }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.v_ + b.v_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.v_ - b.v_); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.v_ * b.v_); }
  friend Rational operator-(const Rational& a) { return Rational(-a.v_); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }

 private:
  Value v_;
};

// ---------------------------------------------------------------------------
// Z/N, N odd
// ---------------------------------------------------------------------------

struct ModContext {
  std::int64_t modulus = 3;

  static ModContext make(std::int64_t n) {
    RingDescriptor::modular(n);  // validates
    return ModContext{n};
  }
  RingDescriptor descriptor() const { return RingDescriptor::modular(modulus); }
  bool is_field() const { return detail::is_prime(modulus); }
  friend bool operator==(const ModContext& a, const ModContext& b) { return a.modulus == b.modulus; }
};

/// Residue class stored as its least non-negative representative.
class ModInt {
 public:
  using Context = ModContext;

  ModInt() = default;
  ModInt(std::int64_t value, const Context& ctx)
      : v_(detail::floor_mod(value, ctx.modulus)), n_(ctx.modulus) {}

  static ModInt zero(const Context& ctx) { return ModInt(0, ctx); }
  static ModInt one(const Context& ctx) { return ModInt(1, ctx); }
  static ModInt from_int(const Context& ctx, std::int64_t k) { return ModInt(k, ctx); }

  Context context() const { return Context{n_}; }
  std::int64_t value() const { return v_; }
  std::int64_t modulus() const { return n_; }

  bool is_zero() const { return v_ == 0; }
  bool is_unit() const { return std::gcd(v_, n_) == 1; }

  ModInt inverse() const {
    std::int64_t x = 0, y = 0;
    if (detail::ext_gcd(v_, n_, x, y) != 1) {
      raise(ErrorCode::kNonUnit,
            std::to_string(v_) + " is not a unit in Z/" + std::to_string(n_));
    }
    return ModInt(x, Context{n_});
  }
  // (N + 1) / 2 is the inverse of 2 for odd N.
  ModInt halve() const { return ModInt(detail::mul_mod(v_, (n_ + 1) / 2, n_), Context{n_}); }

  std::string to_string() const { return std::to_string(v_); }

  friend ModInt operator+(const ModInt& a, const ModInt& b) {
    check(a, b);
    std::int64_t s = a.v_ + b.v_;
    return raw(s >= a.n_ ? s - a.n_ : s, a.n_);
  }
  friend ModInt operator-(const ModInt& a, const ModInt& b) {
    check(a, b);
    std::int64_t s = a.v_ - b.v_;
    return raw(s < 0 ? s + a.n_ : s, a.n_);
  }
  friend ModInt operator*(const ModInt& a, const ModInt& b) {
    check(a, b);
    return raw(detail::mul_mod(a.v_, b.v_, a.n_), a.n_);
  }
  friend ModInt operator-(const ModInt& a) { return raw(a.v_ == 0 ? 0 : a.n_ - a.v_, a.n_); }
  friend bool operator==(const ModInt& a, const ModInt& b) { return a.v_ == b.v_ && a.n_ == b.n_; }

 private:
  static ModInt raw(std::int64_t v, std::int64_t n) {
    ModInt r;
    r.v_ = v;
    r.n_ = n;
    return r;
  }
  static void check(const ModInt& a, const ModInt& b) {
    if (a.n_ != b.n_) {
      raise(ErrorCode::kDescriptorMismatch, "Z/" + std::to_string(a.n_) + " vs Z/" +
                                                std::to_string(b.n_));
    }
  }

  std::int64_t v_ = 0;
  std::int64_t n_ = 3;
};

// ---------------------------------------------------------------------------
// Univariate polynomials
// ---------------------------------------------------------------------------

template <class B>
class Poly;

template <class T>
struct is_poly : std::false_type {};
template <class B>
struct is_poly<Poly<B>> : std::true_type {};
template <class T>
inline constexpr bool is_poly_v = is_poly<T>::value;

template <class B>
struct PolyContext {
  typename B::Context base;
  char variable = 'X';

  RingDescriptor descriptor() const {
    return RingDescriptor::polynomial(base.descriptor(), variable);
  }
  friend bool operator==(const PolyContext& a, const PolyContext& b) {
    return a.variable == b.variable && a.base == b.base;
  }
};

/// Polynomial in one variable over Rational or ModInt. Coefficients are
/// stored constant term first with a nonzero leading coefficient; the zero
/// polynomial has no coefficients.
template <class B>
class Poly {
  static_assert(!is_poly_v<B>, "polynomial rings nest at most one level");

 public:
  using Base = B;
  using Context = PolyContext<B>;

  Poly() = default;
  Poly(std::vector<B> coeffs, const Context& ctx) : c_(std::move(coeffs)), ctx_(ctx) {
    for (const B& b : c_) {
      if (!(b.context() == ctx_.base)) raise(ErrorCode::kDescriptorMismatch, "coefficient ring");
    }
    trim();
  }

  static Poly zero(const Context& ctx) { return Poly({}, ctx); }
  static Poly one(const Context& ctx) { return constant(B::one(ctx.base), ctx); }
  static Poly from_int(const Context& ctx, std::int64_t k) {
    return constant(B::from_int(ctx.base, k), ctx);
  }
  static Poly constant(const B& b, const Context& ctx) { return Poly({b}, ctx); }
  static Poly variable(const Context& ctx) {
    return Poly({B::zero(ctx.base), B::one(ctx.base)}, ctx);
  }

  Context context() const { return ctx_; }
  const std::vector<B>& coefficients() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  B coefficient(std::size_t k) const { return k < c_.size() ? c_[k] : B::zero(ctx_.base); }

  bool is_zero() const { return c_.empty(); }

  /// Units of A[X] for commutative A: the constant term is a unit of A and
  /// every higher coefficient is nilpotent.
  bool is_unit() const {
    if (c_.empty() || !c_[0].is_unit()) return false;
    for (std::size_t k = 1; k < c_.size(); ++k) {
      if (!is_nilpotent(c_[k])) return false;
    }
    return true;
  }

  Poly inverse() const {
    if (!is_unit()) raise(ErrorCode::kNonUnit, to_string() + " is not a unit");
    // Newton iteration x <- x(2 - a x); terminates because a = c0(1 + nilpotent).
    Poly x = constant(c_[0].inverse(), ctx_);
    const Poly two = from_int(ctx_, 2);
    for (int iter = 0; iter < 64; ++iter) {
      Poly e = *this * x;
      if (e == one(ctx_)) return x;
      x = x * (two - e);
    }
    raise(ErrorCode::kInternalInconsistency, "polynomial inverse did not converge");
  }

  Poly halve() const {
    std::vector<B> out;
    out.reserve(c_.size());
    for (const B& b : c_) out.push_back(b.halve());
    return Poly(std::move(out), ctx_);
  }

  /// Substitution X := t.
  B eval(const B& t) const {
    if (!(t.context() == ctx_.base)) raise(ErrorCode::kDescriptorMismatch, "poly_eval base ring");
    B acc = B::zero(ctx_.base);
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * t + c_[k];
    return acc;
  }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += c_[k].to_string();
      if (k >= 1) s += std::string("*") + ctx_.variable;
      if (k >= 2) s += "^" + std::to_string(k);
    }
    return s;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    check(a, b);
    std::vector<B> out(std::max(a.c_.size(), b.c_.size()), B::zero(a.ctx_.base));
    for (std::size_t k = 0; k < a.c_.size(); ++k) out[k] = out[k] + a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) out[k] = out[k] + b.c_[k];
    return Poly(std::move(out), a.ctx_);
  }
  friend Poly operator-(const Poly& a) {
    std::vector<B> out;
    out.reserve(a.c_.size());
    for (const B& b : a.c_) out.push_back(-b);
    return Poly(std::move(out), a.ctx_);
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    check(a, b);
    if (a.c_.empty() || b.c_.empty()) return zero(a.ctx_);
    std::vector<B> out(a.c_.size() + b.c_.size() - 1, B::zero(a.ctx_.base));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
    }
    return Poly(std::move(out), a.ctx_);
  }
  friend bool operator==(const Poly& a, const Poly& b) {
    return a.ctx_ == b.ctx_ && a.c_ == b.c_;
  }

 private:
  static void check(const Poly& a, const Poly& b) {
    if (!(a.ctx_ == b.ctx_)) raise(ErrorCode::kDescriptorMismatch, "polynomial rings differ");
  }
  static bool is_nilpotent(const B& b) {
    if constexpr (std::is_same_v<B, ModInt>) {
      // b is nilpotent mod N iff every prime divisor of N divides b.
      for (auto [p, e] : detail::factorize(b.modulus())) {
        if (b.value() % p != 0) return false;
      }
      return true;
    } else {
      return b.is_zero();
    }
  }
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  std::vector<B> c_;
  Context ctx_{};
};

// ---------------------------------------------------------------------------
// Concept and generic helpers
// ---------------------------------------------------------------------------

template <class R>
concept RingElement = std::equality_comparable<R> && requires(const R a, const R b) {
  typename R::Context;
  { a + b } -> std::same_as<R>;
  { a - b } -> std::same_as<R>;
  { a * b } -> std::same_as<R>;
  { -a } -> std::same_as<R>;
  { a.inverse() } -> std::same_as<R>;
  { a.halve() } -> std::same_as<R>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.is_unit() } -> std::convertible_to<bool>;
  { a.context() } -> std::same_as<typename R::Context>;
  { a.to_string() } -> std::convertible_to<std::string>;
  { R::zero(a.context()) } -> std::same_as<R>;
  { R::one(a.context()) } -> std::same_as<R>;
  { R::from_int(a.context(), std::int64_t{}) } -> std::same_as<R>;
};

static_assert(RingElement<Rational>);
static_assert(RingElement<ModInt>);
static_assert(RingElement<Poly<Rational>>);
static_assert(RingElement<Poly<ModInt>>);

template <RingElement R>
R halve(const R& x) {
  return x.halve();
}

/// Whether the ring is a field, so that Gaussian elimination is available.
template <RingElement R>
bool is_field(const typename R::Context& ctx) {
  if constexpr (std::is_same_v<R, Rational>) {
    return true;
  } else if constexpr (std::is_same_v<R, ModInt>) {
    return ctx.is_field();
  } else {
    return false;
  }
}

}  // namespace orthofactor

#endif  // ORTHOFACTOR_RING_HPP_
