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

// Command-line front end. `run` takes the argument vector without the
// program name and writes one JSON document to `out`. Exit status: 0 on
// success, 1 on a library error, 2 on malformed input.

#ifndef ORTHOFACTOR_CLI_HPP_
#define ORTHOFACTOR_CLI_HPP_

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orthofactor/error.hpp"
#include "orthofactor/factor.hpp"
#include "orthofactor/generators.hpp"
#include "orthofactor/io.hpp"
#include "orthofactor/quadspace.hpp"
#include "orthofactor/relgroup.hpp"
#include "orthofactor/ring.hpp"

namespace orthofactor::cli {

struct Options {
  std::string command;
  std::string ring = "qq";
  std::optional<std::size_t> dim;
  std::string space;
  std::string input;
  std::string output;
  std::optional<std::size_t> cap;
  std::optional<std::uint64_t> seed;
  std::string kind;
  std::string family;
};

/// --cap, then ORTHOFACTOR_CAP, then the library default.
inline std::size_t closure_cap(const Options& opts) {
  if (opts.cap) return *opts.cap;
  if (const char* env = std::getenv("ORTHOFACTOR_CAP")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::logic_error&) {
      throw InputError("ORTHOFACTOR_CAP must be a positive integer");
    }
  }
  return kDefaultClosureCap;
}

namespace detail {

template <class T>
struct Tag {
  using type = T;
};

/// Inline JSON when the argument starts with '{' or '[', else a file path.
inline Json load_json(const std::string& arg) {
  if (arg.empty()) return Json::object();
  std::string text;
  if (arg[0] == '{' || arg[0] == '[') {
    text = arg;
  } else {
    std::ifstream in(arg);
    if (!in) throw InputError("cannot open '" + arg + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

/// First ring named by the input, its space, its word, or the --space
/// file; otherwise --ring.
inline RingDescriptor detect_ring(const Json& input, const Json& space, const Options& opts) {
  if (input.contains("ring")) return io::ring_from_json(input.at("ring"));
  for (const char* key : {"space", "word"}) {
    if (!input.contains(key)) continue;
    const Json& sub = input.at(key);
    if (sub.contains("ring")) return io::ring_from_json(sub.at("ring"));
    if (sub.contains("space") && sub.at("space").contains("ring")) {
      return io::ring_from_json(sub.at("space").at("ring"));
    }
  }
  if (space.contains("ring")) return io::ring_from_json(space.at("ring"));
  return io::ring_from_json(Json(opts.ring));
}

template <class F>
Json with_scalar_ring(const RingDescriptor& d, F&& f) {
  switch (d.kind()) {
    case RingDescriptor::Kind::kRationals: return f(Tag<Rational>{}, io::context_from<Rational>(d));
    case RingDescriptor::Kind::kModular: return f(Tag<ModInt>{}, io::context_from<ModInt>(d));
    case RingDescriptor::Kind::kPolynomial: break;
  }
  raise(ErrorCode::kUnsupportedRing, "this command does not accept polynomial rings");
}

template <class F>
Json with_any_ring(const RingDescriptor& d, F&& f) {
  if (d.kind() != RingDescriptor::Kind::kPolynomial) return with_scalar_ring(d, f);
  if (d.base().kind() == RingDescriptor::Kind::kRationals) {
    return f(Tag<Poly<Rational>>{}, io::context_from<Poly<Rational>>(d));
  }
  return f(Tag<Poly<ModInt>>{}, io::context_from<Poly<ModInt>>(d));
}

template <RingElement R>
AmbientSpace<R> resolve_space(const Json& input, const Json& space_arg, const Options& opts,
                              const typename R::Context& ctx) {
  if (input.contains("space")) return io::space_from_json<R>(input.at("space"), ctx);
  if (!space_arg.empty()) return io::space_from_json<R>(space_arg, ctx);
  if (opts.dim) return AmbientSpace<R>::standard(*opts.dim, ctx);
  throw InputError("no space given: pass --dim, --space, or a \"space\" field");
}

template <RingElement R>
R random_element(std::mt19937_64& rng, const typename R::Context& ctx) {
  if constexpr (std::is_same_v<R, ModInt>) {
    return ModInt(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(ctx.modulus)), ctx);
  } else {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
    return Rational::from_fraction(num(rng), den(rng));
  }
}

template <RingElement R>
Vec<R> random_vector(std::mt19937_64& rng, std::size_t n, const typename R::Context& ctx) {
  Vec<R> v;
  for (std::size_t k = 0; k < n; ++k) v.push_back(random_element<R>(rng, ctx));
  return v;
}

/// Random input for `factor --kind K --seed S`.
template <RingElement R>
Json random_factor_input(const std::string& kind, std::uint64_t seed, const AmbientSpace<R>& space) {
  std::mt19937_64 rng(seed);
  const auto ctx = space.context();
  if (kind == "e1" || kind == "e2") {
    return Json{{"w", io::vector_to_json(random_vector<R>(rng, space.q_rank(), ctx))}};
  }
  if (kind == "split") {
    Matrix<R> a(space.hyperbolic_rank(), space.q_rank(), ctx);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = random_element<R>(rng, ctx);
    return Json{{"alpha", io::matrix_to_json(a)}};
  }
  if (kind == "sigma-full" || kind == "sigma") {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      Vec<R> u = random_vector<R>(rng, space.dim(), ctx);
      if (!space.quad(u).is_zero() || !is_unimodular(u)) continue;
      Vec<R> v = random_vector<R>(rng, space.dim(), ctx);
      Vec<R> gu = mat_vec(space.gram(), u);
      std::size_t k = 0;
      while (k < gu.size() && !gu[k].is_unit()) ++k;
      if (k == gu.size()) continue;
      v[k] = v[k] - space.bilinear(u, v) * gu[k].inverse();
      return Json{{"u", io::vector_to_json(u)}, {"v", io::vector_to_json(v)}};
    }
    raise(ErrorCode::kSearchExhausted, "no random isotropic unimodular vector found");
  }
  throw InputError("--seed supports kinds e1, e2, split, sigma-full");
}

template <RingElement R>
Json certificate_json(const Certificate<R>& c) {
  return io::certificate_to_json(c);
}

template <RingElement R>
Json factor_token(const Token<R>& t, const AmbientSpace<R>& space) {
  const auto ctx = space.context();
  switch (t.family) {
    case Family::kE1W:
    case Family::kE2W:
      if (t.i != 1) raise(ErrorCode::kUnsupportedShape, "oe factorization uses slot 1");
      return certificate_json(factor_e_to_oe(t.family == Family::kE1W ? 1 : 2, t.v, space));
    case Family::kOe: return certificate_json(factor_oe_to_transvections(t.i, t.j, t.scalar, space));
    case Family::kEAlpha:
    case Family::kEBetaStar:
      return certificate_json(split_dser(t.map, t.family == Family::kEBetaStar, space));
    case Family::kF1:
    case Family::kF2: return certificate_json(odd_correspondence(t, space));
    case Family::kF3: {
      Matrix<R> a = Matrix<R>::identity((space.dim() - 1) / 2, ctx);
      a(t.i - 1, t.j - 1) = t.scalar;
      return certificate_json(elementarize_gl_block(a, space));
    }
    case Family::kF4:
    case Family::kF5: {
      Matrix<R> a((space.dim() - 1) / 2, (space.dim() - 1) / 2, ctx);
      a(t.i - 1, t.j - 1) = t.scalar;
      a(t.j - 1, t.i - 1) = -t.scalar;
      return certificate_json(
          elementarize_alt_block(a, t.family == Family::kF4 ? AltKind::kI : AltKind::kII, space));
    }
    case Family::kGLBlock: return certificate_json(elementarize_gl_block(t.map, space));
    case Family::kAltBlockI: return certificate_json(elementarize_alt_block(t.map, AltKind::kI, space));
    case Family::kAltBlockII:
      return certificate_json(elementarize_alt_block(t.map, AltKind::kII, space));
    case Family::kSigma:
      if constexpr (std::is_same_v<R, ModInt>) {
        return certificate_json(factor_sigma_full(t.u, t.v, space));
      } else {
        return certificate_json(factor_sigma_axis(t.u, t.v, space));
      }
    case Family::kConj: break;
  }
  raise(ErrorCode::kUnsupportedToken, std::string("no factorization for ") + family_name(t.family));
}

template <RingElement R>
Json factor_command(const Options& opts, Json input, const Json& space_arg,
                    const typename R::Context& ctx) {
  std::string kind = opts.kind;
  if (kind.empty() && !input.contains("token")) {
    throw InputError("factor needs --kind or a \"token\" field");
  }
  if (kind.empty() || (kind == "odd" && input.contains("token"))) {
    AmbientSpace<R> space = resolve_space<R>(input, space_arg, opts, ctx);
    return factor_token(io::token_from_json<R>(input.at("token"), space), space);
  }
  if ((kind == "e1" || kind == "e2") && !input.contains("space") && space_arg.empty() &&
      !opts.dim && input.contains("w")) {
    input["space"] = Json{{"standard", input.at("w").size() + 2}};
  }
  AmbientSpace<R> space = resolve_space<R>(input, space_arg, opts, ctx);
  if (opts.seed) input.update(random_factor_input<R>(kind, *opts.seed, space));
  auto vec = [&](const char* key) { return io::vector_from_json<R>(io::field(input, key), ctx); };
  auto mat = [&](const char* key) { return io::matrix_from_json<R>(io::field(input, key), ctx); };
  if (kind == "e1") return certificate_json(factor_e1_to_oe(vec("w"), space));
  if (kind == "e2") return certificate_json(factor_e2_to_oe(vec("w"), space));
  if (kind == "oe-commutator") {
    return certificate_json(factor_oe_to_transvections(
        io::as_index(io::field(input, "i"), "i"), io::as_index(io::field(input, "j"), "j"),
        io::value_from_json<R>(io::field(input, "z"), ctx), space));
  }
  if (kind == "split") {
    const bool dual = input.contains("beta");
    return certificate_json(split_dser(mat(dual ? "beta" : "alpha"), dual, space));
  }
  if (kind == "sigma-axis") return certificate_json(factor_sigma_axis(vec("u"), vec("v"), space));
  if (kind == "sigma-full") {
    if constexpr (std::is_same_v<R, ModInt>) {
      return certificate_json(factor_sigma_full(vec("u"), vec("v"), space));
    } else {
      raise(ErrorCode::kUnsupportedRing, "full sigma factorization runs over Z/p");
    }
  }
  if (kind == "odd") return certificate_json(odd_correspondence(io::token_from_json<R>(input, space), space));
  if (kind == "gl") return certificate_json(elementarize_gl_block(mat("A"), space));
  if (kind == "alt") {
    const std::string type = input.contains("type") ? input.at("type").get<std::string>() : "I";
    if (type != "I" && type != "II") throw InputError("alt type must be I or II");
    return certificate_json(elementarize_alt_block(mat("A"), type == "I" ? AltKind::kI : AltKind::kII, space));
  }
  throw InputError("unknown factor kind '" + kind + "'");
}

inline Json closure_report(const ModContext& ctx, std::size_t dim, const std::string& family,
                           const ClosureResult& r) {
  return Json{{"ring", io::ring_to_json(ctx.descriptor())},
              {"dim", dim},
              {"family", family},
              {"order", r.order},
              {"hash", r.hash_hex()}};
}

inline Json equality_case(const ModContext& ctx, std::size_t dim, std::size_t cap) {
  Json families = Json::array();
  bool equal = true;
  std::optional<ClosureResult> first;
  for (const std::string& family : closure_families()) {
    ClosureResult r = closure_enumerate(family_generators(family, dim, ctx), cap);
    if (first && (first->order != r.order || first->elements != r.elements)) equal = false;
    families.push_back(Json{{"family", family}, {"order", r.order}, {"hash", r.hash_hex()}});
    if (!first) first = std::move(r);
  }
  return Json{{"ring", io::ring_to_json(ctx.descriptor())},
              {"dim", dim},
              {"families", families},
              {"equal", equal}};
}

inline Json dispatch(const Options& opts) {
  Json input = load_json(opts.input);
  Json space_arg = load_json(opts.space);
  RingDescriptor ring = detect_ring(input, space_arg, opts);
  const std::string& cmd = opts.command;

  if (cmd == "check-orth") {
    return with_any_ring(ring, [&](auto tag, const auto& ctx) -> Json {
      using R = typename decltype(tag)::type;
      AmbientSpace<R> space = resolve_space<R>(input, space_arg, opts, ctx);
      Matrix<R> m = io::matrix_from_json<R>(io::field(input, "matrix"), ctx);
      return Json{{"orthogonal", is_orthogonal(m, space)}};
    });
  }
  if (cmd == "gen") {
    return with_any_ring(ring, [&](auto tag, const auto& ctx) -> Json {
      using R = typename decltype(tag)::type;
      AmbientSpace<R> space = resolve_space<R>(input, space_arg, opts, ctx);
      Token<R> t = io::token_from_json<R>(io::field(input, "token"), space);
      return Json{{"space", io::space_to_json(space)},
                  {"token", io::token_to_json(t)},
                  {"matrix", io::matrix_to_json(t.matrix)}};
    });
  }
  if (cmd == "factor") {
    return with_scalar_ring(ring, [&](auto tag, const auto& ctx) -> Json {
      using R = typename decltype(tag)::type;
      return factor_command<R>(opts, input, space_arg, ctx);
    });
  }
  if (cmd == "verify-word") {
    return with_any_ring(ring, [&](auto tag, const auto& ctx) -> Json {
      using R = typename decltype(tag)::type;
      AmbientSpace<R> fallback = input.at("word").contains("space")
                                     ? io::space_from_json<R>(input.at("word").at("space"), ctx)
                                     : resolve_space<R>(input, space_arg, opts, ctx);
      Word<R> word = io::word_from_json<R>(io::field(input, "word"), fallback);
      Matrix<R> product = word_eval(word);
      Json out{{"product", io::matrix_to_json(product)}, {"equals_target", nullptr}};
      if (input.contains("target")) {
        out["equals_target"] = product == io::matrix_from_json<R>(input.at("target"), ctx);
      }
      return out;
    });
  }
  if (cmd == "closure") {
    ModContext ctx = io::context_from<ModInt>(ring);
    const std::size_t cap = closure_cap(opts);
    if (input.contains("generators")) {
      std::vector<Matrix<ModInt>> gens;
      for (const Json& g : input.at("generators")) gens.push_back(io::matrix_from_json<ModInt>(g, ctx));
      if (gens.empty()) throw InputError("generators must be non-empty");
      return closure_report(ctx, gens[0].rows(), "custom", closure_enumerate(gens, cap));
    }
    if (!opts.dim || opts.family.empty()) throw InputError("closure needs --family and --dim");
    return closure_report(ctx, *opts.dim, opts.family,
                          closure_enumerate(family_generators(opts.family, *opts.dim, ctx), cap));
  }
  if (cmd == "lift") {
    return with_scalar_ring(ring, [&](auto tag, const auto& ctx) -> Json {
      using R = typename decltype(tag)::type;
      AmbientSpace<R> fallback = resolve_space<R>(input.at("word"), space_arg, opts, ctx);
      Word<R> word = io::word_from_json<R>(io::field(input, "word"), fallback);
      Word<Poly<R>> lifted = homotopy_lift(word);
      Matrix<Poly<R>> beta = word_eval(lifted);
      return Json{{"lifted", io::word_to_json(lifted)},
                  {"eval_at_0_identity", poly_eval(beta, R::zero(ctx)).is_identity()},
                  {"eval_at_1_matches", poly_eval(beta, R::one(ctx)) == word_eval(word)}};
    });
  }
  if (cmd == "localize") {
    ModContext ctx = io::context_from<ModInt>(ring);
    AmbientSpace<ModInt> fallback = resolve_space<ModInt>(input.at("word"), space_arg, opts, ctx);
    Word<ModInt> word = io::word_from_json<ModInt>(io::field(input, "word"), fallback);
    Json comps = Json::array();
    std::vector<Matrix<ModInt>> parts;
    for (const LocalComponent& c : crt_localize(word)) {
      comps.push_back(Json{{"modulus", c.modulus}, {"word", io::word_to_json(c.word)}});
      parts.push_back(word_eval(c.word));
    }
    return Json{{"components", comps}, {"commutes", crt_reconstruct(parts) == word_eval(word)}};
  }
  if (cmd == "equality-report") {
    const std::size_t cap = closure_cap(opts);
    Json cases = Json::array();
    if (opts.dim) {
      cases.push_back(equality_case(io::context_from<ModInt>(ring), *opts.dim, cap));
    } else {
      for (auto [p, d] : std::vector<std::pair<std::int64_t, std::size_t>>{{3, 3}, {3, 4}, {3, 5}, {5, 3}}) {
        cases.push_back(equality_case(ModContext::make(p), d, cap));
      }
    }
    bool all = true;
    for (const Json& c : cases) all = all && c.at("equal").get<bool>();
    return Json{{"cases", cases}, {"all_equal", all}};
  }
  throw InputError("unknown command '" + cmd + "'");
}

inline Json error_json(const std::string& name, const std::string& detail) {
  return Json{{"error", name}, {"detail", detail}};
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opts;
  CLI::App app{"Exact orthogonal-group generators, factorizations and closure oracles"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"check-orth", "test T^T G T = G for a matrix"},
      {"gen", "realize the matrix of a generator token"},
      {"factor", "factor a transformation into a verified word"},
      {"verify-word", "evaluate a word and compare with a target"},
      {"closure", "enumerate the group generated by a family"},
      {"lift", "lift a sigma word to R[X] and check its endpoints"},
      {"localize", "reduce a word over Z/N to its prime-power components"},
      {"equality-report", "compare closures of the generator families"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--ring", opts.ring, "qq or mod:N");
    sub->add_option("--dim", opts.dim, "dimension of the standard space");
    sub->add_option("--space", opts.space, "space JSON file or inline JSON");
    sub->add_option("--input", opts.input, "input JSON file or inline JSON");
    sub->add_option("--output", opts.output, "write the report here instead of stdout");
    sub->add_option("--cap", opts.cap, "closure size cap");
    sub->add_option("--seed", opts.seed, "seed for a random input");
    sub->add_option("--kind", opts.kind,
                    "factor kind: e1, e2, oe-commutator, split, sigma-axis, sigma-full, odd, gl, alt");
    sub->add_option("--family", opts.family, "closure family: elementary, etrans, dser");
    sub->callback([&opts, n = name] { opts.command = n; });
  }

  Json report;
  int status = 0;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    report = detail::dispatch(opts);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    report = detail::error_json("MalformedInput", e.what());
    status = 2;
  } catch (const Error& e) {
    report = detail::error_json(std::string(e.name()), e.what());
    status = 1;
  } catch (const InputError& e) {
    report = detail::error_json("MalformedInput", e.what());
    status = 2;
  } catch (const Json::exception& e) {
    report = detail::error_json("MalformedInput", e.what());
    status = 2;
  }
  const std::string text = report.dump(2) + "\n";
  if (!opts.output.empty() && status == 0) {
    std::ofstream file(opts.output);
    if (!file) {
      err << "cannot write '" << opts.output << "'\n";
      return 2;
    }
    file << text;
  } else {
    out << text;
  }
  return status;
}

}  // namespace orthofactor::cli

#endif  // ORTHOFACTOR_CLI_HPP_
