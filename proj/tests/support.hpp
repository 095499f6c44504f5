#pragma once

#include <cyq/base_field.hpp>
#include <cyq/bimodule.hpp>

#include <optional>
#include <random>

namespace cyq::testing {

inline Rational random_rational(std::mt19937& rng, int range = 5) {
  std::uniform_int_distribution<int> num(-range, range), den(1, 3);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline Vec random_vec(std::mt19937& rng, std::size_t n, int range = 5) {
  Vec v(n);
  for (auto& x : v) x = random_rational(rng, range);
  for (auto& x : v) x.canonicalize();
  return v;
}

inline FieldExt rationals() { return FieldExt({0, 1}); }
inline FieldExt gaussian() { return FieldExt({1, 0, 1}); }

/// l = R x R x C modeled as Q x Q x Q(i) with Tr = l1 + l2 + Re(l3).
inline BasePtr species_base() {
  return make_base({rationals(), rationals(), gaussian()}, {1, 1, Rational(1, 2)});
}

inline Vec unit_vec(std::size_t n, std::size_t k, const Rational& c = 1) {
  Vec v(n);
  v.at(k) = c;
  return v;
}

/// V_c of the R-species example: a: 1->2, c: 2->3, b: 3->1 and their duals,
/// with C = Q(i) at vertex 3 acting by rotation.
inline BimodulePtr species_vc(const BasePtr& base) {
  std::vector<Generator> g = {{"a", 0, 1, 0},    {"b", 2, 0, 0},    {"bi", 2, 0, 0},   {"c", 1, 2, 0},
                              {"ic", 1, 2, 0},   {"a*", 1, 0, -1},  {"b*", 0, 2, -1},  {"ib*", 0, 2, -1},
                              {"c*", 2, 1, -1},  {"c*i", 2, 1, -1}};
  const std::size_t n = g.size(), i = 3;
  std::vector<ActionEntry> left = {{i, 3, unit_vec(n, 4)}, {i, 4, unit_vec(n, 3, -1)},
                                   {i, 6, unit_vec(n, 7)}, {i, 7, unit_vec(n, 6, -1)}};
  std::vector<ActionEntry> right = {{i, 1, unit_vec(n, 2)}, {i, 2, unit_vec(n, 1, -1)},
                                    {i, 8, unit_vec(n, 9)}, {i, 9, unit_vec(n, 8, -1)}};
  return make_bimodule(base, std::move(g), std::move(left), std::move(right));
}

}  // namespace cyq::testing

namespace cyq::testing {

/// Random bimodule built from summands K_t (x) K_s (free) and, on matching
/// fields, the diagonal K_s; each summand gets a random degree and a random
/// change of basis.
inline BimodulePtr random_bimodule(std::mt19937& rng, const BasePtr& base, int summands, int lo = -1, int hi = 0) {
  const SemisimpleBase& l = *base;
  std::vector<Generator> gens;
  std::vector<ActionEntry> left, right;
  struct Pending {
    std::size_t first, size;
    std::vector<Matrix> left_ops, right_ops;  // indexed by local factor basis
  };
  std::vector<Pending> blocks;
  std::uniform_int_distribution<std::size_t> pick(0, l.factor_count() - 1);
  std::uniform_int_distribution<int> deg(lo, hi);
  for (int k = 0; k < summands; ++k) {
    const std::size_t s = pick(rng), t = pick(rng);
    const FieldExt &ks = l.factor(s), &kt = l.factor(t);
    const bool diagonal = (ks == kt) && std::uniform_int_distribution<int>(0, 1)(rng) == 1;
    const std::size_t ds = ks.degree(), dt = kt.degree();
    Pending p{gens.size(), diagonal ? ds : ds * dt, {}, {}};
    // Action matrices in the natural basis.
    for (std::size_t u = 0; u < dt; ++u) {
      if (diagonal) {
        p.left_ops.push_back(kt.multiplication_matrix(kt.basis(u)));
      } else {
        Matrix m(p.size, p.size);
        Matrix mu = kt.multiplication_matrix(kt.basis(u));
        for (std::size_t a = 0; a < dt; ++a)
          for (std::size_t b = 0; b < dt; ++b)
            for (std::size_t c = 0; c < ds; ++c) m(a * ds + c, b * ds + c) = mu(a, b);
        p.left_ops.push_back(m);
      }
    }
    for (std::size_t v = 0; v < ds; ++v) {
      if (diagonal) {
        p.right_ops.push_back(ks.multiplication_matrix(ks.basis(v)));
      } else {
        Matrix m(p.size, p.size);
        Matrix mv = ks.multiplication_matrix(ks.basis(v));
        for (std::size_t a = 0; a < dt; ++a)
          for (std::size_t b = 0; b < ds; ++b)
            for (std::size_t c = 0; c < ds; ++c) m(a * ds + b, a * ds + c) = mv(b, c);
        p.right_ops.push_back(m);
      }
    }
    // Random change of basis P: new basis = columns of P.
    Matrix change;
    for (;;) {
      change = Matrix(p.size, p.size);
      for (std::size_t r = 0; r < p.size; ++r)
        for (std::size_t c = 0; c < p.size; ++c) change(r, c) = Rational(std::uniform_int_distribution<int>(-2, 2)(rng));
      if (rank(change) == p.size) break;
    }
    Matrix inv = *inverse(change);
    for (auto& m : p.left_ops) m = inv * m * change;
    for (auto& m : p.right_ops) m = inv * m * change;
    const int d = deg(rng);
    for (std::size_t g = 0; g < p.size; ++g)
      gens.push_back({"m" + std::to_string(gens.size()), s, t, d});
    blocks.push_back(std::move(p));
  }
  const std::size_t n = gens.size();
  for (const auto& p : blocks) {
    const std::size_t s = gens[p.first].source, t = gens[p.first].target;
    for (std::size_t g = 0; g < p.size; ++g) {
      for (std::size_t u = 0; u < p.left_ops.size(); ++u) {
        Vec img(n);
        for (std::size_t r = 0; r < p.size; ++r) img[p.first + r] = p.left_ops[u](r, g);
        left.push_back({l.offset(t) + u, p.first + g, img});
      }
      for (std::size_t v = 0; v < p.right_ops.size(); ++v) {
        Vec img(n);
        for (std::size_t r = 0; r < p.size; ++r) img[p.first + r] = p.right_ops[v](r, g);
        right.push_back({l.offset(s) + v, p.first + g, img});
      }
    }
  }
  return make_bimodule(base, std::move(gens), std::move(left), std::move(right));
}

}  // namespace cyq::testing

#include <cyq/necklace.hpp>
#include <cyq/tensor.hpp>

namespace cyq::testing {

/// Random composable word of exactly `len` letters drawn from `allowed`
/// (all generators when empty); closed when `closed` is set.
inline std::optional<Word> random_word(std::mt19937& rng, const GradedBimodule& v, std::size_t len, bool closed,
                                       const std::vector<Letter>& allowed = {}) {
  std::vector<Letter> pool = allowed;
  if (pool.empty())
    for (Letter g = 0; g < v.size(); ++g) pool.push_back(g);
  if (pool.empty() || len == 0) return std::nullopt;
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::vector<Letter> w{pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]};
    while (w.size() < len) {
      std::vector<Letter> next;
      for (auto g : pool)
        if (v.generator(g).target == v.generator(w.back()).source) next.push_back(g);
      if (next.empty()) break;
      w.push_back(next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)]);
    }
    if (w.size() != len) continue;
    if (closed && v.generator(w.back()).source != v.generator(w.front()).target) continue;
    return Word::of(w);
  }
  return std::nullopt;
}

/// Up to `terms` random closed words of one length with small coefficients.
inline Necklace random_necklace(std::mt19937& rng, const AlgebraPtr& alg, std::size_t len, int terms = 2,
                                const std::vector<Letter>& allowed = {}) {
  Terms t;
  for (int k = 0; k < terms; ++k)
    if (auto w = random_word(rng, alg->bimodule(), len, true, allowed))
      add_term(t, *w, Rational(std::uniform_int_distribution<int>(1, 3)(rng)));
  return Necklace(alg, t);
}

inline TensorElement random_element(std::mt19937& rng, const AlgebraPtr& alg, std::size_t len, int terms = 2) {
  Terms t;
  for (int k = 0; k < terms; ++k)
    if (auto w = random_word(rng, alg->bimodule(), len, false))
      add_term(t, *w, Rational(std::uniform_int_distribution<int>(-3, 3)(rng)));
  return TensorElement(alg, t);
}

/// Double of a random quiver: arrows a_k (degree 0) followed by a_k^* (degree -1),
/// with eta = sum a (x) a^* - a^* (x) a.
struct DoubleQuiver {
  BasePtr base;
  BimodulePtr v;
  std::size_t arrows = 0;
  Terms eta;
};

inline DoubleQuiver random_double_quiver(std::mt19937& rng, std::size_t max_vertices = 3, std::size_t max_arrows = 4) {
  DoubleQuiver q;
  const std::size_t nv = std::uniform_int_distribution<std::size_t>(1, max_vertices)(rng);
  q.base = make_base(std::vector<FieldExt>(nv, rationals()), std::vector<Rational>(nv, Rational(1)));
  q.arrows = std::uniform_int_distribution<std::size_t>(1, max_arrows)(rng);
  std::vector<Generator> g;
  for (std::size_t a = 0; a < q.arrows; ++a) {
    std::uniform_int_distribution<std::size_t> vert(0, nv - 1);
    g.push_back({"a" + std::to_string(a), vert(rng), vert(rng), 0});
  }
  for (std::size_t a = 0; a < q.arrows; ++a) g.push_back({"a" + std::to_string(a) + "*", g[a].target, g[a].source, -1});
  q.v = make_bimodule(q.base, std::move(g));
  for (std::size_t a = 0; a < q.arrows; ++a) {
    const auto x = static_cast<Letter>(a), y = static_cast<Letter>(a + q.arrows);
    add_term(q.eta, Word::of({x, y}), 1);
    add_term(q.eta, Word::of({y, x}), -1);
  }
  return q;
}

/// eta of the R-species example, reproducing the target d(t_i).
inline Terms species_eta() {
  Terms e;
  auto put = [&](Letter u, Letter v, int c) { add_term(e, Word::of({u, v}), c); };
  put(0, 5, 1);
  put(5, 0, -1);
  put(3, 8, 1);
  put(4, 8, 1);
  put(8, 3, -1);
  put(8, 4, -1);
  put(1, 6, 1);
  put(1, 7, 1);
  put(6, 1, -1);
  put(7, 1, -1);
  return e;
}

}  // namespace cyq::testing
