#include "support.hpp"

#include <cyq/tensor.hpp>

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace cyq;
using namespace cyq::testing;

namespace {

AlgebraPtr one_loop(std::size_t lmax) {
  auto base = make_base({rationals()}, {1});
  return make_tensor_algebra(make_bimodule(base, {{"x", 0, 0, 0}}), lmax);
}

TensorElement gen(const AlgebraPtr& alg, const std::string& name) {
  return TensorElement::generator(alg, static_cast<Letter>(*alg->bimodule().find(name)));
}

Vec gaussian_at_c(const SemisimpleBase& l, int re, int im) {
  Vec v(l.dim());
  v[2] = re;
  v[3] = im;
  return v;
}

// Dimension of the span of a family of tensor elements, via a dense rank.
std::size_t span_dim(const std::vector<TensorElement>& xs) {
  std::map<Word, std::size_t> col;
  for (const auto& x : xs)
    for (const auto& [w, c] : x.terms()) col.try_emplace(w, col.size());
  if (col.empty()) return 0;
  Matrix m(xs.size(), col.size());
  for (std::size_t r = 0; r < xs.size(); ++r)
    for (const auto& [w, c] : xs[r].terms()) m(r, col.at(w)) = c;
  return rank(m);
}

}  // namespace

TEST(Tensor, UnitIsNeutral) {
  auto alg = one_loop(3);
  auto x = gen(alg, "x");
  auto one = TensorElement::one(alg);
  EXPECT_EQ(x * one, x);
  EXPECT_EQ(one * x, x);
}

TEST(Tensor, OneLoopTruncation) {
  auto alg3 = one_loop(3);
  auto x = gen(alg3, "x");
  auto x3 = (x * x) * x;
  EXPECT_FALSE(x3.truncated());
  EXPECT_EQ(x3.terms(), (Terms{{Word::of({0, 0, 0}), Rational(1)}}));

  auto alg2 = one_loop(2);
  auto y = gen(alg2, "x");
  auto y3 = (y * y) * y;
  EXPECT_TRUE(y3.is_zero());
  EXPECT_TRUE(y3.truncated());
}

TEST(Tensor, SpeciesCompositionFollowsQuiver) {
  auto base = species_base();
  auto alg = make_tensor_algebra(species_vc(base), 4);
  auto a = gen(alg, "a"), b = gen(alg, "b"), c = gen(alg, "c");
  EXPECT_FALSE((c * a).is_zero());
  EXPECT_TRUE((a * a).is_zero());
  EXPECT_FALSE((a * b * c).is_zero());
  EXPECT_TRUE((a * c).is_zero());
  EXPECT_EQ(*(a * b * c).degree(), 0);
  EXPECT_EQ(alg->source(Word::of({0, 1, 3})), 1u);
  EXPECT_EQ(alg->target(Word::of({0, 1, 3})), 1u);
}

TEST(Tensor, ScalarsMoveAcrossComplexJunction) {
  const auto base = species_base();
  auto alg = make_tensor_algebra(species_vc(base), 4);
  auto b = gen(alg, "b"), c = gen(alg, "c"), bi = gen(alg, "bi"), ic = gen(alg, "ic");
  const Vec i = gaussian_at_c(*base, 0, 1);
  EXPECT_EQ(b.act_right(i), bi);
  EXPECT_EQ(c.act_left(i), ic);
  // (b i) c = b (i c), with b ic the surviving basis word.
  EXPECT_EQ(bi * c, b * ic);
  EXPECT_EQ((bi * c).terms(), (Terms{{Word::of({1, 4}), Rational(1)}}));
  // (bi)(ic) = b i^2 c = -b c.
  EXPECT_EQ(bi * ic, Rational(-1) * (b * c));
}

TEST(Tensor, NonComposableWordRejected) {
  auto base = species_base();
  auto alg = make_tensor_algebra(species_vc(base), 4);
  EXPECT_THROW(TensorElement(alg, Terms{{Word::of({0, 0}), Rational(1)}}), ConstructionError);
}

TEST(Tensor, MixedAlgebrasRejected) {
  auto a1 = one_loop(3), a2 = one_loop(3);
  EXPECT_THROW(gen(a1, "x") * gen(a2, "x"), ConstructionError);
}

TEST(Tensor, FormatIsReadable) {
  auto base = species_base();
  auto alg = make_tensor_algebra(species_vc(base), 4);
  auto x = gen(alg, "b") * gen(alg, "c") - Rational(1, 2) * (gen(alg, "b") * gen(alg, "ic"));
  EXPECT_EQ(x.str(), "[b c] - 1/2*[b ic]");
  EXPECT_EQ(TensorElement::zero(alg).str(), "0");
  EXPECT_EQ(TensorElement::idempotent(alg, 2).str(), "[e3]");
}

TEST(TensorProperty, ProductIsAssociative) {
  std::mt19937 rng(11);
  auto base = species_base();
  auto alg = make_tensor_algebra(species_vc(base), 6);
  for (int trial = 0; trial < 60; ++trial) {
    auto x = random_element(rng, alg, 1 + rng() % 2);
    auto y = random_element(rng, alg, 1 + rng() % 2);
    auto z = random_element(rng, alg, 1 + rng() % 2);
    ASSERT_EQ((x * y) * z, x * (y * z)) << "trial " << trial;
  }
}

TEST(TensorProperty, ScalarsAreBalanced) {
  std::mt19937 rng(12);
  auto base = species_base();
  auto alg = make_tensor_algebra(species_vc(base), 6);
  for (int trial = 0; trial < 60; ++trial) {
    auto x = random_element(rng, alg, 1 + rng() % 2);
    auto y = random_element(rng, alg, 1 + rng() % 2);
    Vec lambda = random_vec(rng, base->dim());
    ASSERT_EQ(x.act_right(lambda) * y, x * y.act_left(lambda)) << "trial " << trial;
  }
}

TEST(TensorProperty, NormalFormsSpanTheTensorPower) {
  // Normal forms of all raw words of length k span a space of dimension
  // dim V^{(x)_l k}, computed independently through tensor_over_base.
  std::mt19937 rng(13);
  auto base = make_base({rationals(), gaussian(), FieldExt({-2, 0, 1})}, {1, 1, Rational(1, 3)});
  for (int trial = 0; trial < 12; ++trial) {
    auto v = random_bimodule(rng, base, 3);
    auto alg = make_tensor_algebra(v, 3);
    for (std::size_t k = 2; k <= 3; ++k) {
      std::vector<TensorElement> all;
      std::vector<Letter> w(k, 0);
      std::set<Word> normal;
      for (;;) {
        if (alg->composable(w)) {
          all.emplace_back(alg, Terms{{Word::of(w), Rational(1)}});
          for (const auto& [u, c] : all.back().terms()) normal.insert(u);
        }
        std::size_t pos = k;
        bool done = true;
        while (pos-- > 0) {
          if (++w[pos] < v->size()) {
            done = false;
            break;
          }
          w[pos] = 0;
        }
        if (done) break;
      }
      BimodulePtr power = v;
      for (std::size_t j = 1; j < k; ++j) power = tensor_over_base(*power, *v);
      ASSERT_EQ(span_dim(all), power->size()) << "trial " << trial << " k " << k;
      // Normal words are linearly independent basis words.
      ASSERT_EQ(normal.size(), power->size()) << "trial " << trial << " k " << k;
    }
  }
}

TEST(TensorProperty, TruncationIsCoherent) {
  std::mt19937 rng(14);
  auto base = species_base();
  auto vc = species_vc(base);
  auto big = make_tensor_algebra(vc, 6), small = make_tensor_algebra(vc, 3);
  for (int trial = 0; trial < 40; ++trial) {
    auto x = random_element(rng, big, 1 + rng() % 3);
    auto y = random_element(rng, big, 1 + rng() % 3);
    Terms reduced = (x * y).terms();
    small->truncate(reduced);
    auto xs = TensorElement(small, x.terms()), ys = TensorElement(small, y.terms());
    ASSERT_EQ((xs * ys).terms(), reduced) << "trial " << trial;
  }
}
