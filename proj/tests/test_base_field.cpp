#include "support.hpp"

#include <gtest/gtest.h>

using namespace cyq;
using namespace cyq::testing;

TEST(FieldExt, DegreeOneIsTheRationals) {
  FieldExt q = rationals();
  EXPECT_EQ(q.degree(), 1u);
  EXPECT_EQ(q.mul({3}, {Rational(1, 2)}), Vec{Rational(3, 2)});
  EXPECT_EQ(q.inverse({4}), Vec{Rational(1, 4)});
}

TEST(FieldExt, GaussianRationalsSquareOfIIsMinusOne) {
  FieldExt c = gaussian();
  EXPECT_EQ(c.mul({0, 1}, {0, 1}), (Vec{-1, 0}));
  EXPECT_EQ(c.regular_trace({3, 7}), 6);
}

TEST(FieldExt, InverseInSqrtTwo) {
  FieldExt k({-2, 0, 1});
  // Independent check: (1 + s)(-1 + s) = s^2 - 1 = 1.
  EXPECT_EQ(k.inverse({1, 1}), (Vec{-1, 1}));
  EXPECT_EQ(k.mul({1, 1}, {-1, 1}), k.one());
}

TEST(FieldExt, RejectsNonMonicAndConstant) {
  EXPECT_THROW(FieldExt({1, 2}), ConstructionError);
  EXPECT_THROW(FieldExt({1}), ConstructionError);
  EXPECT_THROW(FieldExt(Vec{}), ConstructionError);
}

TEST(FieldExt, ReducibleModulusIsReportedOnInversion) {
  FieldExt k({-1, 0, 1});  // (x - 1)(x + 1)
  EXPECT_THROW(k.inverse({1, 1}), ReducibilityError);
  EXPECT_EQ(k.inverse({0, 1}), (Vec{0, 1}));
}

TEST(FieldExt, ArithmeticLaws) {
  std::mt19937 rng(7);
  FieldExt cubic({-2, 0, 0, 1});  // x^3 - 2
  for (int trial = 0; trial < 100; ++trial) {
    Vec a = random_vec(rng, 3), b = random_vec(rng, 3), c = random_vec(rng, 3);
    EXPECT_EQ(cubic.mul(cubic.mul(a, b), c), cubic.mul(a, cubic.mul(b, c)));
    if (a == cubic.zero()) continue;
    EXPECT_EQ(cubic.mul(a, cubic.inverse(a)), cubic.one());
  }
}

TEST(SemisimpleBase, TrivialBase) {
  auto l = make_base({rationals()}, {1});
  EXPECT_EQ(l->dim(), 1u);
  EXPECT_EQ(l->trace({5}), 5);
}

TEST(SemisimpleBase, SpeciesTraceIsSumOfFirstTwoPlusRealPart) {
  auto l = species_base();
  EXPECT_EQ(l->dim(), 4u);
  EXPECT_EQ(l->trace({2, 3, 5, 7}), 10);
}

TEST(SemisimpleBase, ZeroWeightIsRejected) {
  EXPECT_NO_THROW(make_base({gaussian()}, {1}));
  EXPECT_THROW(make_base({gaussian(), rationals()}, {1, 0}), NondegenerateTraceError);
  EXPECT_THROW(make_base({rationals()}, {}), ConstructionError);
}

TEST(Casimir, RationalsGiveOneTensorOne) {
  auto l = make_base({rationals()}, {1});
  auto s = casimir(*l);
  EXPECT_EQ(s.coefficients(0, 0), 1);
}

TEST(Casimir, GaussianWithRealPartTrace) {
  // Oracle: Re(1*1) = 1, Re(i*i) = -1, so the dual basis is {1, -i}.
  auto l = make_base({gaussian()}, {Rational(1, 2)});
  auto s = casimir(*l);
  EXPECT_EQ(s.coefficients(0, 0), 1);
  EXPECT_EQ(s.coefficients(1, 1), -1);
  EXPECT_EQ(s.coefficients(0, 1), 0);
  EXPECT_EQ(s.coefficients(1, 0), 0);
}

TEST(Casimir, SpeciesBase) {
  auto l = species_base();
  auto s = casimir(*l);
  Matrix expected(4, 4);
  expected(0, 0) = 1;
  expected(1, 1) = 1;
  expected(2, 2) = 1;
  expected(3, 3) = -1;
  EXPECT_EQ(s.coefficients, expected);
}

TEST(Casimir, InvariantsOnRandomElements) {
  std::mt19937 rng(11);
  auto l = make_base({rationals(), gaussian(), FieldExt({-2, 0, 0, 1})}, {3, Rational(1, 2), -1});
  auto s = casimir(*l);
  for (std::size_t p = 0; p < l->dim(); ++p) EXPECT_TRUE(casimir_is_balanced(*l, s, l->basis(p)));
  for (int trial = 0; trial < 100; ++trial) {
    Vec x = random_vec(rng, l->dim());
    EXPECT_EQ(casimir_contract(*l, s, x), x);
  }
}
