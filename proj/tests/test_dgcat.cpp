#include "dgcat_support.hpp"

#include <gtest/gtest.h>

using namespace cyq;
using namespace cyq::testing;

namespace {

DgCategoryData unit_data() {
  DgCategoryData d;
  d.objects = {"pt"};
  d.morphisms = {{"1", 0, 0, 0, 0}};
  d.identities = {0};
  return d;
}

/// Q[e]/e^2 with |e| = 0 as a one-object category.
DgCategoryData dual_algebra_data() {
  DgCategoryData d = unit_data();
  d.morphisms.push_back({"e", 0, 0, 0, 0});
  return d;
}

/// Q<x, y> with |x| = -1, |y| = 0, all products zero and d(x) = y: one object.
DgCategoryData contractible_pair_data() {
  DgCategoryData d = unit_data();
  d.morphisms.push_back({"x", 0, 0, -1, 0});
  d.morphisms.push_back({"y", 0, 0, 0, 0});
  d.differential[1] = {{2, Rational(1)}};
  return d;
}

}  // namespace

TEST(FiniteDgCategory, UnitCategory) {
  FiniteDgCategory c(unit_data());
  EXPECT_EQ(c.object_count(), 1u);
  EXPECT_EQ(c.compose(0, 0), (SparseVec{{0, Rational(1)}}));
  EXPECT_EQ(h_zero_cat(c).dim(0, 0), 1u);
}

TEST(FiniteDgCategory, DualNumbersAlgebra) {
  FiniteDgCategory c(dual_algebra_data());
  EXPECT_TRUE(c.compose(1, 1).empty());
  EXPECT_EQ(h_zero_cat(c).dim(0, 0), 2u);
}

TEST(FiniteDgCategory, ContractiblePairLeavesUnit) {
  FiniteDgCategory c(contractible_pair_data());
  auto hc = hom_complex(c, 0, 0);
  EXPECT_EQ(hc.complex.betti(-1), 0u);
  EXPECT_EQ(hc.complex.betti(0), 1u);
}

TEST(FiniteDgCategoryErrors, DifferentialSquaresToNonzero) {
  DgCategoryData d = unit_data();
  d.morphisms = {{"1", 0, 0, 0, 0}, {"u", 0, 0, -1, 0}, {"v", 0, 0, 0, 0}, {"w", 0, 0, 1, 0}};
  d.differential[1] = {{2, Rational(1)}};
  d.differential[2] = {{3, Rational(1)}};
  try {
    FiniteDgCategory c(d);
    FAIL() << "accepted";
  } catch (const CategoryAxiomError& e) {
    EXPECT_NE(std::string(e.what()).find("'u'"), std::string::npos);
  }
}

TEST(FiniteDgCategoryErrors, WrongDegreeOfDifferential) {
  DgCategoryData d = contractible_pair_data();
  d.morphisms[2].degree = 1;
  EXPECT_THROW(FiniteDgCategory{d}, CategoryAxiomError);
}

TEST(FiniteDgCategoryErrors, LeibnizFailureNamesThePair) {
  DgCategoryData d = contractible_pair_data();
  d.composition[{2, 1}] = {{1, Rational(1)}};  // y x = x, so d(x x) = y x - x y = x != 0
  try {
    FiniteDgCategory c(d);
    FAIL() << "accepted";
  } catch (const CategoryAxiomError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("Leibniz"), std::string::npos) << msg;
    EXPECT_NE(msg.find("(x, x)"), std::string::npos) << msg;
  }
}

TEST(FiniteDgCategoryErrors, NonAssociative) {
  // e o e = f, f o e = 0, e o f = f on a one-object category with |e| = |f| = 0.
  DgCategoryData d = unit_data();
  d.morphisms.push_back({"e", 0, 0, 0, 0});
  d.morphisms.push_back({"f", 0, 0, 0, 0});
  d.composition[{1, 1}] = {{2, Rational(1)}};
  d.composition[{1, 2}] = {{2, Rational(1)}};
  try {
    FiniteDgCategory c(d);
    FAIL() << "accepted";
  } catch (const CategoryAxiomError& e) {
    EXPECT_NE(std::string(e.what()).find("associative"), std::string::npos);
  }
}

TEST(FiniteDgCategoryErrors, NotComposable) {
  DgCategoryData d;
  d.objects = {"x", "y"};
  d.morphisms = {{"1x", 0, 0, 0, 0}, {"1y", 1, 1, 0, 0}, {"f", 0, 1, 0, 0}};
  d.identities = {0, 1};
  d.composition[{2, 2}] = {{2, Rational(1)}};
  EXPECT_THROW(FiniteDgCategory{d}, CategoryAxiomError);
}

TEST(FiniteDgCategoryErrors, BadIdentity) {
  DgCategoryData d = dual_algebra_data();
  d.composition[{0, 1}] = {{0, Rational(1)}};
  EXPECT_THROW(FiniteDgCategory{d}, CategoryAxiomError);
}

TEST(ModuleCategory, DualNumbersHoms) {
  auto mc = dual_category();
  const auto& c = mc.category();
  const std::size_t s = mc.object("S"), p = mc.object("P");
  EXPECT_EQ(c.hom(s, s).size(), 1u);
  EXPECT_EQ(c.hom(s, p).size(), 1u);
  EXPECT_EQ(c.hom(p, s).size(), 1u);
  EXPECT_EQ(c.hom(p, p).size(), 2u);
  const auto iota = *c.find("iota"), pi = *c.find("pi"), eps = *c.find("eps");
  EXPECT_EQ(c.compose(iota, pi), (SparseVec{{eps, Rational(1)}}));
  EXPECT_TRUE(c.compose(pi, iota).empty());
  EXPECT_TRUE(c.compose(eps, eps).empty());
}

TEST(ModuleCategory, RejectsNonModuleNamedMap) {
  Matrix bad(1, 2);
  bad(0, 1) = 1;  // e -> 1 does not commute with e
  EXPECT_THROW(ModuleCategory({dual_simple(), dual_free()}, {{"bad", "P", "S", 0, bad}}), ConstructionError);
}

TEST(ModuleCategory, RejectsNonLinearDifferential) {
  DgModule m = {"M", {0, 1}, Matrix(2, 2), {Matrix(2, 2)}};
  m.d(1, 0) = 1;
  m.actions[0](0, 0) = 1;
  EXPECT_THROW(ModuleCategory({m}), ConstructionError);
}

TEST(ModuleCategory, RejectsZeroModule) {
  EXPECT_THROW(ModuleCategory({DgModule{"Z", {}, Matrix(0, 0), {Matrix(0, 0)}}}), ConstructionError);
}

TEST(ModuleCategory, ShiftAndCone) {
  auto s = dual_simple(), p = dual_free();
  DgModule c = cone(s, p, iota_matrix(), "C");
  DgModule ss = shift(s, 1, "SS");
  ModuleCategory mc({s, p, c, ss});
  const auto& cat = mc.category();
  auto h0 = h_zero_cat(cat);
  const std::size_t S = 0, P = 1, C = 2, SS = 3;
  // C = [S -> P]: the homotopy pi: P -> S kills eps in End(C) and Hom(P, C).
  EXPECT_EQ(h0.dim(C, C), 1u);
  EXPECT_EQ(h0.dim(C, S), 1u);
  EXPECT_EQ(h0.dim(P, C), 1u);
  EXPECT_EQ(h_table(cat, -1).dim(S, SS), 1u);
  EXPECT_EQ(h_table(cat, 1).dim(SS, S), 1u);
  EXPECT_EQ(h_table(cat, 1).dim(C, S), 1u);
  EXPECT_EQ(h_table(cat, 1).dim(C, P), 0u);
}

TEST(ModuleCategoryProperty, VectorSpaceComplexesMatchKunneth) {
  // Over a field, H^0 Hom(X, Y) = sum_k Hom(H^k X, H^k Y).
  std::mt19937 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    auto x = random_complex(rng, -1, 3, 2);
    auto y = random_complex(rng, -1, 3, 2);
    if (x.dim(-1) + x.dim(0) + x.dim(1) == 0 || y.dim(-1) + y.dim(0) + y.dim(1) == 0) continue;
    ModuleCategory mc({vector_space_module(x, "X"), vector_space_module(y, "Y")});
    std::size_t expected = 0;
    for (int k = -1; k <= 1; ++k) expected += x.betti(k) * y.betti(k);
    ASSERT_EQ(h_zero_cat(mc.category()).dim(0, 1), expected) << "trial " << trial;
    std::size_t shifted = 0;
    for (int k = -1; k <= 1; ++k) shifted += x.betti(k) * y.betti(k - 1);
    ASSERT_EQ(h_table(mc.category(), -1).dim(0, 1), shifted);
  }
}

TEST(FullSubcategory, KeepsStructure) {
  auto mc = dual_category();
  auto [sub, embed] = mc.category().full_subcategory({1});
  sub.verify();
  EXPECT_EQ(sub.object_count(), 1u);
  EXPECT_EQ(sub.size(), 2u);
  for (std::size_t f = 0; f < sub.size(); ++f) EXPECT_EQ(sub.morphism(f).name, mc.category().morphism(embed[f]).name);
}

TEST(DrinfeldQuotient, UnitTelescope) {
  auto a = make_dgcat(unit_data());
  for (std::size_t t = 1; t <= 5; ++t) {
    auto q = drinfeld_quotient(a, {0}, t);
    q.category().verify();
    auto hc = hom_complex(q.category(), 0, 0);
    for (int k = -static_cast<int>(t) + 1; k <= 0; ++k) EXPECT_EQ(hc.complex.betti(k), 0u) << "t " << t << " k " << k;
    // h^t is an unmatched cycle at the truncation edge when t is even.
    EXPECT_EQ(hc.complex.betti(-static_cast<int>(t)), t % 2 == 0 ? 1u : 0u);
    EXPECT_EQ(q.category().d(q.h(0)), (SparseVec{{q.include(0), Rational(1)}}));
  }
}

TEST(DrinfeldQuotient, NothingContracted) {
  auto mc = dual_category();
  auto q = drinfeld_quotient(mc.category_ptr(), {}, 3);
  EXPECT_EQ(q.category().size(), mc.category().size());
  EXPECT_EQ(h_zero_cat(q.category()).dim(1, 1), 2u);
}

TEST(DrinfeldQuotient, AxiomsAndStrictFunctor) {
  auto mc = dual_category();
  const auto& a = mc.category();
  for (std::size_t t = 0; t <= 3; ++t) {
    auto q = drinfeld_quotient(mc.category_ptr(), {1}, t);
    q.category().verify();
    for (std::size_t g = 0; g < a.size(); ++g) {
      EXPECT_EQ(q.category().d(q.include(g)), q.include(a.d(g)));
      for (std::size_t f = 0; f < a.size(); ++f)
        EXPECT_EQ(q.category().compose(q.include(g), q.include(f)), q.include(a.compose(g, f)));
    }
  }
}

TEST(DrinfeldQuotient, ContractedIdentityIsBoundary) {
  auto mc = dual_category();
  auto q = drinfeld_quotient(mc.category_ptr(), {1}, 2);
  const auto& c = q.category();
  const std::size_t p = 1;
  EXPECT_EQ(c.d(q.h(p)), (SparseVec{{q.include(mc.category().identity(p)), Rational(1)}}));
  auto h0 = h_zero_cat(c);
  EXPECT_EQ(h0.dim(p, p), 0u);
  EXPECT_EQ(h0.dim(0, 1), 0u);
  EXPECT_EQ(h0.dim(1, 0), 0u);
  EXPECT_EQ(h0.dim(0, 0), 1u);
  EXPECT_TRUE(h0.stabilized);
}

TEST(DrinfeldQuotient, DualNumbersNegativeDegrees) {
  // H^{-1}(S, S) is spanned by pi h iota.
  auto mc = dual_category();
  auto q = drinfeld_quotient(mc.category_ptr(), {1}, 3);
  auto t = h_table(q.category(), -1);
  EXPECT_EQ(t.dim(0, 0), 1u);
  const auto& a = mc.category();
  auto w = q.find_word({*a.find("iota"), *a.find("pi")});
  ASSERT_TRUE(w.has_value());
  auto k = t.klass(0, 0, {{*w, Rational(1)}});
  ASSERT_TRUE(k.has_value());
  EXPECT_NE((*k)[0], 0);
}

TEST(DrinfeldQuotient, H0CompositionTable) {
  auto mc = dual_category();
  auto q = drinfeld_quotient(mc.category_ptr(), {1}, 2);
  auto h0 = h_zero_cat(q.category());
  auto it = h0.composition.find({0, 0, 0});
  ASSERT_NE(it, h0.composition.end());
  EXPECT_EQ(it->second[0][0], Vec{1});
}

TEST(DrinfeldQuotientProperty, StableCategoryOfDualNumbers) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<DgModule> mods = {random_dual_module(rng, 1 + rng() % 2, rng() % 2, "M"),
                                  random_dual_module(rng, rng() % 2, 1 + rng() % 2, "N"), dual_free()};
    ModuleCategory mc(mods);
    const std::size_t p = 2;
    auto q = drinfeld_quotient(mc.category_ptr(), {p}, 3);
    auto h0 = h_zero_cat(q.category());
    ASSERT_TRUE(h0.stabilized);
    for (std::size_t x = 0; x < 3; ++x)
      for (std::size_t y = 0; y < 3; ++y)
        ASSERT_EQ(h0.dim(x, y), stable_hom_oracle(mc, x, y, p)) << "trial " << trial << " (" << x << ", " << y << ")";
  }
}
