#include "hses_support.hpp"

#include <gtest/gtest.h>

using namespace cyq;
using namespace cyq::testing;

namespace {

Matrix mat(std::size_t r, std::size_t c, std::vector<int> entries) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r * c; ++i) m(i / c, i % c) = entries[i];
  return m;
}

}  // namespace

TEST(ChainComplex, IsomorphismIsAcyclic) {
  ChainComplex c(0, {1, 1}, {mat(1, 1, {2})});
  EXPECT_TRUE(c.squares_to_zero());
  EXPECT_EQ(c.betti(0), 0u);
  EXPECT_EQ(c.betti(1), 0u);
}

TEST(ChainComplex, ZeroDifferential) {
  ChainComplex c(-1, {2, 0, 3}, {});
  EXPECT_EQ(c.betti_table(), (std::vector<std::size_t>{2, 0, 3}));
  EXPECT_EQ(c.betti(5), 0u);
}

TEST(ChainComplex, ShapeMismatchRejected) {
  EXPECT_THROW(ChainComplex(0, {1, 2}, {mat(1, 1, {1})}), ConstructionError);
}

TEST(ChainComplex, ClassCoordinates) {
  // Q^2 -> Q^3 -> Q with image e0 + e1 and kernel {x0 + x1 + x2 = 0}.
  ChainComplex c(0, {1, 3, 1}, {mat(3, 1, {1, -1, 0}), mat(1, 3, {1, 1, 1})});
  ASSERT_TRUE(c.squares_to_zero());
  auto h = c.cohomology(1);
  EXPECT_EQ(h.dim(), 1u);
  EXPECT_TRUE(h.is_boundary({2, -2, 0}));
  EXPECT_FALSE(h.coordinates({1, 0, 0}).has_value());
  auto x = h.coordinates({1, 0, -1});
  auto y = h.coordinates({0, 1, -1});
  ASSERT_TRUE(x && y);
  EXPECT_EQ(*x, *y);
  EXPECT_NE((*x)[0], 0);
}

TEST(ChainComplexProperty, RandomComplexesSquareToZero) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_complex(rng, -2, 4, 6);
    ASSERT_TRUE(c.squares_to_zero());
    for (int k = c.lo(); k <= c.hi(); ++k) ASSERT_EQ(c.cohomology(k).dim(), c.betti(k));
  }
}

TEST(Hses, ClassicalSequenceWithZeroHomotopyVerifies) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_classical_ses(rng);
    auto r = verify_hses(s);
    ASSERT_TRUE(r.ok()) << "trial " << trial << " " << r.shapes_ok << r.chain_maps << r.dh_equals_pi
                        << r.squares_to_zero << r.acyclic();
  }
}

TEST(Hses, ConeSequenceVerifies) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_cone_ses(rng);
    auto r = verify_hses(s);
    ASSERT_TRUE(r.ok()) << "trial " << trial;
  }
}

TEST(Hses, RandomMapsFailWithFirstDegree) {
  std::mt19937 rng(4);
  int failures = 0;
  for (int trial = 0; trial < 20; ++trial) {
    HomotopySes s;
    s.b = random_complex(rng, 0, 3, 3);
    s.a = random_complex(rng, 0, 3, 3);
    s.c = random_complex(rng, 0, 3, 3);
    for (int k = 0; k < 3; ++k) {
      s.i.blocks[k] = random_matrix(rng, s.a.dim(k), s.b.dim(k));
      s.p.blocks[k] = random_matrix(rng, s.c.dim(k), s.a.dim(k));
      s.h.blocks[k] = random_matrix(rng, s.c.dim(k - 1), s.b.dim(k));
    }
    auto r = verify_hses(s);
    if (!r.ok()) ++failures;
    if (!r.acyclic()) {
      ASSERT_TRUE(r.first_nonzero.has_value());
      for (const auto& [n, dim] : r.total_cohomology) {
        if (n < *r.first_nonzero) {
          ASSERT_EQ(dim, 0u);
        }
      }
    }
  }
  EXPECT_GE(failures, 18);
}

TEST(Hses, ZeroedHomotopyBreaksCone) {
  std::mt19937 rng(5);
  int caught = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_cone_ses(rng);
    bool nonzero_pi = false;
    for (const auto& [k, m] : compose(s.p, s.i, s.b, s.a, s.c).blocks) nonzero_pi |= !m.is_zero();
    s.h.blocks.clear();
    auto r = verify_hses(s);
    if (nonzero_pi) {
      EXPECT_FALSE(r.dh_equals_pi);
      ++caught;
    }
  }
  EXPECT_GT(caught, 0);
}

TEST(Connecting, ZeroCycle) {
  std::mt19937 rng(6);
  auto s = random_cone_ses(rng);
  for (int q = s.c.lo(); q <= s.c.hi(); ++q) {
    auto r = connecting(s, q, Vec(s.c.dim(q)));
    for (const auto& x : r.klass) EXPECT_EQ(x, 0);
  }
}

TEST(Connecting, NonCycleRejected) {
  ChainComplex b(0, {1}, {}), a(0, {1}, {});
  ChainComplex c(0, {1, 1}, {mat(1, 1, {1})});
  HomotopySes s{b, a, c, {}, {}, {}};
  EXPECT_THROW(connecting(s, 0, {1}), ConstructionError);
}

TEST(ConnectingProperty, ClassicalSnakeOracle) {
  std::mt19937 rng(7);
  int nontrivial = 0;
  for (int trial = 0; trial < 120; ++trial) {
    auto s = random_classical_ses(rng);
    for (int q = s.c.lo(); q <= s.c.hi(); ++q) {
      const Vec c = random_cycle(rng, s.c, q);
      auto expected = classical_snake(s, q, c);
      ASSERT_TRUE(expected.has_value());
      auto got = connecting(s, q, c);
      ASSERT_EQ(got.klass, *expected) << "trial " << trial << " degree " << q;
      for (const auto& x : got.klass) nontrivial += sgn(x) != 0;
    }
  }
  EXPECT_GT(nontrivial, 10);
}

TEST(ConnectingProperty, ConeOracle) {
  std::mt19937 rng(8);
  int nontrivial = 0;
  for (int trial = 0; trial < 120; ++trial) {
    auto s = random_cone_ses(rng);
    for (int q = s.c.lo(); q <= s.c.hi(); ++q) {
      const Vec c = random_cycle(rng, s.c, q);
      auto expected = cone_connecting(s, q, c);
      ASSERT_TRUE(expected.has_value());
      auto got = connecting(s, q, c);
      ASSERT_EQ(got.klass, negate(*expected)) << "trial " << trial << " degree " << q;
      for (const auto& x : got.klass) nontrivial += sgn(x) != 0;
    }
  }
  EXPECT_GT(nontrivial, 10);
}

TEST(ConnectingProperty, SolutionIndependence) {
  std::mt19937 rng(9);
  int differing = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto s = trial % 2 ? random_cone_ses(rng) : random_classical_ses(rng);
    for (int q = s.c.lo(); q <= s.c.hi(); ++q) {
      const Vec c = random_cycle(rng, s.c, q);
      auto x = connecting(s, q, c);
      auto y = connecting(s, q, c, 1000 + trial);
      ASSERT_EQ(x.klass, y.klass);
      differing += x.b != y.b;
    }
  }
  EXPECT_GT(differing, 0);
}

TEST(ConnectingProperty, NaturalUnderProjectionFromSum) {
  // S (+) S' -> S is a map of sequences; delta commutes with it.
  std::mt19937 rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_cone_ses(rng, 3, 2);
    auto t = random_cone_ses(rng, 3, 2);
    auto sum_complex = [](const ChainComplex& x, const ChainComplex& y) {
      const int lo = std::min(x.lo(), y.lo()), hi = std::max(x.hi(), y.hi());
      std::vector<std::size_t> dims;
      std::vector<Matrix> diffs;
      for (int k = lo; k <= hi; ++k) dims.push_back(x.dim(k) + y.dim(k));
      for (int k = lo; k < hi; ++k)
        diffs.push_back(block_matrix({{x.d(k), zero(x.dim(k + 1), y.dim(k))}, {zero(y.dim(k + 1), x.dim(k)), y.d(k)}}));
      return ChainComplex(lo, dims, diffs);
    };
    auto sum_map = [](const GradedMap& f, const GradedMap& g, const ChainComplex& x1, const ChainComplex& y1,
                      const ChainComplex& x2, const ChainComplex& y2, int lo, int hi) {
      GradedMap out{f.shift, {}};
      for (int k = lo; k <= hi; ++k)
        out.blocks[k] = block_matrix({{f.at(k, x1, y1), zero(y1.dim(k + f.shift), x2.dim(k))},
                                      {zero(y2.dim(k + f.shift), x1.dim(k)), g.at(k, x2, y2)}});
      return out;
    };
    HomotopySes u;
    u.b = sum_complex(s.b, t.b);
    u.a = sum_complex(s.a, t.a);
    u.c = sum_complex(s.c, t.c);
    const int lo = -4, hi = 4;
    u.i = sum_map(s.i, t.i, s.b, s.a, t.b, t.a, lo, hi);
    u.p = sum_map(s.p, t.p, s.a, s.c, t.a, t.c, lo, hi);
    u.h = sum_map(s.h, t.h, s.b, s.c, t.b, t.c, lo, hi);
    ASSERT_TRUE(verify_hses(u).ok());
    for (int q = u.c.lo(); q <= u.c.hi(); ++q) {
      const Vec c = random_cycle(rng, u.c, q);
      // Projection to the first summand in degree q of C and q + 1 of B.
      const Vec cs(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(s.c.dim(q)));
      auto big = connecting(u, q, c);
      const Vec bs(big.image.begin(), big.image.begin() + static_cast<std::ptrdiff_t>(s.b.dim(q + 1)));
      auto small = connecting(s, q, cs);
      ASSERT_EQ(s.b.cohomology(q + 1).coordinates(bs), small.klass);
    }
  }
}
