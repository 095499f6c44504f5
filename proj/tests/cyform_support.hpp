#pragma once

// The dual-numbers instance of the square: A = {P, C, Sigma S, C2} with
// C = Cone(iota: S -> P), C2 = Cone(2 iota), B = {P}, d = 0.

#include "dgcat_support.hpp"

#include <cyq/cyform.hpp>

namespace cyq::testing {

inline Matrix rows(std::size_t r, std::size_t c, std::initializer_list<std::tuple<std::size_t, std::size_t, int>> e) {
  Matrix m(r, c);
  for (auto [i, j, v] : e) m(i, j) = v;
  return m;
}

/// Cone(lambda iota) has basis (1, e) of P in degree 0 and the generator of Sigma S in degree -1.
inline ModuleCategory roof_category() {
  const Matrix two_iota = Rational(2) * iota_matrix();
  return ModuleCategory(
      {dual_free(), cone(dual_simple(), dual_free(), iota_matrix(), "C"), shift(dual_simple(), 1, "SS"),
       cone(dual_simple(), dual_free(), two_iota, "C2")},
      {{"eps", "P", "P", 0, eps_matrix()},
       {"a", "P", "C", 0, rows(3, 2, {{0, 0, 1}, {1, 1, 1}})},
       {"s", "C", "SS", 0, rows(1, 3, {{0, 2, 1}})},
       {"b", "SS", "P", 1, rows(2, 1, {{1, 0, -1}})},
       {"f", "C", "SS", -1, rows(1, 3, {{0, 0, 1}})},
       {"a2", "P", "C2", 0, rows(3, 2, {{0, 0, 1}, {1, 1, 1}})},
       {"s2", "C2", "SS", 0, rows(1, 3, {{0, 2, 1}})}});
}

inline SparseVec named(const ModuleCategory& mc, const std::string& name, Rational scale = 1) {
  return {{*mc.category().find(name), scale}};
}

/// P -a-> C -s-> Sigma S -b-> Sigma P with f = sigma pi q: C -> S = Sigma^{-1} Sigma S.
inline RoofFraction standard_roof(const ModuleCategory& mc) {
  return {"cone", mc.object("P"), mc.object("C"), mc.object("SS"),
          named(mc, "a"), named(mc, "s"), named(mc, "b"), named(mc, "f")};
}

/// The same fraction through Cone(2 iota).
inline RoofFraction scaled_roof(const ModuleCategory& mc) {
  const std::size_t c2 = mc.object("C2"), ss = mc.object("SS");
  // f2 = f / 2 on the P-part of C2.
  const Matrix f2 = rows(1, 3, {{0, 0, 1}});
  SparseVec f = mc.coordinates(c2, ss, -1, f2);
  SparseVec half;
  for (const auto& [k, v] : f) half.emplace(k, v / 2);
  return {"cone2", mc.object("P"), c2, ss, named(mc, "a2"), named(mc, "s2"), named(mc, "b", 2), half};
}

/// phi = the e-coefficient on length-0 chains of B = {P}.
inline CellFunctional eps_functional(const ModuleCategory& mc) {
  auto [sub, emb] = mc.category().full_subcategory({mc.object("P")});
  return {{Cell{0, {*sub.find("eps")}}, Rational(1)}};
}

inline SquareInput dual_square(const ModuleCategory& mc) {
  SquareInput in;
  in.ambient = mc.category_ptr();
  in.objects = {mc.object("P"), mc.object("SS")};
  in.contracted = {mc.object("P")};
  in.d = 0;
  in.phi = eps_functional(mc);
  in.roofs = {standard_roof(mc), scaled_roof(mc)};
  in.h_trunc = 3;
  in.bar_trunc = 4;
  in.max_degree = 2;
  return in;
}

}  // namespace cyq::testing
