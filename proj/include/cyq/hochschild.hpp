#pragma once

// Normalized Hochschild and (b, B) cyclic complexes of finite dg categories,
// truncated in bar length, and the homotopy short exact sequence attached to
// a Drinfeld quotient.
//
// Conventions. A chain f_0 (x) f_1 (x) ... (x) f_n is cyclically composable:
// f_i o f_{i+1} and f_n o f_0 are defined. Its homological degree is
// n - sum |f_i|. Chains with an identity in a position >= 1 are dropped
// (normalized complex). b is minus the cyclic bar differential on
// s f_0 (x) ... (x) s f_n with b_1(s a) = -s(da), b_2(s a, s b) = (-1)^{|sa|} s(ab),
// and the last face obtained by rotating s f_n to the front. On length 1 this is
// b(f_0 (x) f_1) = (-1)^{|f_0|} f_0 f_1 - (-1)^{|f_0|(|f_1|+1)} f_1 f_0.
// Connes' B inserts an identity in front of every cyclic rotation with the
// Koszul sign of the rotation. The cyclic complex is Tot_N = (+)_{p>=0} C_{N-2p} u^p
// with D = b + B u^{-1}, truncated to n + p <= bar_trunc.
// As ChainComplexes, homological degree N is stored in cohomological degree -N.

#include <cyq/complex.hpp>
#include <cyq/dgcat.hpp>
#include <cyq/errors.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cyq {

using Chain = std::vector<std::size_t>;

namespace detail {
inline int parity_sign(long e) { return (e & 1) ? -1 : 1; }
}  // namespace detail

class HochschildComplex {
 public:
  /// Chains of length <= bar_trunc and homological degree in [lo, hi].
  HochschildComplex(DgCatPtr c, std::size_t bar_trunc, int lo, int hi)
      : cat_(std::move(c)), bar_trunc_(bar_trunc), lo_(lo), hi_(hi) {
    if (hi < lo) throw ConstructionError("empty degree window");
    enumerate();
  }

  const FiniteDgCategory& category() const { return *cat_; }
  DgCatPtr category_ptr() const { return cat_; }
  std::size_t bar_trunc() const { return bar_trunc_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }

  int degree(const Chain& x) const {
    int n = static_cast<int>(x.size()) - 1;
    for (auto f : x) n -= cat_->morphism(f).degree;
    return n;
  }

  const std::vector<Chain>& chains(int n) const {
    static const std::vector<Chain> none;
    if (n < lo_ || n > hi_) return none;
    return chains_[static_cast<std::size_t>(n - lo_)];
  }

  std::size_t dim(int n) const { return chains(n).size(); }

  std::optional<std::size_t> index(const Chain& x) const {
    auto it = index_.find(x);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool cyclically_composable(const Chain& x) const {
    const FiniteDgCategory& c = *cat_;
    if (x.empty()) return false;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      if (c.morphism(x[i]).source != c.morphism(x[i + 1]).target) return false;
    return c.morphism(x.back()).source == c.morphism(x.front()).target;
  }

  bool degenerate(const Chain& x) const {
    for (std::size_t i = 1; i < x.size(); ++i)
      if (x[i] == cat_->identity(cat_->morphism(x[i]).source)) return true;
    return false;
  }

  /// b(x) as a combination of (possibly degenerate-free) chains.
  std::map<Chain, Rational> b(const Chain& x) const {
    const FiniteDgCategory& c = *cat_;
    std::map<Chain, Rational> out;
    const std::size_t n = x.size() - 1;
    std::vector<long> e(x.size());
    for (std::size_t i = 0; i <= n; ++i) e[i] = c.morphism(x[i]).degree - 1;
    auto add = [&](Chain y, const Rational& coef) {
      if (degenerate(y) || sgn(coef) == 0) return;
      auto [it, fresh] = out.try_emplace(std::move(y), 0);
      it->second += coef;
      if (sgn(it->second) == 0) out.erase(it);
    };
    long before = 0;  // sum of e_j for j < i
    for (std::size_t i = 0; i <= n; ++i) {
      // internal: -(-1)^{before} * (-s d f_i)
      const int s_int = detail::parity_sign(before);
      for (const auto& [g, coef] : c.d(x[i])) {
        Chain y = x;
        y[i] = g;
        add(std::move(y), Rational(s_int) * coef);
      }
      if (i < n) {
        // adjacent product: -(-1)^{before + e_i} f_i f_{i+1}
        const int s_mul = -detail::parity_sign(before + e[i]);
        for (const auto& [g, coef] : c.compose(x[i], x[i + 1])) {
          Chain y;
          y.insert(y.end(), x.begin(), x.begin() + static_cast<std::ptrdiff_t>(i));
          y.push_back(g);
          y.insert(y.end(), x.begin() + static_cast<std::ptrdiff_t>(i + 2), x.end());
          add(std::move(y), Rational(s_mul) * coef);
        }
      }
      before += e[i];
    }
    if (n >= 1) {
      const long rest = before - e[n];
      const int s_wrap = -detail::parity_sign(e[n] * rest + e[n]);
      for (const auto& [g, coef] : c.compose(x[n], x[0])) {
        Chain y{g};
        y.insert(y.end(), x.begin() + 1, x.begin() + static_cast<std::ptrdiff_t>(n));
        add(std::move(y), Rational(s_wrap) * coef);
      }
    }
    return out;
  }

  /// Connes' B(x).
  std::map<Chain, Rational> connes(const Chain& x) const {
    const FiniteDgCategory& c = *cat_;
    std::map<Chain, Rational> out;
    const std::size_t len = x.size();
    std::vector<long> e(len);
    for (std::size_t i = 0; i < len; ++i) e[i] = c.morphism(x[i]).degree - 1;
    for (std::size_t i = 0; i < len; ++i) {
      Chain y{c.identity(c.morphism(x[i]).target)};
      for (std::size_t k = 0; k < len; ++k) y.push_back(x[(i + k) % len]);
      if (degenerate(y)) continue;
      long head = 0, tail = 0;
      for (std::size_t j = 0; j < len; ++j) (j >= i ? tail : head) += e[j];
      auto [it, fresh] = out.try_emplace(std::move(y), 0);
      it->second += detail::parity_sign(head * tail);
      if (sgn(it->second) == 0) out.erase(it);
    }
    return out;
  }

  /// Columns of b: C_n -> C_{n-1} in the chain bases. Terms that leave the
  /// enumerated range are dropped.
  std::vector<SparseVec> b_columns(int n) const { return columns(n, n - 1, [&](const Chain& x) { return b(x); }); }
  std::vector<SparseVec> connes_columns(int n) const {
    return columns(n, n + 1, [&](const Chain& x) { return connes(x); });
  }

  /// Cohomological ChainComplex in degrees -hi .. -lo.
  ChainComplex complex() const {
    std::vector<std::size_t> dims;
    std::vector<Matrix> diffs;
    for (int k = -hi_; k <= -lo_; ++k) dims.push_back(dim(-k));
    for (int k = -hi_; k < -lo_; ++k) diffs.push_back(dense(b_columns(-k), dim(-k - 1)));
    return ChainComplex(-hi_, std::move(dims), std::move(diffs));
  }

  static Matrix dense(const std::vector<SparseVec>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (const auto& [r, x] : cols[j]) m(r, j) = x;
    return m;
  }

 private:
  template <class Op>
  std::vector<SparseVec> columns(int from, int to, Op op) const {
    std::vector<SparseVec> out;
    for (const auto& x : chains(from)) {
      SparseVec col;
      if (to >= lo_ && to <= hi_)
        for (const auto& [y, coef] : op(x)) {
          auto k = index(y);
          if (k) col.emplace(*k, coef);
          else if (y.size() - 1 <= bar_trunc_)
            throw InconsistencyError("Hochschild term outside the enumerated basis");
        }
      out.push_back(std::move(col));
    }
    return out;
  }

  void enumerate() {
    const FiniteDgCategory& c = *cat_;
    chains_.assign(static_cast<std::size_t>(hi_ - lo_ + 1), {});
    std::vector<std::vector<std::size_t>> by_target(c.object_count());
    int max_degree = 0;
    for (std::size_t f = 0; f < c.size(); ++f) {
      if (f != c.identity(c.morphism(f).source)) by_target[c.morphism(f).target].push_back(f);
      max_degree = std::max(max_degree, c.morphism(f).degree);
    }
    const bool monotone = max_degree <= 1;  // each extra factor adds 1 - |f| >= 0
    const std::size_t bound = c.weight_bound();
    Chain x;
    auto record = [&](int n) {
      if (n < lo_ || n > hi_ || !cyclically_composable(x)) return;
      index_.emplace(x, chains_[static_cast<std::size_t>(n - lo_)].size());
      chains_[static_cast<std::size_t>(n - lo_)].push_back(x);
    };
    auto extend = [&](auto&& self, int n, std::size_t weight) -> void {
      record(n);
      if (x.size() > bar_trunc_ || (monotone && n > hi_)) return;
      for (auto g : by_target[c.morphism(x.back()).source]) {
        const Morphism& m = c.morphism(g);
        if (weight + m.weight > bound) continue;
        x.push_back(g);
        self(self, n + 1 - m.degree, weight + m.weight);
        x.pop_back();
      }
    };
    for (std::size_t f = 0; f < c.size(); ++f) {
      if (c.morphism(f).weight > bound) continue;
      x = {f};
      extend(extend, -c.morphism(f).degree, c.morphism(f).weight);
    }
  }

  DgCatPtr cat_;
  std::size_t bar_trunc_;
  int lo_, hi_;
  std::vector<std::vector<Chain>> chains_;
  std::map<Chain, std::size_t> index_;
};

/// A cell x u^p of the Hochschild (p = 0 only) or cyclic total complex.
struct Cell {
  std::size_t p = 0;
  Chain chain;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

enum class HomologyKind { hochschild, cyclic };

/// Hochschild complex (kind = hochschild) or the truncated (b, B) total complex
/// (kind = cyclic) over the degree window of `hc`.
class TotalComplex {
 public:
  TotalComplex(HochschildComplex hc, HomologyKind kind) : hc_(std::move(hc)), kind_(kind) {
    cells_.assign(static_cast<std::size_t>(hc_.hi() - hc_.lo() + 1), {});
    for (int n = hc_.lo(); n <= hc_.hi(); ++n)
      for (std::size_t p = 0;; ++p) {
        if (p > 0 && kind_ == HomologyKind::hochschild) break;
        const int m = n - 2 * static_cast<int>(p);
        if (m < hc_.lo()) break;
        for (const auto& x : hc_.chains(m)) {
          if (x.size() - 1 + p > hc_.bar_trunc()) continue;
          Cell cell{p, x};
          index_.emplace(cell, cells_[static_cast<std::size_t>(n - hc_.lo())].size());
          cells_[static_cast<std::size_t>(n - hc_.lo())].push_back(std::move(cell));
        }
      }
  }

  const HochschildComplex& hochschild() const { return hc_; }
  HomologyKind kind() const { return kind_; }
  int lo() const { return hc_.lo(); }
  int hi() const { return hc_.hi(); }

  const std::vector<Cell>& cells(int n) const {
    static const std::vector<Cell> none;
    if (n < lo() || n > hi()) return none;
    return cells_[static_cast<std::size_t>(n - lo())];
  }
  std::size_t dim(int n) const { return cells(n).size(); }

  std::optional<std::size_t> index(const Cell& c) const {
    auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  int degree(const Cell& c) const { return hc_.degree(c.chain) + 2 * static_cast<int>(c.p); }

  /// D(cell) = b(x) u^p + B(x) u^{p-1}.
  std::map<Cell, Rational> differential(const Cell& c) const {
    std::map<Cell, Rational> out;
    for (const auto& [y, coef] : hc_.b(c.chain)) out.emplace(Cell{c.p, y}, coef);
    if (kind_ == HomologyKind::cyclic && c.p > 0)
      for (const auto& [y, coef] : hc_.connes(c.chain)) {
        auto [it, fresh] = out.try_emplace(Cell{c.p - 1, y}, 0);
        it->second += coef;
        if (sgn(it->second) == 0) out.erase(it);
      }
    return out;
  }

  /// Columns of D: Tot_n -> Tot_{n-1}.
  std::vector<SparseVec> columns(int n) const {
    std::vector<SparseVec> out;
    for (const auto& c : cells(n)) {
      SparseVec col;
      if (n - 1 >= lo())
        for (const auto& [y, coef] : differential(c)) {
          auto k = index(y);
          if (k) col.emplace(*k, coef);
        }
      out.push_back(std::move(col));
    }
    return out;
  }

  /// Combination of cells given as a map, in the basis of degree n.
  SparseVec vector(int n, const std::map<Cell, Rational>& v) const {
    SparseVec out;
    for (const auto& [c, x] : v) {
      if (degree(c) != n) throw ConstructionError("cell of the wrong degree");
      auto k = index(c);
      if (!k) throw ConstructionError("cell outside the truncated complex");
      out.emplace(*k, x);
    }
    return out;
  }

  ChainComplex complex() const {
    std::vector<std::size_t> dims;
    std::vector<Matrix> diffs;
    for (int k = -hi(); k <= -lo(); ++k) dims.push_back(dim(-k));
    for (int k = -hi(); k < -lo(); ++k) diffs.push_back(HochschildComplex::dense(columns(-k), dim(-k - 1)));
    return ChainComplex(-hi(), std::move(dims), std::move(diffs));
  }

  /// Homology dimension in degree n (needs n - 1 and n + 1 in range to be exact).
  std::size_t betti(int n) const {
    return dim(n) - sparse_rank(columns(n)) - (n + 1 <= hi() ? sparse_rank(columns(n + 1)) : 0);
  }

 private:
  HochschildComplex hc_;
  HomologyKind kind_;
  std::vector<std::vector<Cell>> cells_;
  std::map<Cell, std::size_t> index_;
};

/// Dimensions over a degree window at bar_trunc and bar_trunc - 1.
struct GradedDims {
  int lo = 0, hi = -1;
  std::size_t bar_trunc = 0;
  std::vector<std::size_t> dims, previous;
  std::vector<bool> stable;

  std::size_t at(int n) const { return dims.at(static_cast<std::size_t>(n - lo)); }
  bool stable_at(int n) const { return stable.at(static_cast<std::size_t>(n - lo)); }
  bool all_stable() const { return std::all_of(stable.begin(), stable.end(), [](bool s) { return s; }); }
};

inline GradedDims graded_dims(DgCatPtr c, int lo, int hi, std::size_t bar_trunc, HomologyKind kind) {
  if (bar_trunc < 1) throw ConstructionError("bar_trunc must be at least 1");
  GradedDims out;
  out.lo = lo;
  out.hi = hi;
  out.bar_trunc = bar_trunc;
  auto dims_at = [&](std::size_t t) {
    TotalComplex tot(HochschildComplex(c, t, lo - 1, hi + 1), kind);
    std::vector<std::size_t> v;
    for (int n = lo; n <= hi; ++n) v.push_back(tot.betti(n));
    return v;
  };
  out.dims = dims_at(bar_trunc);
  out.previous = dims_at(bar_trunc - 1);
  for (std::size_t k = 0; k < out.dims.size(); ++k) out.stable.push_back(out.dims[k] == out.previous[k]);
  return out;
}

inline GradedDims hh(DgCatPtr c, int lo, int hi, std::size_t bar_trunc) {
  return graded_dims(std::move(c), lo, hi, bar_trunc, HomologyKind::hochschild);
}

inline GradedDims cyclic_hc(DgCatPtr c, int lo, int hi, std::size_t bar_trunc) {
  return graded_dims(std::move(c), lo, hi, bar_trunc, HomologyKind::cyclic);
}

/// Checks of the mixed-complex identities on the enumerated range.
struct MixedReport {
  bool b_squared_zero = true;
  bool connes_squared_zero = true;
  bool anticommute = true;
  bool ok() const { return b_squared_zero && connes_squared_zero && anticommute; }
};

/// Composite of column lists: (g o f) with f: X -> Y, g: Y -> Z.
inline std::vector<SparseVec> compose_columns(const std::vector<SparseVec>& g, const std::vector<SparseVec>& f) {
  std::vector<SparseVec> out;
  for (const auto& col : f) {
    SparseVec v;
    for (const auto& [k, x] : col) axpy(v, x, g.at(k));
    out.push_back(std::move(v));
  }
  return out;
}

/// Given b_n: C_n -> C_{n-1} and B_n: C_n -> C_{n+1} for n in [lo, hi], checks
/// b b = 0, B B = 0 and b B + B b = 0 wherever all maps involved are in range.
/// Identities are only checked on chains of length <= bar_trunc - 2, where no
/// term is lost to the truncation.
inline MixedReport check_mixed(const HochschildComplex& hc, const std::map<int, std::vector<SparseVec>>& b,
                               const std::map<int, std::vector<SparseVec>>& connes) {
  MixedReport r;
  auto safe = [&](int n, std::size_t j) { return hc.chains(n)[j].size() + 1 <= hc.bar_trunc(); };
  for (int n = hc.lo() + 2; n <= hc.hi(); ++n) {
    auto bb = compose_columns(b.at(n - 1), b.at(n));
    for (std::size_t j = 0; j < bb.size(); ++j)
      if (safe(n, j) && !bb[j].empty()) r.b_squared_zero = false;
  }
  for (int n = hc.lo(); n + 2 <= hc.hi(); ++n) {
    auto cc = compose_columns(connes.at(n + 1), connes.at(n));
    for (std::size_t j = 0; j < cc.size(); ++j)
      if (safe(n, j) && !cc[j].empty()) r.connes_squared_zero = false;
  }
  for (int n = hc.lo() + 1; n + 1 <= hc.hi(); ++n) {
    auto bB = compose_columns(b.at(n + 1), connes.at(n));
    auto Bb = compose_columns(connes.at(n - 1), b.at(n));
    for (std::size_t j = 0; j < bB.size(); ++j) {
      SparseVec s = bB[j];
      axpy(s, 1, Bb[j]);
      if (safe(n, j) && hc.chains(n)[j].size() + 2 <= hc.bar_trunc() && !s.empty()) r.anticommute = false;
    }
  }
  return r;
}

inline MixedReport check_mixed(const HochschildComplex& hc) {
  std::map<int, std::vector<SparseVec>> b, connes;
  for (int n = hc.lo(); n <= hc.hi(); ++n) {
    b[n] = hc.b_columns(n);
    connes[n] = hc.connes_columns(n);
  }
  return check_mixed(hc, b, connes);
}

// ---------------------------------------------------------------------------
// The sequence HH(B) -> HH(A) -> HH(A/B)

enum class HomotopyExtension {
  left_insertion,  // h(f_0 (x) ...) = (h_{B_0} f_0) (x) ... on every chain
  solved,          // pinned on length-0 chains, solved degreewise above
};

struct HochschildSes {
  std::shared_ptr<const FiniteDgCategory> sub;  // the contracted full subcategory
  std::vector<std::size_t> embedding;           // sub morphism -> ambient morphism
  std::shared_ptr<const DrinfeldQuotientCat> quotient;
  std::shared_ptr<const TotalComplex> tb, ta, tc;
  HomotopySes ses;
  HsesReport report;
  std::pair<int, int> window;  // total cohomological degrees certified acyclic
};

namespace detail {

inline SparseVec map_cell(const TotalComplex& target, const Cell& cell, const std::vector<std::size_t>& morphisms) {
  Cell image{cell.p, {}};
  for (auto f : cell.chain) image.chain.push_back(morphisms.at(f));
  auto k = target.index(image);
  if (!k) return {};
  return {{*k, Rational(1)}};
}

inline GradedMap functor_map(const TotalComplex& from, const TotalComplex& to, const std::vector<std::size_t>& morphisms) {
  GradedMap out{0, {}};
  for (int n = from.lo(); n <= from.hi(); ++n) {
    Matrix m(to.dim(n), from.dim(n));
    for (std::size_t j = 0; j < from.dim(n); ++j)
      for (const auto& [r, x] : map_cell(to, from.cells(n)[j], morphisms)) m(r, j) = x;
    out.blocks[-n] = std::move(m);
  }
  return out;
}

}  // namespace detail

/// Builds the sequence for the full subcategory on `contracted` and the Drinfeld
/// quotient, over homological degrees [0, max_degree]. Throws
/// HsesCertificateError when d(h) = p i or acyclicity fails on the window.
inline HochschildSes hochschild_ses(DgCatPtr a, std::vector<std::size_t> contracted, std::size_t h_trunc,
                                    std::size_t bar_trunc, int max_degree, HomologyKind kind = HomologyKind::hochschild,
                                    HomotopyExtension extension = HomotopyExtension::solved) {
  if (contracted.empty()) throw ConstructionError("at least one contracted object is required");
  HochschildSes out;
  auto [sub, embedding] = a->full_subcategory(contracted);
  out.sub = std::make_shared<const FiniteDgCategory>(std::move(sub));
  out.embedding = embedding;
  out.quotient = std::make_shared<const DrinfeldQuotientCat>(a, contracted, h_trunc);
  const DrinfeldQuotientCat& q = *out.quotient;
  const int lo = 0, hi = max_degree;
  out.tb = std::make_shared<const TotalComplex>(HochschildComplex(out.sub, bar_trunc, lo, hi), kind);
  out.ta = std::make_shared<const TotalComplex>(HochschildComplex(a, bar_trunc, lo, hi), kind);
  out.tc = std::make_shared<const TotalComplex>(HochschildComplex(q.category_ptr(), bar_trunc, lo, hi + 1), kind);
  const TotalComplex &tb = *out.tb, &ta = *out.ta, &tc = *out.tc;

  std::vector<std::size_t> to_quotient(a->size());
  for (std::size_t f = 0; f < a->size(); ++f) to_quotient[f] = q.include(f);
  std::vector<std::size_t> sub_to_quotient;
  for (auto f : embedding) sub_to_quotient.push_back(q.include(f));

  out.ses.b = tb.complex();
  out.ses.a = ta.complex();
  out.ses.c = tc.complex();
  out.ses.i = detail::functor_map(tb, ta, embedding);
  out.ses.p = detail::functor_map(ta, tc, to_quotient);

  // h on a cell (p, f_0 (x) rest): (p, (h_{B_0} f_0) (x) rest).
  auto insert_h = [&](const Cell& cell) -> SparseVec {
    const std::size_t f0 = embedding.at(cell.chain.front());
    const std::size_t b0 = a->morphism(f0).target;
    auto w = q.find_word({f0, a->identity(b0)});
    if (!w) return {};
    Cell image{cell.p, {*w}};
    for (std::size_t k = 1; k < cell.chain.size(); ++k) image.chain.push_back(sub_to_quotient.at(cell.chain[k]));
    auto idx = tc.index(image);
    if (!idx) return {};
    return {{*idx, Rational(1)}};
  };

  std::vector<bool> is_contracted(a->object_count(), false);
  for (auto x : contracted) is_contracted.at(x) = true;
  auto in_contracted = [&](const Cell& cell) {
    for (auto w : cell.chain)
      if (!is_contracted[q.category().morphism(w).source] || !is_contracted[q.category().morphism(w).target]) return false;
    return true;
  };

  std::map<int, std::vector<SparseVec>> h;  // homological degree -> columns into Tot_{n+1}(C)
  for (int n = lo; n <= hi; ++n) {
    const auto& cells = tb.cells(n);
    std::vector<SparseVec> cols(cells.size());
    if (extension == HomotopyExtension::left_insertion) {
      for (std::size_t j = 0; j < cells.size(); ++j) cols[j] = insert_h(cells[j]);
    } else {
      // Solve inside the Hochschild complex of the contracted objects of the quotient, which is
      // acyclic; a solution elsewhere can differ from the natural h by a nonzero class.
      SparseSolver solver;
      const auto dq = tc.columns(n + 1);
      const auto& qcells = tc.cells(n + 1);
      for (std::size_t j = 0; j < dq.size(); ++j)
        if (in_contracted(qcells[j])) solver.insert(dq[j], {{j, Rational(1)}});
      const auto db = tb.columns(n);
      for (std::size_t j = 0; j < cells.size(); ++j) {
        // r = p i x - h(D x)
        SparseVec r;
        for (const auto& [k, x] : detail::map_cell(tc, cells[j], sub_to_quotient)) axpy(r, x, {{k, Rational(1)}});
        if (n - 1 >= lo)
          for (const auto& [k, x] : db[j]) axpy(r, -x, h.at(n - 1).at(k));
        if (cells[j].p == 0 && cells[j].chain.size() == 1) {
          cols[j] = insert_h(cells[j]);
          continue;
        }
        auto y = solver.solve(r);
        if (!y)
          throw HsesCertificateError("the homotopy h does not extend to the cell in homological degree " +
                                     std::to_string(n));
        cols[j] = std::move(*y);
      }
    }
    h[n] = std::move(cols);
  }
  out.ses.h.shift = -1;
  for (const auto& [n, cols] : h) out.ses.h.blocks[-n] = HochschildComplex::dense(cols, tc.dim(n + 1));

  // The brutal truncation at homological degree max_degree spoils the two lowest total degrees.
  out.window = {-hi + 1, 1};
  out.report = verify_hses(out.ses, out.window);
  if (!out.report.ok()) {
    std::string why = !out.report.dh_equals_pi ? "d(h) != p o i"
                      : !out.report.chain_maps  ? "i or p is not a chain map"
                                                : "the total complex is not acyclic";
    if (out.report.first_nonzero) why += " (first nonzero total degree " + std::to_string(*out.report.first_nonzero) + ")";
    throw HsesCertificateError("homotopy short exact sequence certificate failed: " + why);
  }
  return out;
}

}  // namespace cyq
