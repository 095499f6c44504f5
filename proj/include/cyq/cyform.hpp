#pragma once

// Bilinear forms of degree -d on H^0 of a dg category, Amiot's pretrace on a
// Verdier quotient, and the comparison with the dual connecting map.
//
// Graded model: Hom(x, Sigma^n y) is read as H^n(x, y), the object bijection
// Sigma^n is the identity on names, and Sigma^n acts on a homogeneous map u by
// (-1)^{n|u|} u.

#include "dgcat.hpp"
#include "hochschild.hpp"

#include <functional>
#include <sstream>

namespace cyq {

inline constexpr const char* kFormConvention =
    "Hom(x, Sigma^n y) = H^n(x, y); Sigma^n u = (-1)^{n|u|} u; "
    "<f, g> = t_x(g o f); symmetry <f, g> = (-1)^{|f||g|} <g, Sigma^d f>";

/// H^0 and H^d of every hom complex, with composition of classes.
class GradedH0 {
 public:
  GradedH0(DgCatPtr c, int d, std::size_t max_weight = std::numeric_limits<std::size_t>::max())
      : cat_(std::move(c)), d_(d), h0_(h_table(*cat_, 0, max_weight)), hd_(h_table(*cat_, d, max_weight)) {}

  const FiniteDgCategory& category() const { return *cat_; }
  DgCatPtr category_ptr() const { return cat_; }
  int d() const { return d_; }
  std::size_t objects() const { return cat_->object_count(); }
  const HTable& h0() const { return h0_; }
  const HTable& hd() const { return hd_; }
  const HTable& table(int k) const {
    if (k == 0) return h0_;
    if (k == d_) return hd_;
    throw ConstructionError("no table in degree " + std::to_string(k));
  }

  SparseVec element(int k, std::size_t x, std::size_t y, const Vec& v) const {
    SparseVec out;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (sgn(v[j]) != 0) axpy(out, v[j], table(k).representative(x, y, j));
    return out;
  }

  Vec klass(int k, std::size_t x, std::size_t y, const SparseVec& v) const {
    auto c = table(k).klass(x, y, v);
    if (!c) throw InconsistencyError("composite is not a cycle within the weight truncation");
    return *c;
  }

  /// Class of g o f for f in H^kf(x, y), g in H^kg(y, z).
  Vec compose(int kg, int kf, std::size_t x, std::size_t y, std::size_t z, const Vec& g, const Vec& f) const {
    return klass(kg + kf, x, z, cat_->compose(element(kg, y, z, g), element(kf, x, y, f)));
  }

  Vec identity(std::size_t x) const { return klass(0, x, x, {{cat_->identity(x), Rational(1)}}); }

 private:
  DgCatPtr cat_;
  int d_;
  HTable h0_, hd_;
};

using GradedH0Ptr = std::shared_ptr<const GradedH0>;

inline Vec unit_vector(std::size_t n, std::size_t j) {
  Vec v(n);
  v.at(j) = 1;
  return v;
}

inline Rational dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw ConstructionError("dimension mismatch in a pairing");
  Rational s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

/// A family of pretraces t_x on H^d(x, x) and the pairings they induce.
struct DegreeDForm {
  GradedH0Ptr table;
  std::vector<Vec> pretraces;

  int d() const { return table->d(); }

  /// <f, g> for f in H^0(x, y) and g in H^d(y, x).
  Rational pair(std::size_t x, std::size_t y, const Vec& f, const Vec& g) const {
    return dot(pretraces.at(x), table->compose(d(), 0, x, y, x, g, f));
  }

  Matrix matrix(std::size_t x, std::size_t y) const {
    const std::size_t r = table->h0().dim(x, y), c = table->hd().dim(y, x);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = pair(x, y, unit_vector(r, i), unit_vector(c, j));
    return m;
  }

  /// t_x read back from the pairing at the identity.
  Vec pretrace(std::size_t x) const {
    const std::size_t n = table->hd().dim(x, x);
    Vec out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = pair(x, x, table->identity(x), unit_vector(n, j));
    return out;
  }
};

/// Checks naturality in the first argument: <f o u, g> = <f, Sigma^d u o g>.
inline DegreeDForm form_from_pretraces(GradedH0Ptr table, std::vector<Vec> pretraces) {
  if (pretraces.size() != table->objects()) throw ConstructionError("one pretrace per object is required");
  for (std::size_t x = 0; x < table->objects(); ++x)
    if (pretraces[x].size() != table->hd().dim(x, x))
      throw ConstructionError("pretrace on '" + table->category().object(x) + "' has the wrong dimension");
  DegreeDForm form{std::move(table), std::move(pretraces)};
  const GradedH0& t = *form.table;
  const int d = t.d();
  const std::size_t n = t.objects();
  for (std::size_t n0 = 0; n0 < n; ++n0)
    for (std::size_t n1 = 0; n1 < n; ++n1)
      for (std::size_t n2 = 0; n2 < n; ++n2) {
        const std::size_t du = t.h0().dim(n0, n1), df = t.h0().dim(n1, n2), dg = t.hd().dim(n2, n0);
        for (std::size_t i = 0; i < du; ++i)
          for (std::size_t j = 0; j < df; ++j)
            for (std::size_t k = 0; k < dg; ++k) {
              const Vec u = unit_vector(du, i), f = unit_vector(df, j), g = unit_vector(dg, k);
              const Rational lhs = form.pair(n0, n2, t.compose(0, 0, n0, n1, n2, f, u), g);
              const Rational rhs = form.pair(n1, n2, f, t.compose(d, 0, n2, n0, n1, u, g));
              if (lhs != rhs) {
                std::ostringstream why;
                why << "bifunctoriality fails on (" << t.category().object(n0) << ", " << t.category().object(n1)
                    << ", " << t.category().object(n2) << ") at basis (" << i << ", " << j << ", " << k << ")";
                throw NotAFormError(why.str());
              }
            }
      }
  return form;
}

struct PairCheck {
  std::size_t x = 0, y = 0, rows = 0, cols = 0, rank = 0;
  bool invertible = false;
};

struct CyReport {
  std::string convention = kFormConvention;
  std::vector<PairCheck> pairs;
  bool nondegenerate = true;
  bool symmetric = true;
  std::optional<std::string> first_asymmetry;
  bool ok() const { return nondegenerate && symmetric; }
};

inline CyReport check_cy_form(const DegreeDForm& form) {
  CyReport r;
  const GradedH0& t = *form.table;
  const int d = t.d();
  for (std::size_t x = 0; x < t.objects(); ++x)
    for (std::size_t y = 0; y < t.objects(); ++y) {
      const Matrix m = form.matrix(x, y);
      PairCheck p{x, y, m.rows(), m.cols(), m.rows() == 0 || m.cols() == 0 ? 0 : rank(m), false};
      p.invertible = p.rows == p.cols && p.rank == p.rows;
      r.nondegenerate = r.nondegenerate && p.invertible;
      r.pairs.push_back(p);
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
          const Vec f = unit_vector(m.rows(), i), g = unit_vector(m.cols(), j);
          // |f| = 0 in the graded model, so the sign is +1 and Sigma^d f = f.
          const Rational swapped = dot(form.pretraces[y], t.compose(0, d, y, x, y, f, g));
          if (m(i, j) != swapped && !r.first_asymmetry) {
            r.symmetric = false;
            r.first_asymmetry = "(" + t.category().object(x) + ", " + t.category().object(y) + ") at basis (" +
                                std::to_string(i) + ", " + std::to_string(j) + ")";
          }
        }
    }
  return r;
}

// ---------------------------------------------------------------------------
// roofs

/// N -a-> X' -s-> X -b-> Sigma N with f: X' -> Sigma^{d-1} X, in the graded
/// model: |a| = |s| = 0, |b| = 1, |f| = d - 1.
struct RoofFraction {
  std::string name;
  std::size_t n = 0, x_prime = 0, x = 0;
  SparseVec a, s, b, f;
};

struct RoofReport {
  bool homogeneous = true, closed = true, split = true, connecting = true;
  std::string failure;
  bool ok() const { return homogeneous && closed && split && connecting; }
};

namespace detail {

inline bool in_hom(const FiniteDgCategory& c, const SparseVec& v, std::size_t x, std::size_t y, int k) {
  for (const auto& [f, coef] : v) {
    const Morphism& m = c.morphism(f);
    if (m.source != x || m.target != y || m.degree != k) return false;
  }
  return true;
}

/// Some c of degree k - 1 with d(c) = v, if one exists.
inline std::optional<SparseVec> primitive(const FiniteDgCategory& c, std::size_t x, std::size_t y, int k,
                                          const SparseVec& v) {
  if (v.empty()) return SparseVec{};
  const HomComplex h = hom_complex(c, x, y, c.weight_bound());
  if (!h.basis.count(k - 1)) return std::nullopt;
  auto sol = solve(h.complex.d(k - 1), h.coordinates(k, v));
  if (!sol) return std::nullopt;
  return h.element(k - 1, *sol);
}

/// Solves sum_j x_j cols_j = target where every column and the target are
/// tuples of sparse vectors; returns the coefficients.
inline std::optional<Vec> solve_blocks(const std::vector<std::vector<SparseVec>>& cols,
                                       const std::vector<SparseVec>& target) {
  std::vector<std::map<std::size_t, std::size_t>> rows(target.size());
  auto row_of = [&](std::size_t block, std::size_t key) {
    auto [it, fresh] = rows[block].try_emplace(key, rows[block].size());
    return it->second;
  };
  for (const auto& col : cols)
    for (std::size_t b = 0; b < col.size(); ++b)
      for (const auto& [k, v] : col[b]) row_of(b, k);
  for (std::size_t b = 0; b < target.size(); ++b)
    for (const auto& [k, v] : target[b]) row_of(b, k);
  std::vector<std::size_t> offset(target.size() + 1, 0);
  for (std::size_t b = 0; b < target.size(); ++b) offset[b + 1] = offset[b] + rows[b].size();
  const std::size_t n = offset.back();
  if (cols.empty()) {
    for (const auto& t : target)
      if (!t.empty()) return std::nullopt;
    return Vec{};
  }
  Matrix m(n, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t b = 0; b < cols[j].size(); ++b)
      for (const auto& [k, v] : cols[j][b]) m(offset[b] + rows[b].at(k), j) = v;
  Vec rhs(n);
  for (std::size_t b = 0; b < target.size(); ++b)
    for (const auto& [k, v] : target[b]) rhs[offset[b] + rows[b].at(k)] = v;
  return solve(m, rhs);
}

inline std::vector<std::size_t> degree_basis(const FiniteDgCategory& c, std::size_t x, std::size_t y, int k) {
  std::vector<std::size_t> out;
  for (auto f : c.hom(x, y))
    if (c.morphism(f).degree == k) out.push_back(f);
  return out;
}

inline SparseVec unit(const FiniteDgCategory& c, std::size_t x) { return {{c.identity(x), Rational(1)}}; }

}  // namespace detail

/// The row must be graded split: degree-0 maps r: X' -> N and j: X -> X' with
/// r a = 1, s j = 1, a r + j s = 1, and then b = -r d(j) up to a boundary.
inline RoofReport verify_roof(const FiniteDgCategory& c, int d, const RoofFraction& roof) {
  RoofReport r;
  auto fail = [&](bool& flag, const std::string& why) {
    flag = false;
    if (r.failure.empty()) r.failure = why;
  };
  const struct {
    const SparseVec& v;
    std::size_t x, y;
    int k;
    const char* name;
  } maps[] = {{roof.a, roof.n, roof.x_prime, 0, "a"},
              {roof.s, roof.x_prime, roof.x, 0, "s"},
              {roof.b, roof.x, roof.n, 1, "b"},
              {roof.f, roof.x_prime, roof.x, d - 1, "f"}};
  for (const auto& m : maps) {
    if (!detail::in_hom(c, m.v, m.x, m.y, m.k))
      fail(r.homogeneous, std::string(m.name) + " does not lie in the expected hom space and degree");
    else if (!c.d(m.v).empty())
      fail(r.closed, std::string(m.name) + " is not closed");
  }
  if (!r.homogeneous) return r;

  const auto rs = detail::degree_basis(c, roof.x_prime, roof.n, 0);
  const auto js = detail::degree_basis(c, roof.x, roof.x_prime, 0);
  std::vector<std::vector<SparseVec>> cols;
  for (auto g : rs) {
    const SparseVec v{{g, Rational(1)}};
    cols.push_back({c.compose(v, roof.a), c.compose(roof.a, v), {}});
  }
  for (auto g : js) {
    const SparseVec v{{g, Rational(1)}};
    cols.push_back({{}, c.compose(v, roof.s), c.compose(roof.s, v)});
  }
  auto sol = detail::solve_blocks(
      cols, {detail::unit(c, roof.n), detail::unit(c, roof.x_prime), detail::unit(c, roof.x)});
  if (!sol) {
    fail(r.split, "the row N -> X' -> X is not graded split");
    return r;
  }
  SparseVec rr, jj;
  for (std::size_t k = 0; k < rs.size(); ++k)
    if (sgn((*sol)[k]) != 0) rr.emplace(rs[k], (*sol)[k]);
  for (std::size_t k = 0; k < js.size(); ++k)
    if (sgn((*sol)[rs.size() + k]) != 0) jj.emplace(js[k], (*sol)[rs.size() + k]);
  SparseVec defect = roof.b;
  axpy(defect, Rational(1), c.compose(rr, c.d(jj)));
  if (!detail::primitive(c, roof.x, roof.n, 1, defect))
    fail(r.connecting, "b is not the connecting map of the split row");
  return r;
}

/// t_N((Sigma^{d-1} b) o f o a). `form` lives on a full subcategory whose
/// morphism j is `embedding[j]` in `ambient`; `n` is N's index there.
inline Rational amiot_form(const DegreeDForm& form, const FiniteDgCategory& ambient,
                           const std::vector<std::size_t>& embedding, std::size_t n, const RoofFraction& roof) {
  const int d = form.d();
  if (ambient.object(roof.n) != form.table->category().object(n))
    throw ConstructionError("roof object '" + ambient.object(roof.n) + "' does not match the form object '" +
                            form.table->category().object(n) + "'");
  auto report = verify_roof(ambient, d, roof);
  if (!report.ok()) throw ConstructionError("roof '" + roof.name + "' rejected: " + report.failure);
  const Rational sign = (d - 1) % 2 == 0 ? 1 : -1;
  const SparseVec composite = ambient.compose(roof.b, ambient.compose(roof.f, roof.a));
  std::map<std::size_t, std::size_t> back;
  for (std::size_t j = 0; j < embedding.size(); ++j) back.emplace(embedding[j], j);
  SparseVec local;
  for (const auto& [g, x] : composite) {
    auto it = back.find(g);
    if (it == back.end()) throw ConstructionError("composite leaves the subcategory");
    axpy(local, sign * x, {{it->second, Rational(1)}});
  }
  return dot(form.pretraces.at(n), form.table->klass(d, n, n, local));
}

// ---------------------------------------------------------------------------
// dual cyclic classes

using CellFunctional = std::map<Cell, Rational>;

inline Rational evaluate(const CellFunctional& phi, const Cell& cell) {
  auto it = phi.find(cell);
  return it == phi.end() ? Rational(0) : it->second;
}

/// Raises NotClosedError unless phi vanishes on D(Tot_{n+1}).
inline void check_closed(const TotalComplex& t, int n, const CellFunctional& phi) {
  for (const auto& [cell, v] : phi)
    if (!t.index(cell) || t.hochschild().degree(cell.chain) - 2 * static_cast<int>(cell.p) != n)
      throw ConstructionError("phi is supported off the cells of degree " + std::to_string(n));
  if (n + 1 > t.hi()) throw ConstructionError("closedness needs degree " + std::to_string(n + 1) + " in the window");
  const auto& target = t.cells(n);
  const auto cols = t.columns(n + 1);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    Rational s = 0;
    for (const auto& [k, x] : cols[j]) s += x * evaluate(phi, target[k]);
    if (sgn(s) != 0) throw NotClosedError("phi does not vanish on the boundary of cell " + std::to_string(j));
  }
}

/// Pretraces from a functional on length-0 chains of H^d(x, x) representatives.
inline std::vector<Vec> pretraces_from(const GradedH0& table, const std::function<Rational(const SparseVec&)>& psi) {
  std::vector<Vec> out;
  for (std::size_t x = 0; x < table.objects(); ++x) {
    Vec t(table.hd().dim(x, x));
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = psi(table.hd().representative(x, x, j));
    out.push_back(std::move(t));
  }
  return out;
}

/// The form <f, g> = phi([g o f]) of degree -d on H^0 of t's category.
inline DegreeDForm dhc_to_form(const TotalComplex& t, int d, const CellFunctional& phi) {
  check_closed(t, -d, phi);
  auto table = std::make_shared<const GradedH0>(t.hochschild().category_ptr(), d);
  auto psi = [&](const SparseVec& v) {
    Rational s = 0;
    for (const auto& [g, x] : v) s += x * evaluate(phi, Cell{0, {g}});
    return s;
  };
  return form_from_pretraces(table, pretraces_from(*table, psi));
}

// ---------------------------------------------------------------------------
// the square

/// `ambient` holds every roof; Hochschild complexes use the full subcategory on
/// `objects`, and `contracted` lists ambient indices of the subcategory B.
/// phi is a functional on cells of Tot_{-d} of B (morphism indices of the
/// full subcategory of `ambient` on `contracted`, in that order).
struct SquareInput {
  DgCatPtr ambient;
  std::vector<std::size_t> objects;
  std::vector<std::size_t> contracted;
  int d = 0;
  CellFunctional phi;
  std::vector<RoofFraction> roofs;
  std::size_t h_trunc = 3, bar_trunc = 4;
  int max_degree = 2;
  /// Added to phi on the connecting-map side only; a negative control.
  CellFunctional perturbation;
};

struct FractionCheck {
  std::string roof;
  std::string object;
  Rational amiot, dhc;
  bool agree = false;
};

struct SquareReport {
  std::string convention = kFormConvention;
  std::size_t bar_trunc = 0, h_trunc = 0;
  int max_degree = 0;
  std::vector<FractionCheck> fractions;
  /// Per object X of the quotient: dim H^{d-1}(X, X) and the rank of the fraction classes.
  std::vector<std::tuple<std::string, std::size_t, std::size_t>> span;
  bool agree = true, spanning = true;
  std::optional<std::string> first_disagreement;
  std::optional<DegreeDForm> quotient_form;  // from the connecting-map path
  bool ok() const { return agree && spanning; }
};

/// Image of f o s^{-1} in the Drinfeld quotient, as an element of degree d - 1.
inline SparseVec fraction_image(const DrinfeldQuotientCat& q, const RoofFraction& roof) {
  const FiniteDgCategory& c = q.category();
  const auto g0 = detail::degree_basis(c, roof.x, roof.x_prime, 0);
  const auto c1 = detail::degree_basis(c, roof.x, roof.x, -1);
  const SparseVec s = q.include(roof.s);
  std::vector<std::vector<SparseVec>> cols;
  for (auto g : g0) {
    const SparseVec v{{g, Rational(1)}};
    cols.push_back({c.d(v), c.compose(s, v)});
  }
  for (auto k : c1) {
    SparseVec dk = c.d(k);
    for (auto& [i, x] : dk) x = -x;
    cols.push_back({{}, dk});
  }
  auto sol = detail::solve_blocks(cols, {{}, detail::unit(c, roof.x)});
  if (!sol) throw InconsistencyError("s is not invertible in the quotient within the truncation");
  SparseVec inv;
  for (std::size_t j = 0; j < g0.size(); ++j)
    if (sgn((*sol)[j]) != 0) inv.emplace(g0[j], (*sol)[j]);
  return c.compose(q.include(roof.f), inv);
}

inline SquareReport square_check(const SquareInput& in) {
  SquareReport rep;
  rep.bar_trunc = in.bar_trunc;
  rep.h_trunc = in.h_trunc;
  rep.max_degree = in.max_degree;
  const FiniteDgCategory& amb = *in.ambient;

  auto [small, small_emb] = amb.full_subcategory(in.objects);
  auto small_ptr = std::make_shared<const FiniteDgCategory>(std::move(small));
  std::vector<std::size_t> contracted_small;
  for (auto x : in.contracted) {
    auto it = std::find(in.objects.begin(), in.objects.end(), x);
    if (it == in.objects.end()) throw ConstructionError("contracted objects must be among the objects");
    contracted_small.push_back(static_cast<std::size_t>(it - in.objects.begin()));
  }
  // Throws when the sequence is not certified.
  auto ses = hochschild_ses(small_ptr, contracted_small, in.h_trunc, in.bar_trunc, in.max_degree,
                            HomologyKind::cyclic);
  const DrinfeldQuotientCat& qs = *ses.quotient;
  const int d = in.d;

  // Down then across: the form of phi on H^0(B), pushed through Amiot's construction.
  const DegreeDForm form_b = dhc_to_form(*ses.tb, d, in.phi);
  std::vector<std::size_t> b_to_amb;
  for (auto f : ses.embedding) b_to_amb.push_back(small_emb.at(f));

  // Across then down: phi o delta on length-0 chains of the quotient.
  CellFunctional phi_delta = in.phi;
  for (const auto& [cell, v] : in.perturbation) phi_delta[cell] += v;
  auto dual_delta = [&](const SparseVec& u) {
    Vec c(ses.tc->dim(1 - d));
    for (const auto& [w, x] : u) {
      auto idx = ses.tc->index(Cell{0, {w}});
      if (!idx) throw InconsistencyError("quotient chain outside the Hochschild window");
      c[*idx] += x;
    }
    const auto res = connecting(ses.ses, d - 1, c);
    Rational s = 0;
    const auto& cells = ses.tb->cells(-d);
    for (std::size_t k = 0; k < res.image.size(); ++k)
      if (sgn(res.image[k]) != 0) s += res.image[k] * evaluate(phi_delta, cells[k]);
    return s;
  };
  auto table_q = std::make_shared<const GradedH0>(qs.category_ptr(), d - 1, in.h_trunc);
  rep.quotient_form = form_from_pretraces(table_q, pretraces_from(*table_q, dual_delta));

  // Fractions live in the quotient of the ambient; translate words into the small quotient.
  DrinfeldQuotientCat qa(in.ambient, in.contracted, std::min<std::size_t>(in.h_trunc, 2));
  std::map<std::size_t, std::size_t> amb_to_small;
  for (std::size_t j = 0; j < small_emb.size(); ++j) amb_to_small.emplace(small_emb[j], j);
  auto translate = [&](const SparseVec& u) {
    SparseVec out;
    for (const auto& [w, x] : u) {
      std::vector<std::size_t> word;
      for (auto f : qa.word(w)) {
        auto it = amb_to_small.find(f);
        if (it == amb_to_small.end()) throw ConstructionError("fraction leaves the chosen objects");
        word.push_back(it->second);
      }
      auto idx = qs.find_word(word);
      if (!idx) throw InconsistencyError("fraction word exceeds the h truncation");
      axpy(out, x, {{*idx, Rational(1)}});
    }
    return out;
  };

  std::map<std::size_t, std::vector<Vec>> classes;  // small object -> fraction classes
  for (const auto& roof : in.roofs) {
    auto n_it = std::find(in.contracted.begin(), in.contracted.end(), roof.n);
    if (n_it == in.contracted.end()) throw ConstructionError("roof '" + roof.name + "' has N outside B");
    const std::size_t n_b = static_cast<std::size_t>(n_it - in.contracted.begin());
    FractionCheck fc;
    fc.roof = roof.name;
    fc.object = amb.object(roof.x);
    fc.amiot = amiot_form(form_b, amb, b_to_amb, n_b, roof);
    const SparseVec u = translate(fraction_image(qa, roof));
    fc.dhc = dual_delta(u);
    fc.agree = fc.amiot == fc.dhc;
    if (!fc.agree && !rep.first_disagreement)
      rep.first_disagreement = "roof '" + roof.name + "': Amiot " + fc.amiot.get_str() + ", connecting map " +
                               fc.dhc.get_str();
    rep.agree = rep.agree && fc.agree;
    auto x_it = std::find(in.objects.begin(), in.objects.end(), roof.x);
    if (x_it == in.objects.end()) throw ConstructionError("roof '" + roof.name + "' has X outside the objects");
    const std::size_t x_small = static_cast<std::size_t>(x_it - in.objects.begin());
    classes[x_small].push_back(table_q->klass(d - 1, x_small, x_small, u));
    rep.fractions.push_back(std::move(fc));
  }
  for (std::size_t x = 0; x < table_q->objects(); ++x) {
    const std::size_t dim = table_q->hd().dim(x, x);
    std::size_t r = 0;
    if (dim > 0 && classes.count(x)) r = rank(Matrix::from_columns(classes.at(x), dim));
    rep.span.emplace_back(qs.category().object(x), dim, r);
    rep.spanning = rep.spanning && r == dim;
  }
  return rep;
}

}  // namespace cyq
