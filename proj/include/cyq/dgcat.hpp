#pragma once

// Finite dg categories given by explicit tables, dg module categories over a
// finite-dimensional algebra, Drinfeld quotients and H^0 extraction.
//
// Every morphism basis element carries a weight (the h-letter count in a
// Drinfeld quotient, 0 otherwise). Weights add under composition and never
// increase under d, so the span of morphisms of weight <= w is a subcomplex.

#include <cyq/complex.hpp>
#include <cyq/errors.hpp>
#include <cyq/linalg.hpp>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace cyq {

struct Morphism {
  std::string name;
  std::size_t source = 0;
  std::size_t target = 0;
  int degree = 0;
  std::size_t weight = 0;

  friend bool operator==(const Morphism&, const Morphism&) = default;
};

struct DgCategoryData {
  std::vector<std::string> objects;
  std::vector<Morphism> morphisms;
  std::vector<std::size_t> identities;                               // one per object
  std::map<std::size_t, SparseVec> differential;                     // missing entries are 0
  std::map<std::pair<std::size_t, std::size_t>, SparseVec> composition;  // (g, f) -> g o f
  std::size_t weight_bound = std::numeric_limits<std::size_t>::max();
};

class FiniteDgCategory {
 public:
  enum class Check { full, none };

  explicit FiniteDgCategory(DgCategoryData data, Check check = Check::full) : data_(std::move(data)) {
    index();
    if (check == Check::full) verify();
  }

  const DgCategoryData& data() const { return data_; }
  std::size_t object_count() const { return data_.objects.size(); }
  const std::string& object(std::size_t x) const { return data_.objects.at(x); }
  std::size_t size() const { return data_.morphisms.size(); }
  const Morphism& morphism(std::size_t f) const { return data_.morphisms.at(f); }
  std::size_t identity(std::size_t x) const { return data_.identities.at(x); }
  std::size_t weight_bound() const { return data_.weight_bound; }

  std::optional<std::size_t> find_object(const std::string& name) const {
    for (std::size_t x = 0; x < data_.objects.size(); ++x)
      if (data_.objects[x] == name) return x;
    return std::nullopt;
  }

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  /// Basis of hom(x, y), ordered by degree.
  const std::vector<std::size_t>& hom(std::size_t x, std::size_t y) const { return homs_.at(x * object_count() + y); }

  const SparseVec& d(std::size_t f) const {
    auto it = data_.differential.find(f);
    return it == data_.differential.end() ? empty_ : it->second;
  }

  SparseVec d(const SparseVec& v) const {
    SparseVec out;
    for (const auto& [f, c] : v) axpy(out, c, d(f));
    return out;
  }

  /// g o f for basis morphisms; zero when not composable.
  SparseVec compose(std::size_t g, std::size_t f) const {
    const Morphism& mg = morphism(g);
    const Morphism& mf = morphism(f);
    if (mg.source != mf.target) return {};
    if (g == identity(mg.source)) return SparseVec{{f, Rational(1)}};
    if (f == identity(mf.target)) return SparseVec{{g, Rational(1)}};
    auto it = data_.composition.find({g, f});
    return it == data_.composition.end() ? SparseVec{} : it->second;
  }

  SparseVec compose(const SparseVec& g, const SparseVec& f) const {
    SparseVec out;
    for (const auto& [a, x] : g)
      for (const auto& [b, y] : f) axpy(out, x * y, compose(a, b));
    return out;
  }

  std::size_t weight(const SparseVec& v) const {
    std::size_t w = 0;
    for (const auto& [f, c] : v) w = std::max(w, morphism(f).weight);
    return w;
  }

  /// Full subcategory on the given objects; also returns the morphism map.
  std::pair<FiniteDgCategory, std::vector<std::size_t>> full_subcategory(const std::vector<std::size_t>& objects) const {
    std::map<std::size_t, std::size_t> obj;
    DgCategoryData sub;
    sub.weight_bound = data_.weight_bound;
    for (auto x : objects) {
      if (x >= object_count()) throw ConstructionError("subcategory object out of range");
      obj.emplace(x, sub.objects.size());
      sub.objects.push_back(object(x));
    }
    std::map<std::size_t, std::size_t> mor;
    std::vector<std::size_t> embedding;
    for (std::size_t f = 0; f < size(); ++f) {
      const Morphism& m = morphism(f);
      if (!obj.count(m.source) || !obj.count(m.target)) continue;
      mor.emplace(f, sub.morphisms.size());
      embedding.push_back(f);
      sub.morphisms.push_back({m.name, obj.at(m.source), obj.at(m.target), m.degree, m.weight});
    }
    auto remap = [&](const SparseVec& v) {
      SparseVec out;
      for (const auto& [f, c] : v) out.emplace(mor.at(f), c);
      return out;
    };
    for (auto x : objects) sub.identities.push_back(mor.at(identity(x)));
    for (const auto& [f, v] : data_.differential)
      if (mor.count(f) && !v.empty()) sub.differential.emplace(mor.at(f), remap(v));
    for (const auto& [gf, v] : data_.composition)
      if (mor.count(gf.first) && mor.count(gf.second) && !v.empty())
        sub.composition.emplace(std::make_pair(mor.at(gf.first), mor.at(gf.second)), remap(v));
    return {FiniteDgCategory(std::move(sub), Check::none), embedding};
  }

  /// Re-runs every axiom check; throws CategoryAxiomError naming the basis elements.
  void verify() const {
    const std::size_t n = size();
    for (std::size_t x = 0; x < object_count(); ++x) {
      const Morphism& id = morphism(identity(x));
      if (id.source != x || id.target != x || id.degree != 0 || id.weight != 0)
        throw CategoryAxiomError("identity of '" + object(x) + "' is not a weight-0 degree-0 endomorphism");
    }
    auto check_support = [&](const SparseVec& v, std::size_t src, std::size_t tgt, int deg, std::size_t wmax,
                             const std::string& what) {
      for (const auto& [f, c] : v) {
        if (f >= n) throw CategoryAxiomError(what + " refers to a missing morphism");
        const Morphism& m = morphism(f);
        if (m.source != src || m.target != tgt) throw CategoryAxiomError(what + " leaves its hom space");
        if (m.degree != deg) throw CategoryAxiomError(what + " has the wrong degree");
        if (m.weight > wmax) throw CategoryAxiomError(what + " raises the weight");
      }
    };
    for (const auto& [f, v] : data_.differential) {
      if (f >= n) throw CategoryAxiomError("differential of a missing morphism");
      const Morphism& m = morphism(f);
      check_support(v, m.source, m.target, m.degree + 1, m.weight, "d(" + m.name + ")");
    }
    for (const auto& [gf, v] : data_.composition) {
      const auto [g, f] = gf;
      if (g >= n || f >= n) throw CategoryAxiomError("composition of a missing morphism");
      const Morphism& mg = morphism(g);
      const Morphism& mf = morphism(f);
      const std::string what = mg.name + " o " + mf.name;
      if (mg.source != mf.target && !v.empty()) throw CategoryAxiomError(what + " is not composable");
      check_support(v, mf.source, mg.target, mg.degree + mf.degree, mg.weight + mf.weight, what);
      if ((g == identity(mg.source) && v != SparseVec{{f, Rational(1)}}) ||
          (f == identity(mf.target) && v != SparseVec{{g, Rational(1)}}))
        throw CategoryAxiomError(what + " contradicts unitality");
    }
    for (std::size_t f = 0; f < n; ++f)
      if (!d(d(f)).empty()) throw CategoryAxiomError("d^2 != 0 on '" + morphism(f).name + "'");
    const std::size_t bound = data_.weight_bound;
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t f = 0; f < n; ++f) {
        const Morphism& mg = morphism(g);
        const Morphism& mf = morphism(f);
        if (mg.source != mf.target || mg.weight + mf.weight > bound) continue;
        SparseVec lhs = d(compose(g, f));
        SparseVec rhs = compose(d(g), SparseVec{{f, Rational(1)}});
        axpy(rhs, mg.degree % 2 == 0 ? Rational(1) : Rational(-1), compose(SparseVec{{g, Rational(1)}}, d(f)));
        if (lhs != rhs) throw CategoryAxiomError("Leibniz rule fails on (" + mg.name + ", " + mf.name + ")");
        for (std::size_t e = 0; e < n; ++e) {
          const Morphism& me = morphism(e);
          if (mf.source != me.target || mg.weight + mf.weight + me.weight > bound) continue;
          const SparseVec left = compose(compose(g, f), SparseVec{{e, Rational(1)}});
          const SparseVec right = compose(SparseVec{{g, Rational(1)}}, compose(f, e));
          if (left != right)
            throw CategoryAxiomError("composition is not associative on (" + mg.name + ", " + mf.name + ", " +
                                     me.name + ")");
        }
      }
  }

 private:
  void index() {
    const std::size_t n = size(), k = object_count();
    if (data_.identities.size() != k) throw ConstructionError("one identity per object is required");
    for (std::size_t f = 0; f < n; ++f) {
      const Morphism& m = data_.morphisms[f];
      if (m.source >= k || m.target >= k)
        throw ConstructionError("morphism '" + m.name + "' refers to a missing object");
      if (!by_name_.emplace(m.name, f).second) throw ConstructionError("duplicate morphism name '" + m.name + "'");
    }
    for (auto id : data_.identities)
      if (id >= n) throw ConstructionError("identity refers to a missing morphism");
    homs_.assign(k * k, {});
    for (std::size_t f = 0; f < n; ++f) homs_[data_.morphisms[f].source * k + data_.morphisms[f].target].push_back(f);
    for (auto& h : homs_)
      std::stable_sort(h.begin(), h.end(),
                       [&](std::size_t a, std::size_t b) { return data_.morphisms[a].degree < data_.morphisms[b].degree; });
  }

  DgCategoryData data_;
  std::map<std::string, std::size_t> by_name_;
  std::vector<std::vector<std::size_t>> homs_;
  SparseVec empty_;
};

using DgCatPtr = std::shared_ptr<const FiniteDgCategory>;

inline DgCatPtr make_dgcat(DgCategoryData data) {
  return std::make_shared<const FiniteDgCategory>(std::move(data));
}

/// hom(x, y) restricted to weight <= max_weight as a cochain complex, with the
/// morphism ids of each degree.
struct HomComplex {
  ChainComplex complex;
  std::map<int, std::vector<std::size_t>> basis;

  Vec coordinates(int k, const SparseVec& v) const {
    auto it = basis.find(k);
    if (it == basis.end()) return {};
    Vec out(it->second.size());
    for (std::size_t j = 0; j < it->second.size(); ++j) {
      auto e = v.find(it->second[j]);
      if (e != v.end()) out[j] = e->second;
    }
    return out;
  }

  SparseVec element(int k, const Vec& coords) const {
    SparseVec out;
    auto it = basis.find(k);
    if (it == basis.end()) return out;
    for (std::size_t j = 0; j < coords.size(); ++j)
      if (sgn(coords[j]) != 0) out.emplace(it->second[j], coords[j]);
    return out;
  }
};

inline HomComplex hom_complex(const FiniteDgCategory& c, std::size_t x, std::size_t y,
                              std::size_t max_weight = std::numeric_limits<std::size_t>::max()) {
  HomComplex out;
  for (auto f : c.hom(x, y))
    if (c.morphism(f).weight <= max_weight) out.basis[c.morphism(f).degree].push_back(f);
  if (out.basis.empty()) return out;
  const int lo = out.basis.begin()->first, hi = out.basis.rbegin()->first;
  std::vector<std::size_t> dims;
  std::vector<Matrix> diffs;
  for (int k = lo; k <= hi; ++k) dims.push_back(out.basis.count(k) ? out.basis.at(k).size() : 0);
  for (int k = lo; k < hi; ++k) {
    Matrix m(dims[static_cast<std::size_t>(k + 1 - lo)], dims[static_cast<std::size_t>(k - lo)]);
    if (out.basis.count(k))
      for (std::size_t j = 0; j < out.basis.at(k).size(); ++j) {
        const Vec col = out.coordinates(k + 1, c.d(out.basis.at(k)[j]));
        for (std::size_t r = 0; r < col.size(); ++r) m(r, j) = col[r];
      }
    diffs.push_back(std::move(m));
  }
  out.complex = ChainComplex(lo, std::move(dims), std::move(diffs));
  return out;
}

// ---------------------------------------------------------------------------
// dg modules over a finite-dimensional algebra in degree 0

/// A bounded complex of modules: a graded basis, a differential of degree +1
/// and one action matrix per algebra generator (degree 0, commuting with d).
struct DgModule {
  std::string name;
  std::vector<int> degrees;
  Matrix d;
  std::vector<Matrix> actions;
};

/// Sigma^n M: (Sigma^n M)^k = M^{k+n}, with differential (-1)^n d.
inline DgModule shift(const DgModule& m, int n, std::string name = {}) {
  DgModule out = m;
  out.name = name.empty() ? "S^" + std::to_string(n) + m.name : std::move(name);
  for (auto& deg : out.degrees) deg -= n;
  if (n % 2 != 0) out.d = Rational(-1) * out.d;
  return out;
}

/// Cone(f) = Y (+) Sigma X with d = [[d_Y, f], [0, -d_X]], for a closed degree-0 f: X -> Y.
inline DgModule cone(const DgModule& x, const DgModule& y, const Matrix& f, std::string name) {
  const std::size_t nx = x.degrees.size(), ny = y.degrees.size();
  DgModule out;
  out.name = std::move(name);
  out.degrees = y.degrees;
  for (auto deg : x.degrees) out.degrees.push_back(deg - 1);
  out.d = Matrix(nx + ny, nx + ny);
  for (std::size_t r = 0; r < ny; ++r) {
    for (std::size_t c = 0; c < ny; ++c) out.d(r, c) = y.d(r, c);
    for (std::size_t c = 0; c < nx; ++c) out.d(r, ny + c) = f(r, c);
  }
  for (std::size_t r = 0; r < nx; ++r)
    for (std::size_t c = 0; c < nx; ++c) out.d(ny + r, ny + c) = -x.d(r, c);
  for (std::size_t a = 0; a < x.actions.size(); ++a) {
    Matrix m(nx + ny, nx + ny);
    for (std::size_t r = 0; r < ny; ++r)
      for (std::size_t c = 0; c < ny; ++c) m(r, c) = y.actions[a](r, c);
    for (std::size_t r = 0; r < nx; ++r)
      for (std::size_t c = 0; c < nx; ++c) m(ny + r, ny + c) = x.actions[a](r, c);
    out.actions.push_back(std::move(m));
  }
  return out;
}

/// A named morphism to place first in its hom basis.
struct NamedMap {
  std::string name;
  std::string source, target;
  int degree = 0;
  Matrix map;  // dim(target) x dim(source)
};

/// The dg category of the given modules with graded A-linear maps as homs and
/// d(F) = d_Y F - (-1)^{|F|} F d_X.
class ModuleCategory {
 public:
  ModuleCategory(std::vector<DgModule> modules, std::vector<NamedMap> named = {}) : modules_(std::move(modules)) {
    validate();
    build(named);
  }

  const FiniteDgCategory& category() const { return *cat_; }
  DgCatPtr category_ptr() const { return cat_; }
  const std::vector<DgModule>& modules() const { return modules_; }
  const Matrix& matrix(std::size_t f) const { return matrices_.at(f); }

  std::size_t object(const std::string& name) const {
    for (std::size_t x = 0; x < modules_.size(); ++x)
      if (modules_[x].name == name) return x;
    throw ConstructionError("unknown module '" + name + "'");
  }

  /// Coordinates of a graded A-linear map in the hom basis; throws if it is not one.
  SparseVec coordinates(std::size_t x, std::size_t y, int k, const Matrix& f) const {
    std::vector<std::size_t> ids;
    for (auto g : cat_->hom(x, y))
      if (cat_->morphism(g).degree == k) ids.push_back(g);
    const std::size_t rows = modules_[y].degrees.size(), cols = modules_[x].degrees.size();
    SparseVec out;
    if (f.rows() != rows || f.cols() != cols) throw ConstructionError("map has the wrong shape");
    if (ids.empty()) {
      if (!f.is_zero()) throw ConstructionError("map is not in the hom space");
      return out;
    }
    Matrix m(rows * cols, ids.size());
    Vec rhs(rows * cols);
    for (std::size_t j = 0; j < ids.size(); ++j)
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r * cols + c, j) = matrices_.at(ids[j])(r, c);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) rhs[r * cols + c] = f(r, c);
    auto sol = solve(m, rhs);
    if (!sol) throw ConstructionError("map is not a graded module map of degree " + std::to_string(k));
    for (std::size_t j = 0; j < ids.size(); ++j)
      if (sgn((*sol)[j]) != 0) out.emplace(ids[j], (*sol)[j]);
    return out;
  }

 private:
  void validate() const {
    if (modules_.empty()) return;
    const std::size_t na = modules_.front().actions.size();
    for (const auto& m : modules_) {
      const std::size_t n = m.degrees.size();
      if (n == 0) throw ConstructionError("module '" + m.name + "' is zero; it has no identity basis element");
      if (m.d.rows() != n || m.d.cols() != n) throw ConstructionError("module '" + m.name + "': bad differential shape");
      if (m.actions.size() != na) throw ConstructionError("module '" + m.name + "': wrong number of actions");
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          if (sgn(m.d(r, c)) != 0 && m.degrees[r] != m.degrees[c] + 1)
            throw GradingError("module '" + m.name + "': differential is not of degree 1");
          for (const auto& a : m.actions)
            if (sgn(a(r, c)) != 0 && m.degrees[r] != m.degrees[c])
              throw GradingError("module '" + m.name + "': action is not of degree 0");
        }
      if (!(m.d * m.d).is_zero()) throw ConstructionError("module '" + m.name + "': d^2 != 0");
      for (const auto& a : m.actions)
        if (!(a * m.d == m.d * a)) throw ConstructionError("module '" + m.name + "': d is not A-linear");
    }
  }

  std::vector<Matrix> hom_basis(std::size_t x, std::size_t y, int k) const {
    const DgModule& mx = modules_[x];
    const DgModule& my = modules_[y];
    const std::size_t rows = my.degrees.size(), cols = mx.degrees.size();
    std::vector<std::pair<std::size_t, std::size_t>> vars;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (my.degrees[r] == mx.degrees[c] + k) vars.emplace_back(r, c);
    if (vars.empty()) return {};
    std::vector<Vec> eqs;
    for (std::size_t a = 0; a < mx.actions.size(); ++a)
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          // (F act_X - act_Y F)(r, c) = 0
          Vec eq(vars.size());
          bool any = false;
          for (std::size_t v = 0; v < vars.size(); ++v) {
            const auto [vr, vc] = vars[v];
            Rational coef = 0;
            if (vr == r) coef += mx.actions[a](vc, c);
            if (vc == c) coef -= my.actions[a](r, vr);
            if (sgn(coef) != 0) {
              eq[v] = coef;
              any = true;
            }
          }
          if (any) eqs.push_back(std::move(eq));
        }
    std::vector<Vec> sols;
    if (eqs.empty()) {
      for (std::size_t v = 0; v < vars.size(); ++v) {
        Vec e(vars.size());
        e[v] = 1;
        sols.push_back(std::move(e));
      }
    } else {
      Matrix m(eqs.size(), vars.size());
      for (std::size_t r = 0; r < eqs.size(); ++r)
        for (std::size_t c = 0; c < vars.size(); ++c) m(r, c) = eqs[r][c];
      sols = nullspace(m);
    }
    std::vector<Matrix> out;
    for (const auto& s : sols) {
      Matrix f(rows, cols);
      for (std::size_t v = 0; v < vars.size(); ++v) f(vars[v].first, vars[v].second) = s[v];
      out.push_back(std::move(f));
    }
    return out;
  }

  static SparseVec flatten(const Matrix& m) {
    SparseVec out;
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c)
        if (sgn(m(r, c)) != 0) out.emplace(r * m.cols() + c, m(r, c));
    return out;
  }

  void build(const std::vector<NamedMap>& named) {
    DgCategoryData data;
    const std::size_t k = modules_.size();
    for (const auto& m : modules_) data.objects.push_back(m.name);
    data.identities.assign(k, 0);
    auto obj = [&](const std::string& name) {
      for (std::size_t x = 0; x < k; ++x)
        if (modules_[x].name == name) return x;
      throw ConstructionError("named map refers to unknown module '" + name + "'");
    };
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t y = 0; y < k; ++y) {
        std::set<int> degrees;
        for (auto a : modules_[x].degrees)
          for (auto b : modules_[y].degrees) degrees.insert(b - a);
        for (int deg : degrees) {
          auto basis = hom_basis(x, y, deg);
          if (basis.empty()) continue;
          SparseEchelon span;
          std::vector<std::pair<std::string, Matrix>> chosen;
          if (x == y && deg == 0) {
            chosen.emplace_back("1_" + modules_[x].name, Matrix::identity(modules_[x].degrees.size()));
            span.insert(flatten(chosen.back().second));
          }
          for (const auto& nm : named)
            if (obj(nm.source) == x && obj(nm.target) == y && nm.degree == deg) {
              if (!span.insert(flatten(nm.map))) throw ConstructionError("named map '" + nm.name + "' is redundant");
              chosen.emplace_back(nm.name, nm.map);
            }
          std::size_t j = 0;
          for (auto& b : basis)
            if (span.insert(flatten(b)))
              chosen.emplace_back(modules_[x].name + "->" + modules_[y].name + "[" + std::to_string(deg) + "]#" +
                                      std::to_string(j++),
                                  std::move(b));
          if (chosen.size() != basis.size())
            throw ConstructionError("named map between '" + modules_[x].name + "' and '" + modules_[y].name +
                                    "' is not a module map of degree " + std::to_string(deg));
          for (auto& [name, m] : chosen) {
            if (x == y && deg == 0 && name == "1_" + modules_[x].name) data.identities[x] = data.morphisms.size();
            data.morphisms.push_back({name, x, y, deg, 0});
            matrices_.push_back(std::move(m));
          }
        }
      }
    // Bootstrap a category with no structure to look up hom bases, then fill in.
    cat_ = std::make_shared<const FiniteDgCategory>(data, FiniteDgCategory::Check::none);
    for (std::size_t f = 0; f < data.morphisms.size(); ++f) {
      const Morphism& m = data.morphisms[f];
      const DgModule& mx = modules_[m.source];
      const DgModule& my = modules_[m.target];
      Matrix df = my.d * matrices_[f] - (m.degree % 2 == 0 ? Rational(1) : Rational(-1)) * (matrices_[f] * mx.d);
      SparseVec v = coordinates(m.source, m.target, m.degree + 1, df);
      if (!v.empty()) data.differential.emplace(f, std::move(v));
    }
    for (std::size_t g = 0; g < data.morphisms.size(); ++g)
      for (std::size_t f = 0; f < data.morphisms.size(); ++f) {
        const Morphism& mg = data.morphisms[g];
        const Morphism& mf = data.morphisms[f];
        if (mg.source != mf.target || g == data.identities[mg.source] || f == data.identities[mf.target]) continue;
        SparseVec v = coordinates(mf.source, mg.target, mg.degree + mf.degree, matrices_[g] * matrices_[f]);
        if (!v.empty()) data.composition.emplace(std::make_pair(g, f), std::move(v));
      }
    cat_ = std::make_shared<const FiniteDgCategory>(std::move(data));
  }

  std::vector<DgModule> modules_;
  std::vector<Matrix> matrices_;
  DgCatPtr cat_;
};

// ---------------------------------------------------------------------------
// Drinfeld quotients

/// A/B with h_B adjoined for every contracted B, |h_B| = -1, d(h_B) = 1_B.
/// Hom basis: words f_n h f_{n-1} ... h f_0 (f_0 applied first) of ambient
/// basis morphisms through contracted objects, with at most h_trunc h-letters.
/// The word's weight is its h-count.
class DrinfeldQuotientCat {
 public:
  DrinfeldQuotientCat(DgCatPtr ambient, std::vector<std::size_t> contracted, std::size_t h_trunc)
      : ambient_(std::move(ambient)), h_trunc_(h_trunc) {
    const FiniteDgCategory& a = *ambient_;
    contracted_.assign(a.object_count(), false);
    for (auto b : contracted) {
      if (b >= a.object_count()) throw ConstructionError("contracted object out of range");
      contracted_[b] = true;
    }
    enumerate();
    build();
  }

  const FiniteDgCategory& ambient() const { return *ambient_; }
  const FiniteDgCategory& category() const { return *cat_; }
  DgCatPtr category_ptr() const { return cat_; }
  std::size_t h_trunc() const { return h_trunc_; }
  bool contracted(std::size_t x) const { return contracted_.at(x); }
  const std::vector<std::size_t>& word(std::size_t f) const { return words_.at(f); }

  /// Image of an ambient morphism under the canonical functor.
  std::size_t include(std::size_t f) const { return inclusion_.at(f); }
  SparseVec include(const SparseVec& v) const {
    SparseVec out;
    for (const auto& [f, c] : v) out.emplace(include(f), c);
    return out;
  }

  /// h_B as a morphism of the quotient (the word 1_B h 1_B); requires h_trunc >= 1.
  std::size_t h(std::size_t b) const {
    const FiniteDgCategory& a = *ambient_;
    auto it = index_.find({a.identity(b), a.identity(b)});
    if (!contracted_.at(b) || it == index_.end()) throw ConstructionError("object is not contracted");
    return it->second;
  }

  std::optional<std::size_t> find_word(const std::vector<std::size_t>& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  void enumerate() {
    const FiniteDgCategory& a = *ambient_;
    std::vector<std::vector<std::size_t>> layer;
    for (std::size_t f = 0; f < a.size(); ++f) layer.push_back({f});
    for (std::size_t n = 0;; ++n) {
      std::vector<std::vector<std::size_t>> next;
      for (auto& w : layer) {
        const std::size_t end = a.morphism(w.back()).target;
        if (n < h_trunc_ && contracted_[end])
          for (std::size_t y = 0; y < a.object_count(); ++y)
            for (auto g : a.hom(end, y)) {
              auto v = w;
              v.push_back(g);
              next.push_back(std::move(v));
            }
        index_.emplace(w, words_.size());
        words_.push_back(std::move(w));
      }
      if (next.empty()) break;
      layer = std::move(next);
    }
  }

  std::string word_name(const std::vector<std::size_t>& w) const {
    if (w.size() == 1) return ambient_->morphism(w[0]).name;
    std::string out;
    for (std::size_t k = w.size(); k-- > 0;) {
      out += ambient_->morphism(w[k]).name;
      if (k > 0) out += " h ";
    }
    return out;
  }

  /// Linear combination of words from a list of ambient factors (f_0 first),
  /// each factor a SparseVec of ambient morphisms.
  SparseVec expand(const std::vector<SparseVec>& factors, const Rational& coef) const {
    std::vector<std::pair<std::vector<std::size_t>, Rational>> acc{{{}, coef}};
    for (const auto& fac : factors) {
      std::vector<std::pair<std::vector<std::size_t>, Rational>> next;
      for (const auto& [w, c] : acc)
        for (const auto& [f, x] : fac) {
          auto v = w;
          v.push_back(f);
          next.emplace_back(std::move(v), c * x);
        }
      acc = std::move(next);
    }
    SparseVec out;
    for (const auto& [w, c] : acc) {
      auto it = index_.find(w);
      if (it != index_.end()) axpy(out, c, SparseVec{{it->second, Rational(1)}});
    }
    return out;
  }

  void build() {
    const FiniteDgCategory& a = *ambient_;
    DgCategoryData data;
    data.objects = a.data().objects;
    data.weight_bound = h_trunc_;
    for (const auto& w : words_) {
      int deg = -static_cast<int>(w.size() - 1);
      for (auto f : w) deg += a.morphism(f).degree;
      data.morphisms.push_back({word_name(w), a.morphism(w.front()).source, a.morphism(w.back()).target, deg,
                                w.size() - 1});
    }
    inclusion_.resize(a.size());
    for (std::size_t f = 0; f < a.size(); ++f) inclusion_[f] = index_.at({f});
    for (std::size_t x = 0; x < a.object_count(); ++x) data.identities.push_back(inclusion_[a.identity(x)]);
    // Differential: Leibniz over the written order f_n, h, ..., h, f_0.
    for (std::size_t id = 0; id < words_.size(); ++id) {
      const auto& w = words_[id];
      const std::size_t n = w.size() - 1;
      SparseVec out;
      int left = 0;  // total degree of letters written to the left
      for (std::size_t k = n + 1; k-- > 0;) {
        const Rational sign = left % 2 == 0 ? Rational(1) : Rational(-1);
        std::vector<SparseVec> factors;
        for (auto f : w) factors.push_back(SparseVec{{f, Rational(1)}});
        factors[k] = a.d(w[k]);
        if (!factors[k].empty()) axpy(out, 1, expand(factors, sign));
        left += a.morphism(w[k]).degree;
        if (k > 0) {
          // d(h) = 1 between f_k and f_{k-1}
          const Rational hs = left % 2 == 0 ? Rational(1) : Rational(-1);
          std::vector<SparseVec> merged;
          for (std::size_t j = 0; j + 1 < k; ++j) merged.push_back(SparseVec{{w[j], Rational(1)}});
          merged.push_back(a.compose(w[k], w[k - 1]));
          for (std::size_t j = k + 1; j <= n; ++j) merged.push_back(SparseVec{{w[j], Rational(1)}});
          axpy(out, 1, expand(merged, hs));
          left -= 1;
        }
      }
      if (!out.empty()) data.differential.emplace(id, std::move(out));
    }
    // Composition: concatenate, composing the touching ambient letters.
    for (std::size_t g = 0; g < words_.size(); ++g)
      for (std::size_t f = 0; f < words_.size(); ++f) {
        const auto& wg = words_[g];
        const auto& wf = words_[f];
        if (a.morphism(wg.front()).source != a.morphism(wf.back()).target) continue;
        if (wg.size() + wf.size() - 2 > h_trunc_) continue;
        if (wg.size() == 1 && wg[0] == a.identity(a.morphism(wg[0]).source)) continue;
        if (wf.size() == 1 && wf[0] == a.identity(a.morphism(wf[0]).target)) continue;
        std::vector<SparseVec> factors;
        for (std::size_t j = 0; j + 1 < wf.size(); ++j) factors.push_back(SparseVec{{wf[j], Rational(1)}});
        factors.push_back(a.compose(wg.front(), wf.back()));
        for (std::size_t j = 1; j < wg.size(); ++j) factors.push_back(SparseVec{{wg[j], Rational(1)}});
        SparseVec v = expand(factors, 1);
        if (!v.empty()) data.composition.emplace(std::make_pair(g, f), std::move(v));
      }
    cat_ = std::make_shared<const FiniteDgCategory>(std::move(data), FiniteDgCategory::Check::none);
  }

  DgCatPtr ambient_;
  std::vector<bool> contracted_;
  std::size_t h_trunc_;
  std::vector<std::vector<std::size_t>> words_;
  std::map<std::vector<std::size_t>, std::size_t> index_;
  std::vector<std::size_t> inclusion_;
  DgCatPtr cat_;
};

inline DrinfeldQuotientCat drinfeld_quotient(DgCatPtr a, std::vector<std::size_t> contracted, std::size_t h_trunc) {
  return DrinfeldQuotientCat(std::move(a), std::move(contracted), h_trunc);
}

// ---------------------------------------------------------------------------
// H^k of a dg category

struct HTable {
  int degree = 0;
  std::size_t max_weight = 0;
  std::size_t objects = 0;
  std::vector<HomComplex> homs;          // [x * objects + y]
  std::vector<Cohomology> cohomology;    // degree-k cohomology of each hom complex

  std::size_t dim(std::size_t x, std::size_t y) const { return cohomology.at(x * objects + y).dim(); }

  /// Cycle representing the j-th basis class of H^k(x, y).
  SparseVec representative(std::size_t x, std::size_t y, std::size_t j) const {
    const std::size_t i = x * objects + y;
    return homs[i].element(degree, cohomology[i].representatives.at(j));
  }

  /// Class of a degree-k cycle; nullopt if v is not a cycle within the table.
  std::optional<Vec> klass(std::size_t x, std::size_t y, const SparseVec& v) const {
    const std::size_t i = x * objects + y;
    return cohomology[i].coordinates(homs[i].coordinates(degree, v));
  }
};

inline HTable h_table(const FiniteDgCategory& c, int k,
                      std::size_t max_weight = std::numeric_limits<std::size_t>::max()) {
  HTable t;
  t.degree = k;
  t.max_weight = std::min(max_weight, c.weight_bound());
  t.objects = c.object_count();
  for (std::size_t x = 0; x < t.objects; ++x)
    for (std::size_t y = 0; y < t.objects; ++y) {
      t.homs.push_back(hom_complex(c, x, y, t.max_weight));
      t.cohomology.push_back(t.homs.back().complex.cohomology(k));
    }
  return t;
}

/// H^0 with composition structure constants and, for weighted categories,
/// dimensions at max weight w - 1 and w with a stabilization flag.
struct H0Category {
  HTable table;
  std::vector<std::size_t> previous_dims;  // at max weight one less, when weighted
  bool stabilized = true;
  // compose[(x, y, z)] maps (j in H(y,z), i in H(x,y)) to coordinates in H(x,z)
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<std::vector<Vec>>> composition;

  std::size_t dim(std::size_t x, std::size_t y) const { return table.dim(x, y); }
};

inline H0Category h_zero_cat(const FiniteDgCategory& c) {
  H0Category out;
  out.table = h_table(c, 0);
  const std::size_t n = c.object_count();
  if (c.weight_bound() != std::numeric_limits<std::size_t>::max()) {
    const std::size_t w = c.weight_bound();
    if (w > 0) {
      HTable prev = h_table(c, 0, w - 1);
      for (std::size_t i = 0; i < n * n; ++i) {
        out.previous_dims.push_back(prev.cohomology[i].dim());
        if (out.previous_dims.back() != out.table.cohomology[i].dim()) out.stabilized = false;
      }
    } else {
      out.stabilized = false;
    }
  }
  // Composition on classes is only well defined where weights stay in range,
  // so it is recorded for unweighted categories and weight-0 representatives.
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        std::vector<std::vector<Vec>> block(out.table.dim(y, z), std::vector<Vec>(out.table.dim(x, y)));
        bool ok = true;
        for (std::size_t j = 0; j < out.table.dim(y, z) && ok; ++j)
          for (std::size_t i = 0; i < out.table.dim(x, y) && ok; ++i) {
            const SparseVec g = out.table.representative(y, z, j);
            const SparseVec f = out.table.representative(x, y, i);
            if (c.weight(g) + c.weight(f) > c.weight_bound()) {
              ok = false;
              break;
            }
            auto k = out.table.klass(x, z, c.compose(g, f));
            if (!k) throw InconsistencyError("composite of cycles is not a cycle");
            block[j][i] = *k;
          }
        if (ok) out.composition.emplace(std::make_tuple(x, y, z), std::move(block));
      }
  return out;
}

}  // namespace cyq
