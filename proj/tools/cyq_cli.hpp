#pragma once

// Subcommands of the cyq tool and the exit-code contract:
// 0 every check passed, 1 a mathematical check failed, 2 bad input or usage.

#include "cyq_document.hpp"

#include <cyq/cyform.hpp>
#include <cyq/dgcat.hpp>
#include <cyq/dpa.hpp>
#include <cyq/hochschild.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace cyq::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInputError = 2 };

struct Options {
  std::string command, file;
  std::optional<std::size_t> lmax, bar_trunc, h_trunc;
  std::optional<std::pair<int, int>> degrees;
  std::string format = "text";
  std::string out;
};

/// Resolved numeric controls: flags override the document, which overrides defaults.
struct Settings {
  std::size_t lmax = 0, bar_trunc = 4, h_trunc = 3;
  std::pair<int, int> degrees{0, 3};
  int d = 0, max_degree = 2;
};

struct Report {
  explicit Report(std::string name) : command(std::move(name)) {}
  std::string command;
  bool ok = true;
  std::vector<std::string> text;
  json result = json::object();
  std::optional<std::string> failure;
};

/// Thrown by builders on data that parses but cannot be assembled.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string str(const Rational& r) { return r.get_str(); }

inline Matrix to_matrix(const Rows& rows, std::size_t r, std::size_t c, const std::string& what) {
  if (rows.empty() && (r == 0 || c == 0)) return Matrix(r, c);
  if (rows.size() != r || (r && rows[0].size() != c))
    throw InputError(what + ": expected a " + std::to_string(r) + "x" + std::to_string(c) + " matrix");
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  return m;
}

inline Matrix to_matrix(const Rows& rows) {
  const std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
  return to_matrix(rows, r, c, "matrix");
}

inline json terms_json(const TensorAlgebra& alg, const Terms& t) {
  json out = json::array();
  for (const auto& [w, c] : t) {
    json word = json::array();
    if (w.empty()) word.push_back(alg.base_name(w.unit));
    for (auto x : w.letters) word.push_back(alg.bimodule().generator(x).name);
    out.push_back({{"coef", str(c)}, {"word", word}});
  }
  return out;
}

inline json vec_json(const Vec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(str(x));
  return out;
}

inline std::string vec_text(const Vec& v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + str(v[k]);
  return s + ")";
}

inline json matrix_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(str(m(r, c)));
    out.push_back(row);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// builders

inline Settings resolve(const Document& doc, const Options& opt, std::size_t generators = 0) {
  Settings c;
  c.lmax = opt.lmax.value_or(doc.controls.lmax.value_or(2 * generators));
  c.bar_trunc = opt.bar_trunc.value_or(doc.controls.bar_trunc.value_or(c.bar_trunc));
  c.h_trunc = opt.h_trunc.value_or(doc.controls.h_trunc.value_or(c.h_trunc));
  c.degrees = opt.degrees.value_or(doc.controls.degrees.value_or(c.degrees));
  c.d = doc.controls.d.value_or(c.d);
  c.max_degree = doc.controls.max_degree.value_or(c.max_degree);
  return c;
}

inline json convention_block(const Settings& c) {
  return {{"degrees", "cohomological; V in degrees [-1, 0], t_j in degree -2; Hochschild degree N stored at -N"},
          {"composition", "g o f; Koszul signs (-1)^{|a||b|}"},
          {"differential", "d(g) = {w, g} + [t_j, g] by the necklace bracket of eta; d(t_j) = e_j (sum of Casimir "
                           "conjugates of eta) e_j"},
          {"hochschild", "b(f0 (x) f1) = (-1)^{|f0|} f0 f1 - (-1)^{|f0|(|f1|+1)} f1 f0; cyclic complex (b, B) with u^p"},
          {"snake", "delta(c) = -[b] for p(a) + h(b) = c, d(a) + i(b) = 0"},
          {"form", kFormConvention},
          {"ordering", "generators in declaration order, then t_1..t_n; terms in length-lexicographic word order"},
          {"truncation",
           {{"lmax", c.lmax},
            {"bar_trunc", c.bar_trunc},
            {"h_trunc", c.h_trunc},
            {"degrees", {c.degrees.first, c.degrees.second}},
            {"d", c.d},
            {"max_degree", c.max_degree}}}};
}

inline BasePtr build_base(const Document& doc) {
  if (doc.factors.empty()) throw InputError("the document has no [base] factors");
  std::vector<FieldExt> fields;
  std::vector<Rational> weights;
  for (const auto& f : doc.factors) {
    fields.emplace_back(Vec(f.poly.begin(), f.poly.end()));
    weights.push_back(f.weight);
  }
  return make_base(std::move(fields), std::move(weights));
}

inline std::size_t factor_index(const Document& doc, const std::string& name) {
  for (std::size_t j = 0; j < doc.factors.size(); ++j)
    if (doc.factors[j].name == name) return j;
  throw InputError("unknown factor '" + name + "'");
}

inline BimodulePtr build_bimodule(const Document& doc, const BasePtr& base) {
  std::vector<Generator> gens;
  std::map<std::string, std::size_t> index;
  for (const auto& g : doc.generators) {
    index.emplace(g.name, gens.size());
    gens.push_back({g.name, factor_index(doc, g.source), factor_index(doc, g.target), g.degree});
  }
  std::vector<ActionEntry> left, right;
  for (const auto& a : doc.actions) {
    const std::size_t j = factor_index(doc, a.factor);
    if (a.power < 0 || static_cast<std::size_t>(a.power) >= base->factor(j).degree())
      throw InputError("line " + std::to_string(a.pos.line) + ": power out of range for factor '" + a.factor + "'");
    Vec image(gens.size());
    for (const auto& t : a.image) {
      if (t.word.size() != 1) throw InputError("line " + std::to_string(a.pos.line) + ": an image term is one generator");
      image.at(index.at(t.word[0])) += t.coef;
    }
    (a.left ? left : right).push_back({base->offset(j) + static_cast<std::size_t>(a.power), index.at(a.generator), image});
  }
  return make_bimodule(base, std::move(gens), std::move(left), std::move(right));
}

inline Terms letter_terms(const Comb& c, const std::function<Letter(const std::string&)>& letter) {
  Terms t;
  for (const auto& term : c) {
    std::vector<Letter> w;
    for (const auto& n : term.word) w.push_back(letter(n));
    add_term(t, Word::of(std::move(w)), term.coef);
  }
  return t;
}

inline Terms generator_terms(const GradedBimodule& v, const Comb& c) {
  return letter_terms(c, [&](const std::string& n) { return static_cast<Letter>(*v.find(n)); });
}

struct QuiverInput {
  Quiver quiver;
  Terms potential;
};

inline QuiverInput build_quiver(const Document& doc) {
  if (doc.vertices.empty()) throw InputError("the document has no [quiver] vertices");
  QuiverInput out;
  out.quiver.vertices = doc.vertices.size();
  auto vertex = [&](const std::string& n) {
    for (std::size_t v = 0; v < doc.vertices.size(); ++v)
      if (doc.vertices[v].text == n) return v;
    throw InputError("unknown vertex '" + n + "'");
  };
  std::map<std::string, Letter> arrows;
  for (const auto& a : doc.arrows) {
    arrows.emplace(a.name, static_cast<Letter>(out.quiver.arrows.size()));
    out.quiver.arrows.push_back({a.name, vertex(a.source), vertex(a.target)});
  }
  out.potential = letter_terms(doc.potential, [&](const std::string& n) { return arrows.at(n); });
  return out;
}

/// The dg category of the document: from [modules] when present, else from [dgcat].
struct CategoryInput {
  DgCatPtr cat;
  std::optional<ModuleCategory> modules;
};

inline CategoryInput build_category(const Document& doc) {
  CategoryInput out;
  if (!doc.modules.empty()) {
    std::vector<DgModule> mods;
    auto find = [&](const std::string& n) -> const DgModule& {
      for (const auto& m : mods)
        if (m.name == n) return m;
      throw InputError("module '" + n + "' is used before it is declared");
    };
    for (const auto& m : doc.modules) {
      const std::string at = "module '" + m.name + "'";
      switch (m.kind) {
        case Module::Kind::plain: {
          const std::size_t n = m.degrees.size();
          DgModule x{m.name, m.degrees, m.d ? detail::to_matrix(*m.d, n, n, at) : Matrix(n, n), {}};
          for (const auto& a : m.actions) x.actions.push_back(detail::to_matrix(a, n, n, at));
          mods.push_back(std::move(x));
          break;
        }
        case Module::Kind::shift:
          mods.push_back(shift(find(m.from), m.by, m.name));
          break;
        case Module::Kind::cone: {
          const DgModule& x = find(m.from);
          const DgModule& y = find(m.to);
          mods.push_back(cone(x, y, detail::to_matrix(m.f, y.degrees.size(), x.degrees.size(), at), m.name));
          break;
        }
      }
    }
    std::erase_if(mods, [&](const DgModule& x) {
      for (const auto& m : doc.modules)
        if (m.name == x.name) return m.helper;
      return false;
    });
    std::vector<NamedMap> named;
    for (const auto& m : doc.maps) {
      const DgModule& x = find(m.source);
      const DgModule& y = find(m.target);
      named.push_back({m.name, m.source, m.target, m.degree,
                       detail::to_matrix(m.m, y.degrees.size(), x.degrees.size(), "map '" + m.name + "'")});
    }
    out.modules.emplace(std::move(mods), std::move(named));
    out.cat = out.modules->category_ptr();
    return out;
  }
  if (doc.objects.empty()) throw InputError("the document has no [dgcat] or [modules] category");
  DgCategoryData data;
  std::map<std::string, std::size_t> obj, mor;
  for (const auto& o : doc.objects) {
    obj.emplace(o.text, data.objects.size());
    data.objects.push_back(o.text);
  }
  for (const auto& o : doc.objects) {
    mor.emplace("1_" + o.text, data.morphisms.size());
    data.identities.push_back(data.morphisms.size());
    data.morphisms.push_back({"1_" + o.text, obj.at(o.text), obj.at(o.text), 0, 0});
  }
  for (const auto& m : doc.morphisms) {
    mor.emplace(m.name, data.morphisms.size());
    data.morphisms.push_back(
        {m.name, obj.at(m.source), obj.at(m.target), m.degree, static_cast<std::size_t>(m.weight)});
  }
  auto vec = [&](const Comb& c) {
    SparseVec v;
    for (const auto& t : c) {
      if (t.word.size() != 1) throw InputError("line " + std::to_string(t.pos.line) + ": a term is one morphism");
      axpy(v, t.coef, {{mor.at(t.word[0]), Rational(1)}});
    }
    return v;
  };
  for (const auto& r : doc.compositions) {
    if (!data.composition.emplace(std::make_pair(mor.at(r.args[0]), mor.at(r.args[1])), vec(r.value)).second)
      throw InputError("line " + std::to_string(r.pos.line) + ": composition given twice");
  }
  for (const auto& r : doc.differentials)
    if (!data.differential.emplace(mor.at(r.args[0]), vec(r.value)).second)
      throw InputError("line " + std::to_string(r.pos.line) + ": differential given twice");
  if (doc.weight_bound) data.weight_bound = *doc.weight_bound;
  out.cat = make_dgcat(std::move(data));
  return out;
}

inline std::size_t object_index(const FiniteDgCategory& c, const std::string& name) {
  auto x = c.find_object(name);
  if (!x) throw InputError("unknown object '" + name + "'");
  return *x;
}

inline std::vector<std::size_t> object_list(const FiniteDgCategory& c, const Names& names, const std::string& what) {
  if (names.empty()) throw InputError("the document lists no " + what);
  std::vector<std::size_t> out;
  for (const auto& n : names) out.push_back(object_index(c, n.text));
  return out;
}

inline SparseVec morphism_vec(const FiniteDgCategory& c, const Comb& comb) {
  SparseVec v;
  for (const auto& t : comb) {
    if (t.word.size() != 1) throw InputError("line " + std::to_string(t.pos.line) + ": a term is one morphism");
    auto f = c.find(t.word[0]);
    if (!f) throw InputError("line " + std::to_string(t.pos.line) + ": unknown morphism '" + t.word[0] + "'");
    axpy(v, t.coef, {{*f, Rational(1)}});
  }
  return v;
}

inline std::vector<RoofFraction> build_roofs(const FiniteDgCategory& c, const Document& doc) {
  std::vector<RoofFraction> out;
  for (const auto& r : doc.roofs)
    out.push_back({r.name, object_index(c, r.n), object_index(c, r.x_prime), object_index(c, r.x),
                   morphism_vec(c, r.a), morphism_vec(c, r.s), morphism_vec(c, r.b), morphism_vec(c, r.f)});
  return out;
}

/// phi on cells of the full subcategory `sub`; `perturbation` selects the `perturb` lines instead.
inline CellFunctional build_phi(const FiniteDgCategory& sub, const Document& doc, bool perturbation = false) {
  CellFunctional phi;
  for (const auto& v : doc.phi) {
    if (v.perturb != perturbation) continue;
    if (v.p < 0) throw InputError("line " + std::to_string(v.pos.line) + ": negative u-power");
    Cell cell{static_cast<std::size_t>(v.p), {}};
    for (const auto& n : v.chain) {
      auto f = sub.find(n);
      if (!f) throw InputError("line " + std::to_string(v.pos.line) + ": '" + n + "' is not a morphism between contracted objects");
      cell.chain.push_back(*f);
    }
    phi[cell] += v.value;
  }
  return phi;
}

inline HomotopySes build_hses(const Document& doc) {
  HomotopySes s;
  for (const char* n : {"B", "A", "C"})
    if (!doc.complexes.count(n)) throw InputError(std::string("[hses] is missing complex ") + n);
  auto complex = [&](const std::string& n) {
    const ComplexDecl& cx = doc.complexes.at(n);
    std::vector<Matrix> diffs;
    for (std::size_t j = 0; j + 1 < cx.dims.size(); ++j) {
      const int k = cx.lo + static_cast<int>(j);
      auto it = cx.d.find(k);
      diffs.push_back(it == cx.d.end() ? Matrix(cx.dims[j + 1], cx.dims[j])
                                       : detail::to_matrix(it->second, cx.dims[j + 1], cx.dims[j],
                                                           "diff " + n + " " + std::to_string(k)));
    }
    for (const auto& [k, m] : cx.d)
      if (k < cx.lo || k + 1 > cx.lo + static_cast<int>(cx.dims.size()) - 1)
        throw InputError("diff " + n + " " + std::to_string(k) + " is outside the complex");
    return ChainComplex(cx.lo, cx.dims, std::move(diffs));
  };
  s.b = complex("B");
  s.a = complex("A");
  s.c = complex("C");
  auto graded = [&](const std::string& n, int shift, const ChainComplex& x, const ChainComplex& y) {
    GradedMap g{shift, {}};
    auto it = doc.hses_maps.find(n);
    if (it == doc.hses_maps.end()) return g;
    for (const auto& [k, m] : it->second)
      g.blocks[k] = detail::to_matrix(m, y.dim(k + shift), x.dim(k), "map " + n + " " + std::to_string(k));
    return g;
  };
  s.i = graded("i", 0, s.b, s.a);
  s.p = graded("p", 0, s.a, s.c);
  s.h = graded("h", -1, s.b, s.c);
  return s;
}

/// The [hses] section describing s; the inverse of build_hses.
inline Document hses_document(const HomotopySes& s) {
  auto rows = [](const Matrix& m) {
    Rows out(m.rows(), std::vector<Rational>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
    return out;
  };
  Document doc;
  doc.sections.insert("hses");
  for (const auto& [name, cx] : {std::pair<std::string, const ChainComplex*>{"B", &s.b}, {"A", &s.a}, {"C", &s.c}}) {
    ComplexDecl& d = doc.complexes[name];
    d.lo = cx->lo();
    for (int k = cx->lo(); k <= cx->hi(); ++k) d.dims.push_back(cx->dim(k));
    for (int k = cx->lo(); k < cx->hi(); ++k)
      if (!cx->d(k).is_zero()) d.d[k] = rows(cx->d(k));
  }
  for (const auto& [name, g] : {std::pair<std::string, const GradedMap*>{"i", &s.i}, {"p", &s.p}, {"h", &s.h}})
    for (const auto& [k, m] : g->blocks)
      if (!m.is_zero()) doc.hses_maps[name][k] = rows(m);
  return doc;
}

// ---------------------------------------------------------------------------
// commands

namespace detail {

inline void differentials(Report& r, const DgTensorAlgebra& a) {
  const TensorAlgebra& alg = *a.algebra();
  json ds = json::array();
  for (Letter g : a.primary_generators()) {
    const TensorElement& dg = a.d(g);
    r.text.push_back("d(" + a.name(g) + ") = " + alg.format(dg.terms()));
    ds.push_back({{"generator", a.name(g)}, {"text", alg.format(dg.terms())}, {"terms", terms_json(alg, dg.terms())}});
  }
  r.result["differentials"] = ds;
  const DSquaredReport sq = check_d_squared(a);
  json residues = json::array();
  for (const auto& e : sq.entries)
    if (!e.residue.is_zero()) {
      r.text.push_back("d^2(" + e.generator + ") = " + alg.format(e.residue.terms()) + "  [residue]");
      residues.push_back({{"generator", e.generator}, {"text", alg.format(e.residue.terms())}});
    }
  r.result["d_squared"] = {{"ok", sq.ok()},
                           {"generators", sq.entries.size()},
                           {"truncation_limited", sq.truncation_limited()},
                           {"residues", residues}};
  r.text.push_back(sq.ok() ? "d^2 = 0 on " + std::to_string(sq.entries.size()) + " generators"
                           : "d^2 != 0: " + std::to_string(residues.size()) + " nonzero residues");
  if (sq.truncation_limited()) r.text.push_back("note: some d^2 checks reached the length truncation");
  if (!sq.ok()) {
    r.ok = false;
    r.failure = "d^2 != 0 on " + residues[0]["generator"].get<std::string>();
  }
}

inline void h_zero_block(Report& r, const AlgebraPresentation& h) {
  std::string dims;
  for (std::size_t k = 0; k < h.dims.size(); ++k) dims += (k ? " " : "") + std::to_string(h.dims[k]);
  r.text.push_back("H^0 dims by length bound 0.." + std::to_string(h.lmax) + ": " + dims + "; dimension " +
                   std::to_string(h.dimension) + (h.stabilized ? " (stabilized)" : " (not stabilized)"));
  r.result["h0"] = {{"dims", h.dims}, {"dimension", h.dimension}, {"stabilized", h.stabilized}};
}

}  // namespace detail

inline Report cmd_dpa(const Document& doc, const Options& opt) {
  Report r{"dpa"};
  auto base = build_base(doc);
  auto vc = build_bimodule(doc, base);
  const Settings c = resolve(doc, opt, vc->size());
  EtaElement eta(vc, generator_terms(*vc, doc.eta));
  auto a = build_dpa(vc, eta, generator_terms(*vc, doc.potential), c.lmax);
  r.text.push_back("deformed preprojective algebra: " + std::to_string(base->factor_count()) + " factors, " +
                   std::to_string(vc->size()) + " generators, L_max = " + std::to_string(c.lmax));
  for (const auto& o : doc.overrides) {
    const GradedBimodule& ext = a.algebra()->bimodule();
    auto letter = [&](const std::string& n) {
      auto g = ext.find(n);
      if (!g) throw InputError("line " + std::to_string(o.pos.line) + ": unknown generator '" + n + "'");
      return static_cast<Letter>(*g);
    };
    a = a.with_differential(letter(o.args[0]), TensorElement(a.algebra(), letter_terms(o.value, letter)));
    r.text.push_back("override: d(" + o.args[0] + ") replaced");
  }
  r.result["convention"] = convention_block(c);
  r.result["factors"] = base->factor_count();
  r.result["generators"] = vc->size();
  detail::differentials(r, a);
  detail::h_zero_block(r, h_zero(a));
  return r;
}

inline Report cmd_ginzburg(const Document& doc, const Options& opt) {
  Report r{"ginzburg"};
  auto q = build_quiver(doc);
  const Settings c = resolve(doc, opt, 2 * q.quiver.arrows.size());
  auto a = ginzburg(q.quiver, q.potential, c.lmax);
  r.text.push_back("Ginzburg dg algebra: " + std::to_string(q.quiver.vertices) + " vertices, " +
                   std::to_string(q.quiver.arrows.size()) + " arrows, L_max = " + std::to_string(c.lmax));
  r.result["convention"] = convention_block(c);
  detail::differentials(r, a);
  return r;
}

inline Report cmd_jacobian(const Document& doc, const Options& opt) {
  Report r{"jacobian"};
  auto q = build_quiver(doc);
  const Settings c = resolve(doc, opt, 2 * q.quiver.arrows.size());
  r.result["convention"] = convention_block(c);
  const JacobiVerdict v = jacobi_finite(q.quiver, q.potential, c.lmax);
  std::string dims;
  for (std::size_t k = 0; k < v.dims.size(); ++k) dims += (k ? " " : "") + std::to_string(v.dims[k]);
  r.text.push_back("Jacobian algebra dims by length bound 0.." + std::to_string(v.lmax) + ": " + dims);
  r.text.push_back(v.finite ? "finite dimensional: " + std::to_string(v.dimension)
                            : "inconclusive at L_max = " + std::to_string(v.lmax));
  r.result["dims"] = v.dims;
  r.result["finite"] = v.finite;
  r.result["dimension"] = v.dimension;
  return r;
}

inline Report cmd_homology(const Document& doc, const Options& opt, HomologyKind kind) {
  Report r{kind == HomologyKind::hochschild ? "hh" : "hc"};
  auto cat = build_category(doc).cat;
  const Settings c = resolve(doc, opt);
  r.result["convention"] = convention_block(c);
  const auto [lo, hi] = c.degrees;
  const GradedDims g = graded_dims(cat, lo, hi, c.bar_trunc, kind);
  json table = json::array();
  for (int n = lo; n <= hi; ++n) {
    r.text.push_back(std::string(kind == HomologyKind::hochschild ? "HH_" : "HC_") + std::to_string(n) + " = " +
                     std::to_string(g.at(n)) + (g.stable_at(n) ? "" : "  (unstable at bar_trunc - 1)"));
    table.push_back({{"degree", n}, {"dim", g.at(n)}, {"stable", g.stable_at(n)}});
  }
  r.result["dims"] = table;
  const MixedReport m = check_mixed(HochschildComplex(cat, c.bar_trunc, lo, hi));
  r.result["mixed"] = {{"b_squared_zero", m.b_squared_zero},
                       {"connes_squared_zero", m.connes_squared_zero},
                       {"anticommute", m.anticommute}};
  r.text.push_back(std::string("b^2 = 0: ") + (m.b_squared_zero ? "yes" : "NO") +
                   ", B^2 = 0: " + (m.connes_squared_zero ? "yes" : "NO") + ", bB + Bb = 0: " + (m.anticommute ? "yes" : "NO"));
  if (!m.ok()) {
    r.ok = false;
    r.failure = "mixed complex identities fail";
  }
  return r;
}

inline Report cmd_drinfeld(const Document& doc, const Options& opt) {
  Report r{"drinfeld"};
  auto cat = build_category(doc).cat;
  const Settings c = resolve(doc, opt);
  r.result["convention"] = convention_block(c);
  const auto contracted = object_list(*cat, doc.contracted, "contracted objects");
  auto q = drinfeld_quotient(cat, contracted, c.h_trunc);
  const H0Category h0 = h_zero_cat(q.category());
  json homs = json::array();
  for (std::size_t x = 0; x < cat->object_count(); ++x)
    for (std::size_t y = 0; y < cat->object_count(); ++y) {
      const std::size_t k = x * cat->object_count() + y;
      const bool stable = h0.previous_dims.empty() || h0.previous_dims[k] == h0.dim(x, y);
      r.text.push_back("dim H^0(" + cat->object(x) + ", " + cat->object(y) + ") = " + std::to_string(h0.dim(x, y)) +
                       (stable ? "" : "  (changes at h_trunc - 1)"));
      homs.push_back({{"source", cat->object(x)}, {"target", cat->object(y)}, {"dim", h0.dim(x, y)}, {"stable", stable}});
    }
  r.result["homs"] = homs;
  r.result["stabilized"] = h0.stabilized;
  r.text.push_back(h0.stabilized ? "stabilized in h-letter count" : "not stabilized in h-letter count");
  if (!h0.stabilized) {
    r.ok = false;
    r.failure = "H^0 of the quotient is not stable at h_trunc = " + std::to_string(c.h_trunc);
  }
  return r;
}

inline Report cmd_snake(const Document& doc, const Options& opt) {
  Report r{"snake"};
  const Settings c = resolve(doc, opt);
  r.result["convention"] = convention_block(c);
  const HomotopySes s = build_hses(doc);
  const HsesReport v = verify_hses(s);
  r.result["certificate"] = {{"shapes", v.shapes_ok},
                             {"chain_maps", v.chain_maps},
                             {"dh_equals_pi", v.dh_equals_pi},
                             {"total_squares_to_zero", v.squares_to_zero},
                             {"acyclic", v.acyclic()},
                             {"window", {v.lo, v.hi}}};
  if (!v.ok()) {
    r.ok = false;
    r.failure = !v.shapes_ok      ? "a map has the wrong shape"
                : !v.chain_maps   ? "i or p is not a chain map"
                : !v.dh_equals_pi ? "d(h) != p o i"
                : !v.squares_to_zero ? "the total differential does not square to zero"
                                     : "total complex is not acyclic in degree " + std::to_string(*v.first_nonzero);
    r.text.push_back("certificate broken: " + *r.failure);
    return r;
  }
  r.text.push_back("certificate: acyclic total complex on degrees " + std::to_string(v.lo) + ".." + std::to_string(v.hi));
  json table = json::array();
  for (int q = s.c.lo(); q <= s.c.hi(); ++q) {
    const Cohomology hc = s.c.cohomology(q);
    if (hc.dim() == 0) continue;
    const std::size_t nb = s.b.betti(q + 1);
    r.text.push_back("delta: H^" + std::to_string(q) + "(C) [" + std::to_string(hc.dim()) + "] -> H^" +
                     std::to_string(q + 1) + "(B) [" + std::to_string(nb) + "]");
    json cols = json::array();
    for (std::size_t j = 0; j < hc.dim(); ++j) {
      const ConnectingResult res = connecting(s, q, hc.representatives[j]);
      r.text.push_back("  class " + std::to_string(j) + " -> " + detail::vec_text(res.klass));
      cols.push_back(detail::vec_json(res.klass));
    }
    table.push_back({{"degree", q}, {"source_dim", hc.dim()}, {"target_dim", nb}, {"columns", cols}});
  }
  r.result["delta"] = table;
  return r;
}

namespace detail {

struct Subcategory {
  DgCatPtr sub;
  std::vector<std::size_t> embedding;
};

inline Subcategory contracted_sub(const FiniteDgCategory& c, const std::vector<std::size_t>& objects) {
  auto [sub, emb] = c.full_subcategory(objects);
  return {std::make_shared<const FiniteDgCategory>(std::move(sub)), std::move(emb)};
}

inline void form_block(Report& r, const DegreeDForm& form, const std::string& key) {
  const CyReport cy = check_cy_form(form);
  json traces = json::object();
  for (std::size_t x = 0; x < form.table->objects(); ++x)
    traces[form.table->category().object(x)] = vec_json(form.pretraces[x]);
  r.result[key] = {{"pretraces", traces}, {"nondegenerate", cy.nondegenerate}, {"symmetric", cy.symmetric}};
  r.text.push_back(key + ": " + (cy.nondegenerate ? "nondegenerate" : "degenerate") + ", " +
                   (cy.symmetric ? "graded symmetric" : "not symmetric"));
}

}  // namespace detail

inline Report cmd_amiot(const Document& doc, const Options& opt) {
  Report r{"amiot"};
  auto cat = build_category(doc).cat;
  const Settings c = resolve(doc, opt);
  r.result["convention"] = convention_block(c);
  const auto contracted = object_list(*cat, doc.contracted, "contracted objects");
  const auto sub = detail::contracted_sub(*cat, contracted);
  DegreeDForm form = [&] {
    if (!doc.pretraces.empty()) {
      auto table = std::make_shared<const GradedH0>(sub.sub, c.d);
      std::vector<Vec> pre(contracted.size());
      for (const auto& p : doc.pretraces) {
        auto x = sub.sub->find_object(p.object);
        if (!x) throw InputError("pretrace on '" + p.object + "', which is not contracted");
        pre[*x] = Vec(p.values.begin(), p.values.end());
      }
      for (std::size_t x = 0; x < pre.size(); ++x)
        if (pre[x].empty()) pre[x] = Vec(table->hd().dim(x, x));
      return form_from_pretraces(table, pre);
    }
    TotalComplex t(HochschildComplex(sub.sub, c.bar_trunc, -c.d, -c.d + 2), HomologyKind::cyclic);
    return dhc_to_form(t, c.d, build_phi(*sub.sub, doc));
  }();
  detail::form_block(r, form, "form on B");
  json values = json::array();
  for (const auto& roof : build_roofs(*cat, doc)) {
    const RoofReport v = verify_roof(*cat, c.d, roof);
    if (!v.ok()) {
      r.ok = false;
      if (!r.failure) r.failure = "roof '" + roof.name + "' rejected: " + v.failure;
      r.text.push_back("roof " + roof.name + ": rejected (" + v.failure + ")");
      values.push_back({{"roof", roof.name}, {"verified", false}, {"failure", v.failure}});
      continue;
    }
    auto n = sub.sub->find_object(cat->object(roof.n));
    if (!n) throw InputError("roof '" + roof.name + "' starts at a non-contracted object");
    const Rational value = amiot_form(form, *cat, sub.embedding, *n, roof);
    r.text.push_back("roof " + roof.name + ": t_N(b f a) = " + value.get_str());
    values.push_back({{"roof", roof.name}, {"verified", true}, {"value", value.get_str()}});
  }
  r.result["roofs"] = values;
  return r;
}

inline Report cmd_square(const Document& doc, const Options& opt) {
  Report r{"square"};
  auto cat = build_category(doc).cat;
  const Settings c = resolve(doc, opt);
  r.result["convention"] = convention_block(c);
  SquareInput in;
  in.ambient = cat;
  in.objects = object_list(*cat, doc.square_objects, "square objects");
  in.contracted = object_list(*cat, doc.contracted, "contracted objects");
  in.d = c.d;
  const auto sub = detail::contracted_sub(*cat, in.contracted).sub;
  in.phi = build_phi(*sub, doc);
  in.perturbation = build_phi(*sub, doc, true);
  in.roofs = build_roofs(*cat, doc);
  in.h_trunc = c.h_trunc;
  in.bar_trunc = c.bar_trunc;
  in.max_degree = c.max_degree;
  const SquareReport rep = square_check(in);
  json fr = json::array();
  for (const auto& f : rep.fractions) {
    r.text.push_back("roof " + f.roof + " on " + f.object + ": amiot " + f.amiot.get_str() + ", connecting " +
                     f.dhc.get_str() + (f.agree ? "  agree" : "  DISAGREE"));
    fr.push_back({{"roof", f.roof}, {"object", f.object}, {"amiot", f.amiot.get_str()}, {"connecting", f.dhc.get_str()},
                  {"agree", f.agree}});
  }
  json span = json::array();
  for (const auto& [x, dim, rank] : rep.span) {
    r.text.push_back("span on " + x + ": rank " + std::to_string(rank) + " of " + std::to_string(dim));
    span.push_back({{"object", x}, {"dim", dim}, {"rank", rank}});
  }
  r.result["fractions"] = fr;
  r.result["span"] = span;
  r.result["agree"] = rep.agree;
  r.result["spanning"] = rep.spanning;
  if (rep.quotient_form) detail::form_block(r, *rep.quotient_form, "quotient form");
  r.text.push_back(rep.ok() ? "square commutes on a spanning set of fractions"
                            : (rep.agree ? "fractions do not span" : "square disagrees: " + *rep.first_disagreement));
  if (!rep.ok()) {
    r.ok = false;
    r.failure = rep.agree ? "fractions do not span" : *rep.first_disagreement;
  }
  return r;
}

// ---------------------------------------------------------------------------
// dispatch

/// Runs one command; mathematical failures become a failed report, input errors propagate.
inline Report run_checked(const std::string& name, const std::function<Report()>& body) {
  try {
    return body();
  } catch (const ConstructionError&) {
    throw;
  } catch (const GradingError&) {
    throw;
  } catch (const ReducibilityError&) {
    throw;
  } catch (const NondegenerateTraceError&) {
    throw;
  } catch (const Error& e) {
    Report r{name};
    r.ok = false;
    r.failure = e.what();
    r.text.push_back("check failed: " + std::string(e.what()));
    return r;
  }
}

inline std::vector<Report> run_document(const std::string& command, const Document& doc, const Options& opt) {
  using K = HomologyKind;
  const std::map<std::string, std::function<Report()>> table = {
      {"dpa", [&] { return cmd_dpa(doc, opt); }},
      {"ginzburg", [&] { return cmd_ginzburg(doc, opt); }},
      {"jacobian", [&] { return cmd_jacobian(doc, opt); }},
      {"hh", [&] { return cmd_homology(doc, opt, K::hochschild); }},
      {"hc", [&] { return cmd_homology(doc, opt, K::cyclic); }},
      {"drinfeld", [&] { return cmd_drinfeld(doc, opt); }},
      {"snake", [&] { return cmd_snake(doc, opt); }},
      {"amiot", [&] { return cmd_amiot(doc, opt); }},
      {"square", [&] { return cmd_square(doc, opt); }}};
  if (command != "verify") return {run_checked(command, table.at(command))};
  // Every check the document declares.
  const bool category = !doc.modules.empty() || !doc.objects.empty();
  std::vector<std::string> plan;
  if (!doc.generators.empty()) plan.push_back("dpa");
  if (!doc.vertices.empty()) plan.insert(plan.end(), {"ginzburg", "jacobian"});
  if (category) plan.insert(plan.end(), {"hh", "hc"});
  if (category && !doc.contracted.empty()) plan.push_back("drinfeld");
  if (!doc.complexes.empty()) plan.push_back("snake");
  if (category && !doc.roofs.empty() && (!doc.phi.empty() || !doc.pretraces.empty())) plan.push_back("amiot");
  if (category && !doc.square_objects.empty()) plan.push_back("square");
  std::vector<Report> out;
  for (const auto& c : plan) out.push_back(run_checked(c, table.at(c)));
  return out;
}

inline json report_json(const Report& r) {
  json j = {{"command", r.command}, {"ok", r.ok}};
  if (r.failure) j["failure"] = *r.failure;
  json result = r.result;
  if (result.contains("convention")) {
    j["convention"] = result["convention"];
    result.erase("convention");
  }
  j["result"] = result;
  return j;
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"dpa", "ginzburg", "jacobian", "hh",    "hc",
                                                 "drinfeld", "snake", "amiot",   "square", "verify"};
  return names;
}

inline std::pair<int, int> parse_degrees(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw CLI::ValidationError("--degrees", "expected a..b");
  try {
    std::size_t used = 0;
    const int lo = std::stoi(s.substr(0, dots), &used);
    if (used != dots) throw std::invalid_argument(s);
    const std::string rest = s.substr(dots + 2);
    const int hi = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
    if (hi < lo) throw CLI::ValidationError("--degrees", "empty window " + s);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--degrees", "expected integers a..b, got " + s);
  }
}

/// Runs `cyq <args...>` (args exclude the program name); writes the report to `out`
/// or to --out, diagnostics to `err`, and returns the exit code.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cyq: exact computations with deformed preprojective algebras, Drinfeld quotients, "
               "Hochschild and cyclic homology and Calabi-Yau forms",
               "cyq"};
  app.require_subcommand(1);
  Options opt;
  std::string degrees;
  const std::map<std::string, std::string> help = {
      {"dpa", "build the deformed dg preprojective algebra, check d^2 = 0, compute H^0"},
      {"ginzburg", "Ginzburg dg algebra of a quiver with potential"},
      {"jacobian", "truncated Jacobian algebra dimensions"},
      {"hh", "truncated Hochschild homology"},
      {"hc", "truncated cyclic homology"},
      {"drinfeld", "H^0 of the Drinfeld quotient by the contracted objects"},
      {"snake", "certify a homotopy short exact sequence and tabulate its connecting map"},
      {"amiot", "values of the quotient form on roof fractions"},
      {"square", "compare the two paths of the form square"},
      {"verify", "run every check the document declares"}};
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("file", opt.file, "input document")->required();
    sub->add_option("--lmax", opt.lmax, "tensor length truncation");
    sub->add_option("--bar-trunc", opt.bar_trunc, "bar length truncation");
    sub->add_option("--h-trunc", opt.h_trunc, "h-letter truncation of the quotient");
    sub->add_option("--degrees", degrees, "degree window a..b");
    sub->add_option("--format", opt.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--out", opt.out, "write the report to a file");
    sub->callback([&opt, name] { opt.command = name; });
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (!degrees.empty()) opt.degrees = parse_degrees(degrees);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kInputError;
  }

  std::vector<Report> reports;
  try {
    std::ifstream in(opt.file, std::ios::binary);
    if (!in) throw InputError("cannot read '" + opt.file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const Document doc = parse_input(buf.str());
    reports = run_document(opt.command, doc, opt);
  } catch (const ParseError& e) {
    err << opt.file << ":" << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  bool ok = true;
  for (const auto& r : reports) ok = ok && r.ok;
  std::ostringstream os;
  if (opt.format == "json") {
    json j = {{"schema", 1}, {"command", opt.command}, {"file", opt.file}, {"ok", ok}};
    if (opt.command == "verify") {
      json checks = json::array();
      for (const auto& r : reports) checks.push_back(report_json(r));
      j["checks"] = checks;
    } else {
      const json body = report_json(reports.front());
      for (const auto& [k, v] : body.items())
        if (k != "command" && k != "ok") j[k] = v;
    }
    os << j.dump(2) << "\n";
  } else {
    for (const auto& r : reports) {
      if (opt.command == "verify") os << "== " << r.command << (r.ok ? " (ok)" : " (FAILED)") << "\n";
      for (const auto& line : r.text) os << line << "\n";
    }
    if (reports.empty()) os << "no checks declared\n";
    os << (ok ? "ok" : "FAILED") << "\n";
  }
  if (!opt.out.empty()) {
    std::ofstream f(opt.out, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << opt.out << "'\n";
      return kInputError;
    }
    f << os.str();
  } else {
    out << os.str();
  }
  return ok ? kOk : kCheckFailed;
}

}  // namespace cyq::cli
