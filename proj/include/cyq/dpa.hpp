#pragma once

// Deformed dg preprojective algebras T_l(V (+) z l) and Ginzburg dg algebras,
// the d^2 certificate and truncated H^0 presentations.

#include <cyq/base_field.hpp>
#include <cyq/bimodule.hpp>
#include <cyq/errors.hpp>
#include <cyq/necklace.hpp>
#include <cyq/tensor.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cyq {

/// Semifree dg algebra T_l(W) with d given on the Q-basis of W.
class DgTensorAlgebra {
 public:
  DgTensorAlgebra(AlgebraPtr alg, std::vector<TensorElement> differential, std::vector<Letter> primary)
      : alg_(std::move(alg)), d_(std::move(differential)), primary_(std::move(primary)) {
    if (d_.size() != alg_->bimodule().size()) throw ConstructionError("differential table has the wrong size");
    for (Letter g = 0; g < d_.size(); ++g) {
      if (d_[g].is_zero()) continue;
      if (d_[g].algebra() != alg_) throw ConstructionError("differential lives in another algebra");
      auto deg = d_[g].degree();
      if (!deg || *deg != alg_->letter_degree(g) + 1)
        throw GradingError("d(" + alg_->bimodule().generator(g).name + ") does not have degree |g|+1");
    }
  }

  const AlgebraPtr& algebra() const { return alg_; }
  std::size_t lmax() const { return alg_->lmax(); }
  const TensorElement& d(Letter g) const { return d_.at(g); }
  /// Generators reported by the d^2 certificate (one per l-generator).
  const std::vector<Letter>& primary_generators() const { return primary_; }
  const std::string& name(Letter g) const { return alg_->bimodule().generator(g).name; }
  std::optional<Letter> find(const std::string& name) const {
    auto g = alg_->bimodule().find(name);
    if (!g) return std::nullopt;
    return static_cast<Letter>(*g);
  }

  /// Graded Leibniz extension: d(x_1...x_n) = sum (-1)^{|x_1...x_{k-1}|} x_1...d(x_k)...x_n.
  TensorElement d(const TensorElement& x) const {
    Terms raw;
    for (const auto& [w, c] : x.terms()) {
      long prefix = 0;
      for (std::size_t k = 0; k < w.length(); ++k) {
        const Letter g = w.letters[k];
        const Terms& dg = d_[g].terms();
        if (!dg.empty()) {
          Terms mid = dg;
          if (k > 0) mid = alg_->concat(Terms{{Word::of({w.letters.begin(), w.letters.begin() + k}), 1}}, mid);
          if (k + 1 < w.length())
            mid = alg_->concat(mid, Terms{{Word::of({w.letters.begin() + k + 1, w.letters.end()}), 1}});
          add_terms(raw, mid, c * koszul(prefix));
        }
        prefix += alg_->letter_degree(g);
      }
    }
    bool truncated = x.truncated();
    for (const auto& [w, c] : x.terms())
      for (auto g : w.letters) truncated = truncated || d_[g].truncated();
    return TensorElement(alg_, raw, truncated);
  }

  /// Copy with d(g) replaced (used for negative controls and hand-built inputs).
  DgTensorAlgebra with_differential(Letter g, TensorElement dg) const {
    auto table = d_;
    table.at(g) = std::move(dg);
    return DgTensorAlgebra(alg_, std::move(table), primary_);
  }

 private:
  AlgebraPtr alg_;
  std::vector<TensorElement> d_;
  std::vector<Letter> primary_;
};

/// V (+) z l, with z_j = e_j z in degree -2; the Q-basis of the z-part is
/// z_j b_p for p in factor j, named z_name[j] followed by ".x^k" for k > 0.
inline BimodulePtr extend_by_center(const GradedBimodule& v, const std::vector<std::string>& z_names) {
  const SemisimpleBase& l = v.base();
  if (z_names.size() != l.factor_count()) throw ConstructionError("one z name per base factor is required");
  std::vector<Generator> gens = v.generators();
  std::map<std::size_t, std::size_t> letter_of;  // base index p -> generator
  for (std::size_t j = 0; j < l.factor_count(); ++j)
    for (std::size_t k = 0; k < l.factor(j).degree(); ++k) {
      std::string name = z_names[j];
      if (k == 1) name += ".x";
      if (k > 1) name += ".x^" + std::to_string(k);
      letter_of[l.offset(j) + k] = gens.size();
      gens.push_back({name, j, j, -2});
    }
  const std::size_t n = gens.size();
  auto widen = [&](const std::vector<ActionEntry>& entries) {
    std::vector<ActionEntry> out;
    for (auto e : entries) {
      e.image.resize(n);
      out.push_back(std::move(e));
    }
    return out;
  };
  std::vector<ActionEntry> left = widen(v.left_entries()), right = widen(v.right_entries());
  for (std::size_t p = 0; p < l.dim(); ++p) {
    const std::size_t j = l.factor_of(p);
    for (std::size_t r = l.offset(j); r < l.offset(j) + l.factor(j).degree(); ++r) {
      Vec img(n);
      const Vec& prod = l.basis_product(r, p);
      for (std::size_t s = 0; s < prod.size(); ++s)
        if (sgn(prod[s]) != 0) img[letter_of.at(s)] = prod[s];
      left.push_back({r, letter_of.at(p), img});
      right.push_back({r, letter_of.at(p), img});
    }
  }
  return make_bimodule(v.base_ptr(), std::move(gens), std::move(left), std::move(right));
}

inline std::vector<std::string> default_z_names(std::size_t factors) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < factors; ++j) names.push_back("t" + std::to_string(j + 1));
  return names;
}

/// Pi(l, V, eta, w): d(z) = sigma' eta sigma'', d(f) = {w, f} on V.
inline DgTensorAlgebra build_dpa(const BimodulePtr& vc, const EtaElement& eta, const Terms& w_raw, std::size_t lmax,
                                 std::vector<std::string> z_names = {}) {
  const SemisimpleBase& l = vc->base();
  if (!vc->concentrated_in(-1, 0)) throw ConstructionError("V must be concentrated in degrees [-1, 0]");
  if (eta.bimodule() != vc) throw ConstructionError("eta is defined over another bimodule");
  const EtaReport report = check_eta(eta);
  if (!report.degree_ok) throw DegenerateEtaError("eta is not of degree -1");
  if (!report.antisymmetric) throw DegenerateEtaError("eta is not graded antisymmetric");
  if (!report.nondegenerate) throw DegenerateEtaError("eta is degenerate");
  if (z_names.empty()) z_names = default_z_names(l.factor_count());

  auto small = make_tensor_algebra(vc, lmax);
  Necklace w(small, w_raw);
  if (!w.is_zero() && w.degree() != std::optional<int>(0)) throw ConstructionError("the potential must have degree 0");
  Bisymplectic omega(small, eta);

  auto ext = extend_by_center(*vc, z_names);
  auto alg = make_tensor_algebra(ext, lmax);
  std::vector<TensorElement> d(ext->size(), TensorElement::zero(alg));
  for (Letter g = 0; g < vc->size(); ++g) {
    auto dg = necklace_bracket(w, TensorElement::generator(small, g), omega);
    d[g] = TensorElement(alg, dg.terms(), dg.truncated());
  }
  // d(z) = sum_{p,q} C_pq b_p eta b_q with C the Casimir coefficients.
  const Matrix& cas = casimir(l).coefficients;
  Terms dz;
  for (std::size_t p = 0; p < l.dim(); ++p)
    for (std::size_t q = 0; q < l.dim(); ++q) {
      if (sgn(cas(p, q)) == 0) continue;
      Terms t = alg->concat(alg->concat(Terms{{Word::scalar(p), 1}}, eta.terms()), Terms{{Word::scalar(q), 1}});
      add_terms(dz, t, cas(p, q));
    }
  std::vector<Letter> primary;
  for (Letter g = 0; g < vc->size(); ++g) primary.push_back(g);
  const auto n0 = static_cast<Letter>(vc->size());
  Letter next = n0;
  for (std::size_t j = 0; j < l.factor_count(); ++j) {
    Terms ej{{Word::scalar(l.unit_index(j)), 1}};
    for (std::size_t k = 0; k < l.factor(j).degree(); ++k, ++next) {
      Terms t = alg->concat(alg->concat(ej, dz), Terms{{Word::scalar(l.offset(j) + k), 1}});
      d[next] = TensorElement(alg, t);
      if (k == 0) primary.push_back(next);
    }
  }
  return DgTensorAlgebra(alg, std::move(d), std::move(primary));
}

struct Quiver {
  struct Arrow {
    std::string name;
    std::size_t source = 0;
    std::size_t target = 0;
  };
  std::size_t vertices = 0;
  std::vector<Arrow> arrows;
};

/// Double of a quiver over l = Q^vertices: arrows (degree 0) then a* (degree -1),
/// and the standard eta = sum a (x) a* - a* (x) a.
inline std::pair<BimodulePtr, EtaElement> double_quiver(const Quiver& q) {
  if (q.vertices == 0) throw ConstructionError("quiver without vertices");
  auto base = make_base(std::vector<FieldExt>(q.vertices, FieldExt({0, 1})), std::vector<Rational>(q.vertices, 1));
  std::vector<Generator> gens;
  for (const auto& a : q.arrows) {
    if (a.source >= q.vertices || a.target >= q.vertices) throw ConstructionError("arrow '" + a.name + "' leaves the quiver");
    gens.push_back({a.name, a.source, a.target, 0});
  }
  for (const auto& a : q.arrows) gens.push_back({a.name + "*", a.target, a.source, -1});
  auto v = make_bimodule(base, std::move(gens));
  Terms eta;
  const auto n = static_cast<Letter>(q.arrows.size());
  for (Letter a = 0; a < n; ++a) {
    add_term(eta, Word::of({a, static_cast<Letter>(a + n)}), 1);
    add_term(eta, Word::of({static_cast<Letter>(a + n), a}), -1);
  }
  return {v, EtaElement(v, std::move(eta))};
}

/// Ginzburg dg algebra of (Q, W); W is written in the arrow letters 0..#arrows-1.
inline DgTensorAlgebra ginzburg(const Quiver& q, const Terms& w, std::size_t lmax) {
  for (const auto& [word, c] : w)
    for (auto x : word.letters)
      if (x >= q.arrows.size()) throw ConstructionError("the potential may only use arrows");
  auto [v, eta] = double_quiver(q);
  return build_dpa(v, eta, w, lmax);
}

struct DSquaredEntry {
  std::string generator;
  TensorElement residue;
  bool truncation_limited = false;
};

struct DSquaredReport {
  std::vector<DSquaredEntry> entries;
  bool ok() const {
    for (const auto& e : entries)
      if (!e.residue.is_zero()) return false;
    return true;
  }
  bool truncation_limited() const {
    for (const auto& e : entries)
      if (e.truncation_limited) return true;
    return false;
  }
};

inline DSquaredReport check_d_squared(const DgTensorAlgebra& a) {
  DSquaredReport r;
  for (Letter g : a.primary_generators()) {
    TensorElement dd = a.d(a.d(g));
    r.entries.push_back({a.name(g), dd, dd.truncated()});
  }
  return r;
}

/// Degree-0 generators, relations d(f) for |f| = -1, and dim T^0 / (I + m^{L+1})
/// for every L up to the requested truncation.
struct AlgebraPresentation {
  std::vector<std::string> generators;
  std::vector<TensorElement> relations;
  std::vector<std::size_t> dims;  // dims[L]
  std::size_t dimension = 0;
  std::size_t lmax = 0;
  bool stabilized = false;
  std::vector<Word> basis;  // surviving normal words at lmax
};

inline AlgebraPresentation h_zero(const DgTensorAlgebra& a, std::optional<std::size_t> lmax = std::nullopt) {
  const TensorAlgebra& alg = *a.algebra();
  const std::size_t top = lmax.value_or(a.lmax());
  AlgebraPresentation out;
  out.lmax = top;
  std::vector<Letter> zero_letters;
  for (Letter g = 0; g < alg.bimodule().size(); ++g) {
    const int deg = alg.letter_degree(g);
    if (deg == 0) {
      zero_letters.push_back(g);
      out.generators.push_back(a.name(g));
    }
    if (deg == -1 && !a.d(g).is_zero()) out.relations.push_back(a.d(g));
  }
  // Normal degree-0 words by length.
  std::vector<std::vector<Word>> by_length(top + 1);
  for (std::size_t p = 0; p < alg.base().dim(); ++p) by_length[0].push_back(Word::scalar(p));
  std::vector<std::vector<Letter>> raw_prev;
  for (auto x : zero_letters) raw_prev.push_back({x});
  for (std::size_t k = 1; k <= top; ++k) {
    std::map<Word, bool> seen;
    for (const auto& r : raw_prev)
      for (const auto& [w, c] : alg.normalize_word(Word::of(r))) seen[w] = true;
    for (const auto& [w, f] : seen) by_length[k].push_back(w);
    if (k == top) break;
    std::vector<std::vector<Letter>> raw_next;
    for (const auto& r : raw_prev)
      for (auto x : zero_letters)
        if (alg.bimodule().generator(r.back()).source == alg.bimodule().generator(x).target) {
          raw_next.push_back(r);
          raw_next.back().push_back(x);
        }
    raw_prev = std::move(raw_next);
  }
  std::map<Word, std::size_t> index;
  std::vector<Word> words;
  for (const auto& layer : by_length)
    for (const auto& w : layer) {
      index.emplace(w, words.size());
      words.push_back(w);
    }
  std::vector<std::size_t> min_len;
  for (const auto& rel : out.relations) {
    std::size_t m = top + 1;
    for (const auto& [w, c] : rel.terms()) m = std::min(m, w.length());
    min_len.push_back(m);
  }
  for (std::size_t level = 0; level <= top; ++level) {
    SparseEchelon span;
    std::size_t total = 0;
    for (std::size_t k = 0; k <= level; ++k) total += by_length[k].size();
    for (std::size_t r = 0; r < out.relations.size(); ++r) {
      if (min_len[r] > level) continue;
      const Terms& rel = out.relations[r].terms();
      for (std::size_t lu = 0; lu + min_len[r] <= level; ++lu)
        for (const auto& u : by_length[lu]) {
          Terms left = alg.concat(Terms{{u, 1}}, rel);
          if (left.empty()) continue;
          for (std::size_t lv = 0; lu + lv + min_len[r] <= level; ++lv)
            for (const auto& v : by_length[lv]) {
              Terms t = alg.normalize(alg.concat(left, Terms{{v, 1}}));
              SparseVec s;
              for (const auto& [w, c] : t)
                if (w.length() <= level) s.emplace(index.at(w), c);
              if (!s.empty()) span.insert(std::move(s));
            }
        }
    }
    out.dims.push_back(total - span.rank());
    if (level == top)
      for (std::size_t k = 0; k < total; ++k)
        if (!span.is_pivot(k)) out.basis.push_back(words[k]);
  }
  out.dimension = out.dims.back();
  out.stabilized = top >= 1 && out.dims[top] == out.dims[top - 1];
  return out;
}

struct JacobiVerdict {
  bool finite = false;  // false means inconclusive, never infinite
  std::size_t dimension = 0;
  std::size_t lmax = 0;
  std::vector<std::size_t> dims;
};

inline JacobiVerdict jacobi_finite(const Quiver& q, const Terms& w, std::size_t lmax) {
  // Relations have length |W| - 1, so the potential needs one extra level.
  auto gamma = ginzburg(q, w, lmax + 1);
  auto pres = h_zero(gamma, lmax);
  return JacobiVerdict{pres.stabilized, pres.dimension, lmax, pres.dims};
}

}  // namespace cyq
