#pragma once

// Necklaces (the commutator quotient T/[T,T]), the element eta of V (x)_{l^e} V,
// the pairing it induces and the necklace bracket.
//
// For an l^e-linear functional phi: V -> l (x) l (outer structure) put
//   iota_phi(eta) = sum_{u (x) v in eta} phi(v)'' u phi(v)'.
// eta is nondegenerate when phi -> iota_phi(eta) is invertible; pi(x, g) is then
// the value on x of the functional sent to g. For a necklace w and a generator g,
//   {w, g} = sum over letters x of w, rotated to the back (w ~ +-R x),
//            of +- pi(x, g)'' R pi(x, g)',
// extended to words by {w, fg} = {w, f} g + (-1)^{(|w|+1)|f|} f {w, g}.

#include <cyq/bimodule.hpp>
#include <cyq/errors.hpp>
#include <cyq/linalg.hpp>
#include <cyq/tensor.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace cyq {

/// Element of T_l V / [T_l V, T_l V], stored on canonical cyclic representatives.
class Necklace {
 public:
  Necklace() = default;
  Necklace(AlgebraPtr alg, const Terms& raw, bool truncated = false)
      : alg_(std::move(alg)), terms_(alg_->cyclic_normalize(raw, true)), truncated_(truncated) {
    truncated_ = alg_->truncate(terms_) || truncated_;
  }

  static Necklace zero(const AlgebraPtr& alg) { return Necklace(alg, Terms{}); }

  const AlgebraPtr& algebra() const { return alg_; }
  const Terms& terms() const { return terms_; }
  bool truncated() const { return truncated_; }
  bool is_zero() const { return terms_.empty(); }

  std::optional<int> degree() const {
    std::optional<int> d;
    for (const auto& [w, c] : terms_) {
      int e = alg_->degree(w);
      if (d && *d != e) return std::nullopt;
      d = e;
    }
    return d;
  }

  /// The representatives read as an element of T_l V.
  TensorElement representative() const { return TensorElement(alg_, terms_, truncated_); }

  friend Necklace operator+(const Necklace& x, const Necklace& y) {
    check_same(x, y);
    Necklace out = x;
    add_terms(out.terms_, y.terms_);
    out.truncated_ = x.truncated_ || y.truncated_;
    return out;
  }
  friend Necklace operator-(const Necklace& x, const Necklace& y) { return x + Rational(-1) * y; }
  friend Necklace operator*(const Rational& c, Necklace x) {
    if (sgn(c) == 0) x.terms_.clear();
    for (auto& [w, a] : x.terms_) a *= c;
    return x;
  }
  friend bool operator==(const Necklace& x, const Necklace& y) { return x.terms_ == y.terms_; }

  std::string str() const { return alg_ ? alg_->format(terms_) : "0"; }

 private:
  static void check_same(const Necklace& x, const Necklace& y) {
    if (!x.alg_ || x.alg_ != y.alg_) throw ConstructionError("necklaces live in different algebras");
  }

  AlgebraPtr alg_;
  Terms terms_;
  bool truncated_ = false;
};

/// Image in the commutator quotient; every word must be closed.
inline Necklace cyclicize(const TensorElement& x) { return Necklace(x.algebra(), x.terms(), x.truncated()); }

/// eta in V (x)_{l^e} V as a combination of closed length-2 words u v.
class EtaElement {
 public:
  EtaElement(BimodulePtr v, Terms terms) : v_(std::move(v)), terms_(std::move(terms)) {
    for (const auto& [w, c] : terms_) {
      if (w.length() != 2) throw ConstructionError("eta must consist of length-2 tensors");
      const auto &u = v_->generator(w.letters[0]), &x = v_->generator(w.letters[1]);
      if (u.source != x.target || u.target != x.source)
        throw ConstructionError("eta term " + u.name + " (x) " + x.name + " does not lie in V (x)_{l^e} V");
    }
  }

  /// Entry (u, v) is the coefficient of u (x) v.
  static EtaElement from_matrix(BimodulePtr v, const Matrix& m) {
    Terms t;
    for (std::size_t u = 0; u < m.rows(); ++u)
      for (std::size_t x = 0; x < m.cols(); ++x)
        if (sgn(m(u, x)) != 0) add_term(t, Word::of({static_cast<Letter>(u), static_cast<Letter>(x)}), m(u, x));
    return EtaElement(std::move(v), std::move(t));
  }

  Matrix matrix() const {
    Matrix m(v_->size(), v_->size());
    for (const auto& [w, c] : terms_) m(w.letters[0], w.letters[1]) = c;
    return m;
  }

  const BimodulePtr& bimodule() const { return v_; }
  const Terms& terms() const { return terms_; }

  /// flip(u (x) v) = (-1)^{|u||v|} v (x) u.
  EtaElement flip() const {
    Terms t;
    for (const auto& [w, c] : terms_) {
      const int du = v_->generator(w.letters[0]).degree, dv = v_->generator(w.letters[1]).degree;
      add_term(t, Word::of({w.letters[1], w.letters[0]}), c * koszul(static_cast<long>(du) * dv));
    }
    return EtaElement(v_, std::move(t));
  }

 private:
  BimodulePtr v_;
  Terms terms_;
};

/// Contraction data of a fixed eta: the dual functionals, the contraction
/// matrix and the pairing pi(x, g).
class Bisymplectic {
 public:
  struct PiTerm {
    std::size_t p;  // first leg, in the factor of target(x)
    std::size_t q;  // second leg, in the factor of source(x)
    Rational coefficient;
  };

  Bisymplectic(AlgebraPtr alg, EtaElement eta) : alg_(std::move(alg)), eta_(std::move(eta)) {
    if (alg_->bimodule_ptr() != eta_.bimodule())
      throw ConstructionError("eta and the tensor algebra use different bimodules");
    build_duals();
    build_contraction();
  }

  const AlgebraPtr& algebra() const { return alg_; }
  const EtaElement& eta() const { return eta_; }
  bool nondegenerate() const { return inverse_.has_value(); }
  const Rational& determinant() const { return determinant_; }
  const Matrix& contraction() const { return contraction_; }

  void require_nondegenerate() const {
    if (!nondegenerate()) throw DegenerateEtaError("eta is degenerate: contraction matrix is singular");
  }

  const std::vector<PiTerm>& pi(Letter x, Letter g) const { return pi_.at(x * n_ + g); }

 private:
  struct Functional {
    std::vector<std::vector<PiTerm>> values;  // per generator; empty outside the block
  };

  void build_duals() {
    const GradedBimodule& v = alg_->bimodule();
    const SemisimpleBase& l = v.base();
    n_ = v.size();
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> blocks;
    for (std::size_t g = 0; g < n_; ++g) blocks[{v.generator(g).source, v.generator(g).target}].push_back(g);
    for (const auto& [st, gens] : blocks) {
      const auto [j, k] = st;
      const std::size_t dk = l.factor(k).degree(), dj = l.factor(j).degree();
      const std::size_t ok = l.offset(k), oj = l.offset(j);
      const std::size_t m = gens.size(), cell = dk * dj;
      std::map<std::size_t, std::size_t> pos;
      for (std::size_t a = 0; a < m; ++a) pos[gens[a]] = a;
      auto var = [&](std::size_t a, std::size_t p, std::size_t q) { return a * cell + p * dj + q; };
      std::vector<Vec> rows;
      for (std::size_t a = 0; a < m; ++a) {
        // phi(b_r x) = (b_r (x) 1) phi(x)
        for (std::size_t r = 0; r < dk; ++r) {
          std::vector<Vec> eq(cell, Vec(m * cell));
          for (const auto& [h, c] : v.left(ok + r, gens[a]))
            for (std::size_t p = 0; p < dk; ++p)
              for (std::size_t q = 0; q < dj; ++q) eq[p * dj + q][var(pos.at(h), p, q)] += c;
          for (std::size_t p = 0; p < dk; ++p) {
            const Vec& rp = l.basis_product(ok + r, ok + p);
            for (std::size_t p2 = 0; p2 < dk; ++p2)
              if (sgn(rp[ok + p2]) != 0)
                for (std::size_t q = 0; q < dj; ++q) eq[p2 * dj + q][var(a, p, q)] -= rp[ok + p2];
          }
          for (auto& e : eq) rows.push_back(std::move(e));
        }
        // phi(x b_s) = phi(x) (1 (x) b_s)
        for (std::size_t s = 0; s < dj; ++s) {
          std::vector<Vec> eq(cell, Vec(m * cell));
          for (const auto& [h, c] : v.right(gens[a], oj + s))
            for (std::size_t p = 0; p < dk; ++p)
              for (std::size_t q = 0; q < dj; ++q) eq[p * dj + q][var(pos.at(h), p, q)] += c;
          for (std::size_t q = 0; q < dj; ++q) {
            const Vec& qs = l.basis_product(oj + q, oj + s);
            for (std::size_t q2 = 0; q2 < dj; ++q2)
              if (sgn(qs[oj + q2]) != 0)
                for (std::size_t p = 0; p < dk; ++p) eq[p * dj + q2][var(a, p, q)] -= qs[oj + q2];
          }
          for (auto& e : eq) rows.push_back(std::move(e));
        }
      }
      Matrix sys(rows.size(), m * cell);
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < m * cell; ++c) sys(r, c) = rows[r][c];
      for (const auto& sol : nullspace(sys)) {
        Functional f;
        f.values.resize(n_);
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t p = 0; p < dk; ++p)
            for (std::size_t q = 0; q < dj; ++q)
              if (sgn(sol[var(a, p, q)]) != 0) f.values[gens[a]].push_back({ok + p, oj + q, sol[var(a, p, q)]});
        duals_.push_back(std::move(f));
      }
    }
  }

  void build_contraction() {
    const GradedBimodule& v = alg_->bimodule();
    contraction_ = Matrix(n_, duals_.size());
    for (std::size_t k = 0; k < duals_.size(); ++k) {
      SparseVec col;
      for (const auto& [w, c] : eta_.terms()) {
        const Letter u = w.letters[0], x = w.letters[1];
        for (const auto& t : duals_[k].values[x]) {
          // b_q u b_p
          SparseVec left = v.left(t.q, u);
          SparseVec both;
          for (const auto& [h, a] : left) axpy(both, a, v.right(h, t.p));
          axpy(col, c * t.coefficient, both);
        }
      }
      for (const auto& [g, a] : col) contraction_(g, k) = a;
    }
    pi_.assign(n_ * n_, {});
    if (duals_.size() != n_) return;
    determinant_ = cyq::determinant(contraction_);
    inverse_ = cyq::inverse(contraction_);
    if (!inverse_) return;
    for (Letter x = 0; x < n_; ++x)
      for (std::size_t k = 0; k < duals_.size(); ++k) {
        if (duals_[k].values[x].empty()) continue;
        for (Letter g = 0; g < n_; ++g) {
          const Rational& a = (*inverse_)(k, g);
          if (sgn(a) == 0) continue;
          auto& slot = pi_[x * n_ + g];
          for (const auto& t : duals_[k].values[x]) {
            auto it = std::find_if(slot.begin(), slot.end(),
                                   [&](const PiTerm& s) { return s.p == t.p && s.q == t.q; });
            if (it == slot.end()) slot.push_back({t.p, t.q, a * t.coefficient});
            else it->coefficient += a * t.coefficient;
          }
        }
      }
    for (auto& slot : pi_) std::erase_if(slot, [](const PiTerm& s) { return sgn(s.coefficient) == 0; });
  }

  AlgebraPtr alg_;
  EtaElement eta_;
  std::size_t n_ = 0;
  std::vector<Functional> duals_;
  Matrix contraction_;
  Rational determinant_ = 0;
  std::optional<Matrix> inverse_;
  std::vector<std::vector<PiTerm>> pi_;
};

struct EtaReport {
  bool degree_ok = false;
  bool antisymmetric = false;
  bool nondegenerate = false;
  Rational determinant = 0;
  bool ok() const { return degree_ok && antisymmetric && nondegenerate; }
};

inline EtaReport check_eta(const EtaElement& eta) {
  EtaReport r;
  auto alg = make_tensor_algebra(eta.bimodule(), 2);
  r.degree_ok = true;
  for (const auto& [w, c] : eta.terms())
    if (alg->degree(w) != -1) r.degree_ok = false;
  Terms lhs = alg->cyclic_normalize(eta.flip().terms(), false);
  Terms rhs = alg->cyclic_normalize(eta.terms(), false);
  add_terms(lhs, rhs);
  r.antisymmetric = lhs.empty();
  Bisymplectic omega(alg, eta);
  r.nondegenerate = omega.nondegenerate();
  r.determinant = omega.determinant();
  return r;
}

namespace detail {

/// {w, g} for one raw closed word w and one generator g, as raw terms.
inline Terms bracket_word_letter(const Bisymplectic& omega, const Word& w, Letter g) {
  const TensorAlgebra& alg = *omega.algebra();
  Terms out;
  const std::size_t n = w.length();
  for (std::size_t k = 0; k < n; ++k) {
    const Letter x = w.letters[k];
    const auto& pi = omega.pi(x, g);
    if (pi.empty()) continue;
    long da = 0, db = 0;
    for (std::size_t i = 0; i < k; ++i) da += alg.letter_degree(w.letters[i]);
    for (std::size_t i = k + 1; i < n; ++i) db += alg.letter_degree(w.letters[i]);
    const int sign = koszul(db * (da + alg.letter_degree(x)));
    Word rest;
    rest.letters.assign(w.letters.begin() + k + 1, w.letters.end());
    rest.letters.insert(rest.letters.end(), w.letters.begin(), w.letters.begin() + k);
    for (const auto& t : pi) {
      Terms sandwich;
      if (rest.empty()) {
        sandwich = alg.act_left(t.q, Word::scalar(t.p));
      } else {
        for (const auto& [u, a] : alg.act_left(t.q, rest)) add_terms(sandwich, alg.act_right(u, t.p), a);
      }
      add_terms(out, sandwich, t.coefficient * sign);
    }
  }
  return out;
}

}  // namespace detail

/// {w, f} in T_l V, truncated at the ambient lmax.
inline TensorElement necklace_bracket(const Necklace& w, const TensorElement& f, const Bisymplectic& omega) {
  omega.require_nondegenerate();
  if (w.algebra() != omega.algebra() || f.algebra() != omega.algebra())
    throw ConstructionError("necklace bracket across different algebras");
  const TensorAlgebra& alg = *omega.algebra();
  Terms raw;
  for (const auto& [fw, fc] : f.terms()) {
    long prefix_degree = 0;
    for (std::size_t k = 0; k < fw.length(); ++k) {
      const Letter g = fw.letters[k];
      Word prefix, suffix;
      prefix.letters.assign(fw.letters.begin(), fw.letters.begin() + k);
      suffix.letters.assign(fw.letters.begin() + k + 1, fw.letters.end());
      for (const auto& [ww, wc] : w.terms()) {
        Terms mid = detail::bracket_word_letter(omega, ww, g);
        if (mid.empty()) continue;
        const int sign = koszul((alg.degree(ww) + 1) * prefix_degree);
        if (!prefix.empty()) mid = alg.concat(Terms{{prefix, Rational(1)}}, mid);
        if (!suffix.empty()) mid = alg.concat(mid, Terms{{suffix, Rational(1)}});
        add_terms(raw, mid, fc * wc * sign);
      }
      prefix_degree += alg.letter_degree(g);
    }
  }
  return TensorElement(omega.algebra(), raw, w.truncated() || f.truncated());
}

/// {w1, w2} = cyc({w1, w2}) on necklaces.
inline Necklace necklace_bracket(const Necklace& w1, const Necklace& w2, const Bisymplectic& omega) {
  return cyclicize(necklace_bracket(w1, w2.representative(), omega));
}

/// Sum over occurrences of g in the representatives of w of the arc R with
/// w ~ +-R g, read from the letter following g (no 1/n normalisation).
inline TensorElement cyclic_derivative(const Necklace& w, Letter g) {
  const AlgebraPtr& alg = w.algebra();
  Terms raw;
  for (const auto& [ww, c] : w.terms()) {
    const std::size_t n = ww.length();
    for (std::size_t k = 0; k < n; ++k) {
      if (ww.letters[k] != g) continue;
      long da = 0, db = 0;
      for (std::size_t i = 0; i < k; ++i) da += alg->letter_degree(ww.letters[i]);
      for (std::size_t i = k + 1; i < n; ++i) db += alg->letter_degree(ww.letters[i]);
      Word arc;
      arc.letters.assign(ww.letters.begin() + k + 1, ww.letters.end());
      arc.letters.insert(arc.letters.end(), ww.letters.begin(), ww.letters.begin() + k);
      if (arc.empty()) arc.unit = alg->base().unit_index(alg->bimodule().generator(g).source);
      add_term(raw, arc, c * koszul(db * (da + alg->letter_degree(g))));
    }
  }
  return TensorElement(alg, raw, w.truncated());
}

}  // namespace cyq
