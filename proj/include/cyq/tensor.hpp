#pragma once

// Truncated tensor algebra T_l V of a graded bimodule V over a semisimple base l.
//
// A word x_1 x_2 ... x_n is the composite x_1 o x_2 o ... o x_n: x_n acts first,
// so source(word) = source(x_n) and target(word) = target(x_1). Raw words are
// sequences of bimodule generators; the tensor product over l identifies
// x*lambda (x) y with x (x) lambda*y, and normal forms keep the lexicographically
// smallest raw words of each quotient. The empty word carries a base basis index.

#include <cyq/base_field.hpp>
#include <cyq/bimodule.hpp>
#include <cyq/errors.hpp>
#include <cyq/linalg.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace cyq {

using Letter = std::uint32_t;

struct Word {
  std::vector<Letter> letters;
  std::size_t unit = 0;  // base basis index, used only when letters is empty

  static Word scalar(std::size_t p) { return Word{{}, p}; }
  static Word of(std::vector<Letter> letters) { return Word{std::move(letters), 0}; }

  std::size_t length() const { return letters.size(); }
  bool empty() const { return letters.empty(); }

  friend bool operator==(const Word&, const Word&) = default;
  friend bool operator<(const Word& a, const Word& b) {
    if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
    if (a.letters != b.letters) return a.letters < b.letters;
    return a.unit < b.unit;
  }
};

using Terms = std::map<Word, Rational>;

inline void add_term(Terms& t, const Word& w, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, fresh] = t.try_emplace(w, 0);
  it->second += c;
  if (sgn(it->second) == 0) t.erase(it);
}

inline void add_terms(Terms& t, const Terms& s, const Rational& c = 1) {
  if (sgn(c) == 0) return;
  for (const auto& [w, x] : s) add_term(t, w, c * x);
}

class TensorAlgebra;
using AlgebraPtr = std::shared_ptr<const TensorAlgebra>;

class TensorAlgebra {
 public:
  TensorAlgebra(BimodulePtr v, std::size_t lmax) : v_(std::move(v)), lmax_(lmax) {
    if (!v_) throw ConstructionError("tensor algebra without a bimodule");
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> ids;
    for (std::size_t g = 0; g < v_->size(); ++g) {
      const auto& gen = v_->generator(g);
      auto [it, fresh] = ids.try_emplace({gen.source, gen.target}, members_.size());
      if (fresh) members_.emplace_back();
      block_of_.push_back(it->second);
      members_[it->second].push_back(static_cast<Letter>(g));
    }
  }

  const GradedBimodule& bimodule() const { return *v_; }
  const BimodulePtr& bimodule_ptr() const { return v_; }
  const SemisimpleBase& base() const { return v_->base(); }
  std::size_t lmax() const { return lmax_; }

  std::size_t source(const Word& w) const {
    return w.empty() ? base().factor_of(w.unit) : v_->generator(w.letters.back()).source;
  }
  std::size_t target(const Word& w) const {
    return w.empty() ? base().factor_of(w.unit) : v_->generator(w.letters.front()).target;
  }
  int degree(const Word& w) const {
    int d = 0;
    for (auto x : w.letters) d += v_->generator(x).degree;
    return d;
  }
  int letter_degree(Letter x) const { return v_->generator(x).degree; }
  bool closed(const Word& w) const { return source(w) == target(w); }

  bool composable(const std::vector<Letter>& letters) const {
    for (std::size_t k = 0; k + 1 < letters.size(); ++k)
      if (v_->generator(letters[k]).source != v_->generator(letters[k + 1]).target) return false;
    return true;
  }

  /// b_p * w on raw words.
  Terms act_left(std::size_t p, const Word& w) const {
    Terms out;
    if (w.empty()) {
      add_base(out, base().basis_product(p, w.unit));
      return out;
    }
    Word u = w;
    for (const auto& [h, c] : v_->left(p, w.letters.front())) {
      u.letters.front() = static_cast<Letter>(h);
      add_term(out, u, c);
    }
    return out;
  }

  /// w * b_p on raw words.
  Terms act_right(const Word& w, std::size_t p) const {
    Terms out;
    if (w.empty()) {
      add_base(out, base().basis_product(w.unit, p));
      return out;
    }
    Word u = w;
    for (const auto& [h, c] : v_->right(w.letters.back(), p)) {
      u.letters.back() = static_cast<Letter>(h);
      add_term(out, u, c);
    }
    return out;
  }

  /// Raw product u * v (zero when the ends do not match).
  Terms concat(const Word& u, const Word& v) const {
    if (u.empty()) return act_left(u.unit, v);
    if (v.empty()) return act_right(u, v.unit);
    if (source(u) != target(v)) return {};
    Word w = u;
    w.letters.insert(w.letters.end(), v.letters.begin(), v.letters.end());
    return Terms{{w, Rational(1)}};
  }

  Terms concat(const Terms& x, const Terms& y) const {
    Terms out;
    for (const auto& [u, a] : x)
      for (const auto& [v, b] : y) add_terms(out, concat(u, v), a * b);
    return out;
  }

  /// Normal form in T_l V of a combination of raw words.
  Terms normalize(const Terms& raw) const {
    Terms out;
    for (const auto& [w, c] : raw) add_terms(out, normalize_word(w), c);
    return out;
  }

  Terms normalize_word(const Word& w) const {
    if (w.empty()) return Terms{{w, Rational(1)}};
    if (!composable(w.letters)) throw ConstructionError("word is not composable: " + format(w));
    // Split at junctions over degree-1 factors, where the tensor product is plain.
    Terms acc{{Word{}, Rational(1)}};
    std::size_t start = 0;
    for (std::size_t k = 0; k < w.length(); ++k) {
      const bool cut = k + 1 == w.length() || !nontrivial(v_->generator(w.letters[k]).source);
      if (!cut) continue;
      std::vector<Letter> seg(w.letters.begin() + start, w.letters.begin() + k + 1);
      const auto& nf = segment_normal_form(seg);
      Terms next;
      for (const auto& [prefix, a] : acc)
        for (const auto& [letters, b] : nf) {
          Word joined = prefix;
          joined.letters.insert(joined.letters.end(), letters.begin(), letters.end());
          add_term(next, joined, a * b);
        }
      acc = std::move(next);
      start = k + 1;
    }
    return acc;
  }

  /// Normal form of closed words modulo the wrap-around junction, i.e. in
  /// V (x)_{l^e} ... (x)_{l^e}; with rotations also modulo graded commutators.
  Terms cyclic_normalize(const Terms& raw, bool rotations) const {
    Terms out;
    for (const auto& [w, c] : raw) add_terms(out, cyclic_normalize_word(w, rotations), c);
    return out;
  }

  Terms cyclic_normalize_word(const Word& w, bool rotations) const {
    if (w.empty()) return Terms{{w, Rational(1)}};
    if (!composable(w.letters)) throw ConstructionError("word is not composable: " + format(w));
    if (!closed(w)) throw NotClosedError("word is not closed: " + format(w));
    bool trivial = true;
    for (auto x : w.letters) trivial = trivial && !nontrivial(v_->generator(x).source);
    if (trivial) {
      if (!rotations) return Terms{{w, Rational(1)}};
      return minimal_rotation(w);
    }
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(w.letters, rotations);
    auto it = cyclic_cache_.find(key);
    if (it != cyclic_cache_.end()) return it->second;
    ClassKey ck{blocks(w.letters), true, rotations};
    if (rotations) ck.blocks = min_rotation(ck.blocks);
    const ClassSpace& space = class_space(ck);
    Terms out = expand(space, w.letters);
    cyclic_cache_.emplace(key, out);
    return out;
  }

  /// Sign of moving the last letter of w to the front.
  int rotation_sign(const std::vector<Letter>& letters) const {
    long rest = 0;
    for (std::size_t k = 0; k + 1 < letters.size(); ++k) rest += letter_degree(letters[k]);
    return koszul(static_cast<long>(letter_degree(letters.back())) * rest);
  }

  std::string base_name(std::size_t p) const {
    const std::size_t j = base().factor_of(p), k = p - base().offset(j);
    std::string name = "e" + std::to_string(j + 1);
    if (k == 1) name += ".x";
    if (k > 1) name += ".x^" + std::to_string(k);
    return name;
  }

  std::string format(const Word& w) const {
    if (w.empty()) return base_name(w.unit);
    std::string s;
    for (std::size_t k = 0; k < w.length(); ++k) {
      if (k) s += ' ';
      s += v_->generator(w.letters[k]).name;
    }
    return s;
  }

  std::string format(const Terms& t) const {
    if (t.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : t) {
      if (!first) os << (sgn(c) < 0 ? " - " : " + ");
      else if (sgn(c) < 0) os << "-";
      first = false;
      Rational a = abs(c);
      if (a != 1) os << a.get_str() << "*";
      os << "[" << format(w) << "]";
    }
    return os.str();
  }

  /// Drops words longer than lmax; returns true when something was dropped.
  bool truncate(Terms& t) const {
    bool dropped = false;
    for (auto it = t.begin(); it != t.end();) {
      if (it->first.length() > lmax_) {
        it = t.erase(it);
        dropped = true;
      } else {
        ++it;
      }
    }
    return dropped;
  }

 private:
  struct ClassKey {
    std::vector<std::size_t> blocks;
    bool wrap = false;
    bool rotate = false;
    friend auto operator<=>(const ClassKey&, const ClassKey&) = default;
  };

  struct ClassSpace {
    std::vector<std::vector<Letter>> words;  // sorted lexicographically
    std::map<std::vector<Letter>, std::size_t> index;
    SparseEchelon relations;
  };

  bool nontrivial(std::size_t factor) const { return base().factor(factor).degree() > 1; }

  void add_base(Terms& out, const Vec& x) const {
    for (std::size_t r = 0; r < x.size(); ++r)
      if (sgn(x[r]) != 0) add_term(out, Word::scalar(r), x[r]);
  }

  std::vector<std::size_t> blocks(const std::vector<Letter>& letters) const {
    std::vector<std::size_t> b;
    for (auto x : letters) b.push_back(block_of_[x]);
    return b;
  }

  template <class T>
  static std::vector<T> min_rotation(const std::vector<T>& v) {
    std::vector<T> best = v, cur = v;
    for (std::size_t r = 1; r < v.size(); ++r) {
      std::rotate(cur.begin(), cur.end() - 1, cur.end());
      if (cur < best) best = cur;
    }
    return best;
  }

  Terms minimal_rotation(const Word& w) const {
    std::vector<Letter> cur = w.letters, best = w.letters;
    int sign = 1, best_sign = 1;
    for (std::size_t r = 1; r < cur.size(); ++r) {
      sign *= rotation_sign(cur);
      std::rotate(cur.begin(), cur.end() - 1, cur.end());
      if (cur == w.letters) {
        if (sign == -1) return {};
        break;
      }
      if (cur < best) {
        best = cur;
        best_sign = sign;
      }
    }
    return Terms{{Word::of(best), Rational(best_sign)}};
  }

  const std::vector<std::pair<std::vector<Letter>, Rational>>& segment_normal_form(
      const std::vector<Letter>& seg) const {
    std::lock_guard lock(mutex_);
    auto it = segment_cache_.find(seg);
    if (it != segment_cache_.end()) return it->second;
    std::vector<std::pair<std::vector<Letter>, Rational>> nf;
    if (seg.size() == 1) {
      nf.emplace_back(seg, Rational(1));
    } else {
      const ClassSpace& space = class_space(ClassKey{blocks(seg), false, false});
      for (const auto& [w, c] : expand(space, seg)) nf.emplace_back(w.letters, c);
    }
    return segment_cache_.emplace(seg, std::move(nf)).first->second;
  }

  Terms expand(const ClassSpace& space, const std::vector<Letter>& letters) const {
    Terms out;
    for (const auto& [k, c] : space.relations.reduce(SparseVec{{space.index.at(letters), Rational(1)}}))
      add_term(out, Word::of(space.words[k]), c);
    return out;
  }

  // Caller holds mutex_.
  const ClassSpace& class_space(const ClassKey& key) const {
    auto it = class_cache_.find(key);
    if (it != class_cache_.end()) return it->second;
    ClassSpace space;
    std::vector<std::vector<std::size_t>> sequences{key.blocks};
    if (key.rotate) {
      auto cur = key.blocks;
      for (std::size_t r = 1; r < cur.size(); ++r) {
        std::rotate(cur.begin(), cur.end() - 1, cur.end());
        if (std::find(sequences.begin(), sequences.end(), cur) == sequences.end()) sequences.push_back(cur);
      }
    }
    for (const auto& seq : sequences) {
      std::vector<std::size_t> digit(seq.size(), 0);
      for (;;) {
        std::vector<Letter> w(seq.size());
        for (std::size_t k = 0; k < seq.size(); ++k) w[k] = members_[seq[k]][digit[k]];
        space.words.push_back(std::move(w));
        bool done = true;
        for (std::size_t k = seq.size(); k-- > 0;) {
          if (++digit[k] < members_[seq[k]].size()) {
            done = false;
            break;
          }
          digit[k] = 0;
        }
        if (done) break;
      }
    }
    std::sort(space.words.begin(), space.words.end());
    for (std::size_t k = 0; k < space.words.size(); ++k) space.index.emplace(space.words[k], k);

    const std::size_t n = key.blocks.size();
    for (const auto& w : space.words) {
      auto at = [&](std::vector<Letter> u) { return space.index.at(u); };
      // Junction between positions k and k+1 (cyclically when wrapping).
      const std::size_t junctions = key.wrap ? n : n - 1;
      for (std::size_t k = 0; k < junctions; ++k) {
        const std::size_t left = k, right = (k + 1) % n;
        const std::size_t vertex = v_->generator(w[left]).source;
        if (!nontrivial(vertex)) continue;
        for (std::size_t p = base().offset(vertex) + 1; p < base().offset(vertex) + base().factor(vertex).degree();
             ++p) {
          SparseVec rel;
          if (right != 0) {
            // w[left] * b_p (x) w[right] - w[left] (x) b_p * w[right]
            for (const auto& [h, c] : v_->right(w[left], p)) {
              auto u = w;
              u[left] = static_cast<Letter>(h);
              axpy(rel, c, SparseVec{{at(u), Rational(1)}});
            }
            for (const auto& [h, c] : v_->left(p, w[right])) {
              auto u = w;
              u[right] = static_cast<Letter>(h);
              axpy(rel, -c, SparseVec{{at(u), Rational(1)}});
            }
          } else {
            // b_p * w - w * b_p across the wrap-around junction.
            for (const auto& [h, c] : v_->left(p, w[0])) {
              auto u = w;
              u[0] = static_cast<Letter>(h);
              axpy(rel, c, SparseVec{{at(u), Rational(1)}});
            }
            for (const auto& [h, c] : v_->right(w[n - 1], p)) {
              auto u = w;
              u[n - 1] = static_cast<Letter>(h);
              axpy(rel, -c, SparseVec{{at(u), Rational(1)}});
            }
          }
          space.relations.insert(std::move(rel));
        }
      }
      if (key.rotate && n > 1) {
        auto u = w;
        const int s = rotation_sign(u);
        std::rotate(u.begin(), u.end() - 1, u.end());
        SparseVec rel{{at(w), Rational(1)}};
        axpy(rel, Rational(-s), SparseVec{{at(u), Rational(1)}});
        space.relations.insert(std::move(rel));
      }
    }
    return class_cache_.emplace(key, std::move(space)).first->second;
  }

  BimodulePtr v_;
  std::size_t lmax_;
  std::vector<std::size_t> block_of_;
  std::vector<std::vector<Letter>> members_;

  mutable std::recursive_mutex mutex_;
  mutable std::map<std::vector<Letter>, std::vector<std::pair<std::vector<Letter>, Rational>>> segment_cache_;
  mutable std::map<std::pair<std::vector<Letter>, bool>, Terms> cyclic_cache_;
  mutable std::map<ClassKey, ClassSpace> class_cache_;
};

inline AlgebraPtr make_tensor_algebra(BimodulePtr v, std::size_t lmax) {
  return std::make_shared<const TensorAlgebra>(std::move(v), lmax);
}

/// Element of T_l V truncated at the ambient lmax, in normal form.
class TensorElement {
 public:
  TensorElement() = default;
  /// Normalizes and truncates `raw`.
  TensorElement(AlgebraPtr alg, const Terms& raw, bool truncated = false)
      : alg_(std::move(alg)), terms_(alg_->normalize(raw)), truncated_(truncated) {
    truncated_ = alg_->truncate(terms_) || truncated_;
  }

  static TensorElement generator(const AlgebraPtr& alg, Letter g) {
    return TensorElement(alg, Terms{{Word::of({g}), Rational(1)}});
  }
  static TensorElement scalar(const AlgebraPtr& alg, const Vec& lambda) {
    Terms t;
    for (std::size_t p = 0; p < lambda.size(); ++p) add_term(t, Word::scalar(p), lambda[p]);
    return TensorElement(alg, t);
  }
  static TensorElement one(const AlgebraPtr& alg) { return scalar(alg, alg->base().one()); }
  static TensorElement idempotent(const AlgebraPtr& alg, std::size_t j) {
    return TensorElement(alg, Terms{{Word::scalar(alg->base().unit_index(j)), Rational(1)}});
  }
  static TensorElement zero(const AlgebraPtr& alg) { return TensorElement(alg, Terms{}); }

  const AlgebraPtr& algebra() const { return alg_; }
  const Terms& terms() const { return terms_; }
  bool truncated() const { return truncated_; }
  bool is_zero() const { return terms_.empty(); }

  /// Common degree of all terms; nullopt for zero or inhomogeneous elements.
  std::optional<int> degree() const {
    std::optional<int> d;
    for (const auto& [w, c] : terms_) {
      int e = alg_->degree(w);
      if (d && *d != e) return std::nullopt;
      d = e;
    }
    return d;
  }

  friend TensorElement operator*(const TensorElement& x, const TensorElement& y) {
    check_same(x, y);
    return TensorElement(x.alg_, x.alg_->concat(x.terms_, y.terms_), x.truncated_ || y.truncated_);
  }

  friend TensorElement operator+(const TensorElement& x, const TensorElement& y) {
    check_same(x, y);
    TensorElement out = x;
    add_terms(out.terms_, y.terms_);
    out.truncated_ = x.truncated_ || y.truncated_;
    return out;
  }

  friend TensorElement operator-(const TensorElement& x, const TensorElement& y) { return x + Rational(-1) * y; }

  friend TensorElement operator*(const Rational& c, TensorElement x) {
    if (sgn(c) == 0) x.terms_.clear();
    for (auto& [w, a] : x.terms_) a *= c;
    return x;
  }

  TensorElement act_left(const Vec& lambda) const { return scalar(alg_, lambda) * *this; }
  TensorElement act_right(const Vec& lambda) const { return *this * scalar(alg_, lambda); }

  /// Equality of values; the truncation flag is ignored.
  friend bool operator==(const TensorElement& x, const TensorElement& y) { return x.terms_ == y.terms_; }

  std::string str() const { return alg_ ? alg_->format(terms_) : "0"; }

 private:
  static void check_same(const TensorElement& x, const TensorElement& y) {
    if (!x.alg_ || x.alg_ != y.alg_) throw ConstructionError("tensor elements live in different algebras");
  }

  AlgebraPtr alg_;
  Terms terms_;
  bool truncated_ = false;
};

}  // namespace cyq
