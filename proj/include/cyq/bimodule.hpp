#pragma once

// Finite-dimensional graded bimodules over a SemisimpleBase.
//
// A bimodule is given by a Q-basis of generators; each generator lives in
// e_target * M * e_source and has a cohomological degree. The base acts on the
// left through the target factor and on the right through the source factor.

#include <cyq/base_field.hpp>
#include <cyq/errors.hpp>
#include <cyq/linalg.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cyq {

struct Generator {
  std::string name;
  std::size_t source = 0;
  std::size_t target = 0;
  int degree = 0;

  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Image of one generator under one base basis scalar, in generator coordinates.
struct ActionEntry {
  std::size_t scalar = 0;  // global base basis index
  std::size_t generator = 0;
  Vec image;

  friend bool operator==(const ActionEntry&, const ActionEntry&) = default;
};

class GradedBimodule {
 public:
  GradedBimodule(BasePtr base, std::vector<Generator> generators, std::vector<ActionEntry> left,
                 std::vector<ActionEntry> right)
      : base_(std::move(base)),
        generators_(std::move(generators)),
        left_entries_(std::move(left)),
        right_entries_(std::move(right)) {
    if (!base_) throw ConstructionError("bimodule without a base");
    for (const auto& g : generators_)
      if (g.source >= base_->factor_count() || g.target >= base_->factor_count())
        throw ConstructionError("generator '" + g.name + "' refers to a missing base factor");
    left_ = install(left_entries_, /*left=*/true);
    right_ = install(right_entries_, /*left=*/false);
    verify();
  }

  const BasePtr& base_ptr() const { return base_; }
  const SemisimpleBase& base() const { return *base_; }
  std::size_t size() const { return generators_.size(); }
  const Generator& generator(std::size_t g) const { return generators_.at(g); }
  const std::vector<Generator>& generators() const { return generators_; }
  const std::vector<ActionEntry>& left_entries() const { return left_entries_; }
  const std::vector<ActionEntry>& right_entries() const { return right_entries_; }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t g = 0; g < generators_.size(); ++g)
      if (generators_[g].name == name) return g;
    return std::nullopt;
  }

  /// b_p * m_g as a sparse combination of generators.
  const SparseVec& left(std::size_t p, std::size_t g) const { return left_[p][g]; }
  /// m_g * b_p.
  const SparseVec& right(std::size_t g, std::size_t p) const { return right_[p][g]; }

  SparseVec act_left(const Vec& lambda, const SparseVec& m) const {
    SparseVec out;
    for (std::size_t p = 0; p < lambda.size(); ++p) {
      if (sgn(lambda[p]) == 0) continue;
      for (const auto& [g, c] : m) axpy(out, lambda[p] * c, left(p, g));
    }
    return out;
  }

  SparseVec act_right(const SparseVec& m, const Vec& lambda) const {
    SparseVec out;
    for (std::size_t p = 0; p < lambda.size(); ++p) {
      if (sgn(lambda[p]) == 0) continue;
      for (const auto& [g, c] : m) axpy(out, lambda[p] * c, right(g, p));
    }
    return out;
  }

  /// True when every generator has degree in [lo, hi].
  bool concentrated_in(int lo, int hi) const {
    return std::all_of(generators_.begin(), generators_.end(),
                       [&](const Generator& g) { return g.degree >= lo && g.degree <= hi; });
  }

  /// Generators g with source(g) = source and target(g) = target.
  std::vector<std::size_t> block(std::size_t source, std::size_t target) const {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < generators_.size(); ++g)
      if (generators_[g].source == source && generators_[g].target == target) out.push_back(g);
    return out;
  }

 private:
  using ActionTable = std::vector<std::vector<SparseVec>>;  // [scalar][generator]

  ActionTable install(const std::vector<ActionEntry>& entries, bool left) const {
    const std::size_t dim = base_->dim();
    ActionTable table(dim, std::vector<SparseVec>(generators_.size()));
    std::vector<std::vector<bool>> given(dim, std::vector<bool>(generators_.size(), false));
    for (const auto& e : entries) {
      if (e.scalar >= dim || e.generator >= generators_.size() || e.image.size() != generators_.size())
        throw ConstructionError("malformed action entry");
      table[e.scalar][e.generator] = to_sparse(e.image);
      given[e.scalar][e.generator] = true;
    }
    for (std::size_t p = 0; p < dim; ++p) {
      const std::size_t factor = base_->factor_of(p);
      for (std::size_t g = 0; g < generators_.size(); ++g) {
        const std::size_t side = left ? generators_[g].target : generators_[g].source;
        if (side != factor) {
          if (given[p][g] && !table[p][g].empty())
            throw BimoduleAxiomError("scalar acts on generator '" + generators_[g].name +
                                     "' outside its support");
          continue;
        }
        if (base_->is_unit_index(p)) {
          if (!given[p][g]) table[p][g] = SparseVec{{g, Rational(1)}};
          continue;
        }
        if (!given[p][g])
          throw ConstructionError(std::string(left ? "left" : "right") + " action of base basis element " +
                                  std::to_string(p) + " on '" + generators_[g].name + "' is not given");
      }
    }
    return table;
  }

  void verify() const {
    const std::size_t dim = base_->dim();
    const std::size_t n = generators_.size();
    for (std::size_t p = 0; p < dim; ++p)
      for (std::size_t g = 0; g < n; ++g)
        for (const auto* table : {&left_, &right_})
          for (const auto& [h, c] : (*table)[p][g]) {
            (void)c;
            if (generators_[h].degree != generators_[g].degree)
              throw GradingError("base action changes the degree of '" + generators_[g].name + "'");
            if (generators_[h].source != generators_[g].source || generators_[h].target != generators_[g].target)
              throw BimoduleAxiomError("base action moves '" + generators_[g].name + "' out of its support");
          }
    // Identities, multiplicativity and commutation of the two actions.
    for (std::size_t g = 0; g < n; ++g) {
      const auto& gen = generators_[g];
      if (left_[base_->unit_index(gen.target)][g] != SparseVec{{g, Rational(1)}} ||
          right_[base_->unit_index(gen.source)][g] != SparseVec{{g, Rational(1)}})
        throw BimoduleAxiomError("idempotent does not act as the identity on '" + gen.name + "'");
    }
    for (std::size_t p = 0; p < dim; ++p)
      for (std::size_t q = 0; q < dim; ++q) {
        const bool same_factor = base_->factor_of(p) == base_->factor_of(q);
        const Vec& pq = base_->basis_product(p, q);
        for (std::size_t g = 0; g < n; ++g) {
          if (same_factor) {
            SparseVec lhs = apply(left_[p], left_[q][g]);
            SparseVec rhs;
            for (std::size_t r = 0; r < dim; ++r)
              if (sgn(pq[r]) != 0) axpy(rhs, pq[r], left_[r][g]);
            if (lhs != rhs)
              throw BimoduleAxiomError("left action is not multiplicative on '" + generators_[g].name + "'");
            lhs = apply(right_[q], right_[p][g]);
            rhs.clear();
            for (std::size_t r = 0; r < dim; ++r)
              if (sgn(pq[r]) != 0) axpy(rhs, pq[r], right_[r][g]);
            if (lhs != rhs)
              throw BimoduleAxiomError("right action is not multiplicative on '" + generators_[g].name + "'");
          }
          if (apply(right_[q], left_[p][g]) != apply(left_[p], right_[q][g]))
            throw BimoduleAxiomError("left and right actions do not commute on '" + generators_[g].name + "'");
        }
      }
  }

  static SparseVec apply(const std::vector<SparseVec>& op, const SparseVec& v) {
    SparseVec out;
    for (const auto& [g, c] : v) axpy(out, c, op[g]);
    return out;
  }

  BasePtr base_;
  std::vector<Generator> generators_;
  std::vector<ActionEntry> left_entries_, right_entries_;
  ActionTable left_, right_;
};

using BimodulePtr = std::shared_ptr<const GradedBimodule>;

inline BimodulePtr make_bimodule(BasePtr base, std::vector<Generator> generators, std::vector<ActionEntry> left = {},
                                 std::vector<ActionEntry> right = {}) {
  return std::make_shared<const GradedBimodule>(std::move(base), std::move(generators), std::move(left),
                                                std::move(right));
}

/// M (x)_l N. A pair m (x) n is nonzero only when source(m) = target(n); the
/// quotient by m*lambda (x) n - m (x) lambda*n keeps the lexicographically
/// smallest pairs as its basis.
inline BimodulePtr tensor_over_base(const GradedBimodule& m, const GradedBimodule& n) {
  if (m.base_ptr() != n.base_ptr()) throw ConstructionError("tensor product over different bases");
  const SemisimpleBase& base = m.base();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < n.size(); ++b)
      if (m.generator(a).source == n.generator(b).target) {
        index.emplace(std::make_pair(a, b), pairs.size());
        pairs.emplace_back(a, b);
      }
  SparseEchelon relations;
  for (const auto& [a, b] : pairs) {
    const std::size_t middle = m.generator(a).source;
    for (std::size_t p = base.offset(middle); p < base.offset(middle) + base.factor(middle).degree(); ++p) {
      if (base.is_unit_index(p)) continue;
      SparseVec rel;
      for (const auto& [h, c] : m.right(a, p)) axpy(rel, c, SparseVec{{index.at({h, b}), Rational(1)}});
      for (const auto& [k, c] : n.left(p, b)) axpy(rel, -c, SparseVec{{index.at({a, k}), Rational(1)}});
      relations.insert(std::move(rel));
    }
  }
  std::vector<std::size_t> survivors;
  std::map<std::size_t, std::size_t> position;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (!relations.is_pivot(k)) {
      position.emplace(k, survivors.size());
      survivors.push_back(k);
    }
  auto coordinates = [&](const SparseVec& v) {
    Vec out(survivors.size());
    for (const auto& [k, c] : relations.reduce(v)) out[position.at(k)] = c;
    return out;
  };
  std::vector<Generator> gens;
  for (auto k : survivors) {
    const auto& [a, b] = pairs[k];
    gens.push_back({m.generator(a).name + " " + n.generator(b).name, n.generator(b).source,
                    m.generator(a).target, m.generator(a).degree + n.generator(b).degree});
  }
  std::vector<ActionEntry> left, right;
  for (std::size_t s = 0; s < survivors.size(); ++s) {
    const auto& [a, b] = pairs[survivors[s]];
    const std::size_t tgt = gens[s].target, src = gens[s].source;
    for (std::size_t p = base.offset(tgt); p < base.offset(tgt) + base.factor(tgt).degree(); ++p) {
      SparseVec v;
      for (const auto& [h, c] : m.left(p, a)) axpy(v, c, SparseVec{{index.at({h, b}), Rational(1)}});
      left.push_back({p, s, coordinates(v)});
    }
    for (std::size_t p = base.offset(src); p < base.offset(src) + base.factor(src).degree(); ++p) {
      SparseVec v;
      for (const auto& [k, c] : n.right(b, p)) axpy(v, c, SparseVec{{index.at({a, k}), Rational(1)}});
      right.push_back({p, s, coordinates(v)});
    }
  }
  return make_bimodule(m.base_ptr(), std::move(gens), std::move(left), std::move(right));
}

}  // namespace cyq
