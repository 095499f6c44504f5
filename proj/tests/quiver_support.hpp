#pragma once

// Random quivers with potential and a path-algebra oracle for Jacobian algebras.

#include "support.hpp"

#include <cyq/dpa.hpp>

#include <algorithm>
#include <map>
#include <random>

namespace cyq::testing {

using Path = std::vector<int>;
using Poly = std::map<Path, Rational>;

inline Quiver three_cycle() {
  // a: 1 -> 2, c: 2 -> 3, b: 3 -> 1, so abc is a cycle at vertex 2.
  return Quiver{3, {{"a", 0, 1}, {"b", 2, 0}, {"c", 1, 2}}};
}

inline Terms word_terms(std::vector<Letter> w, const Rational& c = 1) { return Terms{{Word::of(std::move(w)), c}}; }

struct RandomQp {
  Quiver quiver;
  Terms potential;
};

inline RandomQp random_qp(std::mt19937& rng) {
  for (;;) {
    RandomQp r;
    const std::size_t nv = 1 + rng() % 3, na = 1 + rng() % 3;
    r.quiver.vertices = nv;
    for (std::size_t a = 0; a < na; ++a)
      r.quiver.arrows.push_back({"a" + std::to_string(a), rng() % nv, rng() % nv});
    auto [v, eta] = double_quiver(r.quiver);
    std::vector<Letter> arrows;
    for (Letter a = 0; a < na; ++a) arrows.push_back(a);
    for (int k = 0; k < 3; ++k)
      if (auto w = random_word(rng, *v, 2 + rng() % 3, true, arrows))
        add_term(r.potential, *w, Rational(static_cast<int>(1 + rng() % 3)));
    if (!r.potential.empty()) return r;
  }
}

// Quiver-side oracle, independent of the tensor machinery: paths are arrow
// sequences composed right to left, relations are cyclic derivatives computed
// by rotating words, and the quotient dimension comes from a dense rank.
struct PathOracle {
  const Quiver& q;
  std::size_t source(const Path& p, int vertex_if_empty) const {
    return p.empty() ? vertex_if_empty : q.arrows[p.back()].source;
  }
  std::size_t target(const Path& p, int vertex_if_empty) const {
    return p.empty() ? vertex_if_empty : q.arrows[p.front()].target;
  }

  std::vector<std::pair<Path, int>> paths(std::size_t lmax) const {
    std::vector<std::pair<Path, int>> out;
    for (std::size_t v = 0; v < q.vertices; ++v) out.push_back({{}, static_cast<int>(v)});
    std::vector<Path> layer;
    for (std::size_t a = 0; a < q.arrows.size(); ++a) layer.push_back({static_cast<int>(a)});
    for (std::size_t k = 1; k <= lmax; ++k) {
      std::vector<Path> next;
      for (const auto& p : layer) {
        out.push_back({p, -1});
        for (std::size_t a = 0; a < q.arrows.size(); ++a)
          if (q.arrows[p.back()].source == q.arrows[a].target) {
            next.push_back(p);
            next.back().push_back(static_cast<int>(a));
          }
      }
      layer = std::move(next);
    }
    return out;
  }

  Poly derivative(const Terms& w, int a) const {
    Poly out;
    for (const auto& [word, c] : w) {
      Path cur(word.letters.begin(), word.letters.end());
      for (std::size_t r = 0; r < cur.size(); ++r) {
        if (cur.back() == a) {
          Path arc(cur.begin(), cur.end() - 1);
          out[arc] += c;
        }
        std::rotate(cur.begin(), cur.end() - 1, cur.end());
      }
    }
    std::erase_if(out, [](const auto& kv) { return sgn(kv.second) == 0; });
    return out;
  }

  std::size_t dim(const Terms& w, std::size_t lmax) const {
    auto basis = paths(lmax);
    std::map<std::pair<Path, int>, std::size_t> index;
    for (const auto& b : basis) index.emplace(b, index.size());
    SparseEchelon span;
    for (std::size_t a = 0; a < q.arrows.size(); ++a) {
      Poly r = derivative(w, static_cast<int>(a));
      if (r.empty()) continue;
      std::size_t shortest = lmax + 1;
      for (const auto& [m, c] : r) shortest = std::min(shortest, m.size());
      // The relation runs from target(a) to source(a).
      const int rs = static_cast<int>(q.arrows[a].target), rt = static_cast<int>(q.arrows[a].source);
      for (const auto& [u, uv] : basis) {
        if (static_cast<int>(source(u, uv)) != rt || u.size() + shortest > lmax) continue;
        for (const auto& [v, vv] : basis) {
          if (static_cast<int>(target(v, vv)) != rs || u.size() + v.size() + shortest > lmax) continue;
          SparseVec row;
          for (const auto& [m, c] : r) {
            Path p = u;
            p.insert(p.end(), m.begin(), m.end());
            p.insert(p.end(), v.begin(), v.end());
            if (p.size() > lmax) continue;
            axpy(row, c, SparseVec{{index.at({p, p.empty() ? rs : -1}), Rational(1)}});
          }
          if (!row.empty()) span.insert(std::move(row));
        }
      }
    }
    return basis.size() - span.rank();
  }
};

}  // namespace cyq::testing
