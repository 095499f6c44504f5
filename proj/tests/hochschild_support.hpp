#pragma once

#include "dgcat_support.hpp"

#include <cyq/hochschild.hpp>

#include <map>
#include <stdexcept>

namespace cyq::testing {

inline DgCatPtr unit_category() {
  DgCategoryData d;
  d.objects = {"pt"};
  d.morphisms = {{"1", 0, 0, 0, 0}};
  d.identities = {0};
  return make_dgcat(d);
}

inline DgCatPtr two_points() {
  DgCategoryData d;
  d.objects = {"x", "y"};
  d.morphisms = {{"1x", 0, 0, 0, 0}, {"1y", 1, 1, 0, 0}};
  d.identities = {0, 1};
  return make_dgcat(d);
}

inline DgCatPtr dual_numbers() {
  DgCategoryData d;
  d.objects = {"pt"};
  d.morphisms = {{"1", 0, 0, 0, 0}, {"e", 0, 0, 0, 0}};
  d.identities = {0};
  return make_dgcat(d);
}

// Unnormalized bar complex of a category concentrated in degree 0 with d = 0:
// b = sum_{i<n} (-1)^i d_i + (-1)^n d_n.
struct BarOracle {
  DgCatPtr c;
  std::size_t max_len;
  std::vector<std::vector<Chain>> chains;  // by n
  std::vector<std::map<Chain, std::size_t>> index;

  BarOracle(DgCatPtr cat, std::size_t n_max) : c(std::move(cat)), max_len(n_max) {
    for (std::size_t f = 0; f < c->size(); ++f) {
      if (c->morphism(f).degree != 0 || !c->d(f).empty()) throw std::logic_error("oracle needs degree 0 and d = 0");
    }
    chains.resize(n_max + 1);
    index.resize(n_max + 1);
    std::vector<Chain> layer;
    for (std::size_t f = 0; f < c->size(); ++f) layer.push_back({f});
    for (std::size_t n = 0; n <= n_max; ++n) {
      std::vector<Chain> next;
      for (const auto& x : layer) {
        if (c->morphism(x.back()).source == c->morphism(x.front()).target) {
          index[n].emplace(x, chains[n].size());
          chains[n].push_back(x);
        }
        for (std::size_t g = 0; g < c->size(); ++g)
          if (c->morphism(g).target == c->morphism(x.back()).source) {
            auto y = x;
            y.push_back(g);
            next.push_back(std::move(y));
          }
      }
      layer = std::move(next);
    }
  }

  std::vector<SparseVec> b(std::size_t n) const {
    std::vector<SparseVec> out;
    for (const auto& x : chains[n]) {
      SparseVec col;
      for (std::size_t i = 0; i <= n && n > 0; ++i) {
        const Rational sign = i % 2 == 0 ? 1 : -1;
        SparseVec prod = i < n ? c->compose(x[i], x[i + 1]) : c->compose(x[n], x[0]);
        for (const auto& [g, coef] : prod) {
          Chain y;
          if (i < n) {
            y.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(i));
            y.push_back(g);
            y.insert(y.end(), x.begin() + static_cast<std::ptrdiff_t>(i + 2), x.end());
          } else {
            y.push_back(g);
            y.insert(y.end(), x.begin() + 1, x.begin() + static_cast<std::ptrdiff_t>(n));
          }
          axpy(col, sign * coef, {{index[n - 1].at(y), Rational(1)}});
        }
      }
      out.push_back(std::move(col));
    }
    return out;
  }

  // t(a_0, ..., a_n) = (-1)^n (a_n, a_0, ..., a_{n-1}); returns columns of 1 - t.
  std::vector<SparseVec> one_minus_t(std::size_t n) const {
    std::vector<SparseVec> out;
    for (std::size_t j = 0; j < chains[n].size(); ++j) {
      const auto& x = chains[n][j];
      Chain y{x.back()};
      y.insert(y.end(), x.begin(), x.end() - 1);
      SparseVec col{{j, Rational(1)}};
      axpy(col, n % 2 == 0 ? Rational(-1) : Rational(1), {{index[n].at(y), Rational(1)}});
      out.push_back(std::move(col));
    }
    return out;
  }

  std::size_t hh(std::size_t n) const {
    const std::size_t in = n + 1 <= max_len ? sparse_rank(b(n + 1)) : 0;
    return chains[n].size() - (n > 0 ? sparse_rank(b(n)) : 0) - in;
  }

  // Homology of Connes' quotient complex C_n / (1 - t).
  std::size_t hc(std::size_t n) const {
    auto quotient_rank = [&](std::size_t m) {  // rank of b: C_m/I_m -> C_{m-1}/I_{m-1}
      if (m == 0 || m > max_len) return std::size_t{0};
      auto i = one_minus_t(m - 1);
      auto both = i;
      for (auto& v : b(m)) both.push_back(v);
      return sparse_rank(both) - sparse_rank(i);
    };
    const std::size_t dim_q = chains[n].size() - sparse_rank(one_minus_t(n));
    return dim_q - quotient_rank(n) - quotient_rank(n + 1);
  }
};

}  // namespace cyq::testing
