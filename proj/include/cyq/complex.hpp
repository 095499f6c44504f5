#pragma once

// Bounded cochain complexes of finite-dimensional Q-vector spaces, their
// cohomology with explicit class coordinates, and homotopy short exact
// sequences with the snake-lemma connecting map.

#include <cyq/errors.hpp>
#include <cyq/linalg.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace cyq {

/// Cohomology in one degree: a basis of boundaries, cycle representatives of a
/// basis of H^k, and coordinates of cycles in that basis.
struct Cohomology {
  int degree = 0;
  std::size_t ambient = 0;
  std::vector<Vec> boundaries;
  std::vector<Vec> representatives;

  std::size_t dim() const { return representatives.size(); }

  /// Class of a cycle; nullopt when z is not a cycle of this degree.
  std::optional<Vec> coordinates(const Vec& z) const {
    if (z.size() != ambient) throw ConstructionError("vector does not live in degree " + std::to_string(degree));
    std::vector<Vec> cols = boundaries;
    cols.insert(cols.end(), representatives.begin(), representatives.end());
    if (cols.empty()) {
      if (std::all_of(z.begin(), z.end(), [](const Rational& x) { return sgn(x) == 0; })) return Vec{};
      return std::nullopt;
    }
    auto x = solve(Matrix::from_columns(cols, ambient), z);
    if (!x) return std::nullopt;
    return Vec(x->begin() + static_cast<std::ptrdiff_t>(boundaries.size()), x->end());
  }

  bool is_boundary(const Vec& z) const {
    auto c = coordinates(z);
    return c && std::all_of(c->begin(), c->end(), [](const Rational& x) { return sgn(x) == 0; });
  }
};

class ChainComplex {
 public:
  ChainComplex() = default;

  /// Spaces in degrees lo .. lo + dims.size() - 1; diffs[j] maps degree lo + j
  /// to lo + j + 1 and has shape dims[j + 1] x dims[j].
  ChainComplex(int lo, std::vector<std::size_t> dims, std::vector<Matrix> diffs)
      : lo_(lo), dims_(std::move(dims)), diffs_(std::move(diffs)) {
    if (dims_.empty()) {
      if (!diffs_.empty()) throw ConstructionError("differentials on an empty complex");
      return;
    }
    diffs_.resize(dims_.size() - 1, Matrix());
    for (std::size_t j = 0; j + 1 < dims_.size(); ++j) {
      if (diffs_[j].rows() == 0 && diffs_[j].cols() == 0) diffs_[j] = Matrix(dims_[j + 1], dims_[j]);
      if (diffs_[j].rows() != dims_[j + 1] || diffs_[j].cols() != dims_[j])
        throw ConstructionError("differential out of degree " + std::to_string(lo_ + static_cast<int>(j)) +
                                " has the wrong shape");
    }
  }

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(dims_.size()) - 1; }
  bool empty() const { return dims_.empty(); }

  std::size_t dim(int k) const {
    if (dims_.empty() || k < lo_ || k > hi()) return 0;
    return dims_[static_cast<std::size_t>(k - lo_)];
  }

  /// d: C^k -> C^{k+1}, zero outside the stored range.
  Matrix d(int k) const {
    if (k >= lo_ && k < hi()) return diffs_[static_cast<std::size_t>(k - lo_)];
    return Matrix(dim(k + 1), dim(k));
  }

  bool squares_to_zero() const {
    for (int k = lo_; k + 1 < hi(); ++k)
      if (!(d(k + 1) * d(k)).is_zero()) return false;
    return true;
  }

  std::size_t betti(int k) const {
    return dim(k) - cyq::rank(d(k)) - cyq::rank(d(k - 1));
  }

  Cohomology cohomology(int k) const {
    Cohomology out;
    out.degree = k;
    out.ambient = dim(k);
    const Matrix in = d(k - 1);
    SparseEchelon span;
    for (std::size_t c = 0; c < in.cols(); ++c) {
      Vec col = in.col(c);
      if (span.insert(to_sparse(col))) out.boundaries.push_back(std::move(col));
    }
    std::vector<Vec> cycles;
    if (dim(k + 1) == 0) {
      for (std::size_t j = 0; j < dim(k); ++j) cycles.push_back(unit(dim(k), j));
    } else {
      cycles = nullspace(d(k));
    }
    for (auto& z : cycles)
      if (span.insert(to_sparse(z))) out.representatives.push_back(std::move(z));
    return out;
  }

  std::vector<std::size_t> betti_table() const {
    std::vector<std::size_t> out;
    for (int k = lo_; k <= hi(); ++k) out.push_back(betti(k));
    return out;
  }

 private:
  static Vec unit(std::size_t n, std::size_t j) {
    Vec v(n);
    v[j] = 1;
    return v;
  }

  int lo_ = 0;
  std::vector<std::size_t> dims_;
  std::vector<Matrix> diffs_;
};

/// A homogeneous map of degree `shift` between complexes, stored per source degree.
struct GradedMap {
  int shift = 0;
  std::map<int, Matrix> blocks;

  Matrix at(int k, const ChainComplex& source, const ChainComplex& target) const {
    auto it = blocks.find(k);
    if (it != blocks.end()) return it->second;
    return Matrix(target.dim(k + shift), source.dim(k));
  }
};

/// Composite g o f, degreewise.
inline GradedMap compose(const GradedMap& g, const GradedMap& f, const ChainComplex& x, const ChainComplex& y,
                         const ChainComplex& z) {
  GradedMap out{g.shift + f.shift, {}};
  for (int k = x.lo(); k <= x.hi(); ++k) out.blocks[k] = g.at(k + f.shift, y, z) * f.at(k, x, y);
  return out;
}

inline bool is_chain_map(const GradedMap& f, const ChainComplex& x, const ChainComplex& y) {
  for (int k = x.lo() - 1; k <= x.hi(); ++k) {
    const Matrix lhs = y.d(k + f.shift) * f.at(k, x, y);
    const Matrix rhs = f.at(k + 1, x, y) * x.d(k);
    Matrix diff = (f.shift % 2 == 0) ? lhs - rhs : lhs + rhs;
    if (!diff.is_zero()) return false;
  }
  return true;
}

/// B -i-> A -p-> C with h: B -> C of degree -1 and d(h) = p o i.
struct HomotopySes {
  ChainComplex b, a, c;
  GradedMap i{0, {}}, p{0, {}}, h{-1, {}};
};

struct HsesReport {
  bool shapes_ok = true;
  bool chain_maps = true;
  bool dh_equals_pi = true;
  bool squares_to_zero = true;
  int lo = 0, hi = -1;
  std::vector<std::pair<int, std::size_t>> total_cohomology;  // degree, dim
  std::optional<int> first_nonzero;

  bool acyclic() const { return !first_nonzero.has_value(); }
  bool ok() const { return shapes_ok && chain_maps && dh_equals_pi && squares_to_zero && acyclic(); }
};

/// The total complex Sigma^{-1}C (+) A (+) Sigma B. Degree n holds (b, a, c) with
/// b in B^{n+1}, a in A^n, c in C^{n-1}, and D(b, a, c) = (-db, da + ib, -dc - pa - hb).
inline ChainComplex hses_total(const HomotopySes& s) {
  const int lo = std::min({s.b.lo() - 1, s.a.lo(), s.c.lo() + 1});
  const int hi = std::max({s.b.hi() - 1, s.a.hi(), s.c.hi() + 1});
  auto dims_at = [&](int n) {
    return std::array<std::size_t, 3>{s.b.dim(n + 1), s.a.dim(n), s.c.dim(n - 1)};
  };
  std::vector<std::size_t> dims;
  std::vector<Matrix> diffs;
  for (int n = lo; n <= hi; ++n) {
    auto sd = dims_at(n);
    dims.push_back(sd[0] + sd[1] + sd[2]);
  }
  for (int n = lo; n < hi; ++n) {
    auto sd = dims_at(n), td = dims_at(n + 1);
    Matrix m(td[0] + td[1] + td[2], sd[0] + sd[1] + sd[2]);
    auto put = [&](std::size_t r0, std::size_t c0, const Matrix& blk, int sign) {
      for (std::size_t r = 0; r < blk.rows(); ++r)
        for (std::size_t c = 0; c < blk.cols(); ++c)
          if (sgn(blk(r, c)) != 0) m(r0 + r, c0 + c) = sign > 0 ? blk(r, c) : Rational(-blk(r, c));
    };
    const std::size_t sb = 0, sa = sd[0], sc = sd[0] + sd[1];
    const std::size_t tb = 0, ta = td[0], tc = td[0] + td[1];
    put(tb, sb, s.b.d(n + 1), -1);
    put(ta, sb, s.i.at(n + 1, s.b, s.a), +1);
    put(tc, sb, s.h.at(n + 1, s.b, s.c), -1);
    put(ta, sa, s.a.d(n), +1);
    put(tc, sa, s.p.at(n, s.a, s.c), -1);
    put(tc, sc, s.c.d(n - 1), -1);
    diffs.push_back(std::move(m));
  }
  return ChainComplex(lo, std::move(dims), std::move(diffs));
}

/// Checks d(h) = p o i and acyclicity of the total complex. With a window, only
/// total degrees inside [lo, hi] are required to be acyclic.
inline HsesReport verify_hses(const HomotopySes& s, std::optional<std::pair<int, int>> window = std::nullopt) {
  HsesReport r;
  auto shape = [&](const GradedMap& f, const ChainComplex& x, const ChainComplex& y) {
    for (const auto& [k, m] : f.blocks)
      if (m.rows() != y.dim(k + f.shift) || m.cols() != x.dim(k)) return false;
    return true;
  };
  r.shapes_ok = shape(s.i, s.b, s.a) && shape(s.p, s.a, s.c) && shape(s.h, s.b, s.c) && s.i.shift == 0 &&
                s.p.shift == 0 && s.h.shift == -1;
  if (!r.shapes_ok) return r;
  r.chain_maps = is_chain_map(s.i, s.b, s.a) && is_chain_map(s.p, s.a, s.c);
  for (int k = s.b.lo(); k <= s.b.hi(); ++k) {
    const Matrix dh = s.c.d(k - 1) * s.h.at(k, s.b, s.c) + s.h.at(k + 1, s.b, s.c) * s.b.d(k);
    const Matrix pi = s.p.at(k, s.a, s.c) * s.i.at(k, s.b, s.a);
    if (!(dh == pi)) r.dh_equals_pi = false;
  }
  const ChainComplex total = hses_total(s);
  r.squares_to_zero = total.squares_to_zero();
  r.lo = window ? window->first : total.lo();
  r.hi = window ? window->second : total.hi();
  for (int n = r.lo; n <= r.hi; ++n) {
    const std::size_t b = total.betti(n);
    r.total_cohomology.emplace_back(n, b);
    if (b != 0 && !r.first_nonzero) r.first_nonzero = n;
  }
  return r;
}

struct ConnectingResult {
  Vec b;         // the b of a solution (a, b), a cycle in B^{q+1}
  Vec image;     // representative of delta(c) = -[b]
  Vec klass;     // coordinates of delta(c) in the basis of H^{q+1}(B)
};

/// delta(c) for a cycle c in C^q: solve d(a) + i(b) = 0, p(a) + h(b) = c + d(c'),
/// d(b) = 0, and return -[b]. `shuffle` permutes the unknowns before solving.
inline ConnectingResult connecting(const HomotopySes& s, int q, const Vec& c,
                                   std::optional<std::uint64_t> shuffle = std::nullopt) {
  if (c.size() != s.c.dim(q)) throw ConstructionError("class has the wrong dimension");
  if (!to_sparse(s.c.d(q).apply(c)).empty())
    throw ConstructionError("connecting map applied to a non-cycle");
  const std::size_t na = s.a.dim(q), nb = s.b.dim(q + 1), nc = s.c.dim(q - 1);
  const std::size_t ra = s.a.dim(q + 1), rc = s.c.dim(q), rb = s.b.dim(q + 2);
  const std::size_t cols = na + nb + nc;
  Matrix m(ra + rc + rb, cols);
  auto put = [&](std::size_t r0, std::size_t c0, const Matrix& blk, bool negate) {
    for (std::size_t r = 0; r < blk.rows(); ++r)
      for (std::size_t k = 0; k < blk.cols(); ++k)
        if (sgn(blk(r, k)) != 0) m(r0 + r, c0 + k) = negate ? Rational(-blk(r, k)) : blk(r, k);
  };
  put(0, 0, s.a.d(q), false);
  put(0, na, s.i.at(q + 1, s.b, s.a), false);
  put(ra, 0, s.p.at(q, s.a, s.c), false);
  put(ra, na, s.h.at(q + 1, s.b, s.c), false);
  put(ra, na + nb, s.c.d(q - 1), true);
  put(ra + rc, na, s.b.d(q + 1), false);
  Vec rhs(ra + rc + rb);
  for (std::size_t k = 0; k < rc; ++k) rhs[ra + k] = c[k];

  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  if (shuffle) {
    std::mt19937_64 rng(*shuffle);
    std::shuffle(order.begin(), order.end(), rng);
  }
  Matrix pm(m.rows(), cols);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t k = 0; k < cols; ++k) pm(r, k) = m(r, order[k]);
  auto x = solve(pm, rhs);
  if (!x) throw InconsistencyError("no (a, b) solves the snake system in degree " + std::to_string(q));
  Vec sol(cols);
  for (std::size_t k = 0; k < cols; ++k) sol[order[k]] = (*x)[k];

  ConnectingResult out;
  out.b = Vec(sol.begin() + static_cast<std::ptrdiff_t>(na), sol.begin() + static_cast<std::ptrdiff_t>(na + nb));
  out.image = out.b;
  for (auto& v : out.image) v = -v;
  auto coords = s.b.cohomology(q + 1).coordinates(out.image);
  if (!coords) throw InconsistencyError("snake solution is not a cycle");
  out.klass = *coords;
  return out;
}

}  // namespace cyq
