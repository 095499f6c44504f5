#pragma once

#include <cyq/rational.hpp>

#include <cassert>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cyq {

using Vec = std::vector<Rational>;

/// Dense row-major matrix over the rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = 1;
    return m;
  }

  static Matrix from_columns(const std::vector<Vec>& columns, std::size_t rows) {
    Matrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
      for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vec row(std::size_t r) const { return Vec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_); }
  Vec col(std::size_t c) const {
    Vec v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (sgn(x) != 0) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Vec apply(const Vec& v) const {
    assert(v.size() == cols_);
    Vec out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (sgn(v[c]) != 0 && sgn((*this)(r, c)) != 0) out[r] += (*this)(r, c) * v[c];
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& x = a(r, k);
        if (sgn(x) == 0) continue;
        for (std::size_t c = 0; c < b.cols_; ++c)
          if (sgn(b(k, c)) != 0) out(r, c) += x * b(k, c);
      }
    return out;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix difference: shape mismatch");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }

  friend Matrix operator*(const Rational& s, Matrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form together with its pivot columns.
struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

/// Gauss-Jordan elimination. Pivot columns are searched left to right and the
/// pivot row is the first row with a nonzero entry, so the result is canonical.
inline Echelon echelon(Matrix m) {
  Echelon e;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < m.cols() && lead < m.rows(); ++c) {
    std::size_t r = lead;
    while (r < m.rows() && sgn(m(r, c)) == 0) ++r;
    if (r == m.rows()) continue;
    if (r != lead)
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(r, k), m(lead, k));
    Rational inv = 1 / m(lead, c);
    for (std::size_t k = c; k < m.cols(); ++k) m(lead, k) *= inv;
    for (std::size_t rr = 0; rr < m.rows(); ++rr) {
      if (rr == lead || sgn(m(rr, c)) == 0) continue;
      Rational f = m(rr, c);
      for (std::size_t k = c; k < m.cols(); ++k)
        if (sgn(m(lead, k)) != 0) m(rr, k) -= f * m(lead, k);
    }
    e.pivots.push_back(c);
    ++lead;
  }
  e.reduced = std::move(m);
  return e;
}

/// Rank by forward elimination only (cheaper than a full RREF).
inline std::size_t rank(Matrix m) {
  std::size_t lead = 0;
  for (std::size_t c = 0; c < m.cols() && lead < m.rows(); ++c) {
    std::size_t r = lead;
    while (r < m.rows() && sgn(m(r, c)) == 0) ++r;
    if (r == m.rows()) continue;
    if (r != lead)
      for (std::size_t k = c; k < m.cols(); ++k) std::swap(m(r, k), m(lead, k));
    for (std::size_t rr = lead + 1; rr < m.rows(); ++rr) {
      if (sgn(m(rr, c)) == 0) continue;
      Rational f = m(rr, c) / m(lead, c);
      for (std::size_t k = c; k < m.cols(); ++k)
        if (sgn(m(lead, k)) != 0) m(rr, k) -= f * m(lead, k);
    }
    ++lead;
  }
  return lead;
}

/// Basis of {x : m x = 0}, one vector per free column.
inline std::vector<Vec> nullspace(const Matrix& m) {
  Echelon e = echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(m.cols());
    v[free] = 1;
    for (std::size_t k = 0; k < e.pivots.size(); ++k) v[e.pivots[k]] = -e.reduced(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// One solution of m x = b (free variables set to zero), or nullopt.
inline std::optional<Vec> solve(const Matrix& m, const Vec& b) {
  assert(b.size() == m.rows());
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  Echelon e = echelon(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vec x(m.cols());
  for (std::size_t k = 0; k < e.pivots.size(); ++k) x[e.pivots[k]] = e.reduced(k, m.cols());
  return x;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const std::size_t n = m.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = 1;
  }
  Echelon e = echelon(std::move(aug));
  if (n == 0) return Matrix(0, 0);
  if (e.rank() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.reduced(r, n + c);
  return inv;
}

inline Rational determinant(Matrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r < n && sgn(m(r, c)) == 0) ++r;
    if (r == n) return 0;
    if (r != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(r, k), m(c, k));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t rr = c + 1; rr < n; ++rr) {
      if (sgn(m(rr, c)) == 0) continue;
      Rational f = m(rr, c) / m(c, c);
      for (std::size_t k = c; k < n; ++k) m(rr, k) -= f * m(c, k);
    }
  }
  return det;
}

/// Sparse vector keyed by coordinate index.
using SparseVec = std::map<std::size_t, Rational>;

inline void axpy(SparseVec& y, const Rational& a, const SparseVec& x) {
  for (const auto& [k, v] : x) {
    auto [it, fresh] = y.try_emplace(k, 0);
    it->second += a * v;
    if (sgn(it->second) == 0) y.erase(it);
  }
}

/// Row space kept in echelon form where each row is led by its LARGEST index.
///
/// reduce() returns the unique representative of v modulo the row space that
/// has no pivot coordinates, so it doubles as a canonical normal form for
/// quotients: the surviving (non-pivot) basis vectors are the smallest ones.
class SparseEchelon {
 public:
  /// Adds v to the row space; returns false when v was already in it.
  bool insert(SparseVec v) {
    reduce_in_place(v);
    if (v.empty()) return false;
    auto lead = std::prev(v.end());
    Rational inv = 1 / lead->second;
    for (auto& [k, x] : v) x *= inv;
    std::size_t key = lead->first;
    rows_.emplace(key, std::move(v));
    return true;
  }

  SparseVec reduce(SparseVec v) const {
    reduce_in_place(v);
    return v;
  }

  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  std::size_t rank() const { return rows_.size(); }
  bool is_pivot(std::size_t k) const { return rows_.count(k) != 0; }
  const std::map<std::size_t, SparseVec>& rows() const { return rows_; }

 private:
  void reduce_in_place(SparseVec& v) const {
    auto it = v.end();
    while (it != v.begin()) {
      --it;
      const std::size_t k = it->first;
      auto row = rows_.find(k);
      if (row == rows_.end()) continue;
      Rational f = it->second;
      axpy(v, -f, row->second);
      it = v.lower_bound(k);
    }
  }

  std::map<std::size_t, SparseVec> rows_;
};

/// Sparse elimination that remembers, for every echelon row, which combination
/// of inserted generators produced it, so targets in the span can be solved for.
class SparseSolver {
 public:
  /// Registers a generator with the given image; returns false if the image was dependent.
  bool insert(SparseVec image, SparseVec preimage) {
    reduce_in_place(image, &preimage);
    if (image.empty()) return false;
    auto lead = std::prev(image.end());
    Rational inv = 1 / lead->second;
    for (auto& [k, x] : image) x *= inv;
    for (auto& [k, x] : preimage) x *= inv;
    const std::size_t key = lead->first;
    rows_.emplace(key, Row{std::move(image), std::move(preimage)});
    return true;
  }

  /// A preimage combination whose image is `target`, or nullopt.
  std::optional<SparseVec> solve(SparseVec target) const {
    SparseVec pre;
    reduce_in_place(target, &pre);
    if (!target.empty()) return std::nullopt;
    for (auto& [k, x] : pre) x = -x;
    return pre;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  struct Row {
    SparseVec image, preimage;
  };

  void reduce_in_place(SparseVec& v, SparseVec* pre) const {
    auto it = v.end();
    while (it != v.begin()) {
      --it;
      const std::size_t k = it->first;
      auto row = rows_.find(k);
      if (row == rows_.end()) continue;
      const Rational f = it->second;
      axpy(v, -f, row->second.image);
      if (pre) axpy(*pre, -f, row->second.preimage);
      it = v.lower_bound(k);
    }
  }

  std::map<std::size_t, Row> rows_;
};

/// Rank of the span of sparse vectors.
inline std::size_t sparse_rank(const std::vector<SparseVec>& vs) {
  SparseEchelon e;
  for (const auto& v : vs) e.insert(v);
  return e.rank();
}

inline SparseVec to_sparse(const Vec& v) {
  SparseVec s;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (sgn(v[k]) != 0) s.emplace(k, v[k]);
  return s;
}

inline Vec to_dense(const SparseVec& s, std::size_t n) {
  Vec v(n);
  for (const auto& [k, x] : s) v.at(k) = x;
  return v;
}

}  // namespace cyq
