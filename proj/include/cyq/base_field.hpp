#pragma once

// Simple field extensions of Q, semisimple products of them with a weighted
// trace form, and the Casimir element of that trace form.

#include <cyq/errors.hpp>
#include <cyq/linalg.hpp>
#include <cyq/rational.hpp>

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace cyq {

namespace detail {

using Poly = std::vector<Rational>;  // coefficients, lowest degree first

inline void trim(Poly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

inline Poly poly_sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

/// Quotient and remainder of a by b (b nonzero).
inline std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
  trim(a);
  Poly q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
  while (!a.empty() && a.size() >= b.size()) {
    std::size_t shift = a.size() - b.size();
    Rational f = a.back() / b.back();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim(a);
  }
  trim(q);
  return {q, a};
}

}  // namespace detail

/// Q[x]/(min_poly). Elements are coefficient vectors of length degree().
/// Irreducibility is not checked up front; inverse() reports a zero divisor.
class FieldExt {
 public:
  using Element = Vec;

  explicit FieldExt(Vec min_poly) : min_poly_(std::move(min_poly)) {
    if (min_poly_.size() < 2) throw ConstructionError("minimal polynomial must have degree >= 1");
    if (min_poly_.back() != 1) throw ConstructionError("minimal polynomial must be monic");
  }

  std::size_t degree() const { return min_poly_.size() - 1; }
  const Vec& min_poly() const { return min_poly_; }

  Element zero() const { return Element(degree()); }
  Element one() const {
    Element e(degree());
    e[0] = 1;
    return e;
  }
  /// The class of x, i.e. the k-th power basis element for k = 1 (or 1 when degree is 1).
  Element basis(std::size_t k) const {
    Element e(degree());
    e.at(k) = 1;
    return e;
  }

  Element reduce(detail::Poly p) const {
    auto [q, r] = detail::poly_divmod(std::move(p), min_poly_);
    (void)q;
    r.resize(degree());
    return r;
  }

  Element mul(const Element& a, const Element& b) const {
    detail::Poly pa(a), pb(b);
    detail::trim(pa);
    detail::trim(pb);
    return reduce(detail::poly_mul(pa, pb));
  }

  Element inverse(const Element& a) const {
    // Extended Euclid: s*a + t*m = g.
    detail::Poly r0 = min_poly_, r1(a);
    detail::trim(r1);
    if (r1.empty()) throw ReducibilityError("inverse of zero");
    detail::Poly s0, s1{Rational(1)};
    while (!r1.empty()) {
      auto [q, r] = detail::poly_divmod(r0, r1);
      detail::Poly s = detail::poly_sub(s0, detail::poly_mul(q, s1));
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    if (r0.size() != 1)
      throw ReducibilityError("minimal polynomial is reducible: element shares a factor with it");
    Rational inv = 1 / r0[0];
    for (auto& c : s0) c *= inv;
    return reduce(s0);
  }

  /// Matrix of y -> a*y in the power basis.
  Matrix multiplication_matrix(const Element& a) const {
    Matrix m(degree(), degree());
    for (std::size_t k = 0; k < degree(); ++k) {
      Element col = mul(a, basis(k));
      for (std::size_t r = 0; r < degree(); ++r) m(r, k) = col[r];
    }
    return m;
  }

  /// Regular trace: trace of multiplication by a.
  Rational regular_trace(const Element& a) const {
    Matrix m = multiplication_matrix(a);
    Rational t = 0;
    for (std::size_t k = 0; k < degree(); ++k) t += m(k, k);
    return t;
  }

  friend bool operator==(const FieldExt& a, const FieldExt& b) { return a.min_poly_ == b.min_poly_; }

 private:
  Vec min_poly_;
};

inline FieldExt make_field_ext(Vec min_poly) { return FieldExt(std::move(min_poly)); }

/// l = K_1 x ... x K_n with Tr(l_1, ..., l_n) = sum_j w_j tr_{K_j}(l_j).
///
/// Elements are stored in global coordinates: the power basis of K_1, then of
/// K_2, and so on. Global basis index p belongs to factor factor_of(p); the
/// first basis element of each factor is its idempotent e_j.
class SemisimpleBase {
 public:
  using Element = Vec;

  SemisimpleBase(std::vector<FieldExt> factors, std::vector<Rational> weights)
      : factors_(std::move(factors)), weights_(std::move(weights)) {
    if (factors_.empty()) throw ConstructionError("a base needs at least one factor");
    if (factors_.size() != weights_.size())
      throw ConstructionError("factors and trace weights differ in length");
    for (std::size_t j = 0; j < factors_.size(); ++j) {
      if (sgn(weights_[j]) == 0)
        throw NondegenerateTraceError("trace weight of factor " + std::to_string(j) + " is zero");
      offsets_.push_back(dim_);
      for (std::size_t k = 0; k < factors_[j].degree(); ++k) owner_.push_back(j);
      dim_ += factors_[j].degree();
    }
    Matrix g(dim_, dim_);
    for (std::size_t p = 0; p < dim_; ++p)
      for (std::size_t q = 0; q < dim_; ++q) g(p, q) = trace(mul(basis(p), basis(q)));
    auto inv = cyq::inverse(g);
    if (!inv) throw NondegenerateTraceError("trace pairing on the base is degenerate");
    gram_ = std::move(g);
    gram_inverse_ = std::move(*inv);
    products_.resize(dim_ * dim_);
    for (std::size_t p = 0; p < dim_; ++p)
      for (std::size_t q = 0; q < dim_; ++q) products_[p * dim_ + q] = mul(basis(p), basis(q));
  }

  std::size_t factor_count() const { return factors_.size(); }
  std::size_t dim() const { return dim_; }
  const FieldExt& factor(std::size_t j) const { return factors_.at(j); }
  const Rational& weight(std::size_t j) const { return weights_.at(j); }
  std::size_t factor_of(std::size_t p) const { return owner_.at(p); }
  std::size_t offset(std::size_t j) const { return offsets_.at(j); }
  /// Global index of the idempotent e_j.
  std::size_t unit_index(std::size_t j) const { return offsets_.at(j); }
  bool is_unit_index(std::size_t p) const { return offsets_.at(owner_.at(p)) == p; }

  Element zero() const { return Element(dim_); }
  Element one() const {
    Element e(dim_);
    for (auto off : offsets_) e[off] = 1;
    return e;
  }
  Element basis(std::size_t p) const {
    Element e(dim_);
    e.at(p) = 1;
    return e;
  }
  /// Embeds an element of factor j.
  Element embed(std::size_t j, const FieldExt::Element& x) const {
    Element e(dim_);
    for (std::size_t k = 0; k < x.size(); ++k) e[offsets_[j] + k] = x[k];
    return e;
  }
  FieldExt::Element component(const Element& x, std::size_t j) const {
    return FieldExt::Element(x.begin() + offsets_[j], x.begin() + offsets_[j] + factors_[j].degree());
  }

  Element mul(const Element& a, const Element& b) const {
    Element out(dim_);
    for (std::size_t j = 0; j < factors_.size(); ++j) {
      auto c = factors_[j].mul(component(a, j), component(b, j));
      for (std::size_t k = 0; k < c.size(); ++k) out[offsets_[j] + k] = c[k];
    }
    return out;
  }

  /// Structure constants b_p * b_q in global coordinates (cached).
  const Element& basis_product(std::size_t p, std::size_t q) const { return products_[p * dim_ + q]; }

  Rational trace(const Element& x) const {
    Rational t = 0;
    for (std::size_t j = 0; j < factors_.size(); ++j) t += weights_[j] * factors_[j].regular_trace(component(x, j));
    return t;
  }

  /// Gram matrix Tr(b_p b_q).
  const Matrix& gram() const { return gram_; }
  const Matrix& gram_inverse() const { return gram_inverse_; }

 private:
  std::vector<FieldExt> factors_;
  std::vector<Rational> weights_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> owner_;
  std::size_t dim_ = 0;
  Matrix gram_, gram_inverse_;
  std::vector<Element> products_;
};

using BasePtr = std::shared_ptr<const SemisimpleBase>;

inline BasePtr make_base(std::vector<FieldExt> factors, std::vector<Rational> weights) {
  return std::make_shared<const SemisimpleBase>(std::move(factors), std::move(weights));
}

/// sigma = sum_{p,q} coefficient(p, q) b_p (x) b_q, i.e. sum_p b_p (x) b_p^* where
/// b^* is the Tr-dual basis.
struct CasimirElement {
  Matrix coefficients;
};

inline CasimirElement casimir(const SemisimpleBase& base) { return CasimirElement{base.gram_inverse()}; }

/// (x (x) 1) sigma == sigma (1 (x) x).
inline bool casimir_is_balanced(const SemisimpleBase& base, const CasimirElement& s, const Vec& x) {
  const std::size_t n = base.dim();
  Matrix left(n, n), right(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      const Rational& c = s.coefficients(p, q);
      if (sgn(c) == 0) continue;
      Vec xp = base.mul(x, base.basis(p));
      Vec qx = base.mul(base.basis(q), x);
      for (std::size_t r = 0; r < n; ++r) {
        if (sgn(xp[r]) != 0) left(r, q) += c * xp[r];
        if (sgn(qx[r]) != 0) right(p, r) += c * qx[r];
      }
    }
  return left == right;
}

/// sum Tr(x sigma') sigma''.
inline Vec casimir_contract(const SemisimpleBase& base, const CasimirElement& s, const Vec& x) {
  const std::size_t n = base.dim();
  Vec out(n);
  for (std::size_t p = 0; p < n; ++p) {
    Rational t = base.trace(base.mul(x, base.basis(p)));
    if (sgn(t) == 0) continue;
    for (std::size_t q = 0; q < n; ++q) out[q] += t * s.coefficients(p, q);
  }
  return out;
}

}  // namespace cyq
