#pragma once

// Polynomials over F_q in a single variable. ThetaPoly (the variable θ) and TPoly
// (the variable t) share one implementation and differ only by tag, so a θ-polynomial
// can never be silently used where a t-polynomial is expected.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "tmg/fq.hpp"

namespace tmg {

/// Degree of the zero polynomial.
inline constexpr long long kZeroDegree = -1;

struct ThetaTag {};
struct TTag {};

template <class Tag>
class Poly {
 public:
  Poly() = default;
  explicit Poly(FieldPtr field) : field_(std::move(field)) {}
  Poly(FieldPtr field, std::vector<FqElem> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    normalize();
  }

  static Poly constant(FieldPtr field, FqElem c) { return Poly(std::move(field), {c}); }
  static Poly one(FieldPtr field) {
    auto f = field;
    return constant(std::move(field), f->one());
  }
  /// c · X^n
  static Poly monomial(FieldPtr field, FqElem c, std::size_t n) {
    std::vector<FqElem> coeffs(n + 1, field->zero());
    coeffs[n] = c;
    return Poly(std::move(field), std::move(coeffs));
  }
  static Poly x(FieldPtr field) {
    auto f = field;
    return monomial(std::move(field), f->one(), 1);
  }
  /// Builds from small integers reduced into the prime subfield.
  static Poly from_ints(FieldPtr field, std::initializer_list<long long> ints) {
    std::vector<FqElem> coeffs;
    for (auto v : ints) coeffs.push_back(field->from_int(v));
    return Poly(std::move(field), std::move(coeffs));
  }

  const FieldPtr& field() const noexcept { return field_; }
  const std::vector<FqElem>& coeffs() const noexcept { return coeffs_; }
  long long degree() const noexcept { return static_cast<long long>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_one() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == FqElem{1}; }
  bool is_constant() const noexcept { return coeffs_.size() <= 1; }

  FqElem coeff(long long i) const {
    if (i < 0 || i >= static_cast<long long>(coeffs_.size())) return FqElem{0};
    return coeffs_[static_cast<std::size_t>(i)];
  }
  FqElem leading() const { return coeffs_.empty() ? FqElem{0} : coeffs_.back(); }

  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

  Poly operator-() const {
    Poly r = *this;
    for (auto& c : r.coeffs_) c = field_->neg(c);
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    const auto& F = a.field_ ? a.field_ : b.field_;
    std::vector<FqElem> out(std::max(a.coeffs_.size(), b.coeffs_.size()), FqElem{0});
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = F->add(a.coeff(static_cast<long long>(i)), b.coeff(static_cast<long long>(i)));
    return Poly(F, std::move(out));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    const auto& F = a.field_ ? a.field_ : b.field_;
    if (a.is_zero() || b.is_zero()) return Poly(F);
    std::vector<FqElem> out(a.coeffs_.size() + b.coeffs_.size() - 1, FqElem{0});
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i].code == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
        out[i + j] = F->add(out[i + j], F->mul(a.coeffs_[i], b.coeffs_[j]));
    }
    return Poly(F, std::move(out));
  }

  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  Poly scaled(FqElem c) const {
    std::vector<FqElem> out = coeffs_;
    for (auto& x : out) x = field_->mul(x, c);
    return Poly(field_, std::move(out));
  }

  /// Multiplication by X^n.
  Poly shifted(std::size_t n) const {
    if (is_zero()) return *this;
    std::vector<FqElem> out(n, FqElem{0});
    out.insert(out.end(), coeffs_.begin(), coeffs_.end());
    return Poly(field_, std::move(out));
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(field_->inv(leading()));
  }

  /// Euclidean division; returns (quotient, remainder).
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    const auto& F = b.field_;
    std::vector<FqElem> rem = a.coeffs_;
    if (a.degree() < b.degree()) return {Poly(F), a};
    std::vector<FqElem> quot(static_cast<std::size_t>(a.degree() - b.degree() + 1), FqElem{0});
    const FqElem lead_inv = F->inv(b.leading());
    const std::size_t bs = b.coeffs_.size();
    for (std::size_t k = rem.size(); k-- >= bs;) {
      const FqElem c = F->mul(rem[k], lead_inv);
      if (c.code != 0) {
        const std::size_t shift = k - (bs - 1);
        quot[shift] = c;
        for (std::size_t i = 0; i < bs; ++i) rem[shift + i] = F->sub(rem[shift + i], F->mul(c, b.coeffs_[i]));
      }
      if (k == 0) break;
    }
    rem.resize(std::min(rem.size(), bs - 1));
    return {Poly(F, std::move(quot)), Poly(F, std::move(rem))};
  }

  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  /// Monic gcd; gcd(0, 0) = 0.
  friend Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = a % b;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  FqElem evaluate(FqElem x) const {
    FqElem acc{0};
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = field_->add(field_->mul(acc, x), coeffs_[i]);
    return acc;
  }

  Poly pow(std::uint64_t n) const {
    Poly result = one(field_), base = *this;
    for (; n; n >>= 1) {
      if (n & 1) result *= base;
      if (n > 1) base *= base;
    }
    return result;
  }

  /// Composition with another polynomial of the same variable: self(g).
  Poly compose(const Poly& g) const {
    Poly acc(field_);
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * g + constant(field_, coeffs_[i]);
    return acc;
  }

 private:
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back().code == 0) coeffs_.pop_back();
  }

  FieldPtr field_;
  std::vector<FqElem> coeffs_;
};

using ThetaPoly = Poly<ThetaTag>;
using TPoly = Poly<TTag>;

/// Element of k = F_q(θ) in canonical form: coprime numerator and monic denominator.
class RatTheta {
 public:
  RatTheta() = default;
  explicit RatTheta(FieldPtr field) : num_(field), den_(ThetaPoly::one(field)) {}
  RatTheta(ThetaPoly num) : num_(num), den_(ThetaPoly::one(num.field())) {}  // NOLINT(google-explicit-constructor)
  RatTheta(ThetaPoly num, ThetaPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static RatTheta theta(FieldPtr field) { return RatTheta(ThetaPoly::x(std::move(field))); }
  static RatTheta constant(FieldPtr field, FqElem c) { return RatTheta(ThetaPoly::constant(std::move(field), c)); }

  const ThetaPoly& num() const noexcept { return num_; }
  const ThetaPoly& den() const noexcept { return den_; }
  const FieldPtr& field() const noexcept { return num_.field(); }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const noexcept { return den_.is_one(); }

  friend bool operator==(const RatTheta& a, const RatTheta& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  RatTheta operator-() const { return RatTheta(-num_, den_, Canonical{}); }

  friend RatTheta operator+(const RatTheta& a, const RatTheta& b) {
    if (a.den_ == b.den_) return RatTheta(a.num_ + b.num_, a.den_);
    return RatTheta(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatTheta operator-(const RatTheta& a, const RatTheta& b) { return a + (-b); }
  friend RatTheta operator*(const RatTheta& a, const RatTheta& b) {
    return RatTheta(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatTheta operator/(const RatTheta& a, const RatTheta& b) {
    if (b.is_zero()) throw DomainError("division by zero in F_q(θ)");
    return RatTheta(a.num_ * b.den_, a.den_ * b.num_);
  }
  RatTheta& operator+=(const RatTheta& b) { return *this = *this + b; }
  RatTheta& operator-=(const RatTheta& b) { return *this = *this - b; }
  RatTheta& operator*=(const RatTheta& b) { return *this = *this * b; }

  RatTheta inverse() const {
    if (is_zero()) throw DomainError("inversion of zero in F_q(θ)");
    return RatTheta(den_, num_);
  }

  /// Evaluation at θ = x0 ∈ F_q; the denominator must not vanish there.
  FqElem evaluate(FqElem x0) const {
    const FqElem d = den_.evaluate(x0);
    if (d.code == 0) throw DomainError("evaluation at a pole");
    return field()->div(num_.evaluate(x0), d);
  }

  /// Re-runs canonicalization; idempotent on canonical values.
  RatTheta normalized() const { return RatTheta(num_, den_); }

 private:
  struct Canonical {};
  RatTheta(ThetaPoly num, ThetaPoly den, Canonical) : num_(std::move(num)), den_(std::move(den)) {}

  void normalize() {
    if (den_.is_zero()) throw DomainError("zero denominator in F_q(θ)");
    if (num_.is_zero()) {
      den_ = ThetaPoly::one(den_.field());
      return;
    }
    const ThetaPoly g = gcd(num_, den_);
    if (!g.is_one()) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    const FqElem lead = den_.leading();
    if (lead != FqElem{1}) {
      const FqElem inv = den_.field()->inv(lead);
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }

  ThetaPoly num_, den_;
};

/// Sentinel for v_∞(0).
inline constexpr long long kInfiniteValuation = std::numeric_limits<long long>::max() / 4;

/// v_∞(a) = deg(den) − deg(num), so v_∞(θ) = −1 and |a|_∞ = q^{−v_∞(a)}.
inline long long inf_valuation(const RatTheta& a) {
  if (a.is_zero()) return kInfiniteValuation;
  return a.den().degree() - a.num().degree();
}

/// Polynomial in t and θ with bounded degrees, stored t-major: row j is the θ-polynomial
/// coefficient of t^j.
class BivarPoly {
 public:
  BivarPoly() = default;
  explicit BivarPoly(FieldPtr field) : field_(std::move(field)) {}
  BivarPoly(FieldPtr field, std::vector<ThetaPoly> rows) : field_(std::move(field)), rows_(std::move(rows)) {
    normalize();
  }

  /// Lift of a θ-polynomial (t-degree 0).
  static BivarPoly from_theta(const ThetaPoly& a) { return BivarPoly(a.field(), {a}); }
  /// Lift of a t-polynomial with constant coefficients.
  static BivarPoly from_t(const TPoly& a) {
    std::vector<ThetaPoly> rows;
    for (auto c : a.coeffs()) rows.push_back(ThetaPoly::constant(a.field(), c));
    return BivarPoly(a.field(), std::move(rows));
  }
  static BivarPoly t(FieldPtr field) {
    auto f = field;
    return BivarPoly(f, {ThetaPoly(f), ThetaPoly::one(std::move(field))});
  }

  const FieldPtr& field() const noexcept { return field_; }
  const std::vector<ThetaPoly>& rows() const noexcept { return rows_; }
  bool is_zero() const noexcept { return rows_.empty(); }
  long long t_degree() const noexcept { return static_cast<long long>(rows_.size()) - 1; }
  long long theta_degree() const noexcept {
    long long d = kZeroDegree;
    for (const auto& r : rows_) d = std::max(d, r.degree());
    return d;
  }

  /// Coefficient c_{j,l} of t^j θ^l.
  FqElem coeff(long long j, long long l) const {
    if (j < 0 || j >= static_cast<long long>(rows_.size())) return FqElem{0};
    return rows_[static_cast<std::size_t>(j)].coeff(l);
  }

  const ThetaPoly& row(std::size_t j) const { return rows_[j]; }

  friend bool operator==(const BivarPoly& a, const BivarPoly& b) { return a.rows_ == b.rows_; }

  friend BivarPoly operator+(const BivarPoly& a, const BivarPoly& b) {
    const auto& F = a.field_ ? a.field_ : b.field_;
    std::vector<ThetaPoly> out(std::max(a.rows_.size(), b.rows_.size()), ThetaPoly(F));
    for (std::size_t j = 0; j < out.size(); ++j) {
      if (j < a.rows_.size()) out[j] += a.rows_[j];
      if (j < b.rows_.size()) out[j] += b.rows_[j];
    }
    return BivarPoly(F, std::move(out));
  }
  BivarPoly operator-() const {
    std::vector<ThetaPoly> out;
    for (const auto& r : rows_) out.push_back(-r);
    return BivarPoly(field_, std::move(out));
  }
  friend BivarPoly operator-(const BivarPoly& a, const BivarPoly& b) { return a + (-b); }
  friend BivarPoly operator*(const BivarPoly& a, const BivarPoly& b) {
    const auto& F = a.field_ ? a.field_ : b.field_;
    if (a.is_zero() || b.is_zero()) return BivarPoly(F);
    std::vector<ThetaPoly> out(a.rows_.size() + b.rows_.size() - 1, ThetaPoly(F));
    for (std::size_t i = 0; i < a.rows_.size(); ++i)
      for (std::size_t j = 0; j < b.rows_.size(); ++j) out[i + j] += a.rows_[i] * b.rows_[j];
    return BivarPoly(F, std::move(out));
  }

  /// Substitutes t = θ, giving an element of F_q[θ].
  ThetaPoly at_t_equals_theta() const {
    ThetaPoly acc(field_);
    for (std::size_t j = rows_.size(); j-- > 0;) acc = acc * ThetaPoly::x(field_) + rows_[j];
    return acc;
  }

 private:
  void normalize() {
    while (!rows_.empty() && rows_.back().is_zero()) rows_.pop_back();
  }

  FieldPtr field_;
  std::vector<ThetaPoly> rows_;
};

// ---------------------------------------------------------------------------
// Frobenius twist τ: the forward q-power endomorphism, acting coefficientwise.
// Constants of F_q satisfy c^q = c, so τ only rescales θ-exponents by q^n and fixes t.

namespace detail {
inline std::uint64_t checked_qpow(std::uint64_t q, unsigned n) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < n; ++i) {
    if (r > (std::uint64_t(1) << 40) / q) throw ResourceError("twist exponent overflow");
    r *= q;
  }
  return r;
}
}  // namespace detail

inline ThetaPoly twist(const ThetaPoly& a, unsigned n = 1) {
  if (n == 0 || a.is_zero()) return a;
  const auto& F = a.field();
  const std::uint64_t scale = detail::checked_qpow(F->q(), n);
  std::vector<FqElem> out(static_cast<std::size_t>(a.degree()) * scale + 1, FqElem{0});
  for (std::size_t l = 0; l < a.coeffs().size(); ++l) out[l * scale] = a.coeffs()[l];
  return ThetaPoly(F, std::move(out));
}

/// TPoly over F_q is τ-fixed.
inline TPoly twist(const TPoly& a, unsigned = 1) { return a; }

inline RatTheta twist(const RatTheta& a, unsigned n = 1) {
  if (n == 0) return a;
  return RatTheta(twist(a.num(), n), twist(a.den(), n));
}

/// t-degree is fixed, θ-degrees scale by q^n.
inline BivarPoly twist(const BivarPoly& a, unsigned n = 1) {
  std::vector<ThetaPoly> rows;
  for (const auto& r : a.rows()) rows.push_back(twist(r, n));
  return BivarPoly(a.field(), std::move(rows));
}

/// Evaluates a t-polynomial at t = θ.
inline ThetaPoly t_at_theta(const TPoly& a) { return ThetaPoly(a.field(), a.coeffs()); }

}  // namespace tmg
