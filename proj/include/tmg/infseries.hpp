#pragma once

// Truncated Laurent series in the uniformizer v at the infinite place, where
// θ = −v^{−(q−1)}. For q = 2 this is just v = 1/θ.
//
// A series stores exponents start..prec_end. Everything above prec_end is unknown;
// everything below start is zero. An empty coefficient vector means "zero through
// prec_end" and then start == prec_end + 1.

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "tmg/poly.hpp"

namespace tmg {

class InfSeries {
 public:
  InfSeries() = default;

  /// Zero known through prec_end.
  static InfSeries zero(FieldPtr field, long long prec_end) {
    InfSeries s;
    s.field_ = std::move(field);
    s.start_ = prec_end + 1;
    s.prec_ = prec_end;
    return s;
  }

  /// Coefficients for exponents start, start+1, ...; entries past prec_end are dropped.
  static InfSeries from_terms(FieldPtr field, long long start, std::vector<FqElem> coeffs, long long prec_end) {
    InfSeries s;
    s.field_ = std::move(field);
    s.start_ = start;
    s.prec_ = prec_end;
    const long long keep = std::max(0LL, prec_end - start + 1);
    if (static_cast<long long>(coeffs.size()) > keep) coeffs.resize(static_cast<std::size_t>(keep));
    s.coeffs_ = std::move(coeffs);
    s.normalize();
    return s;
  }

  static InfSeries monomial(FieldPtr field, FqElem c, long long exponent, long long prec_end) {
    return from_terms(std::move(field), exponent, {c}, prec_end);
  }

  static InfSeries constant(FieldPtr field, FqElem c, long long prec_end) {
    return monomial(std::move(field), c, 0, prec_end);
  }

  const FieldPtr& field() const noexcept { return field_; }
  /// Lowest possibly-nonzero exponent. For a zero-so-far series this is prec_end + 1,
  /// which is still a valid lower bound on the true valuation.
  long long start() const noexcept { return start_; }
  long long prec_end() const noexcept { return prec_; }
  const std::vector<FqElem>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Number of known exponents counted from the leading term.
  long long relative_precision() const noexcept { return prec_ - start_ + 1; }

  FqElem coeff(long long exponent) const {
    if (exponent > prec_) throw PrecisionError("coefficient requested beyond the precision window", prec_);
    if (exponent < start_) return FqElem{0};
    return coeffs_[static_cast<std::size_t>(exponent - start_)];
  }

  InfSeries truncated(long long prec_end) const {
    return from_terms(field_, start_, coeffs_, std::min(prec_end, prec_));
  }

  /// Multiplication by v^k.
  InfSeries shifted(long long k) const {
    InfSeries s = *this;
    s.start_ += k;
    s.prec_ += k;
    return s;
  }

  InfSeries scaled(FqElem c) const {
    if (c.code == 0) return zero(field_, prec_);
    InfSeries s = *this;
    for (auto& x : s.coeffs_) x = field_->mul(x, c);
    return s;
  }

  InfSeries operator-() const { return scaled(field_->neg(field_->one())); }

  /// Window is the intersection of the input windows.
  friend InfSeries operator+(const InfSeries& a, const InfSeries& b) {
    const auto& F = a.field_;
    const long long prec = std::min(a.prec_, b.prec_);
    const long long lo = std::min(a.start_, b.start_);
    if (lo > prec) return zero(F, prec);
    std::vector<FqElem> out(static_cast<std::size_t>(prec - lo + 1), FqElem{0});
    for (long long e = std::max(lo, a.start_); e <= std::min(prec, a.last()); ++e)
      out[std::size_t(e - lo)] = a.coeffs_[std::size_t(e - a.start_)];
    for (long long e = std::max(lo, b.start_); e <= std::min(prec, b.last()); ++e)
      out[std::size_t(e - lo)] = F->add(out[std::size_t(e - lo)], b.coeffs_[std::size_t(e - b.start_)]);
    return from_terms(F, lo, std::move(out), prec);
  }
  friend InfSeries operator-(const InfSeries& a, const InfSeries& b) { return a + (-b); }

  /// start = start_a + start_b; prec_end = min(prec_a + start_b, prec_b + start_a).
  friend InfSeries operator*(const InfSeries& a, const InfSeries& b) {
    const auto& F = a.field_;
    const long long start = a.start_ + b.start_;
    const long long prec = std::min(a.prec_ + b.start_, b.prec_ + a.start_);
    if (a.is_zero() || b.is_zero() || start > prec) return zero(F, prec);
    const std::size_t n = static_cast<std::size_t>(prec - start + 1);
    std::vector<FqElem> out(n, FqElem{0});
    const std::size_t na = std::min(a.coeffs_.size(), n), nb = std::min(b.coeffs_.size(), n);
    for (std::size_t i = 0; i < na; ++i) {
      const FqElem ai = a.coeffs_[i];
      if (ai.code == 0) continue;
      const std::size_t lim = std::min(nb, n - i);
      for (std::size_t j = 0; j < lim; ++j) out[i + j] = F->add(out[i + j], F->mul(ai, b.coeffs_[j]));
    }
    return from_terms(F, start, std::move(out), prec);
  }

  InfSeries& operator+=(const InfSeries& b) { return *this = *this + b; }
  InfSeries& operator-=(const InfSeries& b) { return *this = *this - b; }
  InfSeries& operator*=(const InfSeries& b) { return *this = *this * b; }

  /// Multiplicative inverse with the same relative precision.
  InfSeries inverse() const {
    if (is_zero()) throw PrecisionError("inversion of a series that is zero through its window", prec_);
    const auto& F = field_;
    const std::size_t n = coeffs_.size();
    std::vector<FqElem> out(n, FqElem{0});
    const FqElem lead_inv = F->inv(coeffs_[0]);
    out[0] = lead_inv;
    for (std::size_t k = 1; k < n; ++k) {
      FqElem acc{0};
      for (std::size_t i = 1; i <= k; ++i) acc = F->add(acc, F->mul(coeffs_[i], out[k - i]));
      out[k] = F->neg(F->mul(lead_inv, acc));
    }
    return from_terms(F, -start_, std::move(out), -start_ + static_cast<long long>(n) - 1);
  }

  /// τ^n: exponents scale by q^n, coefficients are F_q constants and stay fixed.
  /// The first unknown exponent prec_end + 1 maps to q^n (prec_end + 1).
  InfSeries twisted(unsigned n = 1) const {
    if (n == 0) return *this;
    const long long scale = static_cast<long long>(detail::checked_qpow(field_->q(), n));
    const long long prec = (prec_ + 1) * scale - 1;
    if (is_zero()) return zero(field_, prec);
    std::vector<FqElem> out((coeffs_.size() - 1) * std::size_t(scale) + 1, FqElem{0});
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i * std::size_t(scale)] = coeffs_[i];
    return from_terms(field_, start_ * scale, std::move(out), prec);
  }

  /// Exact agreement on the common window.
  bool agrees_with(const InfSeries& other) const { return (*this - other).is_zero(); }

  /// "c·v^e + ... + O(v^{prec_end+1})" with F_q codes as coefficients.
  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i].code == 0) continue;
      if (!first) os << " + ";
      first = false;
      const long long e = start_ + static_cast<long long>(i);
      if (coeffs_[i].code != 1 || e == 0) os << coeffs_[i].code;
      if (e != 0) os << (coeffs_[i].code != 1 ? "*" : "") << "v^" << e;
    }
    if (!first) os << " + ";
    os << "O(v^" << prec_ + 1 << ")";
    return os.str();
  }

 private:
  long long last() const noexcept { return start_ + static_cast<long long>(coeffs_.size()) - 1; }

  void normalize() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead].code == 0) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      start_ = prec_ + 1;
      return;
    }
    if (lead) coeffs_ = std::vector<FqElem>(coeffs_.begin() + static_cast<std::ptrdiff_t>(lead), coeffs_.end());
    start_ += static_cast<long long>(lead);
    // Pad so that every exponent through prec_end has a slot.
    coeffs_.resize(static_cast<std::size_t>(prec_ - start_ + 1), FqElem{0});
  }

  FieldPtr field_;
  long long start_ = 1;
  long long prec_ = 0;
  std::vector<FqElem> coeffs_;
};

/// θ^l as a Laurent monomial: (−1)^l v^{−l(q−1)}.
inline InfSeries embed_theta_power(const FieldPtr& F, long long l, long long prec_end) {
  const FqElem sign = (l % 2 == 0) ? F->one() : F->neg(F->one());
  return InfSeries::monomial(F, sign, -l * static_cast<long long>(F->q() - 1), prec_end);
}

/// A θ-polynomial as a finite Laurent polynomial in v.
inline InfSeries embed_theta(const ThetaPoly& a, long long prec_end) {
  const auto& F = a.field();
  if (a.is_zero()) return InfSeries::zero(F, prec_end);
  const long long step = static_cast<long long>(F->q() - 1);
  const long long start = -a.degree() * step;
  std::vector<FqElem> coeffs(static_cast<std::size_t>(-start + 1), FqElem{0});
  for (long long l = 0; l <= a.degree(); ++l) {
    FqElem c = a.coeff(l);
    if (l % 2 == 1) c = F->neg(c);
    coeffs[static_cast<std::size_t>(-l * step - start)] = c;
  }
  return InfSeries::from_terms(F, start, std::move(coeffs), prec_end);
}

/// The inclusion k ⊂ k_∞, exact through prec_end.
inline InfSeries embed_theta(const RatTheta& a, long long prec_end) {
  const auto& F = a.field();
  if (a.is_zero()) return InfSeries::zero(F, prec_end);
  const long long step = static_cast<long long>(F->q() - 1);
  const long long s_num = -a.num().degree() * step;
  const long long s_den = -a.den().degree() * step;
  if (a.is_polynomial()) return embed_theta(a.num(), prec_end);
  if (s_num - s_den > prec_end) return InfSeries::zero(F, prec_end);
  const InfSeries den_inv = embed_theta(a.den(), prec_end - s_num + 2 * s_den).inverse();
  const InfSeries num = embed_theta(a.num(), prec_end + s_den);
  return (num * den_inv).truncated(prec_end);
}

/// v-adic valuation of an element of k: (q−1)·v_∞.
inline long long v_valuation(const RatTheta& a) {
  if (a.is_zero()) return kInfiniteValuation;
  return inf_valuation(a) * static_cast<long long>(a.field()->q() - 1);
}

/// Exponent (q−1)(q^i − 1) at which the factor (1 − θ^{1−q^i})^{-1} first differs from 1.
inline long long period_factor_exponent(std::uint32_t q, unsigned i) {
  return static_cast<long long>(q - 1) * (static_cast<long long>(detail::checked_qpow(q, i)) - 1);
}

/// Carlitz period from the product formula
///   π̃ = θ (−θ)^{1/(q−1)} Π_{i≥1} (1 − θ^{1−q^i})^{−1} = −v^{−q} Π_{i≥1} (1 − v^{(q−1)(q^i−1)})^{−1},
/// truncated after `factors` terms. Independent of the Ω route.
inline InfSeries pi_product(const FieldPtr& F, long long prec_end, unsigned factors) {
  if (factors == 0) throw DomainError("pi_product needs at least one factor");
  const std::uint32_t q = F->q();
  const long long lead = -static_cast<long long>(q);
  const long long rel = prec_end - lead;  // relative exponents 0..rel must be exact
  if (rel < 0) return InfSeries::zero(F, prec_end);
  if (period_factor_exponent(q, factors + 1) - 1 < rel) {
    unsigned need = factors + 1;
    while (period_factor_exponent(q, need + 1) - 1 < rel) ++need;
    throw PrecisionError("pi_product: too few factors for the requested window; need M = " + std::to_string(need),
                         need);
  }
  std::vector<FqElem> prod(static_cast<std::size_t>(rel + 1), FqElem{0});
  prod[0] = F->one();
  for (unsigned i = 1; i <= factors; ++i) {
    const long long e = period_factor_exponent(q, i);
    if (e > rel) break;
    // Division by (1 − v^e): b_k += b_{k−e}, ascending.
    for (long long k = e; k <= rel; ++k)
      prod[std::size_t(k)] = F->add(prod[std::size_t(k)], prod[std::size_t(k - e)]);
  }
  InfSeries body = InfSeries::from_terms(F, 0, std::move(prod), rel);
  return (-body).shifted(lead);
}

}  // namespace tmg
