#pragma once

// The Carlitz module C_θ(x) = θx + x^q: the F_q[θ]-action, exponential and logarithm,
// their ∞-adic values, and exact torsion certificates.

#include <optional>
#include <string>
#include <vector>

#include "tmg/linalg.hpp"
#include "tmg/motive.hpp"

namespace tmg {

/// F_q-linear polynomial Σ_i c_i x^{q^i} with coefficients in k.
class AdditivePoly {
 public:
  AdditivePoly() = default;
  AdditivePoly(FieldPtr field, std::vector<RatTheta> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }
  static AdditivePoly identity(const FieldPtr& F) { return AdditivePoly(F, {RatTheta::constant(F, F->one())}); }

  const FieldPtr& field() const noexcept { return field_; }
  const std::vector<RatTheta>& coeffs() const noexcept { return coeffs_; }
  /// Index d of the top term x^{q^d}; −1 for the zero map.
  long long q_degree() const noexcept { return static_cast<long long>(coeffs_.size()) - 1; }
  RatTheta coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : RatTheta(field_); }

  friend bool operator==(const AdditivePoly& a, const AdditivePoly& b) { return a.coeffs_ == b.coeffs_; }

  friend AdditivePoly operator+(const AdditivePoly& a, const AdditivePoly& b) {
    const auto& F = a.field_ ? a.field_ : b.field_;
    std::vector<RatTheta> out;
    for (std::size_t i = 0; i < std::max(a.coeffs_.size(), b.coeffs_.size()); ++i) out.push_back(a.coeff(i) + b.coeff(i));
    return AdditivePoly(F, std::move(out));
  }
  friend AdditivePoly operator-(const AdditivePoly& a, const AdditivePoly& b) { return a + b.scaled(RatTheta::constant(b.field_, b.field_->neg(b.field_->one()))); }

  AdditivePoly scaled(const RatTheta& c) const {
    std::vector<RatTheta> out;
    for (const auto& x : coeffs_) out.push_back(c * x);
    return AdditivePoly(field_, std::move(out));
  }

  /// (P ∘ Q)_k = Σ_{i+j=k} p_i τ^i(q_j); terms with k ≥ limit are dropped (limit 0 keeps all).
  friend AdditivePoly compose(const AdditivePoly& p, const AdditivePoly& q, std::size_t limit = 0) {
    const auto& F = p.field_ ? p.field_ : q.field_;
    if (p.coeffs_.empty() || q.coeffs_.empty()) return AdditivePoly(F, {});
    std::size_t n = p.coeffs_.size() + q.coeffs_.size() - 1;
    if (limit) n = std::min(n, limit);
    std::vector<RatTheta> out(n, RatTheta(F));
    for (std::size_t i = 0; i < p.coeffs_.size() && i < n; ++i)
      for (std::size_t j = 0; j < q.coeffs_.size() && i + j < n; ++j)
        out[i + j] += p.coeffs_[i] * twist(q.coeffs_[j], unsigned(i));
    return AdditivePoly(F, std::move(out));
  }

  AdditivePoly truncated(std::size_t terms) const {
    std::vector<RatTheta> out(coeffs_.begin(), coeffs_.begin() + std::ptrdiff_t(std::min(terms, coeffs_.size())));
    return AdditivePoly(field_, std::move(out));
  }

  /// Exact evaluation at x ∈ k; x^{q^i} = τ^i(x) since k has F_q-constants.
  RatTheta evaluate(const RatTheta& x) const {
    RatTheta acc(field_);
    RatTheta power = x;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i) power = twist(power);
      acc += coeffs_[i] * power;
    }
    return acc;
  }

 private:
  FieldPtr field_;
  std::vector<RatTheta> coeffs_;
};

/// C_θ = θx + x^q.
inline AdditivePoly carlitz_theta(const FieldPtr& F) {
  return AdditivePoly(F, {RatTheta::theta(F), RatTheta::constant(F, F->one())});
}

/// C_a for a ∈ F_q[θ] as an additive polynomial: Σ_l a_l C_θ^{∘l}.
inline AdditivePoly carlitz_act(const ThetaPoly& a) {
  const auto& F = a.field();
  AdditivePoly acc(F, {});
  AdditivePoly power = AdditivePoly::identity(F);
  const AdditivePoly ct = carlitz_theta(F);
  for (long long l = 0; l <= a.degree(); ++l) {
    if (l) power = compose(ct, power);
    if (a.coeff(l).code) acc = acc + power.scaled(RatTheta::constant(F, a.coeff(l)));
  }
  return acc;
}

/// C_a(α) evaluated exactly in k, via the orbit α, C_θ(α), C_θ(C_θ(α)), ….
inline RatTheta carlitz_act(const ThetaPoly& a, const RatTheta& alpha) {
  const auto& F = a.field();
  const RatTheta theta = RatTheta::theta(F);
  RatTheta acc(F);
  RatTheta beta = alpha;
  for (long long l = 0; l <= a.degree(); ++l) {
    if (l) beta = theta * beta + twist(beta);
    if (a.coeff(l).code) acc += RatTheta::constant(F, a.coeff(l)) * beta;
  }
  return acc;
}

/// D_i and L_i: exp_C(z) = Σ z^{q^i}/D_i, log_C(z) = Σ z^{q^i}/L_i.
struct CoeffTables {
  std::vector<ThetaPoly> exp_den;  // D_0 = 1, D_i = (θ^{q^i} − θ) D_{i−1}^q
  std::vector<ThetaPoly> log_den;  // L_0 = 1, L_i = (θ − θ^{q^i}) L_{i−1}
};

/// Recursions derived from exp_C(θz) = C_θ(exp_C(z)) and log_C(C_θ(z)) = θ log_C(z).
inline CoeffTables exp_log_coeffs(const FieldPtr& F, unsigned m) {
  CoeffTables t;
  const ThetaPoly theta = ThetaPoly::x(F);
  t.exp_den.push_back(ThetaPoly::one(F));
  t.log_den.push_back(ThetaPoly::one(F));
  ThetaPoly theta_qi = theta;
  for (unsigned i = 1; i <= m; ++i) {
    theta_qi = twist(theta_qi);
    t.exp_den.push_back((theta_qi - theta) * twist(t.exp_den.back()));
    t.log_den.push_back((theta - theta_qi) * t.log_den.back());
  }
  return t;
}

/// exp_C as a formal additive series truncated to `terms` terms.
inline AdditivePoly exp_series(const FieldPtr& F, unsigned terms) {
  const CoeffTables t = exp_log_coeffs(F, terms ? terms - 1 : 0);
  std::vector<RatTheta> c;
  for (unsigned i = 0; i < terms; ++i) c.emplace_back(ThetaPoly::one(F), t.exp_den[i]);
  return AdditivePoly(F, std::move(c));
}

inline AdditivePoly log_series(const FieldPtr& F, unsigned terms) {
  const CoeffTables t = exp_log_coeffs(F, terms ? terms - 1 : 0);
  std::vector<RatTheta> c;
  for (unsigned i = 0; i < terms; ++i) c.emplace_back(ThetaPoly::one(F), t.log_den[i]);
  return AdditivePoly(F, std::move(c));
}

/// |α|_∞ < q^{q/(q−1)}.
inline bool convergence_check(const RatTheta& alpha) {
  if (alpha.is_zero()) throw DomainError("convergence_check: alpha must be nonzero");
  return log_converges(alpha);
}

/// Window through which Σ_{i≤M} α^{q^i}/L_i equals log_C(α): the first omitted term has
/// v-valuation q^{M+1}(a + q) − q with a the v-valuation of α.
inline long long log_exact_window(const RatTheta& alpha, unsigned terms) {
  const long long q = alpha.field()->q();
  const long long a = v_valuation(alpha);
  return detail::sat_mul(detail::sat_qpow(std::uint32_t(q), terms + 1), a + q) - q - 1;
}

/// Smallest M whose truncation is exact through prec_end.
inline unsigned log_terms_for(const RatTheta& alpha, long long prec_end) {
  unsigned m = 1;
  while (log_exact_window(alpha, m) < prec_end) ++m;
  return m;
}

/// log_C(α) = Σ_{i≤M} α^{q^i}/L_i as an ∞-adic value, exact through prec_end.
inline InfSeries log_value(const RatTheta& alpha, unsigned terms, long long prec_end) {
  const auto& F = alpha.field();
  if (alpha.is_zero()) return InfSeries::zero(F, prec_end);
  require_convergence(alpha, "log_value");
  if (log_exact_window(alpha, terms) < prec_end) {
    const unsigned need = log_terms_for(alpha, prec_end);
    throw PrecisionError("log_value: too few terms for the requested window; need M = " + std::to_string(need), need);
  }
  const CoeffTables t = exp_log_coeffs(F, terms);
  const long long q = F->q();
  const long long a = v_valuation(alpha);
  const InfSeries alpha_v = embed_theta(alpha, prec_end + q);
  InfSeries acc = InfSeries::zero(F, prec_end);
  for (unsigned i = 0; i <= terms; ++i) {
    const long long qi = detail::sat_qpow(std::uint32_t(q), i);
    const long long den_val = (q - 1) * t.log_den[i].degree();
    if (detail::sat_add(detail::sat_mul(qi, a), den_val) > prec_end) break;
    const InfSeries inv_den = embed_theta(RatTheta(ThetaPoly::one(F), t.log_den[i]), prec_end - qi * a);
    acc += (alpha_v.twisted(i) * inv_den).truncated(prec_end);
  }
  return acc.truncated(prec_end);
}

/// exp_C(z) = Σ_{i≤M} z^{q^i}/D_i. The window is the smallest term window and the first
/// omitted term min_{i>M} q^i (v(z) + (q−1) i).
inline InfSeries exp_value(const InfSeries& z, unsigned terms) {
  const auto& F = z.field();
  const long long q = F->q();
  const long long s = z.start();
  long long window = detail::kValuationCap;
  for (unsigned i = terms + 1;; ++i) {
    const long long qi = detail::sat_qpow(std::uint32_t(q), i);
    const long long lead = s + (q - 1) * static_cast<long long>(i);
    window = std::min(window, detail::sat_mul(qi, lead) - 1);
    if (lead > 0 || qi >= detail::kValuationCap) break;
  }
  const CoeffTables t = exp_log_coeffs(F, terms);
  for (unsigned i = 0; i <= terms; ++i) {
    const long long qi = detail::sat_qpow(std::uint32_t(q), i);
    window = std::min(window, (z.prec_end() + 1) * qi - 1 + (q - 1) * t.exp_den[i].degree());
  }
  InfSeries acc = InfSeries::zero(F, window);
  for (unsigned i = 0; i <= terms; ++i) {
    const long long qi = detail::sat_qpow(std::uint32_t(q), i);
    const long long den_val = (q - 1) * t.exp_den[i].degree();
    if (z.is_zero() || detail::sat_add(detail::sat_mul(qi, s), den_val) > window) continue;
    const InfSeries inv_den = embed_theta(RatTheta(ThetaPoly::one(F), t.exp_den[i]), window - qi * s);
    acc += (z.twisted(i) * inv_den).truncated(window);
  }
  return acc.truncated(window);
}

/// Σ C_{c_i}(α_i) = 0 exactly in k. Equivalent (through the kernel π̃F_q[θ] of exp_C and
/// F_q[θ]-equivariance) to Σ c_i log_C(α_i) ∈ π̃·F_q[θ].
inline bool verify_relation_exact(const std::vector<ThetaPoly>& c, const std::vector<RatTheta>& alphas) {
  if (c.size() != alphas.size()) throw DomainError("verify_relation_exact: coefficient and alpha counts differ");
  bool any = false;
  for (const auto& x : c) any = any || !x.is_zero();
  if (!any) throw DomainError("verify_relation_exact: coefficients must not all vanish");
  RatTheta sum(alphas.front().field());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) sum += carlitz_act(c[i], alphas[i]);
  return sum.is_zero();
}

// ---------------------------------------------------------------------------
// Torsion screening

struct TorsionScreen {
  /// Monic a of minimal degree with C_a(α) = 0, if one was found within the search bound.
  std::optional<ThetaPoly> annihilator;
  /// C_a(α) ≠ 0 for every nonzero a, by the degree-growth argument.
  bool non_torsion_proven = false;
  /// Every monic a with deg a ≤ searched_degree was excluded (or the annihilator found).
  unsigned searched_degree = 0;
};

/// Degree growth: with d = −v_∞(α) ≥ 1 and d(q−1) > 1, the top term of C_a(α) comes from
/// x^{q^{deg a}} alone, so C_a(α) ≠ 0 for all a ≠ 0.
inline bool degree_growth_applies(const RatTheta& alpha) {
  if (alpha.is_zero()) return false;
  const long long d = -inf_valuation(alpha);
  return d >= 1 && d * static_cast<long long>(alpha.field()->q() - 1) > 1;
}

/// Searches for the minimal monic annihilator of degree ≤ max_degree as an F_q-linear
/// dependency among α, C_θ(α), …, C_θ^{max_degree}(α).
inline TorsionScreen torsion_screen(const RatTheta& alpha, unsigned max_degree,
                                    long long max_poly_degree = 1'000'000) {
  const auto& F = alpha.field();
  TorsionScreen out;
  out.non_torsion_proven = degree_growth_applies(alpha);
  if (alpha.is_zero()) {
    out.annihilator = ThetaPoly::one(F);
    return out;
  }
  const RatTheta theta = RatTheta::theta(F);
  // Orbit elements share the denominator den^{q^l}; compare numerators over den^{q^B}.
  std::vector<RatTheta> orbit{alpha};
  for (unsigned l = 1; l <= max_degree; ++l) {
    const RatTheta next = theta * orbit.back() + twist(orbit.back());
    if (next.num().degree() > max_poly_degree || next.den().degree() > max_poly_degree) break;
    orbit.push_back(next);
  }
  ThetaPoly common = ThetaPoly::one(F);
  for (const auto& b : orbit) common = common * b.den() / gcd(common, b.den());
  std::vector<ThetaPoly> nums;
  for (const auto& b : orbit) nums.push_back(b.num() * (common / b.den()));

  // Incremental echelon: basis rows with their combination coefficients.
  std::size_t width = 1;
  for (const auto& n : nums) width = std::max<std::size_t>(width, std::size_t(n.degree() + 1));
  struct Row {
    std::vector<FqElem> v;
    std::vector<FqElem> combo;
    std::size_t pivot;
  };
  std::vector<Row> basis;
  for (std::size_t l = 0; l < nums.size(); ++l) {
    std::vector<FqElem> v(width, FqElem{0});
    for (long long k = 0; k <= nums[l].degree(); ++k) v[std::size_t(k)] = nums[l].coeff(k);
    std::vector<FqElem> combo(nums.size(), FqElem{0});
    combo[l] = F->one();
    for (const auto& b : basis) {
      const FqElem f = v[b.pivot];
      if (!f.code) continue;
      for (std::size_t k = 0; k < width; ++k) v[k] = F->sub(v[k], F->mul(f, b.v[k]));
      for (std::size_t k = 0; k < combo.size(); ++k) combo[k] = F->sub(combo[k], F->mul(f, b.combo[k]));
    }
    std::size_t pivot = width;
    for (std::size_t k = 0; k < width; ++k)
      if (v[k].code) {
        pivot = k;
        break;
      }
    if (pivot == width) {
      std::vector<FqElem> a(l + 1);
      for (std::size_t k = 0; k <= l; ++k) a[k] = combo[k];
      out.annihilator = ThetaPoly(F, std::move(a)).monic();
      out.searched_degree = unsigned(l);
      return out;
    }
    const FqElem inv = F->inv(v[pivot]);
    for (auto& x : v) x = F->mul(x, inv);
    for (auto& x : combo) x = F->mul(x, inv);
    for (auto& b : basis) {
      const FqElem f = b.v[pivot];
      if (!f.code) continue;
      for (std::size_t k = 0; k < width; ++k) b.v[k] = F->sub(b.v[k], F->mul(f, v[k]));
      for (std::size_t k = 0; k < combo.size(); ++k) b.combo[k] = F->sub(b.combo[k], F->mul(f, combo[k]));
    }
    basis.push_back({std::move(v), std::move(combo), pivot});
  }
  out.searched_degree = unsigned(nums.size() - 1);
  return out;
}

}  // namespace tmg
