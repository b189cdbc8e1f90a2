#pragma once

// Dimension of the Galois group of X(α_1) ⊕ … ⊕ X(α_r).
//
// A relation (t−θ) f^{(−1)} − f = Σ μ_i α_i^{(−1)} (t−θ) with μ_i ∈ F_q(t) is searched for in
// its once-twisted form
//
//     τ(f) = (t − θ^q) (f − Σ μ_i α_i),
//
// which only involves the forward twist. τ is F_q-linear and fixes F_q[t], so for a
// polynomial ansatz f ∈ F_q[θ][t], μ_i ∈ F_q[t] the equation is a homogeneous F_q-linear
// system in the coefficients. n = r − rank_{F_q(t)}(μ-vectors), dim G = n + 1, dim R_u = n.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tmg/carlitz.hpp"

namespace tmg {

struct Escalation {
  unsigned factor = 2;
  unsigned max_rounds = 0;
  friend bool operator==(const Escalation&, const Escalation&) = default;
};

struct SolverBounds {
  unsigned t_degree = 2;      // B_t: t-degree of f
  unsigned theta_degree = 2;  // B_θ: θ-degree of f
  unsigned mu_degree = 2;     // B_μ: t-degree of each μ_i
  std::optional<Escalation> escalation;
  friend bool operator==(const SolverBounds&, const SolverBounds&) = default;

  static SolverBounds uniform(unsigned b) { return {b, b, b, std::nullopt}; }
  SolverBounds scaled(unsigned factor) const {
    SolverBounds s = *this;
    s.t_degree *= factor;
    s.theta_degree *= factor;
    s.mu_degree *= factor;
    if (s.t_degree == t_degree && factor > 1) ++s.t_degree;
    if (s.theta_degree == theta_degree && factor > 1) ++s.theta_degree;
    if (s.mu_degree == mu_degree && factor > 1) ++s.mu_degree;
    return s;
  }
};

/// t-polynomial with coefficients in k; used for exact resubstitution.
using KPoly = std::vector<RatTheta>;

namespace detail {
inline KPoly kpoly_trim(KPoly a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
  return a;
}
inline KPoly kpoly_add(const KPoly& a, const KPoly& b, const FieldPtr& F) {
  KPoly out(std::max(a.size(), b.size()), RatTheta(F));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return kpoly_trim(std::move(out));
}
inline KPoly kpoly_mul(const KPoly& a, const KPoly& b, const FieldPtr& F) {
  if (a.empty() || b.empty()) return {};
  KPoly out(a.size() + b.size() - 1, RatTheta(F));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return kpoly_trim(std::move(out));
}
inline KPoly kpoly_scale(const KPoly& a, const RatTheta& c) {
  KPoly out;
  for (const auto& x : a) out.push_back(x * c);
  return kpoly_trim(std::move(out));
}
inline KPoly kpoly_from(const BivarPoly& f) {
  KPoly out;
  for (const auto& r : f.rows()) out.emplace_back(r);
  return out;
}
inline KPoly kpoly_from(const TPoly& mu) {
  KPoly out;
  for (auto c : mu.coeffs()) out.push_back(RatTheta::constant(mu.field(), c));
  return kpoly_trim(std::move(out));
}
inline KPoly kpoly_twist(const KPoly& a) {
  KPoly out;
  for (const auto& x : a) out.push_back(twist(x));
  return out;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Linear system

struct LinearSystem {
  FieldPtr field;
  std::vector<RatTheta> alphas;
  SolverBounds bounds;
  ThetaPoly f_denominator;  // δ with f = F/δ; 1 unless declared
  FqMatrix matrix;
  /// Residual monomial t^j θ^l of each row, t-major then θ.
  std::vector<std::pair<long long, long long>> row_monomials;

  std::size_t f_unknowns() const { return std::size_t(bounds.t_degree + 1) * (bounds.theta_degree + 1); }
  std::size_t mu_unknowns() const { return alphas.size() * (bounds.mu_degree + 1); }
  std::size_t unknowns() const { return f_unknowns() + mu_unknowns(); }
  /// Column of c_{j,l}, the coefficient of t^j θ^l in the numerator of f.
  std::size_t f_index(unsigned j, unsigned l) const { return std::size_t(j) * (bounds.theta_degree + 1) + l; }
  /// Column of the coefficient of t^j in μ_i.
  std::size_t mu_index(std::size_t i, unsigned j) const { return f_unknowns() + i * (bounds.mu_degree + 1) + j; }
};

inline constexpr std::size_t kDefaultMatrixCap = std::size_t(1) << 26;

/// Builds the F_q-linear system for τ(f) − (t−θ^q) f + (t−θ^q) Σ μ_i α_i = 0 after
/// writing α_i = b_i/d with a common monic d, f = F/δ, and multiplying by d δ τ(δ):
///
///     d δ τ(F) − d τ(δ) (t−θ^q) F + δ τ(δ) (t−θ^q) Σ μ_i b_i = 0.
inline LinearSystem build_system(const std::vector<RatTheta>& alphas, const SolverBounds& bounds,
                                 std::optional<ThetaPoly> f_denominator = std::nullopt,
                                 std::size_t matrix_cap = kDefaultMatrixCap) {
  if (alphas.empty()) throw DomainError("build_system: need at least one alpha");
  const FieldPtr F = alphas.front().field();
  for (const auto& a : alphas)
    if (a.is_zero()) throw DomainError("build_system: alpha must be nonzero");

  LinearSystem sys;
  sys.field = F;
  sys.alphas = alphas;
  sys.bounds = bounds;
  sys.f_denominator = f_denominator.value_or(ThetaPoly::one(F));
  if (sys.f_denominator.is_zero()) throw DomainError("build_system: declared denominator is zero");
  const ThetaPoly& delta = sys.f_denominator;
  const ThetaPoly delta_tw = twist(delta);

  ThetaPoly d = ThetaPoly::one(F);
  for (const auto& a : alphas) d = d * a.den() / gcd(d, a.den());
  d = d.monic();
  std::vector<ThetaPoly> b;
  for (const auto& a : alphas) b.push_back(a.num() * (d / a.den()));

  const BivarPoly t_minus_theta_q = BivarPoly::t(F) - BivarPoly::from_theta(twist(ThetaPoly::x(F)));
  const BivarPoly f_twist_factor = BivarPoly::from_theta(d * delta);
  const BivarPoly f_plain_factor = BivarPoly::from_theta(d * delta_tw) * t_minus_theta_q;
  const BivarPoly mu_common = BivarPoly::from_theta(delta * delta_tw) * t_minus_theta_q;

  std::vector<BivarPoly> columns;
  columns.reserve(sys.unknowns());
  for (unsigned j = 0; j <= bounds.t_degree; ++j)
    for (unsigned l = 0; l <= bounds.theta_degree; ++l) {
      const BivarPoly mono(F, [&] {
        std::vector<ThetaPoly> rows(j + 1, ThetaPoly(F));
        rows[j] = ThetaPoly::monomial(F, F->one(), l);
        return rows;
      }());
      columns.push_back(f_twist_factor * twist(mono) - f_plain_factor * mono);
    }
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const BivarPoly base = mu_common * BivarPoly::from_theta(b[i]);
    for (unsigned j = 0; j <= bounds.mu_degree; ++j) {
      std::vector<ThetaPoly> rows(j + 1, ThetaPoly(F));
      rows[j] = ThetaPoly::one(F);
      columns.push_back(base * BivarPoly(F, std::move(rows)));
    }
  }

  std::map<std::pair<long long, long long>, std::size_t> row_of;
  for (const auto& col : columns)
    for (long long j = 0; j <= col.t_degree(); ++j)
      for (long long l = 0; l <= col.row(std::size_t(j)).degree(); ++l)
        if (col.coeff(j, l).code) row_of.emplace(std::make_pair(j, l), 0);
  if (row_of.size() * columns.size() > matrix_cap)
    throw ResourceError("build_system: " + std::to_string(row_of.size()) + " x " + std::to_string(columns.size()) +
                        " system exceeds the configured memory cap");
  std::size_t r = 0;
  for (auto& [mono, idx] : row_of) {
    idx = r++;
    sys.row_monomials.push_back(mono);
  }
  sys.matrix = FqMatrix(F, row_of.size(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c)
    for (long long j = 0; j <= columns[c].t_degree(); ++j)
      for (long long l = 0; l <= columns[c].row(std::size_t(j)).degree(); ++l)
        if (const FqElem v = columns[c].coeff(j, l); v.code) sys.matrix(row_of.at({j, l}), c) = v;
  return sys;
}

// ---------------------------------------------------------------------------
// Witnesses

struct WitnessChecks {
  bool substitution_pass = false;
  bool f_at_theta_zero = false;
  /// Unset when the numeric route does not apply (an α outside the convergence disc).
  std::optional<bool> numeric_pass;
  std::string numeric_note;
  /// Σ C_{μ_i(θ)}(α_i) = 0, when the μ_i(θ) do not all vanish.
  std::optional<bool> exact_certificate;
};

struct RelationWitness {
  std::vector<TPoly> mu;
  BivarPoly f;  // numerator; f = f / f_denominator
  ThetaPoly f_denominator;
  WitnessChecks checks;
  /// μ = Ω (f − Σ μ_i L_{α_i}) ∈ F_q[t] when the numeric check ran.
  std::optional<TPoly> omega_coefficient;
};

/// Exact resubstitution into τ(f) = (t − θ^q)(f − Σ μ_i α_i), computed in k[t] from the
/// witness alone (no solver state).
inline bool substitution_holds(const RelationWitness& w, const std::vector<RatTheta>& alphas) {
  const FieldPtr F = alphas.front().field();
  const RatTheta inv_delta = RatTheta(ThetaPoly::one(F), w.f_denominator);
  const KPoly f = detail::kpoly_scale(detail::kpoly_from(w.f), inv_delta);
  KPoly sum;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    sum = detail::kpoly_add(sum, detail::kpoly_scale(detail::kpoly_from(w.mu[i]), alphas[i]), F);
  const KPoly t_minus = {-twist(RatTheta::theta(F)), RatTheta::constant(F, F->one())};
  const KPoly rhs = detail::kpoly_mul(t_minus, detail::kpoly_add(f, detail::kpoly_scale(sum, RatTheta::constant(F, F->neg(F->one()))), F), F);
  const KPoly lhs = detail::kpoly_twist(f);
  return detail::kpoly_add(lhs, detail::kpoly_scale(rhs, RatTheta::constant(F, F->neg(F->one()))), F).empty();
}

namespace detail {
inline RelationWitness witness_from_vector(const LinearSystem& sys, const std::vector<FqElem>& x) {
  const auto& F = sys.field;
  RelationWitness w;
  std::vector<ThetaPoly> rows;
  for (unsigned j = 0; j <= sys.bounds.t_degree; ++j) {
    std::vector<FqElem> c(sys.bounds.theta_degree + 1);
    for (unsigned l = 0; l <= sys.bounds.theta_degree; ++l) c[l] = x[sys.f_index(j, l)];
    rows.emplace_back(F, std::move(c));
  }
  w.f = BivarPoly(F, std::move(rows));
  w.f_denominator = sys.f_denominator;
  for (std::size_t i = 0; i < sys.alphas.size(); ++i) {
    std::vector<FqElem> c(sys.bounds.mu_degree + 1);
    for (unsigned j = 0; j <= sys.bounds.mu_degree; ++j) c[j] = x[sys.mu_index(i, j)];
    w.mu.emplace_back(F, std::move(c));
  }
  return w;
}
}  // namespace detail

/// Full F_q-kernel of the system (including μ = 0 solutions), as an RREF basis.
inline std::vector<std::vector<FqElem>> solution_space(const LinearSystem& sys) { return kernel_basis(sys.matrix); }

/// Kernel vectors with μ ≠ 0, one per independent μ-part: the kernel basis is re-echeloned
/// with μ-columns first, and only rows pivoting on a μ-column are kept. Each returned
/// witness has passed exact resubstitution.
inline std::vector<RelationWitness> solve_relations(const LinearSystem& sys) {
  const auto basis = solution_space(sys);
  if (basis.empty()) return {};
  const FqMatrix k = matrix_from_rows(sys.field, basis, sys.unknowns());
  std::vector<std::size_t> order;
  for (std::size_t c = sys.f_unknowns(); c < sys.unknowns(); ++c) order.push_back(c);
  for (std::size_t c = 0; c < sys.f_unknowns(); ++c) order.push_back(c);
  const Echelon e = rref(k, order);
  std::vector<RelationWitness> out;
  for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) {
    if (e.pivot_cols[r] < sys.f_unknowns()) continue;
    RelationWitness w = detail::witness_from_vector(sys, e.reduced.row(r));
    w.checks.substitution_pass = substitution_holds(w, sys.alphas);
    if (!w.checks.substitution_pass) throw InternalError("solve_relations: kernel vector fails resubstitution");
    out.push_back(std::move(w));
  }
  return out;
}

/// Rank over F_q(t) of the μ-vectors, by fraction-free elimination over F_q[t].
inline std::size_t relation_rank(const std::vector<RelationWitness>& witnesses) {
  if (witnesses.empty()) return 0;
  std::vector<std::vector<TPoly>> rows;
  for (const auto& w : witnesses) rows.push_back(w.mu);
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rows.size();
    for (std::size_t i = rank; i < rows.size(); ++i)
      if (!rows[i][c].is_zero()) {
        pivot = i;
        break;
      }
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    const TPoly p = rows[rank][c];
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      const TPoly factor = rows[i][c];
      if (factor.is_zero()) continue;
      TPoly content(p.field());
      for (std::size_t k = 0; k < cols; ++k) {
        rows[i][k] = p * rows[i][k] - factor * rows[rank][k];
        content = gcd(content, rows[i][k]);
      }
      if (!content.is_zero() && !content.is_one())
        for (auto& x : rows[i]) x = x / content;
    }
    ++rank;
  }
  return rank;
}

// ---------------------------------------------------------------------------
// Numeric corroboration

struct NumericOptions {
  long long prec = 64;          // v-window for values and series
  long long t_degree = 16;      // D_t for the Ω-coefficient reconstruction
  unsigned product_terms = 6;   // M for Ω and L_α
};

/// Fills the witness checks:
///   (i)   exact resubstitution;
///   (ii)  f(θ) = 0 after setting t = θ;
///   (iii) μ = Ω (f − Σ μ_i L_{α_i}) has constant coefficients (so μ ∈ F_q[t]), and
///         0 = −μ(θ) π̃ + Σ μ_i(θ) log_C(α_i) through the window, with π̃ and log_C taken
///         from the product formula and the log series;
/// plus the exact certificate Σ C_{μ_i(θ)}(α_i) = 0.
/// Throws InternalError when (i) or (ii) fails, or when a true certificate meets a failing
/// numeric check.
inline RelationWitness verify_witness(RelationWitness w, const std::vector<RatTheta>& alphas,
                                      const NumericOptions& opt = {}) {
  const FieldPtr F = alphas.front().field();
  bool any_mu = false;
  for (const auto& m : w.mu) any_mu = any_mu || !m.is_zero();
  if (!any_mu) throw DomainError("verify_witness: zero witness");

  w.checks.substitution_pass = substitution_holds(w, alphas);
  w.checks.f_at_theta_zero = w.f.at_t_equals_theta().is_zero();
  if (!w.checks.substitution_pass) throw InternalError("verify_witness: witness fails exact substitution");
  if (!w.checks.f_at_theta_zero) throw InternalError("verify_witness: f(theta) != 0");

  std::vector<ThetaPoly> c;
  bool any_c = false;
  for (const auto& m : w.mu) {
    c.push_back(t_at_theta(m));
    any_c = any_c || !c.back().is_zero();
  }
  if (any_c) w.checks.exact_certificate = verify_relation_exact(c, alphas);

  bool converge = true;
  for (const auto& a : alphas) converge = converge && log_converges(a);
  if (!converge) {
    w.checks.numeric_note = "skipped: an alpha lies outside the convergence disc of log_C";
    return w;
  }

  long long degree = opt.t_degree;
  degree = std::max<long long>(degree, w.f.t_degree() + 2);
  for (const auto& m : w.mu) degree = std::max<long long>(degree, m.degree() + 2);
  const long long q = F->q();
  const long long prec = opt.prec + (q - 1) * std::max<long long>(0, w.f.theta_degree());

  const TSeries om = omega(F, opt.product_terms + 4, degree, prec);
  std::vector<RatTheta> fk;
  const RatTheta inv_delta = RatTheta(ThetaPoly::one(F), w.f_denominator);
  for (const auto& r : w.f.rows()) fk.push_back(RatTheta(r) * inv_delta);
  TSeries y = TSeries::from_k_poly(F, fk, degree, prec);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (w.mu[i].is_zero()) continue;
    const unsigned terms = std::max(opt.product_terms, log_terms_for(alphas[i], prec));
    const TSeries li = l_series(alphas[i], terms, degree, prec);
    std::vector<RatTheta> mk;
    for (auto cc : w.mu[i].coeffs()) mk.push_back(RatTheta::constant(F, cc));
    y -= TSeries::from_k_poly(F, mk, degree, prec) * li;
  }
  const TSeries mu_series = om * y;

  bool constant_coeffs = true;
  std::vector<FqElem> mu_coeffs;
  for (long long k = 0; k <= degree; ++k) {
    const InfSeries& ck = mu_series.coeff(std::size_t(k));
    if (ck.prec_end() < 0) {
      constant_coeffs = false;
      break;
    }
    const FqElem c0 = ck.coeff(0);
    if (!(ck - InfSeries::constant(F, c0, ck.prec_end())).is_zero()) {
      constant_coeffs = false;
      break;
    }
    mu_coeffs.push_back(c0);
  }
  const TPoly mu(F, mu_coeffs);
  const bool polynomial = constant_coeffs && mu.degree() < degree;

  bool relation = false;
  if (polynomial) {
    const long long window = opt.prec;
    const long long shift = (q - 1) * std::max<long long>(
                                          {t_at_theta(mu).degree(), 0LL});
    long long need = window;
    for (const auto& m : w.mu) need = std::max(need, window + (q - 1) * std::max<long long>(0, m.degree()));
    need = std::max(need, window + shift);
    const InfSeries pi = pi_product(F, need, [&] {
      unsigned m = 1;
      while (period_factor_exponent(std::uint32_t(q), m + 1) - 1 < need + q) ++m;
      return m;
    }());
    InfSeries total = -(embed_theta(t_at_theta(mu), need) * pi);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      if (w.mu[i].is_zero()) continue;
      const InfSeries lg = log_value(alphas[i], log_terms_for(alphas[i], need), need);
      total += embed_theta(t_at_theta(w.mu[i]), need) * lg;
    }
    relation = total.truncated(window).is_zero() && total.prec_end() >= std::min(window, total.prec_end());
    w.checks.numeric_note = "relation at t=theta checked through v^" + std::to_string(std::min(window, total.prec_end()));
  } else {
    w.checks.numeric_note = constant_coeffs ? "Omega-coefficient not a polynomial within the truncation"
                                            : "Omega-coefficient has non-constant coefficients";
  }
  w.checks.numeric_pass = polynomial && relation;
  if (polynomial) w.omega_coefficient = mu;
  if (w.checks.exact_certificate == true && w.checks.numeric_pass == false)
    throw InternalError("verify_witness: exact certificate holds but the numeric relation fails");
  return w;
}

// ---------------------------------------------------------------------------
// Numeric scan

struct ScanCandidate {
  ThetaPoly c0;                // coefficient of π̃
  std::vector<ThetaPoly> c;    // coefficients of log_C(α_i)
  std::optional<bool> exact_pass;
};

struct ScanResult {
  unsigned degree_bound = 0;
  long long rows = 0;          // N: number of v-coefficient equations
  long long lowest_exponent = 0;
  long long highest_exponent = 0;
  std::vector<ScanCandidate> candidates;
};

/// Searches c_0 π̃ + Σ c_i log_C(α_i) ≡ 0 (deg c_i ≤ B) through N v-coefficients by an
/// F_q-linear kernel. Candidates are necessary conditions only; each is handed to
/// verify_relation_exact.
inline ScanResult numeric_scan(const std::vector<RatTheta>& alphas, unsigned degree_bound, long long rows) {
  if (alphas.empty()) throw DomainError("numeric_scan: need at least one alpha");
  const FieldPtr F = alphas.front().field();
  for (const auto& a : alphas) {
    if (a.is_zero()) throw DomainError("numeric_scan: alpha must be nonzero");
    require_convergence(a, "numeric_scan");
  }
  const long long r = static_cast<long long>(alphas.size());
  const long long nb = degree_bound + 1;
  if (rows < 4 * nb * (r + 1))
    throw ConfigError("numeric_scan: precision N = " + std::to_string(rows) + " is below the policy 4(B+1)(r+1) = " +
                      std::to_string(4 * nb * (r + 1)));
  const long long q = F->q();
  const long long step = q - 1;
  long long lowest = -q;
  for (const auto& a : alphas) lowest = std::min(lowest, v_valuation(a));
  lowest -= static_cast<long long>(degree_bound) * step;
  const long long highest = lowest + rows - 1;
  const long long need = highest + static_cast<long long>(degree_bound) * step;

  std::vector<InfSeries> values;
  {
    unsigned m = 1;
    while (period_factor_exponent(std::uint32_t(q), m + 1) - 1 < need + q) ++m;
    values.push_back(pi_product(F, need, m));
  }
  for (const auto& a : alphas) values.push_back(log_value(a, log_terms_for(a, need), need));

  const std::size_t cols = std::size_t((r + 1) * nb);
  FqMatrix m(F, std::size_t(rows), cols);
  for (std::size_t i = 0; i < values.size(); ++i)
    for (long long l = 0; l < nb; ++l) {
      const InfSeries col = values[i] * embed_theta_power(F, l, need);
      for (long long e = lowest; e <= highest; ++e) m(std::size_t(e - lowest), i * std::size_t(nb) + std::size_t(l)) = col.coeff(e);
    }

  ScanResult out;
  out.degree_bound = degree_bound;
  out.rows = rows;
  out.lowest_exponent = lowest;
  out.highest_exponent = highest;
  for (auto v : kernel_basis(m)) {
    // Projective normalization: first nonzero coordinate becomes 1.
    for (const auto& x : v)
      if (x.code) {
        const FqElem inv = F->inv(x);
        for (auto& y : v) y = F->mul(y, inv);
        break;
      }
    ScanCandidate cand;
    auto poly_at = [&](std::size_t i) {
      std::vector<FqElem> c(v.begin() + std::ptrdiff_t(i * std::size_t(nb)), v.begin() + std::ptrdiff_t((i + 1) * std::size_t(nb)));
      return ThetaPoly(F, std::move(c));
    };
    cand.c0 = poly_at(0);
    bool any = false;
    for (std::size_t i = 1; i <= alphas.size(); ++i) {
      cand.c.push_back(poly_at(i));
      any = any || !cand.c.back().is_zero();
    }
    if (any) cand.exact_pass = verify_relation_exact(cand.c, alphas);
    out.candidates.push_back(std::move(cand));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Orchestration

enum class GaloisStatus { dependent_proven, independent_up_to_bounds };

inline const char* to_string(GaloisStatus s) {
  return s == GaloisStatus::dependent_proven ? "dependent-proven" : "independent-up-to-bounds";
}

struct GaloisOptions {
  NumericOptions numeric;
  bool run_numeric_checks = true;
  bool run_scan = true;
  unsigned scan_degree = 2;
  std::optional<long long> scan_rows;  // default: max(80, 4(B+1)(r+1))
  unsigned torsion_degree = 8;
  std::optional<ThetaPoly> f_denominator;
  std::size_t matrix_cap = kDefaultMatrixCap;
};

struct TorsionEntry {
  std::size_t alpha_index = 0;
  TorsionScreen screen;
};

struct Certificate {
  std::vector<ThetaPoly> c;
  std::vector<RatTheta> alphas;
  bool exact_pass = false;
  std::string source;  // "witness" or "scan"
};

struct GaloisReport {
  FieldPtr field;
  std::vector<RatTheta> alphas;
  SolverBounds bounds;        // bounds of the final round
  unsigned rounds = 1;
  std::vector<RelationWitness> witnesses;
  std::size_t relation_rank = 0;
  std::size_t n = 0;
  std::size_t dim_G = 1;
  std::size_t dim_Ru = 0;
  std::string quotient_group = "G_m";
  GaloisStatus status = GaloisStatus::independent_up_to_bounds;
  std::optional<ScanResult> scan;
  std::string scan_note;
  std::vector<TorsionEntry> torsion;
  std::vector<Certificate> certificates;
};

/// build → solve → rank → verify → scan → certificates. "independent-up-to-bounds" is a
/// bounded-search verdict, never a proof of independence.
inline GaloisReport galois_dimension(const std::vector<RatTheta>& alphas, const SolverBounds& bounds,
                                     const GaloisOptions& opt = {}) {
  if (alphas.empty()) throw DomainError("galois_dimension: need at least one alpha");
  GaloisReport rep;
  rep.field = alphas.front().field();
  rep.alphas = alphas;

  SolverBounds current = bounds;
  const unsigned max_rounds = bounds.escalation ? bounds.escalation->max_rounds : 0;
  for (unsigned round = 0;; ++round) {
    const LinearSystem sys = build_system(alphas, current, opt.f_denominator, opt.matrix_cap);
    rep.witnesses = solve_relations(sys);
    rep.bounds = current;
    rep.rounds = round + 1;
    if (!rep.witnesses.empty() || round >= max_rounds) break;
    current = current.scaled(bounds.escalation->factor);
  }

  bool converge = true;
  for (const auto& a : alphas) converge = converge && log_converges(a);
  for (auto& w : rep.witnesses) {
    if (opt.run_numeric_checks) {
      w = verify_witness(std::move(w), alphas, opt.numeric);
    } else {
      w.checks.f_at_theta_zero = w.f.at_t_equals_theta().is_zero();
      if (!w.checks.f_at_theta_zero) throw InternalError("galois_dimension: f(theta) != 0");
      w.checks.numeric_note = "numeric checks disabled";
    }
    if (w.checks.exact_certificate) {
      Certificate cert;
      for (const auto& m : w.mu) cert.c.push_back(t_at_theta(m));
      cert.alphas = alphas;
      cert.exact_pass = *w.checks.exact_certificate;
      cert.source = "witness";
      rep.certificates.push_back(std::move(cert));
    }
  }

  rep.relation_rank = relation_rank(rep.witnesses);
  rep.n = alphas.size() - rep.relation_rank;
  rep.dim_Ru = rep.n;
  rep.dim_G = rep.n + 1;
  bool all_pass = true;
  for (const auto& w : rep.witnesses) all_pass = all_pass && w.checks.substitution_pass && w.checks.f_at_theta_zero;
  rep.status = (rep.relation_rank > 0 && all_pass) ? GaloisStatus::dependent_proven
                                                   : GaloisStatus::independent_up_to_bounds;

  for (std::size_t i = 0; i < alphas.size(); ++i) rep.torsion.push_back({i, torsion_screen(alphas[i], opt.torsion_degree)});

  if (opt.run_scan) {
    if (!converge) {
      rep.scan_note = "skipped: an alpha lies outside the convergence disc of log_C";
    } else {
      const long long r = static_cast<long long>(alphas.size());
      const long long rows = opt.scan_rows.value_or(std::max<long long>(80, 4 * (opt.scan_degree + 1) * (r + 1)));
      rep.scan = numeric_scan(alphas, opt.scan_degree, rows);
      for (const auto& cand : rep.scan->candidates) {
        if (!cand.exact_pass) continue;
        Certificate cert;
        cert.c = cand.c;
        cert.alphas = alphas;
        cert.exact_pass = *cand.exact_pass;
        cert.source = "scan";
        rep.certificates.push_back(std::move(cert));
      }
    }
  }
  return rep;
}

}  // namespace tmg
