#pragma once

// Power series in t whose coefficients are ∞-adic series, the functions Ω and L_α, and the
// matrices Φ and Ψ of the Carlitz-logarithm motives.
//
// Every functional equation is checked in once-twisted form: with τ the forward q-power
// twist,  Ω = (t − θ^q) τ(Ω),  τ(L_α) = (t − θ^q)(L_α − α),  Ψ = τ(Φ) τ(Ψ).

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "tmg/infseries.hpp"

namespace tmg {

namespace detail {
inline constexpr long long kValuationCap = 1LL << 40;
inline constexpr long long kSlopeCap = 1LL << 20;

inline long long sat_add(long long a, long long b) {
  if (a >= kValuationCap || b >= kValuationCap) return kValuationCap;
  return std::min(a + b, kValuationCap);
}
inline long long sat_qpow(std::uint32_t q, long long n) {
  long long r = 1;
  for (long long i = 0; i < n; ++i) {
    if (r >= kValuationCap / q) return kValuationCap;
    r *= q;
  }
  return r;
}
inline long long sat_mul(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  if (a > 0 && b > 0 && a > kValuationCap / b) return kValuationCap;
  return std::clamp(a * b, -kValuationCap, kValuationCap);
}
}  // namespace detail

/// Lower bound on the v-valuation of the omitted t-coefficients: every coefficient of t^j,
/// j > D, has valuation ≥ base + slope·(j − D − 1). `exact_zero` means the omitted part is 0.
struct TailBound {
  bool exact_zero = true;
  long long base = 0;
  long long slope = 0;

  static TailBound zero() { return {}; }
  static TailBound affine(long long base, long long slope) {
    return {false, std::min(base, detail::kValuationCap), std::clamp(slope, 0LL, detail::kSlopeCap)};
  }
  friend bool operator==(const TailBound&, const TailBound&) = default;
};

/// Truncated power series Σ_{j≤D} c_j t^j with ∞-adic coefficients plus a tail bound.
class TSeries {
 public:
  TSeries() = default;
  TSeries(FieldPtr field, std::vector<InfSeries> coeffs, TailBound tail)
      : field_(std::move(field)), coeffs_(std::move(coeffs)), tail_(tail) {}

  /// Zero through prec_end in every slot, with exact-zero tail.
  static TSeries zero(const FieldPtr& F, long long degree, long long prec_end) {
    return TSeries(F, std::vector<InfSeries>(std::size_t(degree + 1), InfSeries::zero(F, prec_end)), TailBound::zero());
  }
  static TSeries constant(const InfSeries& c, long long degree) {
    TSeries s = zero(c.field(), degree, c.prec_end());
    s.coeffs_[0] = c;
    return s;
  }
  /// Σ_j c_j t^j with c_j ∈ k, embedded through prec_end. Degree beyond D is an error.
  static TSeries from_k_poly(const FieldPtr& F, const std::vector<RatTheta>& c, long long degree, long long prec_end) {
    if (static_cast<long long>(c.size()) > degree + 1) throw ConfigError("polynomial exceeds t-truncation order");
    TSeries s = zero(F, degree, prec_end);
    for (std::size_t j = 0; j < c.size(); ++j) s.coeffs_[j] = embed_theta(c[j], prec_end);
    return s;
  }
  static TSeries from_bivar(const BivarPoly& f, long long degree, long long prec_end) {
    std::vector<RatTheta> c;
    for (const auto& row : f.rows()) c.emplace_back(row);
    return from_k_poly(f.field(), c, degree, prec_end);
  }

  const FieldPtr& field() const noexcept { return field_; }
  long long degree() const noexcept { return static_cast<long long>(coeffs_.size()) - 1; }
  const std::vector<InfSeries>& coeffs() const noexcept { return coeffs_; }
  const InfSeries& coeff(std::size_t j) const { return coeffs_.at(j); }
  InfSeries& coeff(std::size_t j) { return coeffs_.at(j); }
  const TailBound& tail() const noexcept { return tail_; }

  /// Smallest per-coefficient window.
  long long min_prec() const {
    long long p = detail::kValuationCap;
    for (const auto& c : coeffs_) p = std::min(p, c.prec_end());
    return p;
  }

  friend TSeries operator+(const TSeries& a, const TSeries& b) {
    check_compatible(a, b);
    std::vector<InfSeries> out;
    out.reserve(a.coeffs_.size());
    for (std::size_t j = 0; j < a.coeffs_.size(); ++j) out.push_back(a.coeffs_[j] + b.coeffs_[j]);
    return TSeries(a.field_, std::move(out), add_tails(a.tail_, b.tail_));
  }
  TSeries operator-() const {
    std::vector<InfSeries> out;
    for (const auto& c : coeffs_) out.push_back(-c);
    return TSeries(field_, std::move(out), tail_);
  }
  friend TSeries operator-(const TSeries& a, const TSeries& b) { return a + (-b); }

  /// Cauchy product through degree D; the tail bound follows min-plus rules on global
  /// affine minorants of both factors.
  friend TSeries operator*(const TSeries& a, const TSeries& b) {
    check_compatible(a, b);
    const auto& F = a.field_;
    const std::size_t n = a.coeffs_.size();
    std::vector<InfSeries> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      InfSeries acc = a.coeffs_[0] * b.coeffs_[k];
      for (std::size_t j = 1; j <= k; ++j) acc += a.coeffs_[j] * b.coeffs_[k - j];
      out.push_back(std::move(acc));
    }
    // Two polynomials still have a nonzero product beyond D; any finite slope gives a valid
    // bound there, q keeps it convergent at t = θ.
    long long slope = std::min(a.tail_.exact_zero ? detail::kSlopeCap : a.tail_.slope,
                               b.tail_.exact_zero ? detail::kSlopeCap : b.tail_.slope);
    if (a.tail_.exact_zero && b.tail_.exact_zero) slope = static_cast<long long>(F->q());
    const long long ca = a.global_minorant(slope), cb = b.global_minorant(slope);
    const TailBound tail =
        TailBound::affine(detail::sat_add(detail::sat_add(ca, cb), detail::sat_mul(slope, a.degree() + 1)), slope);
    return TSeries(F, std::move(out), tail);
  }

  TSeries& operator+=(const TSeries& b) { return *this = *this + b; }
  TSeries& operator-=(const TSeries& b) { return *this = *this - b; }

  /// Multiplies every coefficient by an ∞-adic scalar.
  TSeries scaled(const InfSeries& c) const {
    std::vector<InfSeries> out;
    for (const auto& x : coeffs_) out.push_back(x * c);
    TailBound tail = tail_;
    if (!tail.exact_zero) tail = TailBound::affine(detail::sat_add(tail.base, c.start()), tail.slope);
    return TSeries(field_, std::move(out), tail);
  }

  /// τ^n acts on the coefficients; t is fixed. Valuation bounds scale by q^n.
  TSeries twisted(unsigned n = 1) const {
    std::vector<InfSeries> out;
    for (const auto& c : coeffs_) out.push_back(c.twisted(n));
    TailBound tail = tail_;
    if (!tail.exact_zero) {
      const auto scale = static_cast<long long>(detail::checked_qpow(field_->q(), n));
      tail = TailBound::affine(detail::sat_mul(tail.base, scale), detail::sat_mul(tail.slope, scale));
    }
    return TSeries(field_, std::move(out), tail);
  }

  /// Truncates every coefficient window to prec_end.
  TSeries truncated(long long prec_end) const {
    std::vector<InfSeries> out;
    for (const auto& c : coeffs_) out.push_back(c.truncated(prec_end));
    return TSeries(field_, std::move(out), tail_);
  }

  /// Largest c with valuation(c_j) ≥ c + slope·j for every j (stored and omitted).
  long long global_minorant(long long slope) const {
    long long c = detail::kValuationCap;
    for (std::size_t j = 0; j < coeffs_.size(); ++j)
      c = std::min(c, coeffs_[j].start() - detail::sat_mul(slope, static_cast<long long>(j)));
    if (!tail_.exact_zero) c = std::min(c, tail_.base - detail::sat_mul(slope, degree() + 1));
    return c;
  }

 private:
  static void check_compatible(const TSeries& a, const TSeries& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) throw ConfigError("t-series with different truncation orders");
  }
  static TailBound add_tails(const TailBound& a, const TailBound& b) {
    if (a.exact_zero) return b;
    if (b.exact_zero) return a;
    return TailBound::affine(std::min(a.base, b.base), std::min(a.slope, b.slope));
  }

  FieldPtr field_;
  std::vector<InfSeries> coeffs_;
  TailBound tail_;
};

/// Rectangular matrix of t-series sharing one truncation order.
struct TMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<TSeries> entries;

  TSeries& at(std::size_t i, std::size_t j) { return entries.at(i * cols + j); }
  const TSeries& at(std::size_t i, std::size_t j) const { return entries.at(i * cols + j); }

  TMatrix twisted(unsigned n = 1) const {
    TMatrix out{rows, cols, {}};
    for (const auto& e : entries) out.entries.push_back(e.twisted(n));
    return out;
  }

  friend TMatrix operator*(const TMatrix& a, const TMatrix& b) {
    if (a.cols != b.rows) throw ConfigError("matrix shapes do not match");
    TMatrix out{a.rows, b.cols, {}};
    for (std::size_t i = 0; i < a.rows; ++i)
      for (std::size_t j = 0; j < b.cols; ++j) {
        TSeries acc = a.at(i, 0) * b.at(0, j);
        for (std::size_t k = 1; k < a.cols; ++k) acc += a.at(i, k) * b.at(k, j);
        out.entries.push_back(std::move(acc));
      }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Ω

/// Window through which the M-factor truncation of Ω is exact: factor M+1 first
/// perturbs at v-exponent q + (q−1)q^{M+1}.
inline long long omega_exact_window(std::uint32_t q, unsigned factors) {
  return static_cast<long long>(q) + (q - 1) * static_cast<long long>(detail::checked_qpow(q, factors + 1)) - 1;
}

/// Ω(t) = (−θ)^{−q/(q−1)} Π_{i≥1} (1 − t/θ^{q^i}) = v^q Π_{i≥1} (1 + t·v^{(q−1)q^i}),
/// t-truncated at `degree`, every coefficient exact through prec_end.
inline TSeries omega(const FieldPtr& F, unsigned factors, long long degree, long long prec_end) {
  if (factors == 0) throw DomainError("omega needs at least one product factor");
  const std::uint32_t q = F->q();
  if (omega_exact_window(q, factors) < prec_end) {
    unsigned need = factors + 1;
    while (omega_exact_window(q, need) < prec_end) ++need;
    throw PrecisionError("omega: too few product factors for the requested window; need M = " + std::to_string(need),
                         need);
  }
  const long long body_prec = prec_end - static_cast<long long>(q);
  std::vector<InfSeries> c(std::size_t(degree + 1), InfSeries::zero(F, body_prec));
  c[0] = InfSeries::constant(F, F->one(), body_prec);
  for (unsigned i = 1; i <= factors; ++i) {
    const long long x = static_cast<long long>(q - 1) * static_cast<long long>(detail::checked_qpow(q, i));
    if (x > body_prec) break;
    for (long long j = degree; j >= 1; --j) c[std::size_t(j)] += c[std::size_t(j - 1)].shifted(x);
  }
  for (auto& s : c) s = s.shifted(q);
  // v(Ω_j) = q^{j+1} for the full product.
  const long long base = detail::sat_qpow(q, degree + 2);
  return TSeries(F, std::move(c), TailBound::affine(base, detail::sat_mul(base, q - 1)));
}

// ---------------------------------------------------------------------------
// L_α

/// |α|_∞ < q^{q/(q−1)}, i.e. the v-valuation of α exceeds −q.
inline bool log_converges(const RatTheta& alpha) {
  if (alpha.is_zero()) return true;
  return v_valuation(alpha) > -static_cast<long long>(alpha.field()->q());
}

inline void require_convergence(const RatTheta& alpha, const char* who) {
  if (!log_converges(alpha))
    throw DomainError(std::string(who) +
                      ": |alpha|_inf must be < |theta|_inf^(q/(q-1)) (v-valuation > -q) for the Carlitz logarithm to converge");
}

/// L_α(t) = α + Σ_{i=1}^{M} α^{q^i} Π_{j=1}^{i} (t − θ^{q^j})^{−1},
/// with (t − θ^{q^j})^{−1} = v^{(q−1)q^j} / (1 + t v^{(q−1)q^j}).
inline TSeries l_series(const RatTheta& alpha, unsigned terms, long long degree, long long prec_end) {
  const auto& F = alpha.field();
  if (alpha.is_zero()) return TSeries::zero(F, degree, prec_end);
  require_convergence(alpha, "l_series");
  const long long q = F->q();
  const long long a = v_valuation(alpha);
  // Omitted terms i > M perturb the t^k coefficient from q^{M+1}(a+q) − q + k(q−1)q on.
  auto omitted_from = [&](long long k) {
    return detail::sat_add(detail::sat_mul(static_cast<long long>(detail::checked_qpow(F->q(), terms + 1)), a + q) - q,
                           k * (q - 1) * q);
  };
  if (omitted_from(0) - 1 < prec_end) {
    unsigned need = terms + 1;
    while (detail::sat_mul(static_cast<long long>(detail::checked_qpow(F->q(), need + 1)), a + q) - q - 1 < prec_end)
      ++need;
    throw PrecisionError("l_series: too few terms for the requested window; need M = " + std::to_string(need), need);
  }
  const long long work = prec_end + q;
  const InfSeries alpha_v = embed_theta(alpha, work);

  std::vector<InfSeries> c(std::size_t(degree + 1), InfSeries::zero(F, work));
  c[0] = alpha_v;
  std::vector<InfSeries> g(std::size_t(degree + 1), InfSeries::zero(F, work));
  g[0] = InfSeries::constant(F, F->one(), work);
  long long shift = 0;
  for (unsigned i = 1; i <= terms; ++i) {
    const long long x = (q - 1) * static_cast<long long>(detail::checked_qpow(F->q(), i));
    shift += x;
    // g ← g / (1 + t v^x): g_k ← g_k − v^x g_{k−1}, ascending in k.
    for (long long k = 1; k <= degree; ++k) g[std::size_t(k)] -= g[std::size_t(k - 1)].shifted(x);
    const InfSeries scale = alpha_v.twisted(i).shifted(shift);
    if (scale.start() > prec_end) break;
    for (long long k = 0; k <= degree; ++k) c[std::size_t(k)] += scale * g[std::size_t(k)];
  }
  for (long long k = 0; k <= degree; ++k) c[std::size_t(k)] = c[std::size_t(k)].truncated(std::min(prec_end, omitted_from(k) - 1));
  return TSeries(F, std::move(c), TailBound::affine(q * (a + q - 1) + (degree + 1) * q * (q - 1), q * (q - 1)));
}

// ---------------------------------------------------------------------------
// Φ and Ψ

/// Φ(α_1..α_r): lower triangular, (t−θ) in the corner, α_i^{(−1)}(t−θ) in column 0, 1 on
/// the rest of the diagonal. Inverse twists are kept symbolic; computations use τ(Φ).
class PhiMatrix {
 public:
  enum class Entry { zero, one, t_minus_theta, alpha_times_t_minus_theta };

  explicit PhiMatrix(std::vector<RatTheta> alphas) : alphas_(std::move(alphas)) {
    for (const auto& a : alphas_)
      if (a.is_zero()) throw DomainError("phi_matrix: alpha must be nonzero");
  }
  /// The Carlitz motive itself: the 1×1 matrix [t − θ].
  static PhiMatrix carlitz() { return PhiMatrix(); }

  std::size_t size() const noexcept { return alphas_.size() + 1; }
  const std::vector<RatTheta>& alphas() const noexcept { return alphas_; }

  Entry entry(std::size_t i, std::size_t j) const {
    if (i == 0 && j == 0) return Entry::t_minus_theta;
    if (j == 0) return Entry::alpha_times_t_minus_theta;
    return i == j ? Entry::one : Entry::zero;
  }

  /// Human-readable entry of Φ itself (with inverse twists).
  std::string describe(std::size_t i, std::size_t j) const {
    switch (entry(i, j)) {
      case Entry::zero: return "0";
      case Entry::one: return "1";
      case Entry::t_minus_theta: return "t-theta";
      case Entry::alpha_times_t_minus_theta: return "alpha" + std::to_string(i) + "^(-1)*(t-theta)";
    }
    return "?";
  }

  /// τ(Φ) entry as a t-polynomial over k: (t − θ^q), α_i(t − θ^q), 1 or 0.
  std::vector<RatTheta> twisted_entry(const FieldPtr& F, std::size_t i, std::size_t j) const {
    const RatTheta one = RatTheta::constant(F, F->one());
    const RatTheta theta_q = twist(RatTheta::theta(F));
    switch (entry(i, j)) {
      case Entry::zero: return {};
      case Entry::one: return {one};
      case Entry::t_minus_theta: return {-theta_q, one};
      case Entry::alpha_times_t_minus_theta: return {-(alphas_[i - 1] * theta_q), alphas_[i - 1]};
    }
    return {};
  }

  TMatrix twisted_once(const FieldPtr& F, long long degree, long long prec_end) const {
    TMatrix m{size(), size(), {}};
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j)
        m.entries.push_back(TSeries::from_k_poly(F, twisted_entry(F, i, j), degree, prec_end));
    return m;
  }

 private:
  PhiMatrix() = default;
  std::vector<RatTheta> alphas_;
};

/// Ψ(α_1..α_r): first column (Ω, ΩL_{α_1}, …, ΩL_{α_r}), 1 on the rest of the diagonal.
inline TMatrix psi_matrix(const FieldPtr& F, const std::vector<RatTheta>& alphas, unsigned factors, long long degree,
                          long long prec_end) {
  const std::size_t n = alphas.size() + 1;
  const TSeries om = omega(F, factors, degree, prec_end);
  TMatrix m{n, n, {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == 0) {
        m.entries.push_back(i == 0 ? om : (om * l_series(alphas[i - 1], factors, degree, prec_end)).truncated(prec_end));
      } else {
        m.entries.push_back(i == j ? TSeries::constant(InfSeries::constant(F, F->one(), prec_end), degree)
                                   : TSeries::zero(F, degree, prec_end));
      }
    }
  return m;
}

struct ResidualLocation {
  std::size_t row = 0, col = 0;
  long long t_degree = 0;
  long long v_exponent = 0;
  friend bool operator==(const ResidualLocation&, const ResidualLocation&) = default;
};

struct TrivializationReport {
  bool pass = false;
  /// Lowest v-exponent of a nonzero residual coefficient (only when !pass).
  std::optional<long long> worst_residual_valuation;
  std::optional<ResidualLocation> location;
  long long checked_degree = 0;
  long long checked_prec = 0;
};

/// Verifies Ψ = τ(Φ)·τ(Ψ) coefficientwise through the guaranteed windows.
inline TrivializationReport check_trivialization(const TMatrix& phi_twisted, const TMatrix& psi) {
  if (phi_twisted.rows != psi.rows || phi_twisted.cols != psi.rows || psi.rows != psi.cols)
    throw ConfigError("check_trivialization: shapes do not match");
  const long long d = psi.entries.front().degree();
  for (const auto& e : psi.entries)
    if (e.degree() != d) throw ConfigError("check_trivialization: incompatible truncations");
  for (const auto& e : phi_twisted.entries)
    if (e.degree() != d) throw ConfigError("check_trivialization: incompatible truncations");

  const TMatrix rhs = phi_twisted * psi.twisted(1);
  TrivializationReport report;
  report.pass = true;
  report.checked_degree = d;
  report.checked_prec = detail::kValuationCap;
  for (std::size_t i = 0; i < psi.rows; ++i)
    for (std::size_t j = 0; j < psi.cols; ++j) {
      const TSeries residual = psi.at(i, j) - rhs.at(i, j);
      for (long long k = 0; k <= d; ++k) {
        const InfSeries& c = residual.coeff(std::size_t(k));
        report.checked_prec = std::min(report.checked_prec, c.prec_end());
        if (c.is_zero()) continue;
        report.pass = false;
        if (!report.worst_residual_valuation || c.start() < *report.worst_residual_valuation) {
          report.worst_residual_valuation = c.start();
          report.location = ResidualLocation{i, j, k, c.start()};
        }
      }
    }
  return report;
}

// ---------------------------------------------------------------------------
// Evaluation at t = θ

/// Substitutes t = θ = −v^{−(q−1)}. The window is limited by each coefficient window shifted
/// by −j(q−1) and by the tail bound. Throws PrecisionError (with the achievable window) when
/// the tail bound does not certify convergence or the window falls below `min_prec`.
inline InfSeries eval_at_theta(const TSeries& f, std::optional<long long> min_prec = std::nullopt) {
  const auto& F = f.field();
  const long long step = static_cast<long long>(F->q() - 1);
  long long window = detail::kValuationCap;
  for (long long j = 0; j <= f.degree(); ++j) window = std::min(window, f.coeff(std::size_t(j)).prec_end() - j * step);
  if (!f.tail().exact_zero) {
    if (f.tail().slope <= step)
      throw PrecisionError("eval_at_theta: tail bound does not certify convergence at t = theta", window);
    window = std::min(window, f.tail().base - (f.degree() + 1) * step - 1);
  }
  if (min_prec && window < *min_prec)
    throw PrecisionError("eval_at_theta: achievable window is v^" + std::to_string(window), window);
  InfSeries acc = InfSeries::zero(F, window);
  for (long long j = 0; j <= f.degree(); ++j) {
    const InfSeries& c = f.coeff(std::size_t(j));
    if (c.is_zero()) continue;
    acc += (c * embed_theta_power(F, j, std::max(window - c.start(), -j * step))).truncated(window);
  }
  return acc.truncated(window);
}


/// −1/Ω(θ), the Carlitz period by way of Ω.
inline InfSeries period_via_omega(const FieldPtr& F, unsigned factors, long long degree, long long prec_end) {
  return -eval_at_theta(omega(F, factors, degree, prec_end)).inverse();
}

/// Residual check of Ω = (t − θ^q) τ(Ω), i.e. the 1×1 trivialization of the Carlitz motive.
inline TrivializationReport check_omega_identity(const FieldPtr& F, unsigned factors, long long degree, long long prec_end) {
  return check_trivialization(PhiMatrix::carlitz().twisted_once(F, degree, prec_end),
                              psi_matrix(F, {}, factors, degree, prec_end));
}

}  // namespace tmg
