#include <gtest/gtest.h>

#include "generators.hpp"
#include "tmg/carlitz.hpp"
#include "tmg/motive.hpp"

namespace tmg {
namespace {

using testing::field_q;

RatTheta rat(const FieldPtr& F, std::initializer_list<long long> num) { return RatTheta(ThetaPoly::from_ints(F, num)); }

// (t − θ^q) as a t-series.
TSeries t_minus_theta_q(const FieldPtr& F, long long degree, long long prec) {
  return TSeries::from_k_poly(F, {-twist(RatTheta::theta(F)), RatTheta::constant(F, F->one())}, degree, prec);
}

// Coefficientwise agreement within the common windows; returns the smallest window compared.
long long expect_same(const TSeries& a, const TSeries& b) {
  EXPECT_EQ(a.degree(), b.degree());
  long long w = 1LL << 40;
  for (long long j = 0; j <= a.degree(); ++j) {
    const auto& x = a.coeff(std::size_t(j));
    const auto& y = b.coeff(std::size_t(j));
    EXPECT_TRUE(x.agrees_with(y)) << "t^" << j << ": " << x.to_string() << " vs " << y.to_string();
    w = std::min({w, x.prec_end(), y.prec_end()});
  }
  return w;
}

TEST(Omega, IdentityHoldsForSmallFields) {
  for (auto q : {2u, 3u}) {
    const auto F = field_q(q);
    const TSeries om = omega(F, 8, 8, 40);
    const long long w = expect_same(om, t_minus_theta_q(F, 8, 40) * om.twisted(1));
    EXPECT_GE(w, 30) << q;
    const auto report = check_omega_identity(F, 8, 8, 40);
    EXPECT_TRUE(report.pass) << q;
    EXPECT_EQ(report.checked_degree, 8);
  }
}

TEST(Omega, ConstantCoefficientForQ2) {
  // Ω(0) = v² Π(1 + 0) = v², and the t coefficient is v² Σ v^{2^i}.
  const auto F = field_q(2);
  const TSeries om = omega(F, 6, 4, 30);
  EXPECT_TRUE(om.coeff(0).agrees_with(InfSeries::monomial(F, F->one(), 2, 30)));
  InfSeries lin = InfSeries::zero(F, 30);
  for (long long e : {2, 4, 8, 16}) lin += InfSeries::monomial(F, F->one(), e + 2, 30);
  EXPECT_TRUE(om.coeff(1).agrees_with(lin));
}

TEST(Omega, PartialProductAgreesWithDirectExpansion) {
  // Oracle: multiply the factors (1 + t v^{(q−1)q^i}) as bivariate integer arrays mod p.
  const std::uint32_t q = 3;
  const auto F = field_q(q);
  const long long D = 4, P = 60;
  std::vector<std::vector<long long>> acc(D + 1, std::vector<long long>(P + 1, 0));
  acc[0][q] = 1;
  for (long long x = (q - 1) * q; x <= P; x *= q) {
    auto next = acc;
    for (long long j = 1; j <= D; ++j)
      for (long long e = 0; e + x <= P; ++e) next[j][e + x] = (next[j][e + x] + acc[j - 1][e]) % q;
    acc = next;
  }
  const TSeries om = omega(F, 6, D, P);
  for (long long j = 0; j <= D; ++j)
    for (long long e = 0; e <= std::min(P, om.coeff(std::size_t(j)).prec_end()); ++e)
      EXPECT_EQ(om.coeff(std::size_t(j)).coeff(e), F->from_int(acc[j][e])) << j << "," << e;
}

TEST(Omega, TooFewFactorsIsPrecisionError) {
  EXPECT_THROW(omega(field_q(2), 1, 4, 100), PrecisionError);
  EXPECT_THROW(omega(field_q(2), 0, 4, 10), DomainError);
}

TEST(LSeries, TwistedFunctionalEquation) {
  for (auto q : {2u, 3u, 5u}) {
    const auto F = field_q(q);
    const std::vector<RatTheta> alphas{rat(F, {1}), rat(F, {1, 1}), RatTheta(ThetaPoly::one(F), ThetaPoly::x(F)),
                                       q == 2 ? rat(F, {0, 1}) : rat(F, {1, 0, 0}).inverse()};
    for (const auto& a : alphas) {
      const TSeries L = l_series(a, 8, 6, 40);
      const TSeries rhs = t_minus_theta_q(F, 6, 40) * (L - TSeries::constant(embed_theta(a, 40), 6));
      EXPECT_GE(expect_same(L.twisted(1), rhs), 20) << "q=" << q;
    }
  }
}

TEST(LSeriesProperty, FunctionalEquationForRandomConvergentAlphas) {
  for (auto q : {2u, 3u, 4u}) {
    const auto F = field_q(q);
    int tested = 0;
    while (tested < 15) {
      const RatTheta a = testing::any_rat(F, 3);
      if (!log_converges(a) || a.is_zero()) continue;
      ++tested;
      const TSeries L = l_series(a, 10, 4, 30);
      const TSeries rhs = t_minus_theta_q(F, 4, 30) * (L - TSeries::constant(embed_theta(a, 30), 4));
      expect_same(L.twisted(1), rhs);
    }
  }
}

TEST(LSeries, ZeroAlphaIsZero) {
  const auto F = field_q(3);
  const TSeries L = l_series(RatTheta(F), 4, 5, 20);
  for (const auto& c : L.coeffs()) EXPECT_TRUE(c.is_zero());
  EXPECT_TRUE(L.tail().exact_zero);
}

TEST(LSeries, NonconvergentAlphaIsDomainError) {
  const auto F = field_q(2);
  // |θ²|_∞ = 4 = q^{q/(q−1)} sits on the boundary.
  EXPECT_THROW(l_series(rat(F, {0, 0, 1}), 6, 4, 20), DomainError);
  EXPECT_NO_THROW(l_series(rat(F, {0, 1}), 6, 4, 20));
}

TEST(LSeries, EvaluatesToCarlitzLogarithm) {
  const auto F = field_q(2);
  for (const auto& a : {rat(F, {1}), rat(F, {0, 1}), rat(F, {1, 1})}) {
    const InfSeries at_theta = eval_at_theta(l_series(a, 10, 40, 64));
    EXPECT_GE(at_theta.prec_end(), 20);
    EXPECT_TRUE(at_theta.agrees_with(log_value(a, 10, 64))) << a.num().degree();
  }
}

TEST(LSeries, LogOfOneLeadingTerms) {
  // log_C(1) = 1 + 1/(θ + θ²) + … = 1 + v² + v³ + … over F_2.
  const auto F = field_q(2);
  const InfSeries v = eval_at_theta(l_series(rat(F, {1}), 10, 40, 64));
  EXPECT_EQ(v.start(), 0);
  EXPECT_EQ(v.coeff(0), F->one());
  EXPECT_EQ(v.coeff(1), F->zero());
  EXPECT_EQ(v.coeff(2), F->one());
  EXPECT_EQ(v.coeff(3), F->one());
}

TEST(Phi, Entries) {
  const auto F = field_q(3);
  const auto carlitz = PhiMatrix::carlitz();
  EXPECT_EQ(carlitz.size(), 1u);
  EXPECT_EQ(carlitz.describe(0, 0), "t-theta");

  const RatTheta a = rat(F, {1, 1});
  const PhiMatrix phi({a});
  EXPECT_EQ(phi.size(), 2u);
  EXPECT_EQ(phi.describe(1, 0), "alpha1^(-1)*(t-theta)");
  EXPECT_EQ(phi.describe(0, 1), "0");
  EXPECT_EQ(phi.describe(1, 1), "1");

  const RatTheta tq = twist(RatTheta::theta(F));
  const RatTheta one = RatTheta::constant(F, F->one());
  EXPECT_EQ(phi.twisted_entry(F, 0, 0), (std::vector<RatTheta>{-tq, one}));
  EXPECT_EQ(phi.twisted_entry(F, 1, 0), (std::vector<RatTheta>{-(a * tq), a}));
  EXPECT_TRUE(phi.twisted_entry(F, 0, 1).empty());
  EXPECT_THROW(PhiMatrix({rat(F, {1}), RatTheta(F)}), DomainError);
}

TEST(Psi, ShapeAndDiagonal) {
  const auto F = field_q(2);
  const std::vector<RatTheta> alphas{rat(F, {1}), rat(F, {0, 1})};
  const TMatrix psi = psi_matrix(F, alphas, 8, 6, 30);
  ASSERT_EQ(psi.rows, 3u);
  ASSERT_EQ(psi.cols, 3u);
  const TSeries om = omega(F, 8, 6, 30);
  expect_same(psi.at(0, 0), om);
  expect_same(psi.at(2, 0), om * l_series(alphas[1], 8, 6, 30));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 1; j < 3; ++j) {
      const TSeries& e = psi.at(i, j);
      EXPECT_TRUE(e.tail().exact_zero);
      EXPECT_TRUE(e.coeff(0).agrees_with(InfSeries::constant(F, i == j ? F->one() : F->zero(), 30)));
      for (long long k = 1; k <= e.degree(); ++k) EXPECT_TRUE(e.coeff(std::size_t(k)).is_zero());
    }
}

TEST(Trivialization, PassesForAssembledMotives) {
  for (auto q : {2u, 3u}) {
    const auto F = field_q(q);
    const std::vector<RatTheta> all{q == 2 ? rat(F, {0, 1}) : rat(F, {1}), rat(F, {1, 1}),
                                    RatTheta(ThetaPoly::one(F), ThetaPoly::from_ints(F, {0, 1, 1}))};
    for (std::size_t r = 1; r <= 3; ++r) {
      const std::vector<RatTheta> alphas(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(r));
      const auto report = check_trivialization(PhiMatrix(alphas).twisted_once(F, 6, 40), psi_matrix(F, alphas, 8, 6, 40));
      EXPECT_TRUE(report.pass) << "q=" << q << " r=" << r;
      EXPECT_GE(report.checked_prec, 20);
    }
  }
}

TEST(Trivialization, CorruptedCoefficientIsLocated) {
  const auto F = field_q(2);
  const std::vector<RatTheta> alphas{rat(F, {0, 1})};
  TMatrix psi = psi_matrix(F, alphas, 8, 6, 40);
  psi.at(1, 0).coeff(2) += InfSeries::monomial(F, F->one(), 10, 40);
  const auto report = check_trivialization(PhiMatrix(alphas).twisted_once(F, 6, 40), psi);
  EXPECT_FALSE(report.pass);
  ASSERT_TRUE(report.location.has_value());
  EXPECT_EQ(*report.location, (ResidualLocation{1, 0, 2, 10}));
  EXPECT_EQ(report.worst_residual_valuation, 10);
}

TEST(Trivialization, MismatchedTruncationsAreConfigErrors) {
  const auto F = field_q(2);
  const std::vector<RatTheta> alphas{rat(F, {1})};
  EXPECT_THROW(check_trivialization(PhiMatrix(alphas).twisted_once(F, 5, 30), psi_matrix(F, alphas, 8, 6, 30)),
               ConfigError);
  EXPECT_THROW(check_trivialization(PhiMatrix::carlitz().twisted_once(F, 6, 30), psi_matrix(F, alphas, 8, 6, 30)),
               ConfigError);
  EXPECT_THROW(t_minus_theta_q(F, 4, 30) + t_minus_theta_q(F, 5, 30), ConfigError);
}

TEST(EvalAtTheta, ConstantSeries) {
  const auto F = field_q(3);
  const InfSeries c = embed_theta(rat(F, {2, 1}), 25);
  EXPECT_EQ(eval_at_theta(TSeries::constant(c, 0)).prec_end(), 25);
  EXPECT_TRUE(eval_at_theta(TSeries::constant(c, 0)).agrees_with(c));
  EXPECT_TRUE(eval_at_theta(TSeries::constant(c, 5)).agrees_with(c));
}

TEST(EvalAtTheta, PolynomialMatchesSubstitution) {
  // Σ c_j t^j at t = θ equals the bivariate polynomial evaluated in k.
  for (auto q : {2u, 3u, 9u}) {
    const auto F = field_q(q);
    for (int i = 0; i < 30; ++i) {
      const BivarPoly f = testing::any_bivar(F, 3, 3);
      const InfSeries e = eval_at_theta(TSeries::from_bivar(f, 5, 40));
      EXPECT_TRUE(e.agrees_with(embed_theta(RatTheta(f.at_t_equals_theta()), 40)));
    }
  }
}

TEST(EvalAtThetaProperty, LinearAndMultiplicative) {
  for (auto q : {2u, 3u}) {
    const auto F = field_q(q);
    for (int i = 0; i < 30; ++i) {
      const TSeries a = TSeries::from_bivar(testing::any_bivar(F, 3, 2), 8, 30).scaled(omega(F, 6, 0, 30).coeff(0));
      const TSeries b = omega(F, 6, 8, 30) * TSeries::from_bivar(testing::any_bivar(F, 2, 2), 8, 30);
      EXPECT_TRUE(eval_at_theta(a + b).agrees_with(eval_at_theta(a) + eval_at_theta(b)));
      EXPECT_TRUE(eval_at_theta(a * b).agrees_with(eval_at_theta(a) * eval_at_theta(b)));
    }
  }
}

TEST(EvalAtTheta, UncertifiedTailIsPrecisionError) {
  const auto F = field_q(2);
  const TSeries bad(F, {InfSeries::constant(F, F->one(), 10)}, TailBound::affine(5, 1));
  EXPECT_THROW(eval_at_theta(bad), PrecisionError);
  const TSeries ok(F, {InfSeries::constant(F, F->one(), 10)}, TailBound::affine(5, 2));
  EXPECT_EQ(eval_at_theta(ok).prec_end(), 3);
  try {
    eval_at_theta(ok, 8);
    FAIL() << "expected PrecisionError";
  } catch (const PrecisionError& e) {
    EXPECT_EQ(e.achievable, 3);
  }
}

TEST(EvalAtTheta, ConstructedTailsCertifyConvergence) {
  for (auto q : {2u, 3u, 4u}) {
    const auto F = field_q(q);
    const long long step = q - 1;
    for (long long d : {2, 4, 8}) {
      const TSeries om = omega(F, 8, d, 60);
      const TSeries L = l_series(rat(F, {1, 1}), 8, d, 40);
      EXPECT_GT(om.tail().slope, step);
      EXPECT_GT(L.tail().slope, step);
      EXPECT_NO_THROW(eval_at_theta(om));
      EXPECT_NO_THROW(eval_at_theta(L));
    }
  }
}

TEST(Period, OmegaAgreesWithProductFormula) {
  const auto F2 = field_q(2);
  const InfSeries a = period_via_omega(F2, 8, 16, 64);
  EXPECT_GE(a.prec_end(), 30);
  EXPECT_TRUE(a.agrees_with(pi_product(F2, 64, 8)));

  const auto F3 = field_q(3);
  const InfSeries b = period_via_omega(F3, 6, 8, 64);
  EXPECT_GE(b.prec_end(), 30);
  EXPECT_TRUE(b.agrees_with(pi_product(F3, 64, 6)));
}

}  // namespace
}  // namespace tmg
