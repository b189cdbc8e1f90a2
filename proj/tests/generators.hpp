#pragma once

// Seeded random generators for property tests.

#include <random>
#include <vector>

#include "tmg/poly.hpp"

namespace tmg::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(0x5eed5eedULL);
  return g;
}

inline FieldPtr field_q(std::uint32_t q) {
  switch (q) {
    case 4: return Field::make(2, 2);
    case 8: return Field::make(2, 3);
    case 9: return Field::make(3, 2);
    default: return Field::make(q);
  }
}

inline const std::vector<std::uint32_t>& sample_qs() {
  static const std::vector<std::uint32_t> qs{2, 3, 4, 5, 9};
  return qs;
}

inline FqElem any_elem(const FieldPtr& F) {
  return FqElem{std::uniform_int_distribution<std::uint32_t>(0, F->q() - 1)(rng())};
}

inline FqElem nonzero_elem(const FieldPtr& F) {
  return FqElem{std::uniform_int_distribution<std::uint32_t>(1, F->q() - 1)(rng())};
}

template <class Tag = ThetaTag>
Poly<Tag> any_poly(const FieldPtr& F, int max_degree) {
  const int d = std::uniform_int_distribution<int>(-1, max_degree)(rng());
  std::vector<FqElem> c(std::size_t(d + 1));
  for (auto& x : c) x = any_elem(F);
  return Poly<Tag>(F, std::move(c));
}

template <class Tag = ThetaTag>
Poly<Tag> nonzero_poly(const FieldPtr& F, int max_degree) {
  for (;;) {
    auto p = any_poly<Tag>(F, max_degree);
    if (!p.is_zero()) return p;
  }
}

inline RatTheta any_rat(const FieldPtr& F, int max_degree) {
  return RatTheta(any_poly(F, max_degree), nonzero_poly(F, max_degree));
}

inline RatTheta nonzero_rat(const FieldPtr& F, int max_degree) {
  return RatTheta(nonzero_poly(F, max_degree), nonzero_poly(F, max_degree));
}

inline BivarPoly any_bivar(const FieldPtr& F, int t_degree, int theta_degree) {
  std::vector<ThetaPoly> rows;
  for (int j = 0; j <= t_degree; ++j) rows.push_back(any_poly(F, theta_degree));
  return BivarPoly(F, std::move(rows));
}

}  // namespace tmg::testing
