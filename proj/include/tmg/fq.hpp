#pragma once

// Finite field F_q = F_p[x]/(m(x)), table driven.
//
// Elements are small integer codes: the residue r_0 + r_1 x + ... + r_{e-1} x^{e-1}
// is stored as r_0 + r_1 p + ... + r_{e-1} p^{e-1}. Zero is code 0, one is code 1.
// Multiplication goes through discrete log/exp tables built from a primitive element,
// so q is capped at kMaxFieldOrder.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmg/error.hpp"

namespace tmg {

inline constexpr std::uint32_t kMaxFieldOrder = 1u << 16;

struct FqElem {
  std::uint32_t code = 0;

  friend bool operator==(FqElem, FqElem) = default;
  friend auto operator<=>(FqElem, FqElem) = default;
};

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Dense polynomials over F_p with small p, lowest degree first. Only used to build
// and validate the field tables.
using PrimePoly = std::vector<std::uint32_t>;

inline void trim(PrimePoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod_prime(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1, base = a % p;
  for (std::uint64_t n = p - 2; n; n >>= 1) {
    if (n & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

// Remainder of a modulo b over F_p; b must be nonzero after trimming.
inline PrimePoly rem(PrimePoly a, PrimePoly b, std::uint32_t p) {
  trim(a);
  trim(b);
  const std::uint32_t lead_inv = inv_mod_prime(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t factor = std::uint64_t(a.back()) * lead_inv % p;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - factor * b[i] % p) % p);
    }
    trim(a);
  }
  return a;
}

// Trial division by every monic polynomial of degree 1..deg/2.
inline bool is_irreducible(const PrimePoly& m, std::uint32_t p) {
  const std::size_t deg = m.size() - 1;
  for (std::size_t d = 1; 2 * d <= deg; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      PrimePoly divisor(d + 1);
      std::uint64_t v = idx;
      for (std::size_t i = 0; i < d; ++i) {
        divisor[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      divisor[d] = 1;
      if (rem(m, divisor, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

/// The constant field context: p, e, q = p^e and the defining modulus.
/// Immutable after construction and shared through FieldPtr.
class Field {
 public:
  /// Builds F_{p^e}. For e > 1 and an empty modulus, the lexicographically first monic
  /// irreducible polynomial of degree e is chosen.
  static std::shared_ptr<const Field> make(std::uint32_t p, std::uint32_t e = 1,
                                           std::vector<std::uint32_t> modulus = {}) {
    return std::shared_ptr<const Field>(new Field(p, e, std::move(modulus)));
  }

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t e() const noexcept { return e_; }
  std::uint32_t q() const noexcept { return q_; }
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  FqElem zero() const noexcept { return {0}; }
  FqElem one() const noexcept { return {1}; }

  /// Image of an integer in the prime subfield.
  FqElem from_int(long long n) const {
    long long r = n % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return {static_cast<std::uint32_t>(r)};
  }

  FqElem from_digits(std::span<const std::uint32_t> digits) const {
    if (digits.size() > e_) throw DomainError("field element has more than e digits");
    std::uint32_t code = 0, scale = 1;
    for (auto d : digits) {
      if (d >= p_) throw DomainError("field element digit out of range [0, p)");
      code += d * scale;
      scale *= p_;
    }
    return {code};
  }

  std::vector<std::uint32_t> digits(FqElem a) const {
    std::vector<std::uint32_t> out(e_);
    std::uint32_t v = a.code;
    for (auto& d : out) {
      d = v % p_;
      v /= p_;
    }
    return out;
  }

  FqElem add(FqElem a, FqElem b) const {
    if (!add_table_.empty()) return {add_table_[std::size_t(a.code) * q_ + b.code]};
    return add_digits(a, b, false);
  }
  FqElem sub(FqElem a, FqElem b) const { return add(a, neg(b)); }
  FqElem neg(FqElem a) const { return {neg_table_[a.code]}; }

  FqElem mul(FqElem a, FqElem b) const {
    if (a.code == 0 || b.code == 0) return zero();
    std::uint32_t s = log_[a.code] + log_[b.code];
    if (s >= q_ - 1) s -= q_ - 1;
    return {exp_[s]};
  }

  FqElem inv(FqElem a) const {
    if (a.code == 0) throw DomainError("inversion of zero in F_q");
    const std::uint32_t l = log_[a.code];
    return {exp_[l == 0 ? 0 : q_ - 1 - l]};
  }

  FqElem div(FqElem a, FqElem b) const { return mul(a, inv(b)); }

  /// Square-and-multiply.
  FqElem pow(FqElem a, std::uint64_t n) const {
    FqElem result = one();
    FqElem base = a;
    for (; n; n >>= 1) {
      if (n & 1) result = mul(result, base);
      base = mul(base, base);
    }
    return result;
  }

  /// The class of x in F_p[x]/(m); for e = 1 this is just 0 (x is reduced mod a linear m).
  FqElem generator_x() const { return e_ == 1 ? from_int(0) : FqElem{p_}; }

  bool operator==(const Field& other) const {
    return p_ == other.p_ && e_ == other.e_ && modulus_ == other.modulus_;
  }

 private:
  Field(std::uint32_t p, std::uint32_t e, std::vector<std::uint32_t> modulus) : p_(p), e_(e) {
    if (!detail::is_prime(p)) throw DomainError("p must be prime");
    if (e == 0) throw DomainError("extension degree e must be at least 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
      q *= p;
      if (q > kMaxFieldOrder) throw ResourceError("field order exceeds table limit 65536");
    }
    q_ = static_cast<std::uint32_t>(q);

    if (e == 1) {
      modulus_ = {0, 1};
    } else if (modulus.empty()) {
      modulus_ = first_irreducible();
    } else {
      detail::PrimePoly m = modulus;
      for (auto c : m)
        if (c >= p) throw DomainError("modulus coefficient out of range [0, p)");
      detail::trim(m);
      if (m.size() != e + 1) throw DomainError("modulus must have degree e");
      if (m.back() != 1) throw DomainError("modulus must be monic");
      if (!detail::is_irreducible(m, p)) throw DomainError("modulus is reducible over F_p");
      modulus_ = std::move(m);
    }
    build_tables();
  }

  detail::PrimePoly first_irreducible() const {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < e_; ++i) count *= p_;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      detail::PrimePoly m(e_ + 1);
      std::uint64_t v = idx;
      for (std::uint32_t i = 0; i < e_; ++i) {
        m[i] = static_cast<std::uint32_t>(v % p_);
        v /= p_;
      }
      m[e_] = 1;
      if (m[0] != 0 && detail::is_irreducible(m, p_)) return m;
    }
    throw InternalError("no irreducible polynomial found");
  }

  FqElem add_digits(FqElem a, FqElem b, bool subtract) const {
    std::uint32_t x = a.code, y = b.code, out = 0, scale = 1;
    for (std::uint32_t i = 0; i < e_; ++i) {
      const std::uint32_t dx = x % p_, dy = y % p_;
      const std::uint32_t d = subtract ? (dx + p_ - dy) % p_ : (dx + dy) % p_;
      out += d * scale;
      scale *= p_;
      x /= p_;
      y /= p_;
    }
    return {out};
  }

  // Multiplication of codes by schoolbook reduction mod the modulus; only used while
  // building the log tables.
  std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const {
    std::vector<std::uint64_t> prod(2 * e_, 0);
    auto da = digits({a}), db = digits({b});
    for (std::uint32_t i = 0; i < e_; ++i)
      for (std::uint32_t j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
    for (std::size_t k = prod.size(); k-- > e_;) {
      const std::uint64_t c = prod[k];
      if (!c) continue;
      for (std::uint32_t i = 0; i <= e_; ++i) {
        const std::size_t idx = k - e_ + i;
        prod[idx] = (prod[idx] + p_ - (c * modulus_[i]) % p_) % p_;
      }
    }
    std::uint32_t code = 0, scale = 1;
    for (std::uint32_t i = 0; i < e_; ++i) {
      code += static_cast<std::uint32_t>(prod[i]) * scale;
      scale *= p_;
    }
    return code;
  }

  void build_tables() {
    neg_table_.resize(q_);
    for (std::uint32_t a = 0; a < q_; ++a) neg_table_[a] = add_digits(zero(), {a}, true).code;
    if (q_ <= 256) {
      add_table_.resize(std::size_t(q_) * q_);
      for (std::uint32_t a = 0; a < q_; ++a)
        for (std::uint32_t b = 0; b < q_; ++b) add_table_[std::size_t(a) * q_ + b] = add_digits({a}, {b}, false).code;
    }
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    if (q_ == 2) {
      exp_[0] = 1;
      return;
    }
    for (std::uint32_t g = 2; g < q_; ++g) {
      std::uint32_t x = 1;
      bool primitive = true;
      std::vector<bool> seen(q_, false);
      for (std::uint32_t k = 0; k < q_ - 1; ++k) {
        if (seen[x]) {
          primitive = false;
          break;
        }
        seen[x] = true;
        exp_[k] = x;
        log_[x] = k;
        x = slow_mul(x, g);
      }
      if (primitive && x == 1) return;
    }
    throw InternalError("no primitive element found");
  }

  std::uint32_t p_, e_, q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> add_table_, neg_table_, exp_, log_;
};

using FieldPtr = std::shared_ptr<const Field>;

}  // namespace tmg
