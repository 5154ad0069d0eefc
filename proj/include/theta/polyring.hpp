// Copyright 2026 The theta Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file polyring.hpp
 * @brief Dense polynomials over F_q: arithmetic, resultants, factorization,
 * Moebius function, monic enumeration and reduction modulo n-th powers.
 */

#ifndef THETA_POLYRING_HPP
#define THETA_POLYRING_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "theta/fieldkit.hpp"

namespace theta {

/// Lowest degree first; the zero polynomial has no coefficients.
struct Poly {
  std::vector<FqElem> c;

  Poly() = default;
  explicit Poly(std::vector<FqElem> coeffs);

  static Poly constant(FqElem a);
  static Poly monomial(FqElem a, int k);
  static Poly x() { return monomial(FqElem{1}, 1); }

  bool is_zero() const noexcept { return c.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c.size()) - 1; }
  FqElem lead() const noexcept { return c.empty() ? FqElem{0} : c.back(); }
  bool is_monic() const noexcept { return !c.empty() && c.back().code == 1; }
  bool is_one() const noexcept { return c.size() == 1 && c[0].code == 1; }
  FqElem coeff(int k) const noexcept;

  void trim();
  friend bool operator==(const Poly&, const Poly&) = default;
};

/// Degree first, then coefficient codes compared from c_0 upward.
bool canonical_less(const Poly& a, const Poly& b);

struct PolyHash {
  std::size_t operator()(const Poly& a) const noexcept;
};

Poly add(const FieldCtx& k, const Poly& a, const Poly& b);
Poly sub(const FieldCtx& k, const Poly& a, const Poly& b);
Poly neg(const FieldCtx& k, const Poly& a);
Poly mul(const FieldCtx& k, const Poly& a, const Poly& b);
Poly scale(const FieldCtx& k, const Poly& a, FqElem s);
Poly pow(const FieldCtx& k, const Poly& a, int e);
/// (quotient, remainder); throws MathError for b = 0.
std::pair<Poly, Poly> divmod(const FieldCtx& k, const Poly& a, const Poly& b);
Poly mod(const FieldCtx& k, const Poly& a, const Poly& b);
/// Exact quotient; throws MathError if b does not divide a.
Poly exact_div(const FieldCtx& k, const Poly& a, const Poly& b);
Poly powmod(const FieldCtx& k, const Poly& a, long long e, const Poly& m);
/// Monic gcd; gcd(0, 0) = 0.
Poly gcd(const FieldCtx& k, const Poly& a, const Poly& b);
Poly monic(const FieldCtx& k, const Poly& a);
FqElem eval(const FieldCtx& k, const Poly& a, FqElem x);
Poly derivative(const FieldCtx& k, const Poly& a);

/// Res(a, b) = lc(a)^{deg b} prod_{a(t)=0} b(t); zero if either input is zero.
FqElem resultant(const FieldCtx& k, const Poly& a, const Poly& b);
/// (-1)^{d(d-1)/2} Res(c, c') for monic c of degree d >= 1.
FqElem discriminant(const FieldCtx& k, const Poly& c);

struct Factorization {
  FqElem unit;
  std::vector<std::pair<Poly, int>> factors;  // monic irreducible, exponent
};

/// Squarefree decomposition, distinct-degree split, then trial division.
Factorization factorize(const FieldCtx& k, const Poly& a);
bool is_irreducible(const FieldCtx& k, const Poly& a);
bool is_squarefree(const FieldCtx& k, const Poly& a);
/// Number of irreducible factors of a squarefree polynomial (distinct-degree).
int count_irreducible_factors(const FieldCtx& k, const Poly& a);
int mobius(const FieldCtx& k, const Poly& c);

/// Number of monic polynomials of degree d, q^d.
std::uint64_t monic_count(const FieldCtx& k, int d);
/// The index-th monic polynomial of degree d in lexicographic coefficient
/// order (c_0 most significant, coefficients ordered by code).
Poly monic_at(const FieldCtx& k, int d, std::uint64_t index);
/// Advances to the next monic polynomial of the same degree; false past the end.
bool next_monic(const FieldCtx& k, Poly& a);

/// Fraction num/den with den monic and gcd(num, den) = 1.
struct RatFunc {
  Poly num;
  Poly den;

  static RatFunc make(const FieldCtx& k, const Poly& num, const Poly& den);
  static RatFunc from_poly(const Poly& a);
  bool is_zero() const noexcept { return num.is_zero(); }
  friend bool operator==(const RatFunc&, const RatFunc&) = default;
};

RatFunc mul(const FieldCtx& k, const RatFunc& a, const RatFunc& b);
RatFunc div(const FieldCtx& k, const RatFunc& a, const RatFunc& b);
RatFunc pow(const FieldCtx& k, const RatFunc& a, int e);

struct NthPowerReduction {
  Poly poly;     // u * prod pi^{e mod n}
  int unit_exp;  // u = g^unit_exp, unit_exp in [0, n)
};

/// Representative of r in k^x / (k^x)^n; throws MathError for r = 0.
NthPowerReduction reduce_mod_nth_powers(const FieldCtx& k, const RatFunc& r);

/// Comma-separated coefficient codes, lowest degree first; "0" for zero.
std::string to_string(const Poly& a);
/// Inverse of to_string; throws ConfigError on malformed input.
Poly parse_poly(const FieldCtx& k, const std::string& s);
/// Human-readable form such as "x^2+3*x+1"; coefficients shown as codes.
std::string pretty(const Poly& a);

}  // namespace theta

#endif  // THETA_POLYRING_HPP
