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
 * @file cyclokit.hpp
 * @brief Exact arithmetic in Q(zeta_N) and the character values eps, e_o.
 *
 * A CycNum is num/den with num a vector of phi(N) big integers in the power
 * basis 1, zeta_N, ..., zeta_N^{phi(N)-1} modulo the N-th cyclotomic
 * polynomial. Values are kept in canonical form (den > 0 and coprime to the
 * content of num), so equality is coordinate-wise.
 */

#ifndef THETA_CYCLOKIT_HPP
#define THETA_CYCLOKIT_HPP

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "theta/fieldkit.hpp"

namespace theta {

class CyclotomicField {
 public:
  /// Shared instance for Q(zeta_N); instances are immutable and cached.
  static std::shared_ptr<const CyclotomicField> get(int N);

  int order() const noexcept { return N_; }
  int degree() const noexcept { return phi_; }
  /// Coefficients of Phi_N, lowest first.
  const std::vector<std::int64_t>& cyclotomic_poly() const noexcept { return phi_poly_; }
  /// Power-basis coordinates of zeta_N^k, k taken mod N.
  const std::vector<std::int64_t>& power(long long k) const noexcept;

  explicit CyclotomicField(int N);

 private:
  int N_;
  int phi_;
  std::vector<std::int64_t> phi_poly_;
  std::vector<std::vector<std::int64_t>> powers_;
};

using CycFieldPtr = std::shared_ptr<const CyclotomicField>;

class CycNum {
 public:
  CycNum() = default;  // unbound; only valid as an assignment target

  static CycNum zero(CycFieldPtr field);
  static CycNum one(CycFieldPtr field);
  static CycNum rational(CycFieldPtr field, const mpq_class& v);
  /// zeta_N^k.
  static CycNum root(CycFieldPtr field, long long k);
  /// zeta_N^{(N/order) * exponent}; throws ConfigError unless order | N.
  static CycNum root_of_unity(CycFieldPtr field, int order, long long exponent);
  static CycNum from_coords(CycFieldPtr field, std::vector<mpz_class> num, mpz_class den);

  const CycFieldPtr& field() const noexcept { return field_; }
  bool bound() const noexcept { return field_ != nullptr; }
  const std::vector<mpz_class>& num() const noexcept { return num_; }
  const mpz_class& den() const noexcept { return den_; }

  bool is_zero() const;
  bool is_rational() const;
  /// Value as a rational; throws MathError unless is_rational().
  mpq_class to_rational() const;

  CycNum operator-() const;
  CycNum& operator+=(const CycNum& b);
  CycNum& operator-=(const CycNum& b);
  CycNum& operator*=(const CycNum& b);
  friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
  friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
  friend CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }
  friend bool operator==(const CycNum& a, const CycNum& b);

  CycNum scaled(const mpq_class& s) const;
  /// Division by a nonzero rational; throws MathError on zero.
  CycNum divided(const mpq_class& s) const;
  /// Multiplicative inverse; throws MathError on zero.
  CycNum inverse() const;
  CycNum operator/(const CycNum& b) const { return *this * b.inverse(); }
  CycNum pow(long long e) const;

  /// Image under zeta_N -> zeta_N^k, gcd(k, N) = 1.
  CycNum galois(long long k) const;
  CycNum conj() const { return galois(-1); }

  /// Membership in Q(zeta_n) for n | N with gcd(n, N/n) = 1.
  bool in_subfield(int n) const;
  /// Membership in Z[zeta_n] under the same conditions.
  bool in_integers_of_subfield(int n) const;

  std::complex<double> complex_eval(unsigned precision_bits = 128) const;

  nlohmann::json to_json() const;
  static CycNum from_json(CycFieldPtr field, const nlohmann::json& j);
  std::string to_string() const;

 private:
  CycNum(CycFieldPtr field, std::vector<mpz_class> num, mpz_class den);
  void normalize();
  void require_same_field(const CycNum& b) const;
  // Coordinates in the zeta_n (x) zeta_p basis, row-major phi(n) x phi(N/n).
  std::vector<mpq_class> tensor_coords(int n) const;

  CycFieldPtr field_;
  std::vector<mpz_class> num_;
  mpz_class den_ = 1;
};

/// Integer combination sum_k c_k zeta_N^k, accumulated in machine words and
/// converted to a CycNum once. Merging two accumulators is exact addition.
class RootSum {
 public:
  explicit RootSum(CycFieldPtr field);

  void add(long long k, std::int64_t c = 1);
  void merge(const RootSum& other);
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }
  CycNum value() const;

 private:
  CycFieldPtr field_;
  std::vector<std::int64_t> counts_;
};

/// Q(zeta_{n p}) for the given field context.
CycFieldPtr cyc_field_for(const FieldCtx& ctx);

/// Exponent k with eps(z) = zeta_N^k; throws MathError unless z^n = 1.
long long eps_index(const FieldCtx& ctx, FqElem z);
/// Exponent k with e_o(a) = zeta_N^k.
long long e_o_index(const FieldCtx& ctx, FqElem a);

/// eps(z) = zeta_n^{eps_exp * log z}.
CycNum eps(const FieldCtx& ctx, FqElem z);
/// e_o(a) = zeta_p^{Tr a}.
CycNum e_o(const FieldCtx& ctx, FqElem a);

}  // namespace theta

#endif  // THETA_CYCLOKIT_HPP
