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
 * @file fieldkit.hpp
 * @brief Arithmetic in F_q = F_p[t]/(f), the trace, the character map chi and
 * the group mu_n(F_q).
 *
 * An element is stored as the integer code sum_k c_k p^k of its coordinates
 * c_0..c_{m-1} with respect to the power basis 1, t, ..., t^{m-1}. The code is
 * also the external encoding used in polynomial strings ("0,1" is x).
 *
 * All multiplicative operations go through discrete-log tables built once per
 * FieldCtx; addition uses Zech logarithms. A FieldCtx is immutable after
 * construction and may be shared between threads.
 */

#ifndef THETA_FIELDKIT_HPP
#define THETA_FIELDKIT_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace theta {

struct FqElem {
  std::uint32_t code = 0;

  constexpr bool is_zero() const noexcept { return code == 0; }
  friend constexpr auto operator<=>(const FqElem&, const FqElem&) = default;
};

class FieldCtx {
 public:
  /// Builds F_{p^m} with n | q-1 and the embedding exponent eps_exp.
  /// When `modulus` is empty the lexicographically smallest monic irreducible
  /// of degree m is used (coefficients compared low to high). Throws
  /// ConfigError on invalid parameters.
  static FieldCtx create(int p, int m, int n, int eps_exp = 1,
                         std::optional<std::vector<int>> modulus = std::nullopt);

  int p() const noexcept { return p_; }
  int m() const noexcept { return m_; }
  int q() const noexcept { return q_; }
  int n() const noexcept { return n_; }
  int eps_exp() const noexcept { return eps_exp_; }
  /// Defining polynomial over F_p, lowest degree first, monic, length m+1.
  const std::vector<int>& modulus() const noexcept { return modulus_; }
  std::string describe() const;

  FqElem zero() const noexcept { return FqElem{0}; }
  FqElem one() const noexcept { return FqElem{1}; }
  FqElem from_int(long long v) const;  // image of an integer in F_p
  FqElem from_coeffs(std::span<const int> coeffs) const;
  FqElem from_code(std::uint32_t code) const;
  std::vector<int> coeffs(FqElem a) const;

  FqElem add(FqElem a, FqElem b) const noexcept;
  FqElem sub(FqElem a, FqElem b) const noexcept;
  FqElem neg(FqElem a) const noexcept;
  FqElem mul(FqElem a, FqElem b) const noexcept;
  FqElem inv(FqElem a) const;  // throws MathError on zero
  FqElem div(FqElem a, FqElem b) const;
  FqElem pow(FqElem a, long long e) const;  // negative e allowed for a != 0

  /// Tr_{F_q/F_p}(a) as a residue in [0, p).
  int trace(FqElem a) const noexcept { return trace_[a.code]; }

  /// chi(a) = a^{(q-1)/n}; throws MathError("character at zero") for a = 0.
  FqElem chi(FqElem a) const;
  /// e with z = zeta_n^e; throws MathError if z^n != 1.
  int mu_n_log(FqElem z) const;
  bool in_mu_n(FqElem z) const noexcept;

  /// Smallest generator of F_q^x in the low-to-high lexicographic order.
  FqElem generator() const noexcept { return FqElem{exp_[1]}; }
  /// generator()^{(q-1)/n}, the element that eps sends to zeta_n^{eps_exp}.
  FqElem zeta_n() const noexcept { return zeta_n_; }
  /// Discrete logarithm to the base generator(); a != 0.
  int log(FqElem a) const;
  FqElem exp(long long k) const noexcept;

  /// Quadratic character of a as -1, 0 or 1 (independent of n).
  int quadratic_char(FqElem a) const noexcept;

  /// Elements in the low-to-high lexicographic order (c_0 most significant).
  FqElem lex_element(std::uint32_t index) const;

 private:
  FieldCtx() = default;

  int p_ = 0;
  int m_ = 0;
  int q_ = 0;
  int n_ = 0;
  int eps_exp_ = 1;
  std::vector<int> modulus_;
  FqElem zeta_n_;
  std::vector<std::uint32_t> exp_;  // exp_[k] = g^k, k in [0, q-1)
  std::vector<std::int32_t> log_;   // log_[code], -1 for zero
  std::vector<std::int32_t> zech_;  // zech_[k] = log(1 + g^k), -1 if 1 + g^k = 0
  std::vector<std::int32_t> mu_log_;
  std::vector<int> trace_;
};

/// True iff the monic polynomial `f` (over F_p, lowest first) is irreducible.
bool is_irreducible_mod_p(const std::vector<int>& f, int p);

bool is_prime(long long v);

}  // namespace theta

#endif  // THETA_FIELDKIT_HPP
