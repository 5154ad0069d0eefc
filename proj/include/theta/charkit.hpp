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
 * @file charkit.hpp
 * @brief n-th power residue symbols, the additive character e on F_q(x),
 * finite-field Gauss sums and the quadratic character.
 */

#ifndef THETA_CHARKIT_HPP
#define THETA_CHARKIT_HPP

#include <vector>

#include "theta/cyclokit.hpp"
#include "theta/fieldkit.hpp"
#include "theta/polyring.hpp"

namespace theta {

/// (a/c)_n: either "zero" (a and c not coprime) or an element of mu_n(F_q).
struct SymbolValue {
  bool zero = false;
  FqElem value{1};

  static SymbolValue make_zero() { return SymbolValue{true, FqElem{0}}; }
  friend bool operator==(const SymbolValue&, const SymbolValue&) = default;
};

/// (a/c)_n from the definition: factor c, then for each prime pi compute
/// (a mod pi)^{(q^deg pi - 1)/n} in F_q[x]/(pi). Throws MathError for c = 0.
SymbolValue residue_symbol(const FieldCtx& k, const Poly& a, const Poly& c);

/// Same value as residue_symbol, computed as chi(Res(c/lc(c), a)).
SymbolValue residue_symbol_resultant(const FieldCtx& k, const Poly& a, const Poly& c);

/// Evaluates (. / c)_n repeatedly for a fixed modulus by the definition, with
/// per-prime lookup tables over the residues.
class SymbolTable {
 public:
  SymbolTable(const FieldCtx& k, const Poly& c);
  /// Symbol of a residue a mod c (any degree accepted).
  SymbolValue operator()(const Poly& a) const;

 private:
  struct PrimePart {
    Poly pi;
    int exponent;
    std::vector<std::int32_t> log_n;  // mu_n log per residue code, -1 for zero
  };
  const FieldCtx* k_;
  std::vector<PrimePart> parts_;
};

/// Exponent k with e(f) = zeta_N^k.
long long additive_char_index(const FieldCtx& k, const RatFunc& f);
/// e(f) = e_o(coefficient of x^{-1} of f at infinity).
CycNum additive_char_e(const FieldCtx& k, const RatFunc& f);

/// tau(omega) for omega(a) = eps(chi(a))^j, summed over F_q^x.
CycNum tau(const FieldCtx& k, long long j);

/// Quadratic character of a as a rational CycNum (-1, 0 or 1).
CycNum quadratic_omega(const FieldCtx& k, FqElem a);

/// eps(chi(-1)) as a root of unity exponent in [0, n).
int eps_chi_minus_one_exp(const FieldCtx& k);

}  // namespace theta

#endif  // THETA_CHARKIT_HPP
