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

#include "theta/charkit.hpp"

#include "theta/error.hpp"

namespace theta {

namespace {

long long power_of(long long base, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// (a/pi)_n for a prime pi by modular exponentiation in F_q[x]/(pi).
SymbolValue prime_symbol(const FieldCtx& k, const Poly& a, const Poly& pi) {
  const Poly red = mod(k, a, pi);
  if (red.is_zero()) return SymbolValue::make_zero();
  const long long e = (power_of(k.q(), pi.degree()) - 1) / k.n();
  const Poly v = powmod(k, red, e, pi);
  if (v.degree() != 0 || !k.in_mu_n(v.c[0])) throw MathError("residue symbol left mu_n");
  return SymbolValue{false, v.c[0]};
}

std::size_t residue_index(const FieldCtx& k, const Poly& r) {
  std::size_t idx = 0;
  for (std::size_t j = r.c.size(); j-- > 0;) idx = idx * k.q() + r.c[j].code;
  return idx;
}

}  // namespace

SymbolValue residue_symbol(const FieldCtx& k, const Poly& a, const Poly& c) {
  if (c.is_zero()) throw MathError("residue symbol modulo zero");
  SymbolValue out{false, k.one()};
  if (c.degree() == 0) return out;
  for (const auto& [pi, e] : factorize(k, c).factors) {
    const SymbolValue s = prime_symbol(k, a, pi);
    if (s.zero) return SymbolValue::make_zero();
    out.value = k.mul(out.value, k.pow(s.value, e));
  }
  return out;
}

SymbolValue residue_symbol_resultant(const FieldCtx& k, const Poly& a, const Poly& c) {
  if (c.is_zero()) throw MathError("residue symbol modulo zero");
  if (c.degree() == 0) return SymbolValue{false, k.one()};
  const FqElem res = resultant(k, monic(k, c), a);
  if (res.is_zero()) return SymbolValue::make_zero();
  return SymbolValue{false, k.chi(res)};
}

SymbolTable::SymbolTable(const FieldCtx& k, const Poly& c) : k_(&k) {
  if (c.is_zero()) throw MathError("residue symbol modulo zero");
  if (c.degree() == 0) return;
  for (const auto& [pi, e] : factorize(k, c).factors) {
    PrimePart part{pi, e, {}};
    const int d = pi.degree();
    const auto size = static_cast<std::size_t>(power_of(k.q(), d));
    part.log_n.assign(size, -1);
    // Walk all residues a_0 + ... + a_{d-1} x^{d-1} by index.
    for (std::size_t idx = 1; idx < size; ++idx) {
      std::vector<FqElem> v(d);
      std::size_t rest = idx;
      for (int j = 0; j < d; ++j) {
        v[j] = FqElem{static_cast<std::uint32_t>(rest % k.q())};
        rest /= k.q();
      }
      const SymbolValue s = prime_symbol(k, Poly(std::move(v)), pi);
      part.log_n[idx] = k.mu_n_log(s.value);
    }
    parts_.push_back(std::move(part));
  }
}

SymbolValue SymbolTable::operator()(const Poly& a) const {
  const FieldCtx& k = *k_;
  long long total = 0;
  for (const auto& part : parts_) {
    const Poly red = a.degree() >= part.pi.degree() ? mod(k, a, part.pi) : a;
    const std::int32_t l = part.log_n[residue_index(k, red)];
    if (l < 0) return SymbolValue::make_zero();
    total += static_cast<long long>(l) * part.exponent;
  }
  return SymbolValue{false, k.pow(k.zeta_n(), total % k.n())};
}

long long additive_char_index(const FieldCtx& k, const RatFunc& f) {
  const int d = f.den.degree();
  if (d <= 0 || f.num.is_zero()) return 0;
  const Poly a = mod(k, f.num, f.den);
  const FqElem coef = k.div(a.coeff(d - 1), f.den.lead());
  return e_o_index(k, coef);
}

CycNum additive_char_e(const FieldCtx& k, const RatFunc& f) {
  return CycNum::root(cyc_field_for(k), additive_char_index(k, f));
}

CycNum tau(const FieldCtx& k, long long j) {
  RootSum acc(cyc_field_for(k));
  for (std::uint32_t code = 1; code < static_cast<std::uint32_t>(k.q()); ++code) {
    const FqElem a{code};
    acc.add(eps_index(k, k.chi(a)) * j + e_o_index(k, a));
  }
  return acc.value();
}

CycNum quadratic_omega(const FieldCtx& k, FqElem a) {
  return CycNum::rational(cyc_field_for(k), k.quadratic_char(a));
}

int eps_chi_minus_one_exp(const FieldCtx& k) {
  const long long e = static_cast<long long>(k.eps_exp()) * k.mu_n_log(k.chi(k.neg(k.one())));
  return static_cast<int>(e % k.n());
}

}  // namespace theta
