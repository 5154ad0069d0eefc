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

#include "theta/fieldkit.hpp"

#include <numeric>
#include <sstream>

#include "theta/error.hpp"

namespace theta {

namespace {

constexpr int kMaxFieldSize = 1 << 20;

int mod(long long a, int p) {
  long long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

long long pow_mod(long long b, long long e, int p) {
  long long r = 1;
  b = mod(b, p);
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

// Dense polynomials over F_p used only while bootstrapping the field tables.
using IntPoly = std::vector<int>;

void trim(IntPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

IntPoly poly_mod(IntPoly a, const IntPoly& b, int p) {
  trim(a);
  const long long inv_lead = pow_mod(b.back(), p - 2, p);
  while (a.size() >= b.size()) {
    const long long c = a.back() * inv_lead % p;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[i + shift] = mod(a[i + shift] - c * b[i], p);
    }
    trim(a);
  }
  return a;
}

IntPoly poly_mulmod(const IntPoly& a, const IntPoly& b, const IntPoly& f, int p) {
  if (a.empty() || b.empty()) return {};
  IntPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = static_cast<int>((r[i + j] + static_cast<long long>(a[i]) * b[j]) % p);
    }
  }
  return poly_mod(std::move(r), f, p);
}

IntPoly poly_gcd(IntPoly a, IntPoly b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    IntPoly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

IntPoly poly_powmod(IntPoly base, long long e, const IntPoly& f, int p) {
  IntPoly r{1};
  base = poly_mod(std::move(base), f, p);
  while (e > 0) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

std::uint32_t code_of(const IntPoly& v, int p) {
  std::uint32_t code = 0;
  for (std::size_t k = v.size(); k-- > 0;) code = code * p + v[k];
  return code;
}

IntPoly digits_of(std::uint32_t code, int p, int m) {
  IntPoly v(m, 0);
  for (int k = 0; k < m; ++k) {
    v[k] = static_cast<int>(code % p);
    code /= p;
  }
  return v;
}

}  // namespace

bool is_prime(long long v) {
  if (v < 2) return false;
  for (long long d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

bool is_irreducible_mod_p(const std::vector<int>& f_in, int p) {
  IntPoly f = f_in;
  for (auto& c : f) c = mod(c, p);
  trim(f);
  const int m = static_cast<int>(f.size()) - 1;
  if (m < 1) return false;
  if (m == 1) return true;
  // gcd(f, x^{p^k} - x) = 1 for all k <= m/2.
  IntPoly xp{0, 1};
  for (int k = 1; 2 * k <= m; ++k) {
    xp = poly_powmod(xp, p, f, p);
    IntPoly h = xp;
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = mod(h[1] - 1, p);
    trim(h);
    if (h.empty()) return false;
    if (poly_gcd(f, h, p).size() > 1) return false;
  }
  return true;
}

FieldCtx FieldCtx::create(int p, int m, int n, int eps_exp,
                          std::optional<std::vector<int>> modulus) {
  if (p < 3 || !is_prime(p)) throw ConfigError("p must be an odd prime");
  if (m < 1) throw ConfigError("extension degree m must be >= 1");
  long long q = 1;
  for (int k = 0; k < m; ++k) {
    q *= p;
    if (q > kMaxFieldSize) throw ConfigError("field too large for desk-scale tables");
  }
  if (n < 2) throw ConfigError("n must be >= 2");
  if ((q - 1) % n != 0) {
    throw ConfigError("q = " + std::to_string(q) + " is not 1 mod n = " + std::to_string(n));
  }
  if (std::gcd(eps_exp, n) != 1) throw ConfigError("eps exponent must be coprime to n");

  FieldCtx ctx;
  ctx.p_ = p;
  ctx.m_ = m;
  ctx.q_ = static_cast<int>(q);
  ctx.n_ = n;
  ctx.eps_exp_ = mod(eps_exp, n);

  if (modulus) {
    IntPoly f = *modulus;
    for (auto& c : f) c = mod(c, p);
    trim(f);
    if (static_cast<int>(f.size()) != m + 1 || f.back() != 1) {
      throw ConfigError("defining polynomial must be monic of degree m");
    }
    if (!is_irreducible_mod_p(f, p)) throw ConfigError("defining polynomial is reducible");
    ctx.modulus_ = f;
  } else {
    // Lexicographically smallest monic irreducible, c_0 most significant.
    for (long long index = 0; index < q; ++index) {
      IntPoly f(m + 1, 0);
      long long rest = index;
      for (int k = m - 1; k >= 0; --k) {
        f[k] = static_cast<int>(rest % p);
        rest /= p;
      }
      f[m] = 1;
      if (is_irreducible_mod_p(f, p)) {
        ctx.modulus_ = f;
        break;
      }
    }
  }

  const auto& f = ctx.modulus_;
  const int order = ctx.q_ - 1;

  // Smallest generator in lex order, found by walking powers.
  std::uint32_t generator = 0;
  for (std::uint32_t index = 0; index < static_cast<std::uint32_t>(q); ++index) {
    const FqElem cand = ctx.lex_element(index);
    if (cand.is_zero()) continue;
    const IntPoly g = digits_of(cand.code, p, m);
    IntPoly cur = g;
    trim(cur);
    int k = 1;
    while (!(cur.size() == 1 && cur[0] == 1)) {
      cur = poly_mulmod(cur, g, f, p);
      ++k;
      if (k > order) break;
    }
    if (k == order) {
      generator = cand.code;
      break;
    }
  }

  ctx.exp_.assign(order, 0);
  ctx.log_.assign(ctx.q_, -1);
  IntPoly g = digits_of(generator, p, m);
  trim(g);
  IntPoly cur{1};
  for (int k = 0; k < order; ++k) {
    cur.resize(m, 0);
    const std::uint32_t code = code_of(cur, p);
    ctx.exp_[k] = code;
    ctx.log_[code] = k;
    trim(cur);
    cur = poly_mulmod(cur, g, f, p);
  }

  ctx.zech_.assign(order, -1);
  for (int k = 0; k < order; ++k) {
    IntPoly v = digits_of(ctx.exp_[k], p, m);
    v[0] = mod(v[0] + 1, p);
    const std::uint32_t code = code_of(v, p);
    ctx.zech_[k] = code == 0 ? -1 : ctx.log_[code];
  }

  ctx.zeta_n_ = FqElem{ctx.exp_[order / n]};
  ctx.mu_log_.assign(ctx.q_, -1);
  for (int e = 0; e < n; ++e) ctx.mu_log_[ctx.exp_[(static_cast<long long>(order / n) * e) % order]] = e;

  ctx.trace_.assign(ctx.q_, 0);
  for (std::uint32_t code = 0; code < static_cast<std::uint32_t>(q); ++code) {
    FqElem a{code};
    FqElem acc = ctx.zero();
    FqElem frob = a;
    for (int j = 0; j < m; ++j) {
      acc = ctx.add(acc, frob);
      frob = ctx.pow(frob, p);
    }
    if (acc.code >= static_cast<std::uint32_t>(p)) throw MathError("trace left the prime field");
    ctx.trace_[code] = static_cast<int>(acc.code);
  }
  return ctx;
}

std::string FieldCtx::describe() const {
  std::ostringstream os;
  os << "F_" << q_ << " (p=" << p_ << ", m=" << m_ << ", f=";
  for (std::size_t k = 0; k < modulus_.size(); ++k) os << (k ? "," : "") << modulus_[k];
  os << "), n=" << n_ << ", eps=" << eps_exp_ << ", g=" << generator().code
     << ", zeta_n=" << zeta_n_.code;
  return os.str();
}

FqElem FieldCtx::from_int(long long v) const { return FqElem{static_cast<std::uint32_t>(mod(v, p_))}; }

FqElem FieldCtx::from_coeffs(std::span<const int> coeffs) const {
  if (static_cast<int>(coeffs.size()) > m_) throw ConfigError("too many coordinates for F_q element");
  IntPoly v(m_, 0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) v[k] = mod(coeffs[k], p_);
  return FqElem{code_of(v, p_)};
}

FqElem FieldCtx::from_code(std::uint32_t code) const {
  if (code >= static_cast<std::uint32_t>(q_)) throw ConfigError("element code out of range");
  return FqElem{code};
}

std::vector<int> FieldCtx::coeffs(FqElem a) const { return digits_of(a.code, p_, m_); }

FqElem FieldCtx::add(FqElem a, FqElem b) const noexcept {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const int order = q_ - 1;
  const int la = log_[a.code];
  int k = log_[b.code] - la;
  if (k < 0) k += order;
  const int z = zech_[k];
  if (z < 0) return zero();
  int e = la + z;
  if (e >= order) e -= order;
  return FqElem{exp_[e]};
}

FqElem FieldCtx::neg(FqElem a) const noexcept {
  if (a.is_zero()) return a;
  const int order = q_ - 1;
  int e = log_[a.code] + order / 2;
  if (e >= order) e -= order;
  return FqElem{exp_[e]};
}

FqElem FieldCtx::sub(FqElem a, FqElem b) const noexcept { return add(a, neg(b)); }

FqElem FieldCtx::mul(FqElem a, FqElem b) const noexcept {
  if (a.is_zero() || b.is_zero()) return zero();
  const int order = q_ - 1;
  int e = log_[a.code] + log_[b.code];
  if (e >= order) e -= order;
  return FqElem{exp_[e]};
}

FqElem FieldCtx::inv(FqElem a) const {
  if (a.is_zero()) throw MathError("inversion of zero in F_q");
  const int order = q_ - 1;
  const int l = log_[a.code];
  return FqElem{exp_[l == 0 ? 0 : order - l]};
}

FqElem FieldCtx::div(FqElem a, FqElem b) const { return mul(a, inv(b)); }

FqElem FieldCtx::pow(FqElem a, long long e) const {
  if (a.is_zero()) {
    if (e < 0) throw MathError("negative power of zero in F_q");
    return e == 0 ? one() : zero();
  }
  return exp(static_cast<long long>(log_[a.code]) * (e % (q_ - 1)));
}

FqElem FieldCtx::exp(long long k) const noexcept {
  const long long order = q_ - 1;
  long long r = k % order;
  if (r < 0) r += order;
  return FqElem{exp_[r]};
}

int FieldCtx::log(FqElem a) const {
  if (a.is_zero()) throw MathError("logarithm of zero");
  return log_[a.code];
}

FqElem FieldCtx::chi(FqElem a) const {
  if (a.is_zero()) throw MathError("character at zero");
  return exp(static_cast<long long>(log_[a.code]) * ((q_ - 1) / n_));
}

bool FieldCtx::in_mu_n(FqElem z) const noexcept { return mu_log_[z.code] >= 0; }

int FieldCtx::mu_n_log(FqElem z) const {
  const int e = mu_log_[z.code];
  if (e < 0) throw MathError("element is not an n-th root of unity");
  return e;
}

int FieldCtx::quadratic_char(FqElem a) const noexcept {
  if (a.is_zero()) return 0;
  return log_[a.code] % 2 == 0 ? 1 : -1;
}

FqElem FieldCtx::lex_element(std::uint32_t index) const {
  IntPoly v(m_, 0);
  for (int k = m_ - 1; k >= 0; --k) {
    v[k] = static_cast<int>(index % p_);
    index /= p_;
  }
  return FqElem{code_of(v, p_)};
}

}  // namespace theta
