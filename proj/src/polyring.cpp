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

#include "theta/polyring.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "theta/error.hpp"

namespace theta {

Poly::Poly(std::vector<FqElem> coeffs) : c(std::move(coeffs)) { trim(); }

Poly Poly::constant(FqElem a) { return Poly({a}); }

Poly Poly::monomial(FqElem a, int k) {
  if (a.is_zero()) return Poly();
  std::vector<FqElem> v(k + 1);
  v[k] = a;
  return Poly(std::move(v));
}

FqElem Poly::coeff(int k) const noexcept {
  return k >= 0 && k < static_cast<int>(c.size()) ? c[k] : FqElem{0};
}

void Poly::trim() {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

bool canonical_less(const Poly& a, const Poly& b) {
  if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
  return a.c < b.c;
}

std::size_t PolyHash::operator()(const Poly& a) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (const auto& e : a.c) h = (h ^ e.code) * 1099511628211ULL;
  return h ^ a.c.size();
}

Poly add(const FieldCtx& k, const Poly& a, const Poly& b) {
  std::vector<FqElem> r(std::max(a.c.size(), b.c.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = k.add(a.coeff(i), b.coeff(i));
  return Poly(std::move(r));
}

Poly neg(const FieldCtx& k, const Poly& a) {
  std::vector<FqElem> r(a.c.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = k.neg(a.c[i]);
  return Poly(std::move(r));
}

Poly sub(const FieldCtx& k, const Poly& a, const Poly& b) { return add(k, a, neg(k, b)); }

Poly mul(const FieldCtx& k, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<FqElem> r(a.c.size() + b.c.size() - 1);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] = k.add(r[i + j], k.mul(a.c[i], b.c[j]));
  }
  return Poly(std::move(r));
}

Poly scale(const FieldCtx& k, const Poly& a, FqElem s) {
  std::vector<FqElem> r(a.c.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = k.mul(a.c[i], s);
  return Poly(std::move(r));
}

Poly pow(const FieldCtx& k, const Poly& a, int e) {
  if (e < 0) throw MathError("negative polynomial power");
  Poly r = Poly::constant(k.one());
  Poly b = a;
  while (e > 0) {
    if (e & 1) r = mul(k, r, b);
    e >>= 1;
    if (e > 0) b = mul(k, b, b);
  }
  return r;
}

std::pair<Poly, Poly> divmod(const FieldCtx& k, const Poly& a, const Poly& b) {
  if (b.is_zero()) throw MathError("division by the zero polynomial");
  if (a.degree() < b.degree()) return {Poly(), a};
  std::vector<FqElem> rem = a.c;
  std::vector<FqElem> quo(a.c.size() - b.c.size() + 1);
  const FqElem inv_lead = k.inv(b.lead());
  const std::size_t db = b.c.size() - 1;
  for (std::size_t top = rem.size(); top-- > db;) {
    const FqElem f = k.mul(rem[top], inv_lead);
    quo[top - db] = f;
    if (f.is_zero()) continue;
    for (std::size_t i = 0; i <= db; ++i) {
      rem[top - db + i] = k.sub(rem[top - db + i], k.mul(f, b.c[i]));
    }
  }
  rem.resize(db);
  return {Poly(std::move(quo)), Poly(std::move(rem))};
}

Poly mod(const FieldCtx& k, const Poly& a, const Poly& b) { return divmod(k, a, b).second; }

Poly exact_div(const FieldCtx& k, const Poly& a, const Poly& b) {
  auto [q, r] = divmod(k, a, b);
  if (!r.is_zero()) throw MathError("polynomial division is not exact");
  return q;
}

Poly powmod(const FieldCtx& k, const Poly& a, long long e, const Poly& m) {
  Poly r = mod(k, Poly::constant(k.one()), m);
  Poly b = mod(k, a, m);
  while (e > 0) {
    if (e & 1) r = mod(k, mul(k, r, b), m);
    e >>= 1;
    if (e > 0) b = mod(k, mul(k, b, b), m);
  }
  return r;
}

Poly monic(const FieldCtx& k, const Poly& a) {
  if (a.is_zero() || a.is_monic()) return a;
  return scale(k, a, k.inv(a.lead()));
}

Poly gcd(const FieldCtx& k, const Poly& a, const Poly& b) {
  Poly x = a;
  Poly y = b;
  while (!y.is_zero()) {
    Poly r = mod(k, x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(k, x);
}

FqElem eval(const FieldCtx& k, const Poly& a, FqElem x) {
  FqElem acc = k.zero();
  for (std::size_t i = a.c.size(); i-- > 0;) acc = k.add(k.mul(acc, x), a.c[i]);
  return acc;
}

Poly derivative(const FieldCtx& k, const Poly& a) {
  if (a.c.size() <= 1) return Poly();
  std::vector<FqElem> r(a.c.size() - 1);
  for (std::size_t i = 1; i < a.c.size(); ++i) r[i - 1] = k.mul(k.from_int(static_cast<long long>(i)), a.c[i]);
  return Poly(std::move(r));
}

FqElem resultant(const FieldCtx& k, const Poly& a_in, const Poly& b_in) {
  if (a_in.is_zero() || b_in.is_zero()) return k.zero();
  Poly a = a_in;
  Poly b = b_in;
  FqElem acc = k.one();
  while (true) {
    const int da = a.degree();
    const int db = b.degree();
    if (db == 0) return k.mul(acc, k.pow(b.c[0], da));
    if (da == 0) return k.mul(acc, k.pow(a.c[0], db));
    Poly r = mod(k, a, b);
    if (r.is_zero()) return k.zero();
    // Res(a, b) = (-1)^{da db} lc(b)^{da - dr} Res(b, r)
    if ((static_cast<long long>(da) * db) % 2 == 1) acc = k.neg(acc);
    acc = k.mul(acc, k.pow(b.lead(), da - r.degree()));
    a = std::move(b);
    b = std::move(r);
  }
}

FqElem discriminant(const FieldCtx& k, const Poly& c) {
  if (!c.is_monic()) throw MathError("discriminant requires a monic polynomial");
  const int d = c.degree();
  if (d < 1) throw MathError("discriminant requires positive degree");
  FqElem r = resultant(k, c, derivative(k, c));
  if ((static_cast<long long>(d) * (d - 1) / 2) % 2 == 1) r = k.neg(r);
  return r;
}

namespace {

// a(x) = h(x^p) -> h^{1/p}(x), coefficient-wise p-th roots in F_q.
Poly pth_root(const FieldCtx& k, const Poly& a) {
  const int p = k.p();
  long long root_exp = 1;
  for (int i = 1; i < k.m(); ++i) root_exp *= p;
  std::vector<FqElem> r(a.c.size() / p + 1);
  for (std::size_t i = 0; i < a.c.size(); i += p) r[i / p] = k.pow(a.c[i], root_exp);
  return Poly(std::move(r));
}

// Monic input; appends (squarefree part, multiplicity) pairs.
void squarefree_parts(const FieldCtx& k, const Poly& f, int mult, std::vector<std::pair<Poly, int>>& out) {
  if (f.degree() < 1) return;
  const Poly df = derivative(k, f);
  if (df.is_zero()) {
    squarefree_parts(k, pth_root(k, f), mult * k.p(), out);
    return;
  }
  Poly c = gcd(k, f, df);
  Poly w = exact_div(k, f, c);
  int i = 1;
  while (w.degree() > 0) {
    Poly y = gcd(k, w, c);
    Poly fac = exact_div(k, w, y);
    if (fac.degree() > 0) out.emplace_back(fac, i * mult);
    ++i;
    w = std::move(y);
    c = exact_div(k, c, w);
  }
  if (c.degree() > 0) squarefree_parts(k, pth_root(k, c), mult * k.p(), out);
}

// Distinct-degree split of a squarefree monic f: (product of degree-d primes, d).
std::vector<std::pair<Poly, int>> distinct_degree(const FieldCtx& k, Poly f) {
  std::vector<std::pair<Poly, int>> parts;
  const Poly x = Poly::x();
  Poly h = x;
  for (int d = 1; 2 * d <= f.degree(); ++d) {
    h = powmod(k, h, k.q(), f);
    Poly g = gcd(k, f, sub(k, h, x));
    if (g.degree() > 0) {
      f = exact_div(k, f, g);
      h = mod(k, h, f);
      parts.emplace_back(std::move(g), d);
    }
  }
  if (f.degree() > 0) {
    const int d = f.degree();
    parts.emplace_back(std::move(f), d);
  }
  return parts;
}

}  // namespace

Factorization factorize(const FieldCtx& k, const Poly& a) {
  if (a.is_zero()) throw MathError("factorization of the zero polynomial");
  Factorization out{a.lead(), {}};
  std::vector<std::pair<Poly, int>> sqf;
  squarefree_parts(k, monic(k, a), 1, sqf);
  std::map<std::vector<FqElem>, std::pair<Poly, int>> merged;
  auto record = [&](const Poly& pi, int e) {
    auto key = pi.c;
    key.insert(key.begin(), FqElem{static_cast<std::uint32_t>(pi.degree())});
    auto [it, inserted] = merged.try_emplace(key, pi, 0);
    it->second.second += e;
  };
  for (const auto& [part, mult] : sqf) {
    for (auto& [prod, d] : distinct_degree(k, part)) {
      if (prod.degree() == d) {
        record(prod, mult);
        continue;
      }
      Poly rest = prod;
      Poly cand = monic_at(k, d, 0);
      do {
        if (rest.degree() == d) {
          record(rest, mult);
          break;
        }
        auto [quo, rem] = divmod(k, rest, cand);
        if (rem.is_zero()) {
          record(cand, mult);
          rest = std::move(quo);
        }
      } while (rest.degree() > 0 && next_monic(k, cand));
    }
  }
  for (auto& [key, entry] : merged) out.factors.push_back(std::move(entry));
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& x, const auto& y) { return canonical_less(x.first, y.first); });
  return out;
}

bool is_squarefree(const FieldCtx& k, const Poly& a) {
  if (a.degree() < 1) return true;
  return gcd(k, a, derivative(k, a)).degree() == 0;
}

int count_irreducible_factors(const FieldCtx& k, const Poly& a) {
  int count = 0;
  for (const auto& [prod, d] : distinct_degree(k, monic(k, a))) count += prod.degree() / d;
  return count;
}

bool is_irreducible(const FieldCtx& k, const Poly& a) {
  if (a.degree() < 1) return false;
  return is_squarefree(k, a) && count_irreducible_factors(k, a) == 1;
}

int mobius(const FieldCtx& k, const Poly& c) {
  if (c.is_zero()) throw MathError("Moebius function of zero");
  if (c.degree() == 0) return 1;
  if (!is_squarefree(k, c)) return 0;
  return count_irreducible_factors(k, c) % 2 == 0 ? 1 : -1;
}

std::uint64_t monic_count(const FieldCtx& k, int d) {
  std::uint64_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::uint64_t>(k.q());
  return n;
}

Poly monic_at(const FieldCtx& k, int d, std::uint64_t index) {
  std::vector<FqElem> v(d + 1);
  v[d] = k.one();
  for (int i = d - 1; i >= 0; --i) {
    v[i] = FqElem{static_cast<std::uint32_t>(index % k.q())};
    index /= k.q();
  }
  return Poly(std::move(v));
}

bool next_monic(const FieldCtx& k, Poly& a) {
  const auto q = static_cast<std::uint32_t>(k.q());
  for (int i = a.degree() - 1; i >= 0; --i) {
    if (++a.c[i].code < q) return true;
    a.c[i].code = 0;
  }
  return false;
}

RatFunc RatFunc::make(const FieldCtx& k, const Poly& num, const Poly& den) {
  if (den.is_zero()) throw MathError("rational function with zero denominator");
  if (num.is_zero()) return RatFunc{Poly(), Poly::constant(k.one())};
  const Poly g = gcd(k, num, den);
  Poly n = exact_div(k, num, g);
  Poly d = exact_div(k, den, g);
  const FqElem u = k.inv(d.lead());
  return RatFunc{scale(k, n, u), scale(k, d, u)};
}

RatFunc RatFunc::from_poly(const Poly& a) { return RatFunc{a, Poly::constant(FqElem{1})}; }

RatFunc mul(const FieldCtx& k, const RatFunc& a, const RatFunc& b) {
  return RatFunc::make(k, mul(k, a.num, b.num), mul(k, a.den, b.den));
}

RatFunc div(const FieldCtx& k, const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw MathError("division by the zero rational function");
  return RatFunc::make(k, mul(k, a.num, b.den), mul(k, a.den, b.num));
}

RatFunc pow(const FieldCtx& k, const RatFunc& a, int e) {
  if (e < 0) {
    if (a.is_zero()) throw MathError("negative power of zero");
    return RatFunc::make(k, pow(k, a.den, -e), pow(k, a.num, -e));
  }
  return RatFunc::make(k, pow(k, a.num, e), pow(k, a.den, e));
}

NthPowerReduction reduce_mod_nth_powers(const FieldCtx& k, const RatFunc& r_in) {
  if (r_in.is_zero()) throw MathError("reduction of zero modulo n-th powers");
  const RatFunc r = RatFunc::make(k, r_in.num, r_in.den);
  const int n = k.n();
  const Factorization fn = factorize(k, r.num);
  const int unit_exp = k.log(fn.unit) % n;
  Poly out = Poly::constant(k.exp(unit_exp));
  std::vector<std::pair<Poly, int>> primes = fn.factors;
  if (r.den.degree() > 0) {
    for (auto& [pi, e] : factorize(k, r.den).factors) primes.emplace_back(pi, -e);
  }
  for (const auto& [pi, e] : primes) {
    const int reduced = ((e % n) + n) % n;
    if (reduced > 0) out = mul(k, out, pow(k, pi, reduced));
  }
  return {out, unit_exp};
}

std::string to_string(const Poly& a) {
  if (a.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a.c[i].code);
  }
  return s;
}

Poly parse_poly(const FieldCtx& k, const std::string& s) {
  if (s.empty()) throw ConfigError("empty polynomial string");
  std::vector<FqElem> v;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = s.find(',', start);
    std::string tok = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    long long code = -1;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), code);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || code < 0 || code >= k.q()) {
      throw ConfigError("malformed polynomial string '" + s + "'");
    }
    v.push_back(FqElem{static_cast<std::uint32_t>(code)});
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return Poly(std::move(v));
}

std::string pretty(const Poly& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = a.degree(); i >= 0; --i) {
    const auto c = a.c[i].code;
    if (c == 0) continue;
    if (!first) os << '+';
    first = false;
    if (i == 0 || c != 1) os << c;
    if (i > 0 && c != 1) os << '*';
    if (i > 0) os << 'x';
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

}  // namespace theta
