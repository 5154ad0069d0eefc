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

#include <doctest.h>

#include <random>
#include <tuple>
#include <set>

#include "theta/error.hpp"
#include "theta/polyring.hpp"

using namespace theta;

namespace {

long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

int mobius_int(int d) {
  int r = 1;
  for (int p = 2; p * p <= d; ++p) {
    if (d % p) continue;
    d /= p;
    if (d % p == 0) return 0;
    r = -r;
  }
  return d > 1 ? -r : r;
}

// Gauss's count of monic irreducibles of degree d over F_q.
long long irreducible_count(long long q, int d) {
  long long s = 0;
  for (int e = 1; e <= d; ++e)
    if (d % e == 0) s += mobius_int(d / e) * ipow(q, e);
  return s / d;
}

Poly random_poly(const FieldCtx& k, std::mt19937_64& rng, int deg) {
  std::uniform_int_distribution<std::uint32_t> pick(0, k.q() - 1);
  std::vector<FqElem> c(deg + 1);
  for (auto& v : c) v = FqElem{pick(rng)};
  if (c.back().is_zero()) c.back() = k.one();
  return Poly(std::move(c));
}

}  // namespace

TEST_CASE("irreducible counts") {
  for (auto [p, m, n] : std::vector<std::tuple<int, int, int>>{{3, 1, 2}, {5, 1, 4}, {3, 2, 4}, {7, 1, 3}}) {
    const FieldCtx k = FieldCtx::create(p, m, n);
    for (int d = 1; d <= (k.q() > 7 ? 3 : 4); ++d) {
      long long irr = 0;
      long long sqfree = 0;
      Poly c = monic_at(k, d, 0);
      do {
        irr += is_irreducible(k, c);
        sqfree += is_squarefree(k, c);
      } while (next_monic(k, c));
      CHECK(irr == irreducible_count(k.q(), d));
      CHECK(sqfree == (d == 1 ? k.q() : ipow(k.q(), d) - ipow(k.q(), d - 1)));
    }
  }
}

TEST_CASE("factorization reconstructs its input") {
  const FieldCtx k = FieldCtx::create(5, 2, 4);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 60; ++t) {
    Poly a = random_poly(k, rng, 1 + t % 6);
    if (t % 3 == 0) a = mul(k, a, mul(k, a, Poly::x()));
    if (t % 7 == 0) a = pow(k, a, 5);  // exercises the p-th root step
    const Factorization f = factorize(k, a);
    Poly back = Poly::constant(f.unit);
    for (const auto& [pi, e] : f.factors) {
      CHECK(is_irreducible(k, pi));
      CHECK(pi.is_monic());
      back = mul(k, back, pow(k, pi, e));
    }
    CHECK(back == a);
  }
}

TEST_CASE("division, gcd and evaluation") {
  const FieldCtx k = FieldCtx::create(7, 1, 3);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const Poly a = random_poly(k, rng, 5);
    const Poly b = random_poly(k, rng, 2);
    const auto [q, r] = divmod(k, a, b);
    CHECK(add(k, mul(k, q, b), r) == a);
    CHECK(r.degree() < b.degree());
    const Poly g = gcd(k, mul(k, a, b), mul(k, b, b));
    CHECK(mod(k, mul(k, a, b), g).is_zero());
    CHECK(mod(k, g, monic(k, b)).is_zero());
    CHECK(g.is_monic());
    for (std::uint32_t x = 0; x < 7; ++x) {
      CHECK(eval(k, mul(k, a, b), FqElem{x}) == k.mul(eval(k, a, FqElem{x}), eval(k, b, FqElem{x})));
    }
  }
  CHECK_THROWS_AS(divmod(k, Poly::x(), Poly()), MathError);
}

TEST_CASE("resultants of split polynomials") {
  const FieldCtx k = FieldCtx::create(7, 1, 3);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    // a = prod (x - alpha), so Res(a, b) = prod b(alpha)
    Poly a = Poly::constant(k.one());
    std::vector<FqElem> roots;
    for (int j = 0; j < 1 + t % 4; ++j) {
      const FqElem alpha{static_cast<std::uint32_t>(rng() % 7)};
      roots.push_back(alpha);
      a = mul(k, a, Poly({k.neg(alpha), k.one()}));
    }
    const Poly b = random_poly(k, rng, t % 5);
    FqElem expect = k.one();
    for (const FqElem alpha : roots) expect = k.mul(expect, eval(k, b, alpha));
    CHECK(resultant(k, a, b) == expect);
  }
  // x^2 + bx + c has discriminant b^2 - 4c
  for (std::uint32_t b = 0; b < 7; ++b) {
    for (std::uint32_t c = 0; c < 7; ++c) {
      const Poly f({FqElem{c}, FqElem{b}, k.one()});
      CHECK(discriminant(k, f).code == (b * b + 7 * 4 - 4 * c) % 7);
    }
  }
}

TEST_CASE("mobius and factor counts") {
  const FieldCtx k = FieldCtx::create(5, 1, 2);
  const Poly x = Poly::x();
  const Poly x1({k.one(), k.one()});
  CHECK(mobius(k, x) == -1);
  CHECK(mobius(k, mul(k, x, x1)) == 1);
  CHECK(mobius(k, mul(k, x, x)) == 0);
  CHECK(count_irreducible_factors(k, mul(k, x, x1)) == 2);
}

TEST_CASE("monic enumeration") {
  const FieldCtx k = FieldCtx::create(3, 1, 2);
  CHECK(monic_count(k, 3) == 27);
  std::set<std::string> seen;
  Poly c = monic_at(k, 2, 0);
  CHECK(c == Poly({k.zero(), k.zero(), k.one()}));
  std::uint64_t i = 0;
  do {
    CHECK(c == monic_at(k, 2, i++));
    seen.insert(to_string(c));
  } while (next_monic(k, c));
  CHECK(seen.size() == 9);
  CHECK(monic_at(k, 0, 0).is_one());
}

TEST_CASE("rational functions and n-th power reduction") {
  const FieldCtx k = FieldCtx::create(7, 1, 3);
  const Poly x = Poly::x();
  const Poly x1({k.neg(k.one()), k.one()});
  const RatFunc r = RatFunc::make(k, mul(k, x, x1), pow(k, x, 4));
  CHECK(r.num == x1);
  CHECK(r.den == pow(k, x, 3));
  // x (x-1) / x^4 = (x-1) / x^3 ~ (x-1) mod cubes
  CHECK(reduce_mod_nth_powers(k, r).poly == x1);
  const RatFunc s = RatFunc::make(k, Poly::constant(k.one()), x);  // 1/x ~ x^2
  CHECK(reduce_mod_nth_powers(k, s).poly == mul(k, x, x));
  const NthPowerReduction u = reduce_mod_nth_powers(k, RatFunc::from_poly(scale(k, x, k.from_int(3))));
  CHECK(u.unit_exp == 1);
  CHECK(u.poly.lead() == k.from_int(3));
  CHECK(reduce_mod_nth_powers(k, RatFunc::from_poly(scale(k, x, k.from_int(6)))).poly == x);  // 6 = 3^3
  CHECK_THROWS_AS(reduce_mod_nth_powers(k, RatFunc{}), MathError);
  CHECK(div(k, mul(k, r, s), s) == r);
}

TEST_CASE("string forms") {
  const FieldCtx k = FieldCtx::create(7, 1, 3);
  const Poly a({k.from_int(2), k.zero(), k.one()});
  CHECK(to_string(a) == "2,0,1");
  CHECK(parse_poly(k, "2, 0 ,1") == a);
  CHECK(to_string(Poly()) == "0");
  CHECK(parse_poly(k, "0").is_zero());
  CHECK_THROWS_AS(parse_poly(k, "1,7"), ConfigError);
  CHECK_THROWS_AS(parse_poly(k, "1,,2"), ConfigError);
  CHECK_THROWS_AS(parse_poly(k, ""), ConfigError);
  CHECK(pretty(a).find("x^2") != std::string::npos);
}
