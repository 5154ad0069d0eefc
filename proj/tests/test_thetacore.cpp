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

#include <complex>
#include <numbers>

#include "theta/error.hpp"
#include "theta/thetacore.hpp"

using namespace theta;

namespace {

// Independent numeric oracle over a prime field F_p: the Gauss sum
// g(r, eps, c) for monic c of degree <= 2, by direct enumeration with plain
// integer arithmetic and complex exponentials.
struct PrimeOracle {
  int p;
  int n;
  int g;  // primitive root used for chi

  long long pw(long long b, long long e, long long m) const {
    long long r = 1;
    b %= m;
    if (b < 0) b += m;
    for (; e; e >>= 1, b = b * b % m)
      if (e & 1) r = r * b % m;
    return r;
  }
  // log_zeta of z in mu_n, zeta = g^{(p-1)/n}
  int mu_log(long long z) const {
    const long long zeta = pw(g, (p - 1) / n, p);
    long long cur = 1;
    for (int e = 0; e < n; ++e, cur = cur * zeta % p)
      if (cur == z) return e;
    return -1;
  }
  int chi_log(long long a) const { return mu_log(pw(a, (p - 1) / n, p)); }
  // (xi / c)_n for monic c = x^2 + c1 x + c0 as log_zeta, -1 when not coprime.
  int symbol2(long long x0, long long x1, long long c0, long long c1) const {
    std::vector<long long> roots;
    for (long long a = 0; a < p; ++a)
      if ((a * a + c1 * a + c0) % p == 0) roots.push_back(a);
    if (roots.size() == 1) roots.push_back(roots[0]);
    if (!roots.empty()) {
      int total = 0;
      for (long long a : roots) {
        const long long v = (x0 + x1 * a) % p;
        if (v == 0) return -1;
        total += chi_log(v);
      }
      return total % n;
    }
    if (x0 == 0 && x1 == 0) return -1;
    // (x0 + x1 t)^{(p^2-1)/n} in F_p[t]/(t^2 + c1 t + c0)
    long long e = (static_cast<long long>(p) * p - 1) / n;
    long long r0 = 1, r1 = 0, b0 = x0, b1 = x1;
    auto mulm = [&](long long a0, long long a1, long long d0, long long d1, long long& o0, long long& o1) {
      const long long t2 = a1 * d1 % p;
      o0 = ((a0 * d0 - t2 * c0) % p + p) % p;
      o1 = ((a0 * d1 + a1 * d0 - t2 * c1) % p + p) % p;
    };
    for (; e; e >>= 1) {
      if (e & 1) mulm(r0, r1, b0, b1, r0, r1);
      mulm(b0, b1, b0, b1, b0, b1);
    }
    return mu_log(r0);
  }
  std::complex<double> gauss2(long long r0, long long r1, long long c0, long long c1) const {
    std::complex<double> s = 0;
    for (long long x0 = 0; x0 < p; ++x0) {
      for (long long x1 = 0; x1 < p; ++x1) {
        const int l = symbol2(x0, x1, c0, c1);
        if (l < 0) continue;
        // r * xi mod c, coefficient of x
        long long a0 = r0 * x0, a1 = r0 * x1 + r1 * x0, a2 = r1 * x1;
        a1 -= a2 * c1;
        a0 -= a2 * c0;
        const long long res = ((a1 % p) + p) % p;
        s += std::polar(1.0, 2 * std::numbers::pi * (static_cast<double>(l) / n + static_cast<double>(res) / p));
      }
    }
    return s;
  }
};

bool near(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-8 * (1 + std::abs(b)); }

}  // namespace

TEST_CASE("index geometry") {
  const IndexGeometry a = index_geometry(3, 1, 0);
  CHECK(a.i_prime == 2);
  CHECK(a.R == 0);
  const IndexGeometry b = index_geometry(3, 2, 0);
  CHECK(b.i_prime == 0);
  CHECK(b.R == 1);
  CHECK(index_geometry(3, 1, -1).i == 2);
  for (int n = 2; n <= 6; ++n)
    for (int d = 0; d <= 12; ++d)
      for (int i = 0; i < n; ++i) {
        const IndexGeometry g = index_geometry(n, d, i);
        if (g.i != g.i_prime) CHECK(g.R1 + g.R2 == 2 * g.R - 1);
      }
}

TEST_CASE("Gauss sums against an independent oracle") {
  const ThetaEngine e(FieldCtx::create(7, 1, 3));
  const FieldCtx& k = e.field();
  const PrimeOracle o{7, 3, 3};
  for (long long c0 = 0; c0 < 7; ++c0) {
    for (long long c1 = 0; c1 < 7; ++c1) {
      const Poly c({k.from_int(c0), k.from_int(c1), k.one()});
      for (auto [r0, r1] : {std::pair{1LL, 0LL}, {0LL, 1LL}, {1LL, 1LL}, {3LL, 5LL}}) {
        const Poly r({k.from_int(r0), k.from_int(r1)});
        const CycNum v = e.gauss_sum_bruteforce(r, c);
        CHECK(near(v.complex_eval(), o.gauss2(r0, r1, c0, c1)));
        CHECK(e.gauss_sum(r, c) == v);
        if (gcd(k, r, c).degree() == 0) CHECK(e.gauss_sum_dh(r, c) == v);
      }
    }
  }
  CHECK_THROWS_AS(e.gauss_sum_dh(Poly::x(), mul(k, Poly::x(), Poly::x())), MathError);
}

TEST_CASE("rho0(x, 2) over F_7 with n = 3") {
  const ThetaEngine e(FieldCtx::create(7, 1, 3));
  const FieldCtx& k = e.field();
  const PrimeOracle o{7, 3, 3};
  std::complex<double> oracle = 0;
  for (long long c0 = 0; c0 < 7; ++c0)
    for (long long c1 = 0; c1 < 7; ++c1) oracle += o.gauss2(0, 1, c0, c1);
  const CycNum v = e.rho0(RatFunc::from_poly(Poly::x()), 2);
  CHECK(near(v.complex_eval(), oracle));
  CHECK(v == e.tau(2).scaled(49));
  CHECK(e.rho0(RatFunc::from_poly(Poly::x()), 1).is_zero());  // i = i'
  CHECK(e.rho0(RatFunc::from_poly(Poly::x()), 0) == CycNum::one(e.cyc()));
  // 1/x reduces to x^2
  CHECK(e.rho0(RatFunc::make(k, Poly::constant(k.one()), Poly::x()), 0) ==
        e.rho0(RatFunc::from_poly(mul(k, Poly::x(), Poly::x())), 0));
}

TEST_CASE("coefficient sums: all paths agree") {
  for (auto [p, n] : {std::pair{5, 2}, {7, 3}, {5, 4}}) {
    ThetaEngine e(FieldCtx::create(p, 1, n));
    const FieldCtx& k = e.field();
    const Poly x = Poly::x();
    for (const Poly& r : {Poly::constant(k.one()), x, mul(k, x, Poly({k.one(), k.one()})), mul(k, x, x)}) {
      for (int d = 0; d <= 3; ++d) {
        const CycNum brute = e.c_bruteforce(r, d);
        CHECK(e.c_direct(r, d) == brute);
        CHECK(e.c_full(r, d) == brute);
        if (e.r_star_applicable(r)) CHECK(e.c_decomposed(r, d) == brute);
        CHECK(e.c_star(r, d) == e.c_star_alt(r, d));
      }
    }
    e.set_jobs(4);
    CHECK(e.c_direct(x, 4) == ThetaEngine(FieldCtx::create(p, 1, n), 1).c_direct(x, 4));
  }
}

TEST_CASE("Psi for R = 0 and R = 1") {
  const ThetaEngine e(FieldCtx::create(7, 1, 3));
  const FieldCtx& k = e.field();
  const Poly x = Poly::x();
  const PsiPoly r0 = e.psi_polynomial(x, 0);
  REQUIRE(r0.D.size() == 1);
  CHECK(r0.D[0] == e.c_full(x, 0));
  const Poly x2 = mul(k, x, x);  // sigma = 3, i = 1 gives R = 0; i = 0 gives R = 1
  const PsiPoly r1 = e.psi_polynomial(x2, 0);
  REQUIRE(r1.D.size() == 2);
  const CycNum C0 = e.c_full(x2, 0);
  const CycNum C1 = e.c_full(x2, 3);
  CHECK(r1.D[1] == C1 * e.q_power(-3) - C0.scaled(6));
  // i = i' with R >= 0: individual D_j survive, Psi(q^{-n-1}) vanishes
  const auto D = e.d_coefficients(x2, 0, 2);
  CHECK(!D[0].is_zero());
  CHECK((D[0] + D[1].divided(7)).is_zero());
  CHECK(e.rho0_poly(x2, 0).is_zero());
  // eta eta' = q^{-1}
  for (int i = 0; i < 3; ++i) CHECK(e.eta(4, i) * e.eta_prime(4, i) == e.q_power(-1));
}

TEST_CASE("Moebius transforms") {
  const FieldCtx k = FieldCtx::create(5, 1, 4);
  CHECK(pgl2_elements(k).size() == 120);
  const Poly x = Poly::x();
  const Mobius2x2 id{k.one(), k.zero(), k.zero(), k.one()};
  const Mobius2x2 s{k.zero(), k.neg(k.one()), k.one(), k.zero()};
  for (int i = 0; i < 4; ++i) {
    CHECK(reduce_mod_nth_powers(k, pgl2_transform(k, RatFunc::from_poly(mul(k, x, x)), id, i)).poly == mul(k, x, x));
    for (int e0 = 0; e0 <= 3; ++e0) {
      const RatFunc got = pgl2_transform(k, RatFunc::from_poly(pow(k, x, e0)), s, i);
      // r(-1/x) x^{2i-2} = (-1)^{e0} x^{-e0+2i-2}
      const int ex = -e0 + 2 * i - 2;
      const Poly sign = Poly::constant(e0 % 2 ? k.neg(k.one()) : k.one());
      const RatFunc want = ex >= 0 ? RatFunc::from_poly(mul(k, sign, pow(k, x, ex)))
                                   : RatFunc::make(k, sign, pow(k, x, -ex));
      CHECK(reduce_mod_nth_powers(k, got).poly == reduce_mod_nth_powers(k, want).poly);
    }
  }
  const Mobius2x2 singular{k.one(), k.one(), k.one(), k.one()};
  CHECK_THROWS_AS(pgl2_transform(k, RatFunc::from_poly(x), singular, 0), MathError);
}

TEST_CASE("Hecke relations") {
  const ThetaEngine e(FieldCtx::create(7, 1, 3));
  const FieldCtx& k = e.field();
  const HeckeInfinity h = hecke_infinity(e, Poly::x(), 0);
  CHECK(h.rho_lo == h.forward_rhs);
  CHECK(h.rho_hi == h.backward_rhs);
  CHECK(h.composition == CycNum::one(e.cyc()));
  CHECK_THROWS_AS(hecke_infinity(e, Poly::x(), 1), MathError);
  const Poly r_o = Poly::constant(k.one());
  const HeckeFinite last = hecke_finite(e, r_o, Poly::x(), 2, 0);
  CHECK(last.lhs.is_zero());
  for (int i = 0; i < 3; ++i) {
    const HeckeFinite f = hecke_finite(e, r_o, Poly::x(), 0, i);
    CHECK(f.lhs == f.rhs);
  }
  CHECK_THROWS_AS(hecke_finite(e, Poly::x(), Poly::x(), 0, 0), ConfigError);
}

TEST_CASE("eta convention determination") {
  const ThetaEngine a(FieldCtx::create(7, 1, 3));
  const ThetaEngine b(FieldCtx::create(5, 1, 4));
  const EtaDetermination d = determine_eta_convention({&a, &b});
  REQUIRE(d.result.has_value());
  CHECK(*d.result == frozen_eta_convention());
  CHECK(d.cases > 0);
}

TEST_CASE("Gauss sums at prime powers") {
  for (auto [p, n] : {std::pair{5, 2}, {7, 3}, {5, 4}}) {
    const ThetaEngine e(FieldCtx::create(p, 1, n));
    const FieldCtx& k = e.field();
    const Poly x = Poly::x();
    const Poly x1({k.neg(k.one()), k.one()});
    for (int a = 0; a <= 3; ++a) {
      for (int b = 0; b <= 1; ++b) {
        const Poly r = mul(k, pow(k, x, a), pow(k, x1, b));
        for (int t = 1; t <= 4; ++t) {
          CHECK(e.gauss_sum(r, pow(k, x, t)) == e.gauss_sum_bruteforce(r, pow(k, x, t)));
          CHECK(e.gauss_sum(r, mul(k, pow(k, x, t), x1)) == e.gauss_sum_bruteforce(r, mul(k, pow(k, x, t), x1)));
        }
      }
    }
  }
}
