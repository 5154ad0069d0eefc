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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "theta/cyclokit.hpp"
#include "theta/error.hpp"

using theta::CycNum;
using theta::CyclotomicField;

namespace {

std::complex<double> root(int N, long long k) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / N);
}

bool near(std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-9 * (1 + std::abs(b)); }

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(CyclotomicField::get(7)->cyclotomic_poly() == std::vector<std::int64_t>{1, 1, 1, 1, 1, 1, 1});
  CHECK(CyclotomicField::get(12)->cyclotomic_poly() == std::vector<std::int64_t>{1, 0, -1, 0, 1});
  CHECK(CyclotomicField::get(21)->degree() == 12);
  CHECK(CyclotomicField::get(156)->degree() == 48);
  CHECK(CyclotomicField::get(10) == CyclotomicField::get(10));
}

TEST_CASE("ring operations agree with complex evaluation") {
  for (int N : {5, 12, 21, 20}) {
    const auto F = CyclotomicField::get(N);
    std::mt19937_64 rng(N);
    std::uniform_int_distribution<int> coef(-5, 5);
    std::uniform_int_distribution<int> expo(0, N - 1);
    for (int t = 0; t < 20; ++t) {
      CycNum a = CycNum::zero(F);
      CycNum b = CycNum::zero(F);
      std::complex<double> za = 0;
      std::complex<double> zb = 0;
      for (int s = 0; s < 4; ++s) {
        const int c1 = coef(rng), e1 = expo(rng), c2 = coef(rng), e2 = expo(rng);
        a = a + CycNum::root(F, e1).scaled(c1);
        za += static_cast<double>(c1) * root(N, e1);
        b = b + CycNum::root(F, e2).scaled(c2);
        zb += static_cast<double>(c2) * root(N, e2);
      }
      CHECK(near(a.complex_eval(), za));
      CHECK(near((a + b).complex_eval(), za + zb));
      CHECK(near((a - b).complex_eval(), za - zb));
      CHECK(near((a * b).complex_eval(), za * zb));
      CHECK(near(a.conj().complex_eval(), std::conj(za)));
      if (!b.is_zero()) {
        CHECK(near((a / b).complex_eval(), za / zb));
        CHECK(b * b.inverse() == CycNum::one(F));
      }
    }
  }
}

TEST_CASE("roots of unity and galois action") {
  const auto F = CyclotomicField::get(21);
  CHECK(CycNum::root(F, 21) == CycNum::one(F));
  CHECK(CycNum::root(F, 5).pow(21) == CycNum::one(F));
  CHECK(CycNum::root_of_unity(F, 3, 1) == CycNum::root(F, 7));
  CHECK_THROWS_AS(CycNum::root_of_unity(F, 5, 1), theta::ConfigError);
  CHECK(CycNum::root(F, 4).galois(2) == CycNum::root(F, 8));
  // sum of all 21st roots vanishes
  CycNum s = CycNum::zero(F);
  for (int k = 0; k < 21; ++k) s = s + CycNum::root(F, k);
  CHECK(s.is_zero());
  CHECK_THROWS_AS(CycNum::zero(F).inverse(), theta::MathError);
}

TEST_CASE("subfield and integrality membership") {
  const auto F = CyclotomicField::get(21);  // n = 3, p = 7
  const CycNum w = CycNum::root(F, 7);     // zeta_3
  CHECK(w.in_subfield(3));
  CHECK(w.in_integers_of_subfield(3));
  CHECK(w.divided(2).in_subfield(3));
  CHECK(!w.divided(2).in_integers_of_subfield(3));
  CHECK(!CycNum::root(F, 3).in_subfield(3));
  // the quadratic Gauss sum of F_7 lies in Q(sqrt(-7)), not in Q(zeta_3)
  CycNum g = CycNum::zero(F);
  for (int a = 1; a < 7; ++a) {
    const bool square = a == 1 || a == 2 || a == 4;
    g = g + CycNum::root(F, 3 * a).scaled(square ? 1 : -1);
  }
  CHECK(g * g == CycNum::rational(F, -7));
  CHECK(!g.in_subfield(3));
  CHECK((g * g).in_integers_of_subfield(3));
}

TEST_CASE("serialization") {
  const auto F = CyclotomicField::get(20);
  const CycNum a = (CycNum::root(F, 3).scaled(7) + CycNum::rational(F, mpq_class(-2, 3))).divided(5);
  CHECK(CycNum::from_json(F, a.to_json()) == a);
  CHECK(a.to_json().dump() == CycNum::from_json(F, a.to_json()).to_json().dump());
  CHECK(CycNum::rational(F, mpq_class(3, 4)).to_rational() == mpq_class(3, 4));
  CHECK(CycNum::zero(F).to_string() == "(0,0,0,0,0,0,0,0)");
  CHECK(CycNum::root(F, 1).divided(3).to_string() == "(0,1,0,0,0,0,0,0)/3");
}

TEST_CASE("character helpers") {
  const theta::FieldCtx k = theta::FieldCtx::create(7, 1, 3);
  const auto F = theta::cyc_field_for(k);
  CHECK(F->order() == 21);
  // e_o sums to zero over F_q, eps is multiplicative
  CycNum s = CycNum::zero(F);
  for (std::uint32_t a = 0; a < 7; ++a) s = s + theta::e_o(k, theta::FqElem{a});
  CHECK(s.is_zero());
  const theta::FqElem z = k.zeta_n();
  CHECK(theta::eps(k, k.mul(z, z)) == theta::eps(k, z) * theta::eps(k, z));
  CHECK(theta::eps(k, z) == CycNum::root_of_unity(F, 3, 1));
}
