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

#include "theta/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "theta/error.hpp"

namespace theta {

namespace {

constexpr int kSchema = 1;

long long pos_mod(long long a, long long m) {
  const long long r = a % m;
  return r < 0 ? r + m : r;
}

// Largest enumeration degree needed for rho0(r, i); -1 when it vanishes outright.
int rho_cost(int n, int deg_r, int i) {
  const IndexGeometry g = index_geometry(n, deg_r, i);
  if (g.R < 0 || g.i == g.i_prime) return -1;
  return g.i + g.R * n;
}

std::string hint_rho(const SuiteOptions& opt, const Poly& r, int i) {
  return "theta rho " + opt.cli_prefix + " --r " + to_string(r) + " --i " + std::to_string(i);
}

std::string hint_gauss(const SuiteOptions& opt, const Poly& r, const Poly& c) {
  return "theta gauss " + opt.cli_prefix + " --r " + to_string(r) + " --c " + to_string(c);
}

std::string mismatch(const std::string& what, const CycNum& lhs, const CycNum& rhs, const std::string& hint) {
  return what + ": lhs=" + lhs.to_string() + " rhs=" + rhs.to_string() + " [" + hint + "]";
}

Poly x_minus(const FieldCtx& k, long long a) {
  return Poly({k.neg(k.from_int(a)), k.one()});
}

Poly smallest_irreducible(const FieldCtx& k, int d) {
  Poly c = monic_at(k, d, 0);
  do {
    if (is_irreducible(k, c)) return c;
  } while (next_monic(k, c));
  throw MathError("no irreducible polynomial found");
}

Poly r_of(const FieldCtx& k, int a, int b) {
  return mul(k, pow(k, Poly::x(), a), pow(k, x_minus(k, 1), b));
}

SuiteReport named(std::string name) {
  SuiteReport rep;
  rep.name = std::move(name);
  return rep;
}

void record(SuiteReport& rep, const Poly& r, int i, const CycNum& v) { rep.rho_values.push_back({r, i, v}); }

SuiteReport suite_dh(const ThetaEngine& e, const SuiteOptions& opt) {
  const FieldCtx& k = e.field();
  SuiteReport rep = named("dh");
  const Poly x = Poly::x();
  const std::vector<Poly> rs{Poly::constant(k.one()), x, Poly({k.one(), k.one()}), mul(k, x, x),
                             mul(k, x, x_minus(k, 1))};
  for (const Poly& r : rs) {
    for (int d = 0; d <= opt.dh_max_deg; ++d) {
      Poly c = monic_at(k, d, 0);
      do {
        if (gcd(k, r, c).degree() != 0) continue;
        ++rep.cases;
        const CycNum a = e.gauss_sum_dh(r, c);
        const CycNum b = e.gauss_sum_bruteforce(r, c);
        if (!(a == b)) {
          rep.failures.push_back(mismatch("r=" + to_string(r) + " c=" + to_string(c), a, b, hint_gauss(opt, r, c)));
        }
      } while (next_monic(k, c));
    }
  }
  return rep;
}

SuiteReport suite_pellet(const ThetaEngine& e, const SuiteOptions& opt) {
  const FieldCtx& k = e.field();
  SuiteReport rep = named("pellet");
  for (int d = 1; d <= opt.pellet_max_deg; ++d) {
    Poly c = monic_at(k, d, 0);
    do {
      ++rep.cases;
      const int lhs = k.quadratic_char(discriminant(k, c));
      const int rhs = mobius(k, c) * (d % 2 == 0 ? 1 : -1);
      if (lhs != rhs) {
        rep.failures.push_back("c=" + to_string(c) + ": omega(D(c))=" + std::to_string(lhs) +
                               " mu(c)(-1)^deg=" + std::to_string(rhs));
      }
    } while (next_monic(k, c));
  }
  return rep;
}

SuiteReport suite_disc_legendre(const ThetaEngine& e, const SuiteOptions& opt) {
  const FieldCtx& k = e.field();
  SuiteReport rep = named("disc-legendre");
  for (int d = 1; d <= opt.pellet_max_deg; ++d) {
    Poly c = monic_at(k, d, 0);
    do {
      if (!is_squarefree(k, c)) continue;
      ++rep.cases;
      const SymbolValue lhs = residue_symbol(k, derivative(k, c), c);
      FqElem disc = discriminant(k, c);
      if (d % 4 == 2 || d % 4 == 3) disc = k.neg(disc);
      const FqElem rhs = k.chi(disc);
      if (lhs.zero || !(lhs.value == rhs)) {
        rep.failures.push_back("c=" + to_string(c) + ": (c'/c)_n=" +
                               (lhs.zero ? std::string("zero") : std::to_string(lhs.value.code)) +
                               " chi(+-D(c))=" + std::to_string(rhs.code));
      }
    } while (next_monic(k, c));
  }
  return rep;
}

SuiteReport suite_psi_truncation(const ThetaEngine& e, const SuiteOptions& opt) {
  const FieldCtx& k = e.field();
  const int n = k.n();
  SuiteReport rep = named("psi-truncation");
  for (const Poly& r : generator_set(k)) {
    for (int i = 0; i < n; ++i) {
      const IndexGeometry g = index_geometry(n, r.degree(), i);
      int last = -1;
      for (int j = std::max(g.R + 1, 0); j <= g.R + 2; ++j) {
        if (g.i + j * n <= opt.cap) last = j;
        else ++rep.skipped;
      }
      if (last < 0) continue;
      const auto D = e.d_coefficients(r, i, last + 1);
      for (int j = std::max(g.R + 1, 0); j <= last; ++j) {
        ++rep.cases;
        if (!D[j].is_zero()) {
          rep.failures.push_back("r=" + to_string(r) + " i=" + std::to_string(i) + " R=" + std::to_string(g.R) +
                                 ": D_" + std::to_string(j) + "=" + D[j].to_string() + " [" +
                                 hint_rho(opt, r, i) + "]");
        }
      }
    }
  }
  return rep;
}

SuiteReport suite_functional_eq(const ThetaEngine& e, const SuiteOptions& opt) {
  const FieldCtx& k = e.field();
  const int n = k.n();
  SuiteReport rep = named("functional-eq");
  for (const Poly& r : generator_set(k)) {
    for (int i = 0; i < n; ++i) {
      const IndexGeometry g = index_geometry(n, r.degree(), i);
      if (g.R < 0 || g.i >= g.i_prime) continue;
      if (g.i_prime + g.R * n > opt.cap) {
        ++rep.skipped;
        continue;
      }
      const PsiPoly F = e.psi_polynomial(r, g.i, opt.eta);
      const PsiPoly G = e.psi_polynomial(r, g.i_prime, opt.eta);
      const std::string where = "r=" + to_string(r) + " i=" + std::to_string(g.i) + " i'=" +
                                std::to_string(g.i_prime) + " R=" + std::to_string(g.R);
      auto checks = functional_equation_relations(e, F, G);
      for (auto& c : functional_equation_closed_forms(e, F, G)) checks.push_back(std::move(c));
      for (const auto& c : checks) {
        ++rep.cases;
        if (!(c.lhs == c.rhs)) rep.failures.push_back(mismatch(where + " " + c.label, c.lhs, c.rhs, hint_rho(opt, r, g.i)));
      }
      const int hf = g.R / 2 + 1;
      const int hg = g.R % 2 == 0 ? g.R / 2 : (g.R + 1) / 2;
      ++rep.cases;
      const std::vector<CycNum> half_F(F.D.begin(), F.D.begin() + hf);
      const std::vector<CycNum> half_G(G.D.begin(), G.D.begin() + hg);
      const auto [D, Dp] = functional_equation_expand(e, F, half_F, half_G);
      if (!(D == F.D) || !(Dp == G.D)) rep.failures.push_back(where + ": expansion from half coefficients differs");
    }
  }
  return rep;
}

std::vector<Mobius2x2> random_gl2(const FieldCtx& k, std::mt19937_64& rng, int count) {
  std::vector<Mobius2x2> out;
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(k.q() - 1));
  while (static_cast<int>(out.size()) < count) {
    Mobius2x2 g{FqElem{pick(rng)}, FqElem{pick(rng)}, FqElem{pick(rng)}, FqElem{pick(rng)}};
    if (!det(k, g).is_zero()) out.push_back(g);
  }
  return out;
}

std::string show(const Mobius2x2& g) {
  return "(" + std::to_string(g.a.code) + " " + std::to_string(g.b.code) + "; " + std::to_string(g.c.code) + " " +
         std::to_string(g.d.code) + ")";
}

SuiteReport suite_theorem1(const ThetaEngine& e, const SuiteOptions& opt) {
  const FieldCtx& k = e.field();
  const int n = k.n();
  SuiteReport rep = named("theorem1");
  std::mt19937_64 rng(opt.seed);
  std::vector<Mobius2x2> gs;
  if (k.q() <= 7) gs = pgl2_elements(k);
  const auto random = random_gl2(k, rng, opt.random_g);
  gs.insert(gs.end(), random.begin(), random.end());
  rep.notes.push_back("seed " + std::to_string(opt.seed) + ", " + std::to_string(gs.size()) + " matrices" +
                      (k.q() <= 7 ? " (all of PGL_2 plus random)" : " (random)"));
  const Poly x = Poly::x();
  const std::vector<Poly> rs{x, mul(k, x, x), mul(k, x, x_minus(k, 1))};
  for (const Poly& r : rs) {
    for (int i = 0; i < n; ++i) {
      if (rho_cost(n, r.degree(), i) > opt.cap) {
        rep.skipped += static_cast<long long>(gs.size());
        continue;
      }
      const CycNum base = e.rho0(RatFunc::from_poly(r), i);
      record(rep, r, i, base);
      for (const auto& g : gs) {
        const RatFunc rt = pgl2_transform(k, RatFunc::from_poly(r), g, i);
        const Poly red = reduce_mod_nth_powers(k, rt).poly;
        if (rho_cost(n, red.degree(), i) > opt.cap) {
          ++rep.skipped;
          continue;
        }
        ++rep.cases;
        const CycNum v = e.rho0_poly(red, i);
        record(rep, red, i, v);
        if (!(v == base)) {
          rep.failures.push_back(mismatch("r=" + to_string(r) + " i=" + std::to_string(i) + " g=" + show(g) +
                                              " r_i^g~" + to_string(red),
                                          base, v, hint_rho(opt, red, i)));
        }
      }
    }
  }
  // cocycle: (r_i^g)_i^h = r_i^{gh}
  const auto pairs = random_gl2(k, rng, 2 * opt.random_g);
  for (std::size_t t = 0; t + 1 < pairs.size(); t += 2) {
    for (const Poly& r : rs) {
      for (int i = 0; i < n; ++i) {
        ++rep.cases;
        const RatFunc step = pgl2_transform(k, pgl2_transform(k, RatFunc::from_poly(r), pairs[t], i), pairs[t + 1], i);
        const RatFunc once = pgl2_transform(k, RatFunc::from_poly(r), compose(k, pairs[t], pairs[t + 1]), i);
        if (!(reduce_mod_nth_powers(k, step).poly == reduce_mod_nth_powers(k, once).poly)) {
          rep.failures.push_back("group law fails for r=" + to_string(r) + " g=" + show(pairs[t]) +
                                 " h=" + show(pairs[t + 1]) + " i=" + std::to_string(i));
        }
      }
    }
  }
  return rep;
}

SuiteReport suite_hecke_inf(const ThetaEngine& e, const SuiteOptions& opt) {
  const FieldCtx& k = e.field();
  const int n = k.n();
  SuiteReport rep = named("hecke-inf");
  long long literal_ok = 0;
  long long literal_total = 0;
  const CycNum one = CycNum::one(e.cyc());
  for (const Poly& r : generator_set(k)) {
    for (int i = 0; i < n; ++i) {
      const IndexGeometry g = index_geometry(n, r.degree(), i);
      if (g.R < 0) continue;
      if (g.i == g.i_prime) {
        if (g.i + g.R * n > opt.cap) {
          ++rep.skipped;
          continue;
        }
        // Psi(q^{-n-1}) itself must vanish, not only by convention.
        ++rep.cases;
        const auto D = e.d_coefficients(r, i, g.R + 1);
        CycNum v = CycNum::zero(e.cyc());
        for (std::size_t j = D.size(); j-- > 0;) v = v.divided(k.q()) + D[j];
        if (!v.is_zero()) {
          rep.failures.push_back("r=" + to_string(r) + " i=i'=" + std::to_string(i) + ": Psi(q^{-n-1})=" +
                                 v.to_string() + " [" + hint_rho(opt, r, i) + "]");
        }
        continue;
      }
      if (g.i > g.i_prime) continue;
      if (g.i_prime + g.R * n > opt.cap) {
        ++rep.skipped;
        continue;
      }
      const HeckeInfinity h = hecke_infinity(e, r, i, opt.eta);
      record(rep, r, h.lo, h.rho_lo);
      record(rep, r, h.hi, h.rho_hi);
      const std::string where = "r=" + to_string(r) + " i=" + std::to_string(h.lo) + " i'=" + std::to_string(h.hi);
      rep.cases += 3;
      if (!(h.rho_lo == h.forward_rhs)) rep.failures.push_back(mismatch(where + " rho0(i) = eta rho0(i')", h.rho_lo, h.forward_rhs, hint_rho(opt, r, h.lo)));
      if (!(h.rho_hi == h.backward_rhs)) rep.failures.push_back(mismatch(where + " rho0(i') = q eta' rho0(i)", h.rho_hi, h.backward_rhs, hint_rho(opt, r, h.hi)));
      if (!(h.composition == one)) rep.failures.push_back(mismatch(where + " composition", h.composition, one, hint_rho(opt, r, h.lo)));
      if (!h.rho_lo.is_zero() || !h.rho_hi.is_zero()) {
        ++literal_total;
        if (h.rho_lo == h.literal_rhs) ++literal_ok;
      }
    }
  }
  rep.notes.push_back("unrescaled form eps chi(-1)^{i sigma} tau(eps chi^{i-i'}) q^{-1} holds in " +
                      std::to_string(literal_ok) + " of " + std::to_string(literal_total) +
                      " nonzero cases (reported only)");
  return rep;
}

SuiteReport suite_hecke_fin(const ThetaEngine& e, const SuiteOptions& opt) {
  const FieldCtx& k = e.field();
  const int n = k.n();
  SuiteReport rep = named("hecke-fin");
  const Poly pi = Poly::x();
  const CycNum one = CycNum::one(e.cyc());
  for (const Poly& r_o : {Poly::constant(k.one()), x_minus(k, 1)}) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const Poly lhs_r = mul(k, r_o, pow(k, pi, j));
        const int kk = (j + 1) * pi.degree();
        const Poly rhs_r = mul(k, r_o, pow(k, pi, std::max(0, n - 2 - j)));
        const int ti = static_cast<int>(pos_mod(i - kk, n));
        if (rho_cost(n, lhs_r.degree(), i) > opt.cap || (j < n - 1 && rho_cost(n, rhs_r.degree(), ti) > opt.cap)) {
          ++rep.skipped;
          continue;
        }
        const HeckeFinite h = hecke_finite(e, r_o, pi, j, i);
        record(rep, lhs_r, i, h.lhs);
        const std::string where = "r_o=" + to_string(r_o) + " pi=" + to_string(pi) + " j=" + std::to_string(j) +
                                  " i=" + std::to_string(i);
        ++rep.cases;
        if (!(h.lhs == h.rhs)) rep.failures.push_back(mismatch(where, h.lhs, h.rhs, hint_rho(opt, lhs_r, i)));
        if (j < n - 1) {
          ++rep.cases;
          const HeckeFinite back = hecke_finite(e, r_o, pi, n - 2 - j, h.target_i);
          const CycNum prod = h.factor * back.factor;
          if (!(prod == one)) rep.failures.push_back(mismatch(where + " chain", prod, one, hint_rho(opt, lhs_r, i)));
        }
      }
    }
  }
  return rep;
}

SuiteReport suite_nth_power(const ThetaEngine& e, const SuiteOptions& opt) {
  const FieldCtx& k = e.field();
  const int n = k.n();
  SuiteReport rep = named("nth-power");
  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  const Poly x = Poly::x();
  const std::vector<Poly> rs{x, Poly({k.one(), k.one()}), mul(k, x, x_minus(k, 1))};
  long long unit_ok = 0;
  long long unit_total = 0;
  for (const Poly& r : rs) {
    for (int hd = 1; hd <= 2; ++hd) {
      for (int t = 0; t < 3; ++t) {
        const Poly h = monic_at(k, hd, rng() % monic_count(k, hd));
        const Poly rh = mul(k, r, pow(k, h, n));
        for (int i = 0; i < n; ++i) {
          if (rho_cost(n, rh.degree(), i) > opt.cap) {
            ++rep.skipped;
            continue;
          }
          ++rep.cases;
          const CycNum base = e.rho0(RatFunc::from_poly(r), i);
          const CycNum direct = e.rho0_poly(rh, i);
          record(rep, r, i, base);
          if (!(base == direct)) {
            rep.failures.push_back(mismatch("r=" + to_string(r) + " h=" + to_string(h) + " i=" + std::to_string(i), base,
                                            direct, hint_rho(opt, rh, i)));
          }
          // non-monic h: reported only
          const Poly ruh = mul(k, r, pow(k, scale(k, h, k.generator()), n));
          ++unit_total;
          if (e.rho0_poly(ruh, i) == base) ++unit_ok;
        }
      }
    }
  }
  rep.notes.push_back("non-monic h (h scaled by the generator): " + std::to_string(unit_ok) + " of " +
                      std::to_string(unit_total) + " agree (reported only)");
  return rep;
}

SuiteReport suite_integrality(const ThetaEngine& e, const SuiteOptions& opt) {
  const FieldCtx& k = e.field();
  const int n = k.n();
  SuiteReport rep = named("integrality");
  std::vector<Poly> rs = generator_set(k);
  rs.push_back(mul(k, Poly::x(), Poly::x()));
  for (const Poly& r : rs) {
    for (int i = 0; i < n; ++i) {
      if (rho_cost(n, r.degree(), i) > opt.cap) {
        ++rep.skipped;
        continue;
      }
      ++rep.cases;
      const RhoRecord rec{r, i, e.rho0_poly(r, i)};
      rep.rho_values.push_back(rec);
      if (!rho_integrality(e, rec)) {
        rep.failures.push_back("r=" + to_string(r) + " i=" + std::to_string(i) + ": rho0=" + rec.value.to_string() +
                               " not integral after scaling [" + hint_rho(opt, r, i) + "]");
      }
    }
  }
  return rep;
}

SuiteReport suite_two_prime(const ThetaEngine& e, const SuiteOptions& opt) {
  const FieldCtx& k = e.field();
  const int n = k.n();
  SuiteReport rep = named("two-prime-vanishing");
  const int top = n / 2 - 1;
  for (int e0 = 1; e0 <= top; ++e0) {
    for (int e1 = e0; e1 <= top; ++e1) {
      for (int i = e0 + 1; i <= (e0 + e1 - 1) / 2; ++i) {
        const Poly r = r_of(k, e0, e1);
        if (rho_cost(n, r.degree(), i) > opt.cap) {
          ++rep.skipped;
          continue;
        }
        ++rep.cases;
        const CycNum v = e.rho0_poly(r, i);
        record(rep, r, i, v);
        if (!v.is_zero()) {
          rep.failures.push_back("e0=" + std::to_string(e0) + " e1=" + std::to_string(e1) + " i=" + std::to_string(i) +
                                 ": rho0=" + v.to_string() + " [" + hint_rho(opt, r, i) + "]");
        }
      }
    }
  }
  if (rep.cases + rep.skipped == 0) rep.notes.push_back("no admissible (e0, e1, i) for this n");
  return rep;
}

SuiteReport suite_special(const ThetaEngine& e, const SuiteOptions& opt) {
  const FieldCtx& k = e.field();
  const int n = k.n();
  SuiteReport rep = named("special-values");
  const CycNum one = CycNum::one(e.cyc());
  for (int e0 = 0; e0 <= n - 2; ++e0) {
    const Poly r = pow(k, Poly::x(), e0);
    if (rho_cost(n, r.degree(), 0) > opt.cap) {
      ++rep.skipped;
      continue;
    }
    ++rep.cases;
    const CycNum v = e.rho0_poly(r, 0);
    record(rep, r, 0, v);
    if (!(v == one)) rep.failures.push_back(mismatch("rho0(x^" + std::to_string(e0) + ", 0)", v, one, hint_rho(opt, r, 0)));
  }
  for (const Poly& r : generator_set(k)) {
    for (int i = 0; i < n; ++i) {
      const IndexGeometry g = index_geometry(n, r.degree(), i);
      if (g.i != g.i_prime) continue;
      ++rep.cases;
      const CycNum v = e.rho0_poly(r, i);
      record(rep, r, i, v);
      if (!v.is_zero()) rep.failures.push_back("r=" + to_string(r) + " i=i'=" + std::to_string(i) + ": rho0 nonzero");
    }
  }
  return rep;
}

}  // namespace

FieldCtx RunConfig::make_field() const { return FieldCtx::create(p, m, n, eps_exp, modulus); }

void RunConfig::validate() const {
  if (jobs < 1) throw ConfigError("--jobs must be >= 1");
  if (format != "json" && format != "csv") throw ConfigError("--format must be json or csv");
  if (max_deg < -1) throw ConfigError("--max-deg must be >= -1");
  if (cap < 0) throw ConfigError("--cap must be >= 0");
  for (const auto& s : suites) {
    if (s == "all") continue;
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) throw ConfigError("unknown suite '" + s + "'");
  }
  make_field();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"dh",           "pellet",         "disc-legendre", "psi-truncation",
                                              "functional-eq", "theorem1",      "hecke-inf",     "hecke-fin",
                                              "nth-power",    "integrality",    "two-prime-vanishing",
                                              "special-values"};
  return names;
}

SuiteReport run_suite(const std::string& name, const ThetaEngine& e, const SuiteOptions& opt) {
  if (name == "dh") return suite_dh(e, opt);
  if (name == "pellet") return suite_pellet(e, opt);
  if (name == "disc-legendre") return suite_disc_legendre(e, opt);
  if (name == "psi-truncation") return suite_psi_truncation(e, opt);
  if (name == "functional-eq") return suite_functional_eq(e, opt);
  if (name == "theorem1") return suite_theorem1(e, opt);
  if (name == "hecke-inf") return suite_hecke_inf(e, opt);
  if (name == "hecke-fin") return suite_hecke_fin(e, opt);
  if (name == "nth-power") return suite_nth_power(e, opt);
  if (name == "integrality") return suite_integrality(e, opt);
  if (name == "two-prime-vanishing") return suite_two_prime(e, opt);
  if (name == "special-values") return suite_special(e, opt);
  throw ConfigError("unknown suite '" + name + "'");
}

bool rho_integrality(const ThetaEngine& e, const RhoRecord& rec) {
  if (rec.value.is_zero()) return true;
  const int n = e.field().n();
  const IndexGeometry g = index_geometry(n, rec.r.degree(), rec.i);
  const CycNum scaled = rec.value * e.q_power(static_cast<long long>(n + 1) * g.R) / e.tau(g.i);
  return scaled.in_integers_of_subfield(n);
}

EtaDetermination determine_reference_eta() {
  const ThetaEngine a(FieldCtx::create(7, 1, 3), 1);
  const ThetaEngine b(FieldCtx::create(5, 1, 4), 1);
  return determine_eta_convention({&a, &b});
}

std::vector<Poly> generator_set(const FieldCtx& k) {
  const int n = k.n();
  std::vector<Poly> out;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a + b <= 2 * n - 1) out.push_back(r_of(k, a, b));
    }
  }
  const Poly pi2 = smallest_irreducible(k, 2);
  out.push_back(pi2);
  out.push_back(mul(k, Poly::x(), pi2));
  std::sort(out.begin(), out.end(), canonical_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string field_key(const FieldCtx& k) {
  std::string f;
  for (std::size_t i = 0; i < k.modulus().size(); ++i) f += (i ? "," : "") + std::to_string(k.modulus()[i]);
  return "p=" + std::to_string(k.p()) + ";m=" + std::to_string(k.m()) + ";n=" + std::to_string(k.n()) +
         ";eps=" + std::to_string(k.eps_exp()) + ";f=" + f;
}

JsonCache::JsonCache(std::string path, std::string field_key, CycFieldPtr field)
    : path_(std::move(path)), field_key_(std::move(field_key)), field_(std::move(field)) {
  std::ifstream in(path_);
  if (!in) return;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object() || j.value("schema", -1) != kSchema || !j.contains("entries") || !j["entries"].is_object()) {
      std::cerr << "warning: cache " << path_ << " has an incompatible schema; ignoring it\n";
      return;
    }
    for (auto it = j["entries"].begin(); it != j["entries"].end(); ++it) entries_[it.key()] = it.value();
  } catch (const nlohmann::json::exception&) {
    std::cerr << "warning: cache " << path_ << " is unreadable; ignoring it\n";
  }
}

JsonCache::~JsonCache() {
  try {
    flush();
  } catch (const std::exception& ex) {
    std::cerr << "warning: could not write cache " << path_ << ": " << ex.what() << "\n";
  }
}

std::optional<CycNum> JsonCache::load(const std::string& key) {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = entries_.find(field_key_ + "|" + key);
  if (it == entries_.end()) return std::nullopt;
  try {
    return CycNum::from_json(field_, it->second);
  } catch (const std::exception&) {
    std::cerr << "warning: cache entry " << it->first << " is malformed; recomputing\n";
    entries_.erase(it);
    return std::nullopt;
  }
}

void JsonCache::save(const std::string& key, const CycNum& value) {
  std::lock_guard<std::mutex> lock(mu_);
  entries_[field_key_ + "|" + key] = value.to_json();
  dirty_ = true;
}

void JsonCache::flush() {
  std::lock_guard<std::mutex> lock(mu_);
  if (!dirty_) return;
  nlohmann::json j;
  j["schema"] = kSchema;
  j["entries"] = nlohmann::json::object();
  for (const auto& [key, v] : entries_) j["entries"][key] = v;
  const std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw ConfigError("cannot write " + tmp);
    out << j.dump() << "\n";
  }
  std::filesystem::rename(tmp, path_);
  dirty_ = false;
}

std::size_t JsonCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

std::vector<TableRow> build_table(const ThetaEngine& e, const RunConfig& cfg) {
  const FieldCtx& k = e.field();
  std::vector<Poly> candidates;
  if (!cfg.r_list.empty()) {
    for (const auto& s : cfg.r_list) candidates.push_back(parse_poly(k, s));
  } else {
    for (int d = 0; d <= cfg.max_deg; ++d) {
      Poly c = monic_at(k, d, 0);
      do {
        candidates.push_back(c);
      } while (next_monic(k, c));
    }
  }
  std::vector<Poly> reduced;
  std::set<std::string> seen;
  for (const Poly& c : candidates) {
    if (c.is_zero()) throw ConfigError("r = 0 has no theta coefficient");
    Poly red = reduce_mod_nth_powers(k, RatFunc::make(k, c, Poly::constant(k.one()))).poly;
    if (seen.insert(to_string(red)).second) reduced.push_back(std::move(red));
  }
  std::sort(reduced.begin(), reduced.end(), canonical_less);
  std::vector<int> is = cfg.i_list;
  if (is.empty()) {
    for (int i = 0; i < k.n(); ++i) is.push_back(i);
  }
  std::vector<std::pair<Poly, int>> keys;
  for (const Poly& r : reduced) {
    for (int i : is) keys.emplace_back(r, static_cast<int>(pos_mod(i, k.n())));
  }
  std::vector<TableRow> rows(keys.size());
  auto fill = [&](std::size_t idx) {
    const auto& [r, i] = keys[idx];
    const IndexGeometry g = index_geometry(k.n(), r.degree(), i);
    TableRow row;
    row.r = to_string(r);
    row.i = g.i;
    row.i_prime = g.i_prime;
    row.R = g.R;
    row.rho0 = e.rho0_poly(r, i);
    row.rho0_float = row.rho0.complex_eval(128);
    if (g.R < 0) row.flags = "R<0";
    else if (g.i == g.i_prime) row.flags = "i=i'";
    else if (row.rho0.is_zero()) row.flags = "zero";
    rows[idx] = std::move(row);
  };
  const int workers = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(keys.size())));
  if (workers == 1) {
    for (std::size_t idx = 0; idx < keys.size(); ++idx) fill(idx);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t idx; (idx = next.fetch_add(1)) < keys.size();) fill(idx);
      });
    }
    for (auto& t : pool) t.join();
  }
  return rows;
}

nlohmann::json table_to_json(const FieldCtx& k, const std::vector<TableRow>& rows) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["field"] = {{"p", k.p()}, {"m", k.m()}, {"n", k.n()}, {"eps", k.eps_exp()}, {"modulus", k.modulus()}};
  j["rows"] = nlohmann::json::array();
  for (const auto& row : rows) {
    j["rows"].push_back({{"r", row.r},
                         {"i", row.i},
                         {"i_prime", row.i_prime},
                         {"R", row.R},
                         {"rho0", row.rho0.to_json()},
                         {"rho0_float", {row.rho0_float.real(), row.rho0_float.imag()}},
                         {"flags", row.flags}});
  }
  return j;
}

std::vector<TableRow> table_from_json(const ThetaEngine& e, const nlohmann::json& j) {
  if (j.value("schema", -1) != kSchema) throw ConfigError("table has an unsupported schema");
  std::vector<TableRow> rows;
  try {
    for (const auto& jr : j.at("rows")) {
      TableRow row;
      row.r = jr.at("r").get<std::string>();
      row.i = jr.at("i").get<int>();
      row.i_prime = jr.at("i_prime").get<int>();
      row.R = jr.at("R").get<int>();
      row.rho0 = CycNum::from_json(e.cyc(), jr.at("rho0"));
      row.rho0_float = {jr.at("rho0_float").at(0).get<double>(), jr.at("rho0_float").at(1).get<double>()};
      row.flags = jr.at("flags").get<std::string>();
      rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("malformed table: ") + ex.what());
  }
  return rows;
}

std::string table_to_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "r,i,i_prime,R,rho0_den,rho0_num,rho0_re,rho0_im,flags\n";
  os.precision(17);
  for (const auto& row : rows) {
    std::string num;
    for (std::size_t t = 0; t < row.rho0.num().size(); ++t) num += (t ? ";" : "") + row.rho0.num()[t].get_str();
    os << '"' << row.r << "\"," << row.i << ',' << row.i_prime << ',' << row.R << ",\"" << row.rho0.den().get_str()
       << "\",\"" << num << "\"," << row.rho0_float.real() << ',' << row.rho0_float.imag() << ",\"" << row.flags
       << "\"\n";
  }
  return os.str();
}

namespace {

std::unique_ptr<JsonCache> attach_cache(const RunConfig& cfg, ThetaEngine& e) {
  if (cfg.cache_path.empty()) return nullptr;
  auto cache = std::make_unique<JsonCache>(cfg.cache_path, field_key(e.field()), e.cyc());
  e.set_store(cache.get());
  return cache;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw ConfigError("cannot write " + cfg.out);
  f << text;
}

std::string cli_prefix(const RunConfig& cfg) {
  return "--p " + std::to_string(cfg.p) + " --m " + std::to_string(cfg.m) + " --n " + std::to_string(cfg.n) +
         " --eps " + std::to_string(cfg.eps_exp);
}

}  // namespace

int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  cfg.validate();
  ThetaEngine e(cfg.make_field(), cfg.jobs);
  auto cache = attach_cache(cfg, e);
  const auto rows = build_table(e, cfg);
  const std::string text = cfg.format == "csv" ? table_to_csv(rows) : table_to_json(e.field(), rows).dump(1) + "\n";
  emit(cfg, text, out);
  if (cache) cache->flush();
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  cfg.validate();
  ThetaEngine e(cfg.make_field(), cfg.jobs);
  auto cache = attach_cache(cfg, e);

  std::vector<std::string> names;
  for (const auto& s : cfg.suites) {
    if (s == "all") {
      names = suite_names();
      break;
    }
    if (std::find(names.begin(), names.end(), s) == names.end()) names.push_back(s);
  }

  std::ostringstream text;
  nlohmann::json report;
  report["schema"] = kSchema;
  report["field"] = e.field().describe();
  report["seed"] = cfg.seed;
  report["cap"] = cfg.cap;
  text << "theta verify: " << e.field().describe() << "\n";
  text << "seed " << cfg.seed << ", enumeration cap deg " << cfg.cap << "\n";

  bool ok = true;
  const EtaDetermination det = determine_reference_eta();
  const EtaDetermination local = determine_eta_convention({&e});
  SuiteOptions opt;
  opt.seed = cfg.seed;
  opt.cap = cfg.cap;
  opt.cli_prefix = cli_prefix(cfg);
  nlohmann::json jeta;
  jeta["reference_cases"] = det.cases;
  jeta["reference_survivors"] = det.survivors.size();
  jeta["local_cases"] = local.cases;
  jeta["local_survivors"] = local.survivors.size();
  if (det.result) {
    opt.eta = *det.result;
    jeta["convention"] = det.result->describe();
    text << "tau normalization: " << det.result->describe() << "\n";
    text << "  determined on " << det.cases << " R=0 cases over (n,q)=(3,7),(4,5); "
         << "consistent candidates on this field: " << local.survivors.size() << " of 24 ("
         << local.cases << " cases)\n";
    const bool local_agrees =
        std::find(local.survivors.begin(), local.survivors.end(), *det.result) != local.survivors.end();
    if (!local_agrees) {
      ok = false;
      text << "  FAIL: the determined convention does not fit this field's R=0 data\n";
    }
    jeta["local_agrees"] = local_agrees;
  } else {
    ok = false;
    text << "tau normalization: FAIL, " << det.survivors.size() << " candidates survive\n";
    jeta["convention"] = nullptr;
  }
  report["eta"] = jeta;

  report["suites"] = nlohmann::json::array();
  for (const auto& name : names) {
    const SuiteReport rep = run_suite(name, e, opt);
    ok = ok && rep.passed();
    text << (rep.passed() ? "[PASS] " : "[FAIL] ") << name << ": " << rep.cases << " cases";
    if (rep.skipped) text << ", " << rep.skipped << " skipped (above cap)";
    text << ", " << rep.failures.size() << " failures\n";
    for (const auto& f : rep.failures) text << "    " << f << "\n";
    for (const auto& note : rep.notes) text << "    note: " << note << "\n";
    report["suites"].push_back({{"name", name},
                                {"cases", rep.cases},
                                {"skipped", rep.skipped},
                                {"failures", rep.failures},
                                {"notes", rep.notes}});
  }
  text << "result: " << (ok ? "PASS" : "FAIL") << "\n";
  report["result"] = ok ? "PASS" : "FAIL";

  out << text.str();
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out);
    if (!f) throw ConfigError("cannot write " + cfg.out);
    f << (cfg.format == "json" ? report.dump(1) + "\n" : text.str());
  }
  if (cache) cache->flush();
  return ok ? 0 : 1;
}

}  // namespace theta
