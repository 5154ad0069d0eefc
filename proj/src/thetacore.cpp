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

#include "theta/thetacore.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

#include "theta/error.hpp"

namespace theta {

namespace {

long long pos_mod(long long a, long long m) {
  const long long r = a % m;
  return r < 0 ? r + m : r;
}

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

constexpr std::uint64_t kChunk = 2048;

// c = ca * prod pi_j^{v_j} with ca coprime to every pi_j.
struct Split {
  Poly ca;
  std::vector<int> vals;
};

Split split_off(const FieldCtx& k, const Poly& c, const std::vector<Poly>& primes) {
  Split s{c, std::vector<int>(primes.size(), 0)};
  for (std::size_t j = 0; j < primes.size(); ++j) {
    while (s.ca.degree() >= primes[j].degree()) {
      auto [quo, rem] = divmod(k, s.ca, primes[j]);
      if (!rem.is_zero()) break;
      s.ca = std::move(quo);
      ++s.vals[j];
    }
  }
  return s;
}

std::vector<Poly> primes_of(const FieldCtx& k, const Poly& r) {
  std::vector<Poly> out;
  if (r.degree() < 1) return out;
  for (auto& [pi, e] : factorize(k, r).factors) out.push_back(pi);
  return out;
}

}  // namespace

IndexGeometry index_geometry(int n, int deg_r, long long i) {
  IndexGeometry g;
  g.i = static_cast<int>(pos_mod(i, n));
  g.sigma = deg_r + 1;
  g.i_prime = static_cast<int>(pos_mod(g.sigma - g.i, n));
  g.R = static_cast<int>(floor_div(g.sigma - g.i, n));
  g.R1 = static_cast<int>(floor_div(g.sigma - 2 * g.i, n));
  g.R2 = static_cast<int>(floor_div(g.sigma - 2 * g.i_prime, n));
  return g;
}

std::string EtaConvention::describe() const {
  std::ostringstream os;
  os << "eta = eps chi(-1)^{" << (sign_uses_i_prime ? "i'" : "i") << " sigma} tau(eps chi^{i-i'}) q^{"
     << alpha;
  if (beta != 0) os << (beta > 0 ? "+" : "-") << (std::abs(beta) == 1 ? "" : std::to_string(std::abs(beta)))
                    << "(i'-i)";
  os << "}, eta' = 1/(q eta)";
  return os.str();
}

EtaConvention frozen_eta_convention() { return EtaConvention{true, -1, -1}; }

EtaConvention literal_eta_convention() { return EtaConvention{false, -1, 0}; }

CycNum PsiPoly::eval_F(const mpq_class& X) const {
  if (D.empty()) return CycNum();
  CycNum acc = CycNum::zero(D.front().field());
  for (std::size_t j = D.size(); j-- > 0;) acc = acc.scaled(X) + D[j];
  return acc;
}

struct ThetaEngine::CoreCounts {
  std::vector<Poly> primes;
  // key: mixed-radix valuations at primes; value: signed counts per mu_n exponent
  std::map<std::uint64_t, std::vector<std::int64_t>> counts;
  int radix = 1;
};

ThetaEngine::ThetaEngine(FieldCtx field, int jobs)
    : k_(std::move(field)), cyc_(cyc_field_for(k_)), jobs_(std::max(1, jobs)) {
  for (int j = 0; j < k_.n(); ++j) tau_.push_back(theta::tau(k_, j));
}

void ThetaEngine::set_jobs(int jobs) {
  if (jobs < 1) throw ConfigError("worker count must be >= 1");
  jobs_ = jobs;
}

CycNum ThetaEngine::tau(long long j) const { return tau_[pos_mod(j, k_.n())]; }

CycNum ThetaEngine::eps_chi_minus_one() const {
  return CycNum::root_of_unity(cyc_, k_.n(), eps_chi_minus_one_exp(k_));
}

CycNum ThetaEngine::q_power(long long e) const {
  mpz_class qe;
  mpz_ui_pow_ui(qe.get_mpz_t(), static_cast<unsigned long>(k_.q()), static_cast<unsigned long>(std::llabs(e)));
  mpq_class v = e >= 0 ? mpq_class(qe) : mpq_class(1, 1) / mpq_class(qe);
  return CycNum::rational(cyc_, v);
}

CycNum ThetaEngine::gauss_sum_bruteforce(const Poly& r, const Poly& c, int power) const {
  if (c.is_zero()) throw MathError("Gauss sum modulo zero");
  if (r.is_zero()) throw MathError("Gauss sum with r = 0");
  const int d = c.degree();
  if (d == 0) return CycNum::one(cyc_);
  const SymbolTable sym(k_, c);
  // xi -> coefficient of x^{d-1} in r xi mod c, divided by lc(c), is F_q-linear
  std::vector<FqElem> ell(d);
  const FqElem inv_lead = k_.inv(c.lead());
  for (int j = 0; j < d; ++j) {
    const Poly a = mod(k_, mul(k_, r, Poly::monomial(k_.one(), j)), c);
    ell[j] = k_.mul(a.coeff(d - 1), inv_lead);
  }
  RootSum acc(cyc_);
  std::vector<FqElem> digits(d);
  const auto q = static_cast<std::uint32_t>(k_.q());
  while (true) {
    const Poly xi(digits);
    const SymbolValue s = sym(xi);
    if (!s.zero) {
      FqElem lin = k_.zero();
      for (int j = 0; j < d; ++j) lin = k_.add(lin, k_.mul(digits[j], ell[j]));
      acc.add(power * eps_index(k_, s.value) + e_o_index(k_, lin));
    }
    int pos = 0;
    while (pos < d && ++digits[pos].code == q) digits[pos++].code = 0;
    if (pos == d) break;
  }
  return acc.value();
}

CycNum ThetaEngine::gauss_sum_dh(const Poly& r, const Poly& c) const {
  if (!c.is_monic()) throw MathError("closed-form Gauss sum requires monic c");
  if (gcd(k_, r, c).degree() != 0) throw MathError("closed-form Gauss sum requires gcd(r, c) = 1");
  const int mu = mobius(k_, c);
  if (mu == 0) return CycNum::zero(cyc_);
  const int d = c.degree();
  if (d == 0) return CycNum::one(cyc_);
  const SymbolValue s_r = residue_symbol(k_, r, c);
  const SymbolValue s_d = residue_symbol(k_, derivative(k_, c), c);
  const CycNum unit = CycNum::root(cyc_, eps_index(k_, s_d.value) - eps_index(k_, s_r.value));
  return (unit * (-tau(1)).pow(d)).scaled(mu);
}

CycNum ThetaEngine::mutual_symbol(const Poly& a, const Poly& b) const {
  // (a/b)_n (b/a)_n = chi((-1)^{deg a deg b} Res(a, b)^2) for coprime monic a, b
  FqElem z = resultant(k_, a, b);
  if (z.is_zero()) throw MathError("mutual symbol of non-coprime polynomials");
  z = k_.mul(z, z);
  if ((static_cast<long long>(a.degree()) * b.degree()) % 2 == 1) z = k_.neg(z);
  return eps(k_, k_.chi(z));
}

CycNum ThetaEngine::gauss_prime_power(const Poly& r, const Poly& pi, int e) const {
  const std::string key = to_string(r) + "|" + to_string(pi) + "^" + std::to_string(e);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = gauss_cache_.find(key); it != gauss_cache_.end()) return it->second;
  }
  // Summing over the top pi-adic digit of xi kills the sum unless pi | r, and
  // otherwise removes one factor pi from r and from the modulus.
  Poly rr = r;
  mpz_class scale = 1;
  bool zero = false;
  for (int t = e; t > 1; --t) {
    auto [quo, rem] = divmod(k_, rr, pi);
    if (!rem.is_zero()) {
      zero = true;
      break;
    }
    rr = std::move(quo);
    for (int s = 0; s < pi.degree(); ++s) scale *= k_.q();
  }
  CycNum v = zero ? CycNum::zero(cyc_) : gauss_sum_bruteforce(rr, pi, e).scaled(mpq_class(scale));
  std::lock_guard<std::mutex> lock(mu_);
  gauss_cache_.emplace(key, v);
  return v;
}

CycNum ThetaEngine::gauss_sum(const Poly& r, const Poly& c) const {
  if (!c.is_monic()) throw MathError("Gauss sum requires monic c");
  const std::vector<Poly> primes = primes_of(k_, r);
  const Split s = split_off(k_, c, primes);
  CycNum g = gauss_sum_dh(r, s.ca);
  if (g.is_zero()) return g;
  Poly acc = s.ca;
  for (std::size_t j = 0; j < primes.size(); ++j) {
    if (s.vals[j] == 0) continue;
    const Poly piece = pow(k_, primes[j], s.vals[j]);
    const CycNum gp = gauss_prime_power(r, primes[j], s.vals[j]);
    if (gp.is_zero()) return gp;
    g *= gp;
    if (acc.degree() > 0) g *= mutual_symbol(acc, piece);
    acc = mul(k_, acc, piece);
  }
  return g;
}

ThetaEngine::CoreCounts ThetaEngine::core_counts(const Poly& r, int d, bool coprime_only) const {
  CoreCounts out;
  out.primes = primes_of(k_, r);
  out.radix = d + 1;
  const std::uint64_t total = monic_count(k_, d);
  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
  const int n = k_.n();
  const auto& primes = out.primes;
  const int radix = out.radix;

  auto work = [&](std::uint64_t chunk, std::map<std::uint64_t, std::vector<std::int64_t>>& counts,
                  std::map<std::uint64_t, Poly>& cb_cache) {
    const std::uint64_t lo = chunk * kChunk;
    const std::uint64_t hi = std::min(total, lo + kChunk);
    Poly c = monic_at(k_, d, lo);
    for (std::uint64_t idx = lo; idx < hi; ++idx, next_monic(k_, c)) {
      const Split s = split_off(k_, c, primes);
      std::uint64_t key = 0;
      int deg_cb = 0;
      for (std::size_t j = primes.size(); j-- > 0;) {
        key = key * radix + s.vals[j];
        deg_cb += s.vals[j] * primes[j].degree();
      }
      if (coprime_only && key != 0) continue;
      auto& slot = counts[key];
      if (slot.empty()) slot.assign(n, 0);
      const int da = s.ca.degree();
      if (da == 0) {
        slot[0] += 1;
        continue;
      }
      const FqElem disc = resultant(k_, s.ca, derivative(k_, s.ca));
      if (disc.is_zero()) continue;  // ca not squarefree: g(r, ca) = 0
      const int mu = count_irreducible_factors(k_, s.ca) % 2 == 0 ? 1 : -1;
      // (r/ca)^{-1} (ca'/ca) (ca/cb) (cb/ca), each symbol chi(Res(., .))
      FqElem z = k_.div(disc, resultant(k_, s.ca, r));
      if (key != 0) {
        auto it = cb_cache.find(key);
        if (it == cb_cache.end()) {
          Poly cb = Poly::constant(k_.one());
          for (std::size_t j = 0; j < primes.size(); ++j) cb = mul(k_, cb, pow(k_, primes[j], s.vals[j]));
          it = cb_cache.emplace(key, std::move(cb)).first;
        }
        FqElem m = resultant(k_, s.ca, it->second);
        m = k_.mul(m, m);
        if ((static_cast<long long>(da) * deg_cb) % 2 == 1) m = k_.neg(m);
        z = k_.mul(z, m);
      }
      slot[k_.log(z) % n] += mu;
    }
  };

  std::vector<std::map<std::uint64_t, std::vector<std::int64_t>>> partial(chunks);
  const int workers = static_cast<int>(std::min<std::uint64_t>(jobs_, chunks));
  if (workers <= 1) {
    std::map<std::uint64_t, Poly> cb_cache;
    for (std::uint64_t ch = 0; ch < chunks; ++ch) work(ch, partial[ch], cb_cache);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        std::map<std::uint64_t, Poly> cb_cache;
        for (std::uint64_t ch; (ch = next.fetch_add(1)) < chunks;) work(ch, partial[ch], cb_cache);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& part : partial) {
    for (const auto& [key, v] : part) {
      auto& slot = out.counts[key];
      if (slot.empty()) slot.assign(n, 0);
      for (int e = 0; e < n; ++e) slot[e] += v[e];
    }
  }
  return out;
}

CycNum ThetaEngine::assemble(const Poly& r, int d, const CoreCounts& cc) const {
  CycNum total = CycNum::zero(cyc_);
  const CycNum t1 = -tau(1);
  for (const auto& [key, v] : cc.counts) {
    std::uint64_t rest = key;
    CycNum gb = CycNum::one(cyc_);
    Poly acc = Poly::constant(k_.one());
    for (const auto& pi : cc.primes) {
      const int val = static_cast<int>(rest % cc.radix);
      rest /= cc.radix;
      if (val == 0) continue;
      const Poly piece = pow(k_, pi, val);
      gb *= gauss_prime_power(r, pi, val);
      if (gb.is_zero()) break;
      if (acc.degree() > 0) gb *= mutual_symbol(acc, piece);
      acc = mul(k_, acc, piece);
    }
    if (gb.is_zero()) continue;
    RootSum inner(cyc_);
    for (int e = 0; e < k_.n(); ++e) {
      if (v[e] != 0) inner.add(static_cast<long long>(k_.p()) * k_.eps_exp() * e, v[e]);
    }
    total += gb * t1.pow(d - acc.degree()) * inner.value();
  }
  return total;
}

CycNum ThetaEngine::c_direct(const Poly& r, int d) const {
  if (r.is_zero()) throw MathError("coefficient sum with r = 0");
  if (d < 0) return CycNum::zero(cyc_);
  return assemble(r, d, core_counts(r, d, false));
}

CycNum ThetaEngine::c_star(const Poly& r, int d) const {
  if (r.is_zero()) throw MathError("coefficient sum with r = 0");
  if (d < 0) return CycNum::zero(cyc_);
  return assemble(r, d, core_counts(r, d, true));
}

CycNum ThetaEngine::c_star_alt(const Poly& r, int d) const {
  if (d < 0) return CycNum::zero(cyc_);
  RootSum acc(cyc_);
  Poly c = monic_at(k_, d, 0);
  do {
    if (gcd(k_, r, c).degree() != 0) continue;
    const int mu = mobius(k_, c);
    if (mu == 0) continue;
    const SymbolValue s_r = residue_symbol(k_, r, c);
    const SymbolValue s_d = residue_symbol(k_, derivative(k_, c), c);
    acc.add(eps_index(k_, s_d.value) - eps_index(k_, s_r.value), mu);
  } while (next_monic(k_, c));
  CycNum front = tau(1).pow(d);
  if (d % 2 == 1) front = -front;
  return front * acc.value();
}

bool ThetaEngine::r_star_applicable(const Poly& r) const {
  if (r.degree() < 1) return true;
  for (const auto& [pi, e] : factorize(k_, r).factors) {
    if (e >= k_.n() - 1) return false;
  }
  return true;
}

std::vector<std::pair<Poly, CycNum>> ThetaEngine::r_star_set(const Poly& r, int i) const {
  if (!r_star_applicable(r)) throw MathError("r is divisible by an (n-1)-st power of a prime");
  std::vector<std::pair<Poly, int>> fac;
  if (r.degree() >= 1) fac = factorize(k_, r).factors;
  std::vector<std::pair<Poly, CycNum>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << fac.size()); ++mask) {
    Poly rs = Poly::constant(k_.one());
    for (std::size_t j = 0; j < fac.size(); ++j) {
      if (mask >> j & 1) rs = mul(k_, rs, pow(k_, fac[j].first, fac[j].second + 1));
    }
    if (rs.degree() > i) continue;
    CycNum g = gauss_sum(r, rs);
    if (!g.is_zero()) out.emplace_back(std::move(rs), std::move(g));
  }
  return out;
}

CycNum ThetaEngine::c_decomposed(const Poly& r, int d) const {
  if (d < 0) return CycNum::zero(cyc_);
  CycNum total = CycNum::zero(cyc_);
  const CycNum sign = eps_chi_minus_one();
  for (const auto& [rs, g] : r_star_set(r, d)) {
    const long long e = pos_mod(static_cast<long long>(d - 1) * rs.degree(), k_.n());
    const Poly shifted = mul(k_, r, pow(k_, rs, k_.n() - 2));
    total += g * sign.pow(e) * c_star(shifted, d - rs.degree());
  }
  return total;
}

CycNum ThetaEngine::c_bruteforce(const Poly& r, int d) const {
  if (d < 0) return CycNum::zero(cyc_);
  CycNum total = CycNum::zero(cyc_);
  Poly c = monic_at(k_, d, 0);
  do {
    total += gauss_sum_bruteforce(r, c);
  } while (next_monic(k_, c));
  return total;
}

CycNum ThetaEngine::c_full(const Poly& r, int d) const {
  if (d < 0) return CycNum::zero(cyc_);
  const std::string key = to_string(r) + "|" + std::to_string(d);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = c_cache_.find(key); it != c_cache_.end()) return it->second;
  }
  std::optional<CycNum> v;
  if (store_) v = store_->load(key);
  if (!v) {
    v = r_star_applicable(r) ? c_decomposed(r, d) : c_direct(r, d);
    if (store_) store_->save(key, *v);
  }
  std::lock_guard<std::mutex> lock(mu_);
  c_cache_.emplace(key, *v);
  return *v;
}

std::vector<CycNum> ThetaEngine::d_coefficients(const Poly& r, long long i, int count) const {
  const int n = k_.n();
  const int ic = static_cast<int>(pos_mod(i, n));
  std::vector<CycNum> D;
  CycNum running = CycNum::zero(cyc_);  // sum_{l<j} C_l q^{-nl}
  for (int j = 0; j < count; ++j) {
    const CycNum term = c_full(r, ic + j * n) * q_power(-static_cast<long long>(n) * j);
    D.push_back(term - running.scaled(k_.q() - 1));
    running += term;
  }
  return D;
}

CycNum ThetaEngine::eta(int deg_r, long long i, const EtaConvention& conv) const {
  const IndexGeometry g = index_geometry(k_.n(), deg_r, i);
  const long long s = conv.sign_uses_i_prime ? g.i_prime : g.i;
  const CycNum sign = eps_chi_minus_one().pow(pos_mod(s * g.sigma, k_.n()));
  return sign * tau(g.i - g.i_prime) * q_power(conv.alpha + conv.beta * (g.i_prime - g.i));
}

CycNum ThetaEngine::eta_prime(int deg_r, long long i, const EtaConvention& conv) const {
  return (eta(deg_r, i, conv) * q_power(1)).inverse();
}

PsiPoly ThetaEngine::psi_polynomial(const Poly& r, long long i, const EtaConvention& conv) const {
  PsiPoly psi;
  psi.r = r;
  psi.geo = index_geometry(k_.n(), r.degree(), i);
  if (psi.geo.R >= 0) psi.D = d_coefficients(r, psi.geo.i, psi.geo.R + 1);
  psi.eta = eta(r.degree(), i, conv);
  psi.eta_prime = eta_prime(r.degree(), i, conv);
  return psi;
}

CycNum ThetaEngine::rho0_poly(const Poly& r, long long i) const {
  if (r.is_zero()) throw MathError("rho0 of r = 0");
  const IndexGeometry g = index_geometry(k_.n(), r.degree(), i);
  if (g.R < 0 || g.i == g.i_prime) return CycNum::zero(cyc_);
  const auto D = d_coefficients(r, g.i, g.R + 1);
  CycNum acc = CycNum::zero(cyc_);
  for (std::size_t j = D.size(); j-- > 0;) acc = acc.divided(k_.q()) + D[j];
  return acc;
}

CycNum ThetaEngine::rho0(const RatFunc& r, long long i) const {
  if (r.is_zero()) throw MathError("rho0 of r = 0");
  return rho0_poly(reduce_mod_nth_powers(k_, r).poly, i);
}

namespace {

CycNum at(const std::vector<CycNum>& v, int k, const CycFieldPtr& f) {
  return k >= 0 && k < static_cast<int>(v.size()) ? v[k] : CycNum::zero(f);
}

void require_pair(const PsiPoly& F, const PsiPoly& G) {
  if (F.geo.i >= F.geo.i_prime || G.geo.i != F.geo.i_prime || !(F.r == G.r)) {
    throw ConfigError("functional equation needs Psi(r, i) and Psi(r, i') with i < i'");
  }
}

}  // namespace

std::vector<RelationCheck> functional_equation_relations(const ThetaEngine& e, const PsiPoly& F,
                                                         const PsiPoly& G) {
  require_pair(F, G);
  const auto& f = e.cyc();
  const int R = F.geo.R;
  const CycNum qi = e.q_power(-1);
  const CycNum one_minus = CycNum::one(f) - qi;
  std::vector<RelationCheck> out;
  if (R < 0) return out;
  for (int k = 0; k <= R + 1; ++k) {
    out.push_back({"A_" + std::to_string(k), F.eta * (at(G.D, k, f) - at(G.D, k - 1, f)),
                   qi * at(F.D, R - k, f) - at(F.D, R - k + 1, f) + one_minus * at(F.D, k, f)});
  }
  for (int k = 0; k <= R + 1; ++k) {
    out.push_back({"B_" + std::to_string(k), F.eta_prime * (at(F.D, k, f) - at(F.D, k - 1, f)),
                   qi * at(G.D, R - k, f) - at(G.D, R - k + 1, f) + one_minus * at(G.D, k - 1, f)});
  }
  return out;
}

std::vector<RelationCheck> functional_equation_closed_forms(const ThetaEngine& e, const PsiPoly& F,
                                                            const PsiPoly& G) {
  require_pair(F, G);
  const int R = F.geo.R;
  const mpq_class qm1 = e.field().q() - 1;
  std::vector<RelationCheck> out;
  if (R == 0) {
    out.push_back({"R0: D_0 = eta D'_0", F.D[0], F.eta * G.D[0]});
  } else if (R == 1 || R == 2) {
    const std::string label = "R" + std::to_string(R) + ": D_" + std::to_string(R) +
                              " = eta'^{-1} D'_0 - (q-1) D_0";
    out.push_back({label, F.D[R], F.eta_prime.inverse() * G.D[0] - F.D[0].scaled(qm1)});
  }
  return out;
}

std::pair<std::vector<CycNum>, std::vector<CycNum>> functional_equation_expand(
    const ThetaEngine& e, const PsiPoly& F, const std::vector<CycNum>& half_F,
    const std::vector<CycNum>& half_G) {
  const int R = F.geo.R;
  if (R < 0) throw ConfigError("no functional equation for R < 0");
  const int hf = R / 2 + 1;
  const int hg_min = R % 2 == 0 ? R / 2 : (R + 1) / 2;
  if (static_cast<int>(half_F.size()) != hf) throw ConfigError("half_F must have floor(R/2)+1 entries");
  if (static_cast<int>(half_G.size()) < hg_min || static_cast<int>(half_G.size()) > hf) {
    throw ConfigError("half_G has an inconsistent length");
  }
  const auto& f = e.cyc();
  const CycNum qi = e.q_power(-1);
  const CycNum one_minus = CycNum::one(f) - qi;
  const int nv = 2 * (R + 1);  // D_k -> k, D'_k -> R + 1 + k
  std::vector<std::optional<CycNum>> val(nv);
  for (int k = 0; k < hf; ++k) val[k] = half_F[k];
  for (std::size_t k = 0; k < half_G.size(); ++k) val[R + 1 + k] = half_G[k];

  using Terms = std::map<int, CycNum>;
  std::vector<Terms> rel;
  auto term = [&](Terms& t, bool primed, int k, const CycNum& coef) {
    if (k < 0 || k > R) return;
    const int id = (primed ? R + 1 : 0) + k;
    auto it = t.find(id);
    if (it == t.end()) t.emplace(id, coef);
    else it->second += coef;
  };
  for (int k = 0; k <= R + 1; ++k) {
    Terms a;  // eta (D'_k - D'_{k-1}) - rhs = 0
    term(a, true, k, F.eta);
    term(a, true, k - 1, -F.eta);
    term(a, false, R - k, -qi);
    term(a, false, R - k + 1, CycNum::one(f));
    term(a, false, k, -one_minus);
    rel.push_back(std::move(a));
    Terms b;
    term(b, false, k, F.eta_prime);
    term(b, false, k - 1, -F.eta_prime);
    term(b, true, R - k, -qi);
    term(b, true, R - k + 1, CycNum::one(f));
    term(b, true, k - 1, -one_minus);
    rel.push_back(std::move(b));
  }
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& t : rel) {
      int unknown = -1;
      int count = 0;
      for (const auto& [id, coef] : t) {
        if (!val[id] && !coef.is_zero()) {
          unknown = id;
          ++count;
        }
      }
      if (count != 1) continue;
      CycNum rest = CycNum::zero(f);
      for (const auto& [id, coef] : t) {
        if (id != unknown && val[id]) rest += coef * *val[id];
      }
      val[unknown] = -rest / t.at(unknown);
      progress = true;
    }
  }
  std::vector<CycNum> D, Dp;
  for (int id = 0; id < nv; ++id) {
    if (!val[id]) throw MathError("relations do not determine every coefficient");
    (id <= R ? D : Dp).push_back(*val[id]);
  }
  return {D, Dp};
}

HeckeInfinity hecke_infinity(const ThetaEngine& e, const Poly& r, long long i, const EtaConvention& conv) {
  const int n = e.field().n();
  const IndexGeometry g = index_geometry(n, r.degree(), i);
  if (g.i == g.i_prime) throw MathError("i = i': the relation degenerates to rho0 = 0");
  HeckeInfinity h;
  h.lo = std::min(g.i, g.i_prime);
  h.hi = std::max(g.i, g.i_prime);
  h.rho_lo = e.rho0_poly(r, h.lo);
  h.rho_hi = e.rho0_poly(r, h.hi);
  h.eta = e.eta(r.degree(), h.lo, conv);
  h.eta_prime = e.eta_prime(r.degree(), h.lo, conv);
  h.forward_rhs = h.eta * h.rho_hi;
  h.backward_rhs = e.q_power(1) * h.eta_prime * h.rho_lo;
  h.composition = h.eta * e.q_power(1) * h.eta_prime;
  h.literal_rhs = e.eps_chi_minus_one().pow(pos_mod(static_cast<long long>(h.lo) * g.sigma, n)) *
                  e.tau(h.lo - h.hi) * e.q_power(-1) * h.rho_hi;
  return h;
}

HeckeFinite hecke_finite(const ThetaEngine& e, const Poly& r_o, const Poly& pi, int j, long long i) {
  const FieldCtx& k = e.field();
  const int n = k.n();
  if (!pi.is_monic() || !is_irreducible(k, pi)) throw ConfigError("pi must be a monic irreducible");
  if (r_o.is_zero() || gcd(k, r_o, pi).degree() != 0) throw ConfigError("r_o must be coprime to pi");
  if (j < 0 || j >= n) throw ConfigError("j must lie in [0, n)");
  const long long ic = pos_mod(i, n);
  HeckeFinite h;
  h.lhs = e.rho0(RatFunc::from_poly(mul(k, r_o, pow(k, pi, j))), ic);
  if (j == n - 1) {
    h.rhs = CycNum::zero(e.cyc());
    h.factor = CycNum::zero(e.cyc());
    h.target_r = mul(k, r_o, pow(k, pi, j));
    h.target_i = static_cast<int>(ic);
    return h;
  }
  const long long kk = static_cast<long long>(j + 1) * pi.degree();
  const long long qexp = (ic - pos_mod(ic - kk, n) - pos_mod(kk, n)) * (n + 1) / n + pos_mod(kk, n) - kk / n;
  const CycNum sign = e.eps_chi_minus_one().pow(pos_mod(ic * kk, n));
  const CycNum g = e.gauss_sum_bruteforce(neg(k, r_o), pi, j + 1);
  h.factor = sign * e.q_power(qexp) * g;
  h.target_r = mul(k, r_o, pow(k, pi, n - 2 - j));
  h.target_i = static_cast<int>(pos_mod(ic - kk, n));
  h.rhs = h.factor * e.rho0(RatFunc::from_poly(h.target_r), h.target_i);
  return h;
}

FqElem det(const FieldCtx& k, const Mobius2x2& g) { return k.sub(k.mul(g.a, g.d), k.mul(g.b, g.c)); }

Mobius2x2 compose(const FieldCtx& k, const Mobius2x2& g, const Mobius2x2& h) {
  return {k.add(k.mul(g.a, h.a), k.mul(g.b, h.c)), k.add(k.mul(g.a, h.b), k.mul(g.b, h.d)),
          k.add(k.mul(g.c, h.a), k.mul(g.d, h.c)), k.add(k.mul(g.c, h.b), k.mul(g.d, h.d))};
}

namespace {

// P((ax+b)/(cx+d)) (cx+d)^{deg P}
Poly homogenized(const FieldCtx& k, const Poly& P, const Poly& L, const Poly& M) {
  Poly acc;
  const int m = P.degree();
  for (int t = 0; t <= m; ++t) {
    if (P.c[t].is_zero()) continue;
    acc = add(k, acc, scale(k, mul(k, pow(k, L, t), pow(k, M, m - t)), P.c[t]));
  }
  return acc;
}

}  // namespace

RatFunc pgl2_transform(const FieldCtx& k, const RatFunc& r, const Mobius2x2& g, long long i) {
  const FqElem delta = det(k, g);
  if (delta.is_zero()) throw MathError("singular Moebius matrix");
  if (r.is_zero()) throw MathError("transform of r = 0");
  const Poly L({g.b, g.a});
  const Poly M({g.d, g.c});
  const Poly num = mul(k, homogenized(k, r.num, L, M), pow(k, M, r.den.degree()));
  const Poly den = mul(k, homogenized(k, r.den, L, M), pow(k, M, r.num.degree()));
  const RatFunc base = RatFunc::make(k, num, den);
  const RatFunc jac = RatFunc::make(k, Poly::constant(delta), mul(k, M, M));
  const long long t = 1 - pos_mod(i, k.n());
  return mul(k, base, pow(k, jac, static_cast<int>(t)));
}

std::vector<Mobius2x2> pgl2_elements(const FieldCtx& k) {
  std::vector<Mobius2x2> out;
  const auto q = static_cast<std::uint32_t>(k.q());
  for (std::uint32_t a = 0; a < q; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      for (std::uint32_t d = 0; d < q; ++d) {
        Mobius2x2 g{FqElem{a}, FqElem{b}, k.one(), FqElem{d}};
        if (!det(k, g).is_zero()) out.push_back(g);
      }
    }
  }
  for (std::uint32_t a = 1; a < q; ++a) {
    for (std::uint32_t b = 0; b < q; ++b) out.push_back({FqElem{a}, FqElem{b}, k.zero(), k.one()});
  }
  return out;
}

EtaDetermination determine_eta_convention(const std::vector<const ThetaEngine*>& engines) {
  std::vector<EtaConvention> candidates;
  for (bool s : {false, true}) {
    for (int alpha = -2; alpha <= 1; ++alpha) {
      for (int beta = -1; beta <= 1; ++beta) candidates.push_back({s, alpha, beta});
    }
  }
  std::vector<bool> alive(candidates.size(), true);
  EtaDetermination out;
  for (const ThetaEngine* e : engines) {
    const FieldCtx& k = e->field();
    const int n = k.n();
    for (int deg = 0; deg <= n - 1; ++deg) {
      Poly r = monic_at(k, deg, 0);
      do {
        for (int i = 0; i < n; ++i) {
          const IndexGeometry g = index_geometry(n, deg, i);
          if (g.R != 0 || g.i >= g.i_prime) continue;
          const CycNum lo = e->c_full(r, g.i);
          const CycNum hi = e->c_full(r, g.i_prime);
          if (lo.is_zero() && hi.is_zero()) continue;
          ++out.cases;
          for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (alive[c] && !(lo == e->eta(deg, g.i, candidates[c]) * hi)) alive[c] = false;
          }
        }
      } while (next_monic(k, r));
    }
  }
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (alive[c]) out.survivors.push_back(candidates[c]);
  }
  if (out.survivors.size() == 1) out.result = out.survivors.front();
  return out;
}

}  // namespace theta
