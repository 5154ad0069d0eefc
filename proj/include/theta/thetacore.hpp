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
 * @file thetacore.hpp
 * @brief Gauss sums over F_q[x], the coefficient sums C and C*, the polynomial
 * Psi(r, eps, i, T), the theta coefficients rho0 and the relations they satisfy.
 *
 * ThetaEngine owns one FieldCtx and memoizes the expensive objects: the
 * coefficient sums C(r, i) and brute-force Gauss sums at prime powers. All
 * public methods are safe to call from several threads.
 */

#ifndef THETA_THETACORE_HPP
#define THETA_THETACORE_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "theta/charkit.hpp"
#include "theta/cyclokit.hpp"
#include "theta/fieldkit.hpp"
#include "theta/polyring.hpp"

namespace theta {

struct IndexGeometry {
  int i = 0;        // canonical residue in [0, n)
  int i_prime = 0;  // (sigma - i) mod n
  int sigma = 0;    // deg r + 1
  int R = 0;        // floor((sigma - i) / n), may be negative
  int R1 = 0;       // floor((sigma - 2i) / n)
  int R2 = 0;       // floor((sigma - 2i') / n)
};

IndexGeometry index_geometry(int n, int deg_r, long long i);

/// eta = eps chi(-1)^{s sigma} tau(eps chi^{i - i'}) q^{alpha + beta (i' - i)},
/// with s = i' when sign_uses_i_prime and s = i otherwise; eta' = 1 / (q eta).
struct EtaConvention {
  bool sign_uses_i_prime = true;
  int alpha = -1;
  int beta = -1;

  std::string describe() const;
  friend bool operator==(const EtaConvention&, const EtaConvention&) = default;
};

/// The convention confirmed by determine_eta_convention on brute-force data.
EtaConvention frozen_eta_convention();
/// sign i*sigma and no (i' - i) dependence in the q-power.
EtaConvention literal_eta_convention();

struct PsiPoly {
  Poly r;
  IndexGeometry geo;
  std::vector<CycNum> D;  // coefficients of F(X), X = q^n T; empty when R < 0
  CycNum eta;
  CycNum eta_prime;

  /// F(X) at a rational point.
  CycNum eval_F(const mpq_class& X) const;
};

struct Mobius2x2 {
  FqElem a, b, c, d;
};

/// Persistent memo for coefficient sums, keyed by a stable string.
class CoefficientStore {
 public:
  virtual ~CoefficientStore() = default;
  virtual std::optional<CycNum> load(const std::string& key) = 0;
  virtual void save(const std::string& key, const CycNum& value) = 0;
};

class ThetaEngine {
 public:
  explicit ThetaEngine(FieldCtx field, int jobs = 1);

  const FieldCtx& field() const noexcept { return k_; }
  const CycFieldPtr& cyc() const noexcept { return cyc_; }
  int jobs() const noexcept { return jobs_; }
  void set_jobs(int jobs);
  /// Optional persistent store for C(r, d); not owned.
  void set_store(CoefficientStore* store) { store_ = store; }

  /// tau(eps chi^j); cached per j mod n.
  CycNum tau(long long j) const;
  /// eps(chi(-1)).
  CycNum eps_chi_minus_one() const;
  /// q^e as a CycNum, e may be negative.
  CycNum q_power(long long e) const;

  /// Sum over residues xi mod c of eps^power((xi/c)_n) e(r xi / c).
  CycNum gauss_sum_bruteforce(const Poly& r, const Poly& c, int power = 1) const;
  /// mu(c) eps((r/c)_n)^{-1} eps((c'/c)_n) (-tau(eps chi))^{deg c}; monic c with
  /// gcd(r, c) = 1, otherwise MathError.
  CycNum gauss_sum_dh(const Poly& r, const Poly& c) const;
  /// g(r, eps, c) for any monic c: the part of c coprime to r in closed form, the
  /// rest brute-forced per prime power and glued by twisted multiplicativity.
  CycNum gauss_sum(const Poly& r, const Poly& c) const;

  /// Sum of g(r, eps, c) over monic c of degree d with gcd(r, c) = 1.
  CycNum c_star(const Poly& r, int d) const;
  /// (-1)^d tau^d sum mu(c) conj-eps((r/c)_n) eps((c'/c)_n), from residue symbols.
  CycNum c_star_alt(const Poly& r, int d) const;

  /// True when no prime of r has exponent >= n - 1.
  bool r_star_applicable(const Poly& r) const;
  /// Pairs (r*, g(r, eps, r*)) with g != 0; MathError when not applicable.
  std::vector<std::pair<Poly, CycNum>> r_star_set(const Poly& r, int i) const;

  /// C(r, d) summed over all monic c of degree d.
  CycNum c_direct(const Poly& r, int d) const;
  /// C(r, d) from gauss_sum_bruteforce on every c; for small cases only.
  CycNum c_bruteforce(const Poly& r, int d) const;
  /// C(r, d) through the r* decomposition.
  CycNum c_decomposed(const Poly& r, int d) const;
  /// C(r, d), memoized; decomposition path when applicable, else direct.
  CycNum c_full(const Poly& r, int d) const;

  /// D_0 .. D_{count-1} for (r, i) without truncation at R.
  std::vector<CycNum> d_coefficients(const Poly& r, long long i, int count) const;
  PsiPoly psi_polynomial(const Poly& r, long long i,
                         const EtaConvention& conv = frozen_eta_convention()) const;
  CycNum eta(int deg_r, long long i, const EtaConvention& conv = frozen_eta_convention()) const;
  CycNum eta_prime(int deg_r, long long i, const EtaConvention& conv = frozen_eta_convention()) const;

  /// rho0 of the polynomial r as given (no reduction modulo n-th powers).
  CycNum rho0_poly(const Poly& r, long long i) const;
  /// rho0(r, eps, i) = Psi(r~, eps, i, q^{-n-1}), r~ the reduced representative.
  CycNum rho0(const RatFunc& r, long long i) const;

 private:
  struct CoreCounts;
  CoreCounts core_counts(const Poly& r, int d, bool coprime_only) const;
  CycNum assemble(const Poly& r, int d, const CoreCounts& counts) const;
  CycNum gauss_prime_power(const Poly& r, const Poly& pi, int e) const;
  CycNum mutual_symbol(const Poly& a, const Poly& b) const;

  FieldCtx k_;
  CycFieldPtr cyc_;
  int jobs_;
  CoefficientStore* store_ = nullptr;
  std::vector<CycNum> tau_;
  mutable std::mutex mu_;
  mutable std::map<std::string, CycNum> c_cache_;
  mutable std::map<std::string, CycNum> gauss_cache_;
};

/// Relations between the coefficients D (index i) and D' (index i') of the two
/// Psi polynomials, as (lhs, rhs) pairs. Requires i < i'.
struct RelationCheck {
  std::string label;
  CycNum lhs;
  CycNum rhs;
};
std::vector<RelationCheck> functional_equation_relations(const ThetaEngine& e, const PsiPoly& F,
                                                         const PsiPoly& G);
/// The closed forms for R = 0, 1, 2.
std::vector<RelationCheck> functional_equation_closed_forms(const ThetaEngine& e, const PsiPoly& F,
                                                            const PsiPoly& G);

/// Rebuilds all D_k, D'_k from the leading halves by propagating the linear
/// relations. half_F must have floor(R/2)+1 entries; half_G between the
/// minimal count and floor(R/2)+1. Throws ConfigError on bad lengths.
std::pair<std::vector<CycNum>, std::vector<CycNum>> functional_equation_expand(
    const ThetaEngine& e, const PsiPoly& F, const std::vector<CycNum>& half_F,
    const std::vector<CycNum>& half_G);

struct HeckeInfinity {
  int lo = 0;
  int hi = 0;
  CycNum rho_lo, rho_hi;
  CycNum eta, eta_prime;
  CycNum forward_rhs;   // eta * rho0(hi), compared with rho_lo
  CycNum backward_rhs;  // q eta' * rho0(lo), compared with rho_hi
  CycNum composition;   // eta * q eta', equal to 1
  CycNum literal_rhs;   // eps chi(-1)^{i sigma} tau(eps chi^{i-i'}) q^{-1} rho0(hi)
};
/// Both relations at infinity for the reduced polynomial r; MathError when i = i'.
HeckeInfinity hecke_infinity(const ThetaEngine& e, const Poly& r, long long i,
                             const EtaConvention& conv = frozen_eta_convention());

struct HeckeFinite {
  CycNum lhs;     // rho0(r_o pi^j, i)
  CycNum rhs;     // factor * rho0(r_o pi^{n-2-j}, i - k), or 0 when j = n-1
  CycNum factor;  // zero when j = n-1
  Poly target_r;
  int target_i = 0;
};
/// The relation at the prime pi; requires gcd(r_o, pi) = 1 and 0 <= j < n.
HeckeFinite hecke_finite(const ThetaEngine& e, const Poly& r_o, const Poly& pi, int j, long long i);

FqElem det(const FieldCtx& k, const Mobius2x2& g);
Mobius2x2 compose(const FieldCtx& k, const Mobius2x2& g, const Mobius2x2& h);
/// r((ax+b)/(cx+d)) (det/(cx+d)^2)^{1-i}; MathError for singular g.
RatFunc pgl2_transform(const FieldCtx& k, const RatFunc& r, const Mobius2x2& g, long long i);
/// One representative per element of PGL_2(F_q), in a fixed order.
std::vector<Mobius2x2> pgl2_elements(const FieldCtx& k);

struct EtaDetermination {
  std::vector<EtaConvention> survivors;
  int cases = 0;
  std::optional<EtaConvention> result;  // set iff exactly one survivor
};
/// Fits the eta convention on R = 0 brute-force data: D_0(lo) = eta D_0(hi).
/// Candidates: sign from i or i', q-exponent alpha + beta (i' - i) with
/// alpha in [-2, 1] and beta in [-1, 1].
EtaDetermination determine_eta_convention(const std::vector<const ThetaEngine*>& engines);

}  // namespace theta

#endif  // THETA_THETACORE_HPP
