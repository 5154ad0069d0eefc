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

#include "theta/cyclokit.hpp"

#include <mpfr.h>

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "theta/error.hpp"

namespace theta {

namespace {

using IntPoly = std::vector<std::int64_t>;

// Exact quotient of a by the monic polynomial b.
IntPoly exact_div(IntPoly a, const IntPoly& b) {
  const std::size_t db = b.size() - 1;
  IntPoly q(a.size() - db, 0);
  for (std::size_t k = a.size(); k-- > db;) {
    const std::int64_t c = a[k];
    q[k - db] = c;
    if (c == 0) continue;
    for (std::size_t i = 0; i <= db; ++i) a[k - db + i] -= c * b[i];
  }
  return q;
}

IntPoly cyclotomic(int N, std::map<int, IntPoly>& memo) {
  if (auto it = memo.find(N); it != memo.end()) return it->second;
  IntPoly f(N + 1, 0);
  f[0] = -1;
  f[N] = 1;
  for (int d = 1; d < N; ++d) {
    if (N % d == 0) f = exact_div(std::move(f), cyclotomic(d, memo));
  }
  memo[N] = f;
  return f;
}

long long pos_mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

long long inverse_mod(long long a, long long m) {
  a = pos_mod(a, m);
  for (long long x = 1; x < m; ++x) {
    if (a * x % m == 1) return x;
  }
  return m == 1 ? 0 : -1;
}

}  // namespace

CyclotomicField::CyclotomicField(int N) : N_(N) {
  if (N < 1) throw ConfigError("cyclotomic order must be positive");
  std::map<int, IntPoly> memo;
  phi_poly_ = cyclotomic(N, memo);
  phi_ = static_cast<int>(phi_poly_.size()) - 1;
  powers_.assign(N, IntPoly(phi_, 0));
  IntPoly cur(phi_ + 1, 0);
  cur[0] = 1;
  for (int k = 0; k < N; ++k) {
    std::copy(cur.begin(), cur.begin() + phi_, powers_[k].begin());
    // multiply by zeta and reduce with the monic Phi_N
    for (int i = phi_; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    const std::int64_t top = cur[phi_];
    if (top != 0) {
      for (int i = 0; i <= phi_; ++i) cur[i] -= top * phi_poly_[i];
    }
  }
}

std::shared_ptr<const CyclotomicField> CyclotomicField::get(int N) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const CyclotomicField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[N];
  if (!slot) slot = std::make_shared<const CyclotomicField>(N);
  return slot;
}

const std::vector<std::int64_t>& CyclotomicField::power(long long k) const noexcept {
  return powers_[pos_mod(k, N_)];
}

CycNum::CycNum(CycFieldPtr field, std::vector<mpz_class> num, mpz_class den)
    : field_(std::move(field)), num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

CycNum CycNum::zero(CycFieldPtr field) {
  const int phi = field->degree();
  return CycNum(std::move(field), std::vector<mpz_class>(phi), 1);
}

CycNum CycNum::one(CycFieldPtr field) { return rational(std::move(field), 1); }

CycNum CycNum::rational(CycFieldPtr field, const mpq_class& v) {
  std::vector<mpz_class> num(field->degree());
  num[0] = v.get_num();
  return CycNum(std::move(field), std::move(num), v.get_den());
}

CycNum CycNum::root(CycFieldPtr field, long long k) {
  const auto& pw = field->power(k);
  std::vector<mpz_class> num(pw.size());
  for (std::size_t i = 0; i < pw.size(); ++i) num[i] = static_cast<long>(pw[i]);
  return CycNum(std::move(field), std::move(num), 1);
}

CycNum CycNum::root_of_unity(CycFieldPtr field, int order, long long exponent) {
  if (order < 1 || field->order() % order != 0) {
    throw ConfigError("root order " + std::to_string(order) + " does not divide " +
                      std::to_string(field->order()));
  }
  const long long step = field->order() / order;
  return root(std::move(field), step * pos_mod(exponent, order));
}

CycNum CycNum::from_coords(CycFieldPtr field, std::vector<mpz_class> num, mpz_class den) {
  if (static_cast<int>(num.size()) != field->degree()) {
    throw ConfigError("coordinate vector has wrong length for Q(zeta_" +
                      std::to_string(field->order()) + ")");
  }
  if (den == 0) throw MathError("zero denominator");
  return CycNum(std::move(field), std::move(num), std::move(den));
}

void CycNum::normalize() {
  if (den_ < 0) {
    den_ = -den_;
    for (auto& c : num_) c = -c;
  }
  mpz_class g = den_;
  for (const auto& c : num_) {
    if (g == 1) break;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  }
  bool all_zero = true;
  for (const auto& c : num_) all_zero = all_zero && c == 0;
  if (all_zero) {
    den_ = 1;
    return;
  }
  if (g != 1) {
    for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }
}

void CycNum::require_same_field(const CycNum& b) const {
  if (!field_ || !b.field_) throw MathError("unbound cyclotomic value");
  if (field_ != b.field_ && field_->order() != b.field_->order()) {
    throw MathError("cyclotomic values from different fields");
  }
}

bool CycNum::is_zero() const {
  for (const auto& c : num_) {
    if (c != 0) return false;
  }
  return true;
}

bool CycNum::is_rational() const {
  for (std::size_t i = 1; i < num_.size(); ++i) {
    if (num_[i] != 0) return false;
  }
  return true;
}

mpq_class CycNum::to_rational() const {
  if (!field_) throw MathError("unbound cyclotomic value");
  if (!is_rational()) throw MathError("cyclotomic value is not rational");
  mpq_class r(num_[0], den_);
  r.canonicalize();
  return r;
}

CycNum CycNum::operator-() const {
  CycNum r = *this;
  for (auto& c : r.num_) c = -c;
  return r;
}

CycNum& CycNum::operator+=(const CycNum& b) {
  require_same_field(b);
  if (den_ == b.den_) {
    for (std::size_t i = 0; i < num_.size(); ++i) num_[i] += b.num_[i];
  } else {
    for (std::size_t i = 0; i < num_.size(); ++i) num_[i] = num_[i] * b.den_ + b.num_[i] * den_;
    den_ *= b.den_;
  }
  normalize();
  return *this;
}

CycNum& CycNum::operator-=(const CycNum& b) { return *this += -b; }

CycNum& CycNum::operator*=(const CycNum& b) {
  require_same_field(b);
  const int phi = field_->degree();
  std::vector<mpz_class> prod(2 * phi - 1);
  for (int i = 0; i < phi; ++i) {
    if (num_[i] == 0) continue;
    for (int j = 0; j < phi; ++j) {
      if (b.num_[j] != 0) prod[i + j] += num_[i] * b.num_[j];
    }
  }
  std::vector<mpz_class> out(prod.begin(), prod.begin() + phi);
  for (int k = phi; k < 2 * phi - 1; ++k) {
    if (prod[k] == 0) continue;
    const auto& pw = field_->power(k);
    for (int i = 0; i < phi; ++i) {
      if (pw[i] != 0) out[i] += prod[k] * static_cast<long>(pw[i]);
    }
  }
  num_ = std::move(out);
  den_ *= b.den_;
  normalize();
  return *this;
}

bool operator==(const CycNum& a, const CycNum& b) {
  a.require_same_field(b);
  return a.den_ == b.den_ && a.num_ == b.num_;
}

CycNum CycNum::scaled(const mpq_class& s) const {
  if (!field_) throw MathError("unbound cyclotomic value");
  std::vector<mpz_class> num = num_;
  for (auto& c : num) c *= s.get_num();
  return CycNum(field_, std::move(num), den_ * s.get_den());
}

CycNum CycNum::divided(const mpq_class& s) const {
  if (s == 0) throw MathError("division of a cyclotomic value by zero");
  mpq_class inv = 1 / s;
  return scaled(inv);
}

CycNum CycNum::inverse() const {
  if (!field_) throw MathError("unbound cyclotomic value");
  if (is_zero()) throw MathError("inverse of zero in Q(zeta_N)");
  const int phi = field_->degree();
  // Solve (this * x) = 1 column-wise: column j holds the coordinates of this * zeta^j.
  std::vector<std::vector<mpq_class>> m(phi, std::vector<mpq_class>(phi + 1));
  CycNum col = *this;
  const CycNum z = root(field_, 1);
  for (int j = 0; j < phi; ++j) {
    for (int i = 0; i < phi; ++i) m[i][j] = mpq_class(col.num_[i], col.den_);
    if (j + 1 < phi) col *= z;
  }
  for (auto& row : m) row[phi] = 0;
  m[0][phi] = 1;
  for (int c = 0; c < phi; ++c) {
    int pivot = c;
    while (pivot < phi && m[pivot][c] == 0) ++pivot;
    if (pivot == phi) throw MathError("singular multiplication matrix");
    std::swap(m[c], m[pivot]);
    for (int k = c + 1; k <= phi; ++k) m[c][k] /= m[c][c];
    m[c][c] = 1;
    for (int r = 0; r < phi; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const mpq_class f = m[r][c];
      for (int k = c; k <= phi; ++k) m[r][k] -= f * m[c][k];
    }
  }
  mpz_class den = 1;
  for (int i = 0; i < phi; ++i) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m[i][phi].get_den_mpz_t());
  }
  std::vector<mpz_class> num(phi);
  for (int i = 0; i < phi; ++i) {
    num[i] = m[i][phi].get_num() * (den / m[i][phi].get_den());
  }
  return CycNum(field_, std::move(num), den);
}

CycNum CycNum::pow(long long e) const {
  if (!field_) throw MathError("unbound cyclotomic value");
  if (e < 0) return inverse().pow(-e);
  CycNum result = one(field_);
  CycNum base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

CycNum CycNum::galois(long long k) const {
  if (!field_) throw MathError("unbound cyclotomic value");
  const int N = field_->order();
  if (std::gcd(pos_mod(k, N), static_cast<long long>(N)) != 1) {
    throw MathError("Galois exponent not coprime to the field order");
  }
  const int phi = field_->degree();
  std::vector<mpz_class> out(phi);
  for (int j = 0; j < phi; ++j) {
    if (num_[j] == 0) continue;
    const auto& pw = field_->power(static_cast<long long>(j) * pos_mod(k, N));
    for (int i = 0; i < phi; ++i) {
      if (pw[i] != 0) out[i] += num_[j] * static_cast<long>(pw[i]);
    }
  }
  return CycNum(field_, std::move(out), den_);
}

std::vector<mpq_class> CycNum::tensor_coords(int n) const {
  if (!field_) throw MathError("unbound cyclotomic value");
  const int N = field_->order();
  if (n < 1 || N % n != 0) throw ConfigError("subfield order must divide N");
  const int m = N / n;
  if (std::gcd(n, m) != 1) throw ConfigError("subfield order must be coprime to its cofactor");
  const auto fn = CyclotomicField::get(n);
  const auto fm = CyclotomicField::get(m);
  const long long u = inverse_mod(m, n);
  const long long v = inverse_mod(n, m);
  const int pn = fn->degree();
  const int pm = fm->degree();
  std::vector<mpz_class> acc(static_cast<std::size_t>(pn) * pm);
  for (int k = 0; k < field_->degree(); ++k) {
    if (num_[k] == 0) continue;
    const auto& a = fn->power(k * u);
    const auto& b = fm->power(k * v);
    for (int i = 0; i < pn; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < pm; ++j) {
        if (b[j] != 0) acc[i * pm + j] += num_[k] * static_cast<long>(a[i] * b[j]);
      }
    }
  }
  std::vector<mpq_class> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    out[i] = mpq_class(acc[i], den_);
    out[i].canonicalize();
  }
  return out;
}

bool CycNum::in_subfield(int n) const {
  const auto coords = tensor_coords(n);
  const int pm = CyclotomicField::get(field_->order() / n)->degree();
  for (std::size_t idx = 0; idx < coords.size(); ++idx) {
    if (idx % pm != 0 && coords[idx] != 0) return false;
  }
  return true;
}

bool CycNum::in_integers_of_subfield(int n) const {
  const auto coords = tensor_coords(n);
  const int pm = CyclotomicField::get(field_->order() / n)->degree();
  for (std::size_t idx = 0; idx < coords.size(); ++idx) {
    if (idx % pm != 0) {
      if (coords[idx] != 0) return false;
    } else if (coords[idx].get_den() != 1) {
      return false;
    }
  }
  return true;
}

std::complex<double> CycNum::complex_eval(unsigned precision_bits) const {
  if (!field_) throw MathError("unbound cyclotomic value");
  const auto prec = static_cast<mpfr_prec_t>(precision_bits);
  mpfr_t re, im, angle, c, s, term, pi2;
  for (mpfr_ptr v : {re, im, angle, c, s, term, pi2}) mpfr_init2(v, prec);
  mpfr_set_zero(re, 1);
  mpfr_set_zero(im, 1);
  mpfr_const_pi(pi2, MPFR_RNDN);
  mpfr_mul_ui(pi2, pi2, 2, MPFR_RNDN);
  for (int k = 0; k < field_->degree(); ++k) {
    if (num_[k] == 0) continue;
    mpfr_mul_ui(angle, pi2, static_cast<unsigned long>(k), MPFR_RNDN);
    mpfr_div_ui(angle, angle, static_cast<unsigned long>(field_->order()), MPFR_RNDN);
    mpfr_sin_cos(s, c, angle, MPFR_RNDN);
    mpfr_mul_z(term, c, num_[k].get_mpz_t(), MPFR_RNDN);
    mpfr_add(re, re, term, MPFR_RNDN);
    mpfr_mul_z(term, s, num_[k].get_mpz_t(), MPFR_RNDN);
    mpfr_add(im, im, term, MPFR_RNDN);
  }
  mpfr_div_z(re, re, den_.get_mpz_t(), MPFR_RNDN);
  mpfr_div_z(im, im, den_.get_mpz_t(), MPFR_RNDN);
  std::complex<double> out(mpfr_get_d(re, MPFR_RNDN), mpfr_get_d(im, MPFR_RNDN));
  for (mpfr_ptr v : {re, im, angle, c, s, term, pi2}) mpfr_clear(v);
  if (out.real() == 0.0) out.real(0.0);  // drop negative zero
  if (out.imag() == 0.0) out.imag(0.0);
  return out;
}

nlohmann::json CycNum::to_json() const {
  if (!field_) throw MathError("unbound cyclotomic value");
  nlohmann::json j;
  j["den"] = den_.get_str();
  auto arr = nlohmann::json::array();
  for (const auto& c : num_) arr.push_back(c.get_str());
  j["num"] = std::move(arr);
  return j;
}

CycNum CycNum::from_json(CycFieldPtr field, const nlohmann::json& j) {
  try {
    mpz_class den(j.at("den").get<std::string>());
    std::vector<mpz_class> num;
    for (const auto& c : j.at("num")) num.emplace_back(c.get<std::string>());
    return from_coords(std::move(field), std::move(num), std::move(den));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed cyclotomic value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("malformed cyclotomic value: ") + e.what());
  }
}

std::string CycNum::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < num_.size(); ++i) os << (i ? "," : "") << num_[i].get_str();
  os << ")";
  if (den_ != 1) os << "/" << den_.get_str();
  return os.str();
}

RootSum::RootSum(CycFieldPtr field) : field_(std::move(field)), counts_(field_->order(), 0) {}

void RootSum::add(long long k, std::int64_t c) { counts_[pos_mod(k, field_->order())] += c; }

void RootSum::merge(const RootSum& other) {
  for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
}

CycNum RootSum::value() const {
  const int phi = field_->degree();
  std::vector<mpz_class> num(phi);
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    if (counts_[k] == 0) continue;
    const mpz_class c = static_cast<long>(counts_[k]);
    const auto& pw = field_->power(static_cast<long long>(k));
    for (int i = 0; i < phi; ++i) {
      if (pw[i] != 0) num[i] += c * static_cast<long>(pw[i]);
    }
  }
  return CycNum::from_coords(field_, std::move(num), 1);
}

CycFieldPtr cyc_field_for(const FieldCtx& ctx) { return CyclotomicField::get(ctx.n() * ctx.p()); }

long long eps_index(const FieldCtx& ctx, FqElem z) {
  const long long e = ctx.mu_n_log(z);
  return pos_mod(static_cast<long long>(ctx.p()) * ctx.eps_exp() * e,
                 static_cast<long long>(ctx.n()) * ctx.p());
}

long long e_o_index(const FieldCtx& ctx, FqElem a) {
  return static_cast<long long>(ctx.n()) * ctx.trace(a);
}

CycNum eps(const FieldCtx& ctx, FqElem z) { return CycNum::root(cyc_field_for(ctx), eps_index(ctx, z)); }

CycNum e_o(const FieldCtx& ctx, FqElem a) { return CycNum::root(cyc_field_for(ctx), e_o_index(ctx, a)); }

}  // namespace theta
