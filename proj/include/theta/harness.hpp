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
 * @file harness.hpp
 * @brief Verification suites, rho0 tables and the on-disk coefficient cache
 * behind the `theta` command line tool.
 */

#ifndef THETA_HARNESS_HPP
#define THETA_HARNESS_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "theta/thetacore.hpp"

namespace theta {

struct RunConfig {
  int p = 7;
  int m = 1;
  int n = 3;
  int eps_exp = 1;
  std::optional<std::vector<int>> modulus;
  std::vector<std::string> suites{"all"};
  int max_deg = 2;                 // table: monic r of degree <= max_deg
  std::vector<std::string> r_list;  // table: explicit r instead of max_deg
  std::vector<int> i_list;          // table: empty means all of [0, n)
  int jobs = 1;
  std::uint64_t seed = 42;
  std::string format = "json";
  std::string out;
  std::string cache_path;
  int cap = 6;  // largest enumeration degree used by the suites

  FieldCtx make_field() const;
  void validate() const;  // throws ConfigError
};

struct RhoRecord {
  Poly r;
  int i = 0;
  CycNum value;
};

struct SuiteReport {
  std::string name;
  long long cases = 0;
  long long skipped = 0;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  std::vector<RhoRecord> rho_values;  // every rho0 the suite evaluated

  bool passed() const { return failures.empty(); }
};

struct SuiteOptions {
  std::uint64_t seed = 42;
  int cap = 6;
  int dh_max_deg = 3;
  int pellet_max_deg = 4;
  int random_g = 20;
  EtaConvention eta = frozen_eta_convention();
  std::string cli_prefix;  // field flags used in reproduction hints
};

/// Suite names accepted by run_suite, in report order.
const std::vector<std::string>& suite_names();
/// Runs one named suite; throws ConfigError for an unknown name.
SuiteReport run_suite(const std::string& name, const ThetaEngine& e, const SuiteOptions& opt);

/// rho0 * q^{(n+1) R'} / tau(eps chi^i) lies in Z[zeta_n], R' = floor((1 + deg r - i)/n).
bool rho_integrality(const ThetaEngine& e, const RhoRecord& rec);

/// Reference-field eta determination on (n, q) = (3, 7) and (4, 5).
EtaDetermination determine_reference_eta();

/// Fixed set of reduced r with deg r <= 2n - 1 used by several suites.
std::vector<Poly> generator_set(const FieldCtx& k);

/// Persistent JSON memo of coefficient sums. Corrupt files or schema
/// mismatches are ignored with a warning on stderr.
class JsonCache : public CoefficientStore {
 public:
  JsonCache(std::string path, std::string field_key, CycFieldPtr field);
  ~JsonCache() override;

  std::optional<CycNum> load(const std::string& key) override;
  void save(const std::string& key, const CycNum& value) override;
  void flush();
  std::size_t size() const;

 private:
  std::string path_;
  std::string field_key_;
  CycFieldPtr field_;
  mutable std::mutex mu_;
  std::map<std::string, nlohmann::json> entries_;
  bool dirty_ = false;
};

/// Stable cache prefix for a field context.
std::string field_key(const FieldCtx& k);

struct TableRow {
  std::string r;
  int i = 0;
  int i_prime = 0;
  int R = 0;
  CycNum rho0;
  std::complex<double> rho0_float;
  std::string flags;
};

std::vector<TableRow> build_table(const ThetaEngine& e, const RunConfig& cfg);
nlohmann::json table_to_json(const FieldCtx& k, const std::vector<TableRow>& rows);
std::vector<TableRow> table_from_json(const ThetaEngine& e, const nlohmann::json& j);
std::string table_to_csv(const std::vector<TableRow>& rows);

/// Subcommand bodies; return the process exit code (0 pass, 1 failure).
int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace theta

#endif  // THETA_HARNESS_HPP
