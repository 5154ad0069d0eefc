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

// theta: tables and identity checks for metaplectic theta coefficients
// over F_q(x).

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "theta/error.hpp"
#include "theta/harness.hpp"

namespace {

void add_field_options(CLI::App* app, theta::RunConfig& cfg, std::vector<int>& modulus) {
  app->add_option("--p", cfg.p, "Characteristic (odd prime)")->capture_default_str();
  app->add_option("--m", cfg.m, "Extension degree, q = p^m")->capture_default_str();
  app->add_option("--n", cfg.n, "Order of the residue symbol, n | q - 1")->capture_default_str();
  app->add_option("--eps", cfg.eps_exp, "Embedding exponent, coprime to n")->capture_default_str();
  app->add_option("--modulus", modulus, "Defining polynomial of F_q over F_p, c_0 .. c_m (monic)")
      ->delimiter(',');
  app->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str();
  app->add_option("--cache", cfg.cache_path, "Coefficient cache file (default: $THETA_CACHE)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metaplectic theta coefficients over F_q(x)"};
  app.require_subcommand(1);
  theta::RunConfig cfg;
  std::vector<int> modulus;

  auto* table = app.add_subcommand("table", "Tabulate rho0(r, i) over a range of r");
  add_field_options(table, cfg, modulus);
  table->add_option("--max-deg", cfg.max_deg, "All monic r with deg r <= max-deg (-1 for none)")
      ->capture_default_str();
  table->add_option("--r-list", cfg.r_list, "Explicit r as coefficient lists \"c0,c1,...\"");
  table->add_option("--i", cfg.i_list, "Indices i (default: all of [0, n))");
  table->add_option("--format", cfg.format, "json or csv")->capture_default_str();
  table->add_option("--out", cfg.out, "Output file (default: stdout)");

  auto* verify = app.add_subcommand("verify", "Run the identity suites");
  add_field_options(verify, cfg, modulus);
  verify->add_option("--suite", cfg.suites, "Suite names or 'all'")->delimiter(',');
  verify->add_option("--seed", cfg.seed, "Seed for random matrices and polynomials")->capture_default_str();
  verify->add_option("--cap", cfg.cap, "Largest degree of c enumerated by the suites")->capture_default_str();
  verify->add_option("--format", cfg.format, "Report format written to --out: json or csv (text)")
      ->capture_default_str();
  verify->add_option("--out", cfg.out, "Also write the report here");

  std::string r_str = "1";
  std::string c_str;
  int power = 1;
  auto* gauss = app.add_subcommand("gauss", "Print one Gauss sum g(r, eps^power, c)");
  add_field_options(gauss, cfg, modulus);
  gauss->add_option("--r", r_str, "Numerator r as \"c0,c1,...\"")->capture_default_str();
  gauss->add_option("--c", c_str, "Modulus c as \"c0,c1,...\"")->required();
  gauss->add_option("--power", power, "Power of eps")->capture_default_str();

  long long rho_i = 0;
  auto* rho = app.add_subcommand("rho", "Print rho0(r, i)");
  add_field_options(rho, cfg, modulus);
  rho->add_option("--r", r_str, "r as \"c0,c1,...\"")->required();
  rho->add_option("--i", rho_i, "Index i")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (!modulus.empty()) cfg.modulus = modulus;
  if (cfg.cache_path.empty()) {
    if (const char* env = std::getenv("THETA_CACHE")) cfg.cache_path = env;
  }

  try {
    if (*table) return theta::cmd_table(cfg, std::cout, std::cerr);
    if (*verify) return theta::cmd_verify(cfg, std::cout, std::cerr);

    cfg.validate();
    theta::ThetaEngine engine(cfg.make_field(), cfg.jobs);
    const theta::FieldCtx& k = engine.field();
    if (*gauss) {
      const theta::Poly r = theta::parse_poly(k, r_str);
      const theta::Poly c = theta::parse_poly(k, c_str);
      if (c.is_zero() || !c.is_monic()) throw theta::ConfigError("--c must be monic");
      const theta::CycNum v = engine.gauss_sum_bruteforce(r, c, power);
      std::cout << v.to_string() << "\n";
      const auto z = v.complex_eval(128);
      std::cout << "~ " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i\n";
      return 0;
    }
    std::unique_ptr<theta::JsonCache> cache;
    if (!cfg.cache_path.empty()) {
      cache = std::make_unique<theta::JsonCache>(cfg.cache_path, theta::field_key(k), engine.cyc());
      engine.set_store(cache.get());
    }
    const theta::Poly r = theta::parse_poly(k, r_str);
    if (r.is_zero()) throw theta::ConfigError("r must be nonzero");
    const theta::CycNum v = engine.rho0(theta::RatFunc::from_poly(r), rho_i);
    std::cout << v.to_string() << "\n";
    const auto z = v.complex_eval(128);
    std::cout << "~ " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i\n";
    return 0;
  } catch (const theta::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
