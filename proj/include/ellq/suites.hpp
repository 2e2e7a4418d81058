#pragma once
// Seeded random-point identity suites behind `ellq verify`.

#include <cstdint>
#include <vector>

#include "ellq/report.hpp"

namespace ellq {

struct SuiteOptions {
  std::uint64_t seed = 42;
  int points = 0;          // 0 -> per-suite default (100 / 20 / 50)
  double max_nome = 0.3;   // |p|, |q| upper bound
  bool parallel = true;
  Context ctx;
};

// θ quasi-periodicity, Γ difference equation and reflection, θ₁ from h,
// Φ shift ratio, log Γ series vs product
std::vector<ResidualReport> elliptic_suite(const SuiteOptions& opt);
// inversion (X and Y type), vertex-SOS duality, intertwining, T'(x) = T(-x)^t for N = 1..3
std::vector<ResidualReport> vertex_sos_suite(const SuiteOptions& opt);
// R(pqu)R(u) = v^{2N} R(pu)R(qu)
std::vector<ResidualReport> laplace_suite(const SuiteOptions& opt);

}  // namespace ellq
