// Serial reference vs OpenMP paths on the kernels that dominate runtime.

#include <benchmark/benchmark.h>

#include "ellq/modular.hpp"
#include "ellq/scan.hpp"
#include "ellq/suites.hpp"
#include "ellq/thermo.hpp"

using namespace ellq;

namespace {

double gamma_point(std::size_t i) {
  const cplx u = std::polar(0.4 + 0.001 * double(i % 500), 0.01 * double(i));
  return std::abs(gamma_e(u, {0.2, 0.05}, {-0.15, 0.1}));
}

void BM_GammaScan(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  const bool par = st.range(1) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(par ? scan_parallel(n, gamma_point) : scan_serial(n, gamma_point));
  st.SetItemsProcessed(st.iterations() * std::int64_t(n));
}
BENCHMARK(BM_GammaScan)->ArgsProduct({{256, 4096}, {0, 1}})->ArgNames({"n", "parallel"});

void BM_EllipticSuite(benchmark::State& st) {
  SuiteOptions o;
  o.points = int(st.range(0));
  o.parallel = st.range(1) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(elliptic_suite(o));
}
BENCHMARK(BM_EllipticSuite)->ArgsProduct({{100, 1000}, {0, 1}})->ArgNames({"points", "parallel"});

void BM_ThermoSolve(benchmark::State& st) {
  ThermoOptions o;
  o.parallel = st.range(0) != 0;
  for (auto _ : st) benchmark::DoNotOptimize(delta_f_solve(4, 0.7, 0.2, 0.2, 12, o));
}
BENCHMARK(BM_ThermoSolve)->Arg(0)->Arg(1)->ArgNames({"parallel"});

}  // namespace

BENCHMARK_MAIN();
