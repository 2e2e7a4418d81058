#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ellq/functional.hpp"
#include "ellq/perturbative.hpp"

using namespace ellq;

namespace {

long binom(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// max |Liou2 residual| of the truncated series at p = εp0, q = εq0
double numeric_residual(const PerturbativeSolution& sol, double eps) {
  const cplx p = eps * 1.0, q = eps * 1.5;
  const LiouvilleParams lp{sol.v, p, q, sol.N, sol.R0.eval(p, q, 1.0)};
  const ScalarFn H = [&](cplx z) { return sol.H.eval(p, q, z); };
  double r = 0.0;
  for (cplx u : {cplx{0.8, 0.3}, cplx{1.2, -0.1}, cplx{-0.9, 0.5}}) r = std::max(r, std::abs(liouville_H_residual(H, u, lp)));
  return r;
}

}  // namespace

TEST_CASE("ground state: residual, Q1 = 2, emergent p<->q symmetry") {
  for (int N : {1, 2, 3}) {
    const PerturbativeSolution sol = solve_ground(N, 0.5);
    INFO("N = " << N);
    CHECK(max_relative_residual(sol) < 1e-12);
    REQUIRE(sol.Q.count(1) == 1);
    CHECK(sol.Q.at(1) == 2);
    CHECK(sol.pq_asymmetry < 1e-12);
    CHECK(std::abs(sol.H.get(0, 0, 0) - 1.0) < 1e-14);
    for (const auto& d : sol.diagnostics) CHECK(d.residual < 1e-12);
  }
}

TEST_CASE("ground state: detected orders for N = 1") {
  PerturbativeOptions o;
  o.D = 16;
  const PerturbativeSolution sol = solve_ground(1, 0.5, o);
  const std::vector<int> want{2, 5, 8, 12, 16};
  for (std::size_t n = 1; n <= want.size(); ++n) {
    REQUIRE(sol.Q.count(int(n)) == 1);
    CHECK(sol.Q.at(int(n)) == want[n - 1]);
  }
}

TEST_CASE("ground state: order-0 data against a direct expansion of S") {
  for (int N : {1, 2, 3}) {
    const cplx v = 0.5;
    const GradedSeries S = s_series(N, v, 0);
    // degree 0 of S/R0 is (1 - v/u)^N
    for (int k = 0; k <= N; ++k)
      CHECK(std::abs(S.get(0, 0, -k) - double(binom(N, k)) * std::pow(-v, k)) < 1e-14);
    const PerturbativeSolution sol = solve_ground(N, v);
    CHECK(std::abs(sol.R0.get(0, 0, 0) - (1.0 - std::pow(v, N))) < 1e-13);
  }
}

TEST_CASE("ground state: truncated series is accurate to order D+1 numerically") {
  const PerturbativeSolution sol = solve_ground(2, 0.5);
  const double r1 = numeric_residual(sol, 0.01), r2 = numeric_residual(sol, 0.02);
  MESSAGE("residual ratio for doubled eps: " << r2 / r1);
  // D = 6: the first omitted degree is 7
  CHECK(r2 / r1 > 64.0);
  CHECK(r2 / r1 < 256.0);
}

TEST_CASE("ground state: serial and parallel assembly agree") {
  PerturbativeOptions a, b;
  b.parallel = false;
  const PerturbativeSolution s1 = solve_ground(3, 0.5, a), s2 = solve_ground(3, 0.5, b);
  double diff = 0.0;
  s1.H.for_each([&](int i, int j, int k, cplx c) { diff = std::max(diff, std::abs(c - s2.H.get(i, j, k))); });
  CHECK(diff < 1e-13);
}

TEST_CASE("excited: m = 0 via the state API reproduces the ground state") {
  const PerturbativeSolution g = solve_ground(2, 0.5);
  const PerturbativeSolution e = solve_excited(enumerate_states(2, 0, 0.5)[0]);
  double diff = 0.0;
  g.H.for_each([&](int i, int j, int k, cplx c) { diff = std::max(diff, std::abs(c - e.H.get(i, j, k))); });
  CHECK(diff < 1e-14);
}

TEST_CASE("excited: N = 2, m = 1 both states, R0 order, gap, conjecture") {
  const auto states = enumerate_states(2, 1, 0.5);
  REQUIRE(states.size() == 2);
  std::vector<cplx> r00;
  for (const auto& st : states) {
    const PerturbativeSolution sol = solve_excited(st);
    CHECK(max_relative_residual(sol) < 1e-12);
    CHECK(sol.R0.min_degree() == -2);  // (pq)^{-1}
    // seed modes u^{m+1}..u^{m+N} enter one per pq order, then a gap
    CHECK(sol.Q.at(2) == 2);
    CHECK(sol.Q.at(3) == 4);
    CHECK(sol.Q.at(4) > 6);
    const ConjectureReport c = conjecture_scaling(sol);
    CHECK(c.order == doctest::Approx(0.5));
    CHECK(c.expected == doctest::Approx(0.5));
    r00.push_back(sol.R0.get(0, 0, 0));
  }
  CHECK(std::abs(r00[0] - r00[1]) > 1e-3);
}

TEST_CASE("excited: N = 4, m = 2 conjecture order 1") {
  const auto states = enumerate_states(4, 2, 0.5);
  REQUIRE(states.size() == 6);
  PerturbativeOptions o;
  o.D = 4;
  const PerturbativeSolution sol = solve_excited(states[0], o);
  CHECK(max_relative_residual(sol) < 1e-12);
  CHECK(sol.R0.min_degree() == -4);
  CHECK(conjecture_scaling(sol).order == doctest::Approx(1.0));
}

TEST_CASE("excited: an invalid seed is rejected at the lowest order") {
  SpectralState st = enumerate_states(2, 1, 0.5)[0];
  st.pairs_P[0].xi *= 1.1;
  st.pairs_P[0].mate = 1.0 / st.pairs_P[0].xi;
  CHECK_THROWS_AS(solve_excited(st), SeedError);
}

TEST_CASE("induced transfer: tropical order, symmetry, both TQ forms") {
  for (int N : {1, 2, 3}) {
    const InducedTransfer it = induced_transfer(solve_ground(N, 0.5));
    INFO("N = " << N);
    CHECK(it.tk.size() == std::size_t(N));
    CHECK(it.symmetry_deviation < 1e-10);
    CHECK(it.q_residual < 1e-12);
    CHECK(it.p_residual < 1e-12);
    CHECK(it.tropical_deviation < 1e-10);
    CHECK(it.basis_residual < 1e-10);
  }
  const InducedTransfer ex = induced_transfer(solve_excited(enumerate_states(2, 1, 0.5)[1]));
  CHECK(ex.tropical_deviation < 1e-10);
  CHECK(ex.symmetry_deviation < 1e-10);
}

TEST_CASE("resonance: detector and solver refusal") {
  PerturbativeOptions o;
  const cplx p = o.probe_p, q = o.probe_q;
  // v^2 = 1/(pq): denominator 1 - p q v^2 vanishes
  const cplx v = 1.0 / std::sqrt(p * q);
  const auto hits = resonance_scan(v, p, q, o.D, o.resonance_tol);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0] == std::make_pair(1, 1));
  try {
    solve_ground(2, v, o);
    FAIL("expected a resonance");
  } catch (const ResonanceError& e) {
    CHECK(e.i == 1);
    CHECK(e.j == 1);
  }
  CHECK(resonance_scan(0.5, p, q, o.D, o.resonance_tol).empty());
}

TEST_CASE("solution JSON: fields present") {
  const json j = solution_json(solve_ground(1, 0.5));
  for (const char* k : {"N", "v", "m", "partition", "D", "H", "R0", "residual_norms", "Q"}) CHECK(j.contains(k));
}
