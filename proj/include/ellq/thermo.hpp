#pragma once
// Thermodynamic limit: ground Fourier modes f_k^{(g)}, the function ϝ(u),
// the δf fixed point and the free energy.

#include <vector>

#include "ellq/perturbative.hpp"
#include "ellq/report.hpp"

namespace ellq {

double f_ground(int k, int N, double v, double p, double q);
cplx digamma_F(cplx u, cplx v, cplx p, cplx q, const TruncationPolicy& pol = {});

struct Regime {
  bool applicable = false;  // all parameters real positive
  bool v_in_range = false;  // √(pq) < v < 1
  double u_min = 0.0, u_max = 0.0;  // pq/v < |u| < v/pq
  bool ok() const { return applicable && v_in_range; }
  bool contains(cplx u) const { return std::abs(u) > u_min && std::abs(u) < u_max; }
};
Regime regime(cplx v, cplx p, cplx q);

struct ThermoOptions {
  int max_iter = 2000;
  double tol = 1e-15;       // on max |δf^{(n+1)} - δf^{(n)}|
  int points_per_mode = 8;  // collocation points M = points_per_mode·K
  bool parallel = true;
};

struct ThermoSolution {
  int N = 0, K = 0, M = 0;
  double v = 0, p = 0, q = 0;
  double radius = 0.0;          // collocation circle |u| = (pq)^{-1/2}
  double max_abs_F = 0.0;       // max |ϝ| on the circle
  std::vector<double> f_g;      // index k, f_g[0] = 0
  std::vector<cplx> delta_f;    // index k, delta_f[0] is the constant mode
  int iterations = 0;
  std::vector<double> increments;   // max |Δδf| per iteration
  std::vector<double> contraction;  // successive increment ratios
  double final_residual = 0.0;      // fixed-point equation on the circle
  double mirror_mismatch = 0.0;     // u^k vs u^{-k} consistency of the projected RHS
  bool regime_warning = false;
  std::vector<cplx> f() const;      // f_g + δf
};

ThermoSolution delta_f_solve(int N, double v, double p, double q, int K, const ThermoOptions& opt = {});

// log χ on a point from the solved modes (R0 = 1); f_g modes beyond K are summed to convergence
cplx thermo_log_chi(const ThermoSolution& s, cplx u);
// χ(pqu)χ(u) - v^N χ(pu)χ(qu) - R(u), relative, max over n points on the circle
double thermo_liouville_residual(const ThermoSolution& s, int n);
// project log χ on the circle back to Fourier modes: max |f_k - f_g_k| - |δf_k|
double thermo_reconstruction_excess(const ThermoSolution& s);

struct FreeEnergy {
  double value = 0.0;
  double tail_bound = 0.0;
  int terms = 0;
};
FreeEnergy free_energy(cplx u, double v, double p, double q, double tail_tol = 1e-17);
// literal k-th term of the free energy sum (k and -k together) at u
cplx free_energy_term(int k, cplx u, double v, double p, double q);

struct FiniteNComparison {
  cplx finite;       // (1/N) log(χ(u)/√R0) from the perturbative series at numeric p,q
  double fren = 0.0;
  double difference = 0.0;
};
FiniteNComparison compare_finite_N(const PerturbativeSolution& sol, cplx u, double p, double q);

json thermo_json(const ThermoSolution& s, const std::vector<cplx>& sample_u);

}  // namespace ellq
