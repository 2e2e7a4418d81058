#pragma once
// ε-expansion of the pole-stripped Liouville equation
//   H(pqu)H(u) - v^N (1-1/(uv))^N (1-pqu/v)^N H(pu)H(qu) = S(u)
// solved degree by degree in the total (p,q)-degree.

#include <map>
#include <vector>

#include "ellq/report.hpp"
#include "ellq/series.hpp"
#include "ellq/tropical.hpp"

namespace ellq {

struct PerturbativeOptions {
  int D = 6;
  int k_extra = 3;              // extra Laurent modes allocated above m+N+d
  double solve_tol = 1e-10;     // per-degree residual certificate, relative
  double coeff_tol = 1e-11;     // |c| above this counts as present when detecting Q_n
  cplx probe_p{0.11, 0.0};      // numeric p, q used only by the resonance detector
  cplx probe_q{0.17, 0.0};
  double resonance_tol = 1e-9;
  bool parallel = true;
};

struct DegreeDiagnostics {
  int degree = 0;
  int unknowns = 0;
  int rows = 0;
  int rank = 0;
  double residual = 0.0;  // max |E_d| / largest term at degree d
};

struct PerturbativeSolution {
  SpectralState state;
  int N = 0, m = 0, D = 0;
  cplx v;
  GradedSeries H;   // c_{ijk} p^i q^j u^k
  GradedSeries R0;  // entries (i, j, 0) of p^i q^j, lowest total degree -2m
  std::vector<DegreeDiagnostics> diagnostics;
  std::map<int, int> Q;  // Laurent mode n -> lowest total degree of its coefficient
  double pq_asymmetry = 0.0;  // max |c_{ijk} - c_{jik}|
};

std::vector<std::pair<int, int>> resonance_scan(cplx v, cplx p, cplx q, int D, double tol);

GradedSeries s_series(int N, cplx v, int dmax);  // S(u)/R0
GradedSeries liouville_prefactor_series(int N, cplx v, int dmax);

// E_d of the pole-stripped equation, and the size of its largest term
GradedSeries liouville_series_residual(const PerturbativeSolution& sol, int d, double* scale = nullptr);
double max_relative_residual(const PerturbativeSolution& sol);

PerturbativeSolution solve_ground(int N, cplx v, const PerturbativeOptions& opt = {});
PerturbativeSolution solve_excited(const SpectralState& state, const PerturbativeOptions& opt = {});

struct InducedTransfer {
  int Dt = 0;
  GradedSeries chi;            // H / Π^N
  GradedSeries t;              // t_q(u) as a graded series, degrees -m..Dt
  std::vector<GradedSeries> tk;  // t_{q,k}(p,q), k = 0..N-1, entries (i, j, 0)
  double division_remainder = 0.0;  // exact division by P_m, relative
  double basis_residual = 0.0;      // part of t outside span{h_q(ω^k u)^N}, relative
  double symmetry_deviation = 0.0;  // max |t_{N-k} - t_k|
  double q_residual = 0.0;
  double p_residual = 0.0;          // same χ, t_p = p<->q image of t_q
  double tropical_deviation = 0.0;  // lowest bucket vs tropical_t
};

InducedTransfer induced_transfer(const PerturbativeSolution& sol);

struct ConjectureReport {
  int chi_degree = 0;  // lowest total degree of χ
  int R0_degree = 0;   // lowest total degree of R0
  double order = 0.0;  // of χ/√R0 in units of pq
  double expected = 0.0;
};
ConjectureReport conjecture_scaling(const PerturbativeSolution& sol, double tol = 1e-11);

json solution_json(const PerturbativeSolution& sol);

}  // namespace ellq
