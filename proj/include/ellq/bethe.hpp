#pragma once
// Special set y = -(mη + nτ)/2: factorized Q = A·A' + B·B', the
// Bethe-type equations for its roots, and checks of the TQ relation.

#include <vector>

#include "ellq/modular.hpp"
#include "ellq/report.hpp"

namespace ellq {

struct SpinSet {
  int m = 0, n = 0;
  cplx lambda(const ModularData& md) const { return 0.5 * double(m) * md.eta + 0.5 * double(n) * md.tau; }
  cplx y(const ModularData& md) const { return -lambda(md); }
};

// md with y (and v) set to the spin-set value; x is left at 0
ModularData spin_modular(const SpinSet& s, cplx tau, cplx eta);

struct BetheRoots {
  std::vector<cplx> x;   // τ-sector, m·N roots
  std::vector<cplx> xp;  // η-sector, n·N roots
  double residual = 0.0;  // max over both sectors
};

// value of LHS + 1 for root k of one sector; the η-sector is the same call with
// (m, n, τ, η) -> (n, m, η, τ)
cplx bae_residual(int k, const std::vector<cplx>& roots, int m, int n, int N, cplx tau, cplx eta,
                  const TruncationPolicy& pol = {});
enum class Sector { tau, eta };
cplx bethe_residual(int k, const BetheRoots& r, const SpinSet& s, int N, const ModularData& md, Sector sec = Sector::tau,
                    const TruncationPolicy& pol = {});
double bethe_max_residual(const BetheRoots& r, const SpinSet& s, int N, const ModularData& md,
                          const TruncationPolicy& pol = {});

struct FactorizedQ {
  std::vector<cplx> x, xp;
  cplx tau, eta;
  cplx A(cplx z) const;
  cplx Ap(cplx z) const;
  cplx B(cplx z) const { return A(z + 1.0); }
  cplx Bp(cplx z) const { return Ap(z + 1.0); }
  cplx operator()(cplx z) const { return A(z) * Ap(z) + B(z) * Bp(z); }
};

struct BetheOptions {
  int max_iter = 80;
  double tol = 1e-12;        // on the residual
  double accept = 1e-9;      // solutions above this are discarded
  std::vector<cplx> seeds;   // for the first free root; empty -> a default grid
  bool parallel = true;
};

// symmetric ansatz ±x_j; returns all distinct solutions found from the seeds, canonical order
std::vector<BetheRoots> bethe_solve(const SpinSet& s, int N, const ModularData& md, const BetheOptions& opt = {});

// t_q(u) extracted from (TQ0) at floor(N/2)+1 points, checked at fresh ones
struct TqCheck {
  std::vector<cplx> t;  // symmetric t_{q,k}, k = 0..N-1
  double fresh_residual = 0.0;
  double period_residual = 0.0;  // |Q(x+2) - Q(x)| / |Q(x)|
  ResidualReport report;
};
TqCheck q_factorized_tq_check(const BetheRoots& r, const SpinSet& s, int N, const ModularData& md,
                              const TruncationPolicy& pol = {});

// Γ(1/(uv))/Γ(v/u) at v² = p^{-m} q^{-n} against the finite product of h's
double r_no_denominator_residual(const SpinSet& s, const ModularData& md, cplx u, const TruncationPolicy& pol = {});

struct EquivalenceReport {
  std::vector<cplx> xi;  // zeros of Q in the cell [0,1) + [0,1)τ
  int k = 0;             // Q ∝ e^{iπkx} ∏ θ₁(x - ξ_j)
  cplx constant;
  double deviation = 0.0;  // max relative deviation of the pointwise ratio
  bool fitted = false;
};
EquivalenceReport q_equivalence_baxter(const BetheRoots& r, int N, const ModularData& md);

json bethe_json(const SpinSet& s, int N, const std::vector<BetheRoots>& sols, const std::vector<TqCheck>& checks);

}  // namespace ellq
