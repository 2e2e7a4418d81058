#pragma once
// Tropical (p,q -> 0) spectrum: G_m, its root pairs ξ <-> 1/ξ, the
// P/H partitions and the tropical TQ identity.

#include <vector>

#include "ellq/core.hpp"
#include "ellq/report.hpp"

namespace ellq {

using Poly = std::vector<cplx>;  // ascending coefficients

Poly poly_mul(const Poly& a, const Poly& b);
cplx poly_eval(const Poly& a, cplx u);
// exact division; returns {quotient, remainder}
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);

struct RootPair {
  cplx xi;    // representative, |xi| >= 1 (ties: Im xi > 0)
  cplx mate;  // 1/xi after refinement
};

// u^{m+N} G_m(u) = u^{2m}(u-v)^N + v^N (u - 1/v)^N, degree 2m+N
Poly g_polynomial(int m, int N, cplx v);

struct RootSet {
  std::vector<RootPair> pairs;  // canonical order (|xi|, arg xi)
  bool unit_root = false;       // u = 1 (odd N)
  std::vector<cplx> all_roots;
  double max_abs_G = 0.0;       // max |polynomial| over refined roots
};

RootSet find_root_pairs(const Poly& coeffs, double pair_tol = 1e-8);

struct SpectralState {
  int N = 0, m = 0;
  cplx v;
  std::vector<int> P_indices;
  std::vector<RootPair> pairs_P, pairs_H;
  bool unit_root = false;

  // P_m^{(0)} as Laurent coefficients u^{-m}..u^{m} (index k+m)
  std::vector<cplx> P_laurent() const;
  // H^{(0)} coefficients of u^{0}, u^{-1}, ..., u^{-N}
  std::vector<cplx> H0_coeffs() const;
};

std::vector<SpectralState> enumerate_states(int N, int m, cplx v);

// t^{(-m)}(u) coefficients of u^0..u^N
Poly tropical_t(const SpectralState& s);
cplx tropical_tq_residual(const SpectralState& s, cplx u);

json state_catalog_json(int N, int m, cplx v, const std::vector<SpectralState>& states, const RootSet& roots);

}  // namespace ellq
