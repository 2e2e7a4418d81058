#pragma once
// Parameter pack (x,y,τ,η) <-> (u,v,q,p) and double-precision convenience
// wrappers around the templated kernel.

#include "ellq/core.hpp"
#include "ellq/elliptic.hpp"

namespace ellq {

struct ModularData {
  cplx x, y, tau, eta;
  cplx u, v, q, p;

  static ModularData from_additive(cplx x, cplx y, cplx tau, cplx eta);
  // principal log: x = log(u)/(2πi), Re x in (-1/2, 1/2]
  static ModularData from_multiplicative(cplx u, cplx v, cplx q, cplx p);

  ModularData with_x(cplx x_new) const { return from_additive(x_new, y, tau, eta); }
  // e^{iπ·(additive)} half powers
  cplx sqrt_q() const;
  cplx sqrt_p() const;
  cplx sqrt_pq() const;
  cplx sqrt_u() const;
  cplx sqrt_v() const;
  cplx q_eighth() const;
  void validate() const;
};

cplx expi2pi(cplx x);  // e^{2πix}
cplx log_mult(cplx u);  // log(u)/(2πi), principal

// double wrappers, fixed default policy unless given
inline cplx th1(cplx x, cplx tau, const TruncationPolicy& pol = {}) { return theta1<cplx>(x, tau, pol); }
inline cplx th2(cplx x, cplx tau, const TruncationPolicy& pol = {}) { return theta2<cplx>(x, tau, pol); }
inline cplx th4(cplx x, cplx tau, const TruncationPolicy& pol = {}) { return theta4<cplx>(x, tau, pol); }
inline cplx hq(cplx u, cplx q, const TruncationPolicy& pol = {}) { return h<cplx>(u, q, pol); }
inline cplx gamma_e(cplx u, cplx p, cplx q, const TruncationPolicy& pol = {}) {
  return ell_gamma<cplx>(u, p, q, pol);
}
inline cplx phi_md(cplx x, const ModularData& md, const TruncationPolicy& pol = {}) {
  return phi<cplx>(x, md.tau, md.eta, pol);
}

}  // namespace ellq
