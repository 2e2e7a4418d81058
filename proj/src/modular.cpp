#include "ellq/modular.hpp"

#include <cmath>

namespace ellq {

cplx expi2pi(cplx x) { return std::exp(2.0 * pi * I * x); }

cplx log_mult(cplx u) {
  if (u == cplx(0)) throw DomainError("log of zero multiplicative variable");
  return std::log(u) / (2.0 * pi * I);
}

ModularData ModularData::from_additive(cplx x, cplx y, cplx tau, cplx eta) {
  ModularData md;
  md.x = x;
  md.y = y;
  md.tau = tau;
  md.eta = eta;
  md.u = expi2pi(x);
  md.v = expi2pi(y);
  md.q = expi2pi(tau);
  md.p = expi2pi(eta);
  md.validate();
  return md;
}

ModularData ModularData::from_multiplicative(cplx u, cplx v, cplx q, cplx p) {
  if (!(std::abs(q) < 1.0) || !(std::abs(p) < 1.0) || q == cplx(0) || p == cplx(0))
    throw DomainError("ModularData: need 0 < |q|,|p| < 1");
  ModularData md;
  md.x = log_mult(u);
  md.y = log_mult(v);
  md.tau = log_mult(q);
  md.eta = log_mult(p);
  md.u = u;
  md.v = v;
  md.q = q;
  md.p = p;
  return md;
}

void ModularData::validate() const {
  if (!(tau.imag() > 0.0)) throw DomainError("ModularData: Im tau must be positive");
  if (!(eta.imag() > 0.0)) throw DomainError("ModularData: Im eta must be positive");
}

cplx ModularData::sqrt_q() const { return std::exp(pi * I * tau); }
cplx ModularData::sqrt_p() const { return std::exp(pi * I * eta); }
cplx ModularData::sqrt_pq() const { return std::exp(pi * I * (tau + eta)); }
cplx ModularData::sqrt_u() const { return std::exp(pi * I * x); }
cplx ModularData::sqrt_v() const { return std::exp(pi * I * y); }
cplx ModularData::q_eighth() const { return std::exp(pi * I * tau / 4.0); }

}  // namespace ellq
