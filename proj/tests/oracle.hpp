#pragma once
// Brute-force reference values at ~100 digits. Deliberately naive: direct
// sums and double loops with fixed term counts, no tail logic shared with the library.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "ellq/core.hpp"

namespace oracle {

using mpc = boost::multiprecision::cpp_complex_100;
using mpr = boost::multiprecision::cpp_bin_float_100;

inline mpc lift(ellq::cplx z) { return mpc(mpr(z.real()), mpr(z.imag())); }
inline ellq::cplx down(const mpc& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }
inline mpc I() { return mpc(mpr(0), mpr(1)); }
inline mpr PI() { return boost::math::constants::pi<mpr>(); }

// -i Σ_{|n|<=terms} (-1)^n e^{iπτ(n+1/2)^2 + 2πi(n+1/2)x}
inline ellq::cplx theta1(ellq::cplx x, ellq::cplx tau, int terms = 200) {
  const mpc X = lift(x), T = lift(tau);
  mpc s(0);
  for (int n = -terms; n <= terms; ++n) {
    const mpr a = mpr(n) + mpr(0.5);
    const mpc t = exp(I() * PI() * T * a * a + mpr(2) * I() * PI() * a * X);
    s += (n % 2 == 0) ? t : mpc(-t);
  }
  return down(-I() * s);
}

inline ellq::cplx theta4(ellq::cplx x, ellq::cplx tau, int terms = 200) {
  const mpc X = lift(x), T = lift(tau);
  mpc s(0);
  for (int n = -terms; n <= terms; ++n) {
    const mpc t = exp(I() * PI() * T * mpr(n) * mpr(n) + mpr(2) * I() * PI() * mpr(n) * X);
    s += (n % 2 == 0) ? t : mpc(-t);
  }
  return down(s);
}

// Π_{m,n<=terms} (1 - u p^m q^n)
inline mpc qpoch2(const mpc& u, const mpc& p, const mpc& q, int terms = 60) {
  mpc prod(1), pm(1);
  for (int m = 0; m <= terms; ++m) {
    mpc pq = pm;
    for (int n = 0; n <= terms; ++n) {
      prod *= mpc(1) - u * pq;
      pq *= q;
    }
    pm *= p;
  }
  return prod;
}

inline ellq::cplx ell_gamma(ellq::cplx u, ellq::cplx p, ellq::cplx q, int terms = 60) {
  const mpc U = lift(u), P = lift(p), Q = lift(q);
  return down(qpoch2(P * Q / U, P, Q, terms) / qpoch2(U, P, Q, terms));
}

// Σ_{k≠0, |k|<=terms} u^k / (k (1-q^k)(1-p^k))
inline ellq::cplx log_gamma_series(ellq::cplx u, ellq::cplx p, ellq::cplx q, int terms = 400) {
  const mpc U = lift(u), P = lift(p), Q = lift(q);
  mpc s(0);
  for (int k = 1; k <= terms; ++k) {
    for (int sg : {1, -1}) {
      const int kk = sg * k;
      s += pow(U, kk) / (mpr(kk) * (mpc(1) - pow(Q, kk)) * (mpc(1) - pow(P, kk)));
    }
  }
  return down(s);
}

}  // namespace oracle
