#pragma once
// Theta functions, q-Pochhammer products, elliptic Gamma and Phi.
//
// Templated on the complex scalar C (std::complex<double>, std::complex<long double>
// or a Boost.Multiprecision complex). Fractional powers are taken through
// exponentials of the additive variables, never through pow().

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "ellq/core.hpp"

namespace ellq {

template <class C>
struct scalar_traits;

template <class T>
struct scalar_traits<std::complex<T>> {
  using real = T;
};

template <class C>
using real_t = typename scalar_traits<C>::real;

namespace detail {

template <class C>
C imag_unit() {
  return C(real_t<C>(0), real_t<C>(1));
}

template <class C>
real_t<C> pi_r() {
  return boost::math::constants::pi<real_t<C>>();
}

template <class C>
void require_upper(const C& tau, const char* who) {
  using std::imag;
  if (!(imag(tau) > 0)) throw DomainError(std::string(who) + ": Im tau must be positive");
}

template <class C>
void require_nome(const C& q, const char* who) {
  using std::abs;
  if (!(abs(q) < 1)) throw DomainError(std::string(who) + ": nome must satisfy |q| < 1");
}

// Sum a Gaussian-type series Σ_n term(n) over n >= n0 going in direction dir.
// |term| is log-concave in n; tail bound after the peak is |t|·ρ/(1-ρ)
// with ρ the current consecutive ratio.
template <class C, class F>
C gaussian_sum(F term, int n0, int dir, const TruncationPolicy& pol, const char* who) {
  using std::abs;
  C s(0);
  real_t<C> prev = -1;
  for (int k = 0; k < pol.max_terms; ++k) {
    const int n = n0 + dir * k;
    const C t = term(n);
    s += t;
    const real_t<C> at = abs(t);
    if (prev >= 0 && at < prev) {
      const real_t<C> rho = at / prev;
      const real_t<C> scale = std::max<real_t<C>>(real_t<C>(1), abs(s));
      if (rho < 1 && at * rho / (1 - rho) < pol.tail_tol * scale) return s;
    }
    if (prev == 0 && at == 0) return s;
    prev = at;
  }
  throw DomainError(std::string(who) + ": series did not converge within max_terms");
}

}  // namespace detail

// θ₁(x|τ) = -i Σ_n (-)^n exp(iπτ(n+1/2)² + 2πi(n+1/2)x)
template <class C>
C theta1(const C& x, const C& tau, const TruncationPolicy& pol = {}) {
  using std::exp;
  detail::require_upper(tau, "theta1");
  const C i = detail::imag_unit<C>();
  const auto pi = detail::pi_r<C>();
  const real_t<C> half(0.5);
  auto term = [&](int n) {
    const real_t<C> h = real_t<C>(n) + half;
    const C t = exp(i * pi * tau * (h * h) + real_t<C>(2) * pi * i * h * x);
    return (n % 2 == 0) ? t : C(-t);
  };
  const C up = detail::gaussian_sum<C>(term, 0, +1, pol, "theta1");
  const C dn = detail::gaussian_sum<C>(term, -1, -1, pol, "theta1");
  return -i * (up + dn);
}

// θ₄(x|τ) = Σ_n (-)^n exp(iπτn² + 2πinx)
template <class C>
C theta4(const C& x, const C& tau, const TruncationPolicy& pol = {}) {
  using std::exp;
  detail::require_upper(tau, "theta4");
  const C i = detail::imag_unit<C>();
  const auto pi = detail::pi_r<C>();
  auto term = [&](int n) {
    const real_t<C> rn(n);
    const C t = exp(i * pi * tau * (rn * rn) + real_t<C>(2) * pi * i * rn * x);
    return (n % 2 == 0) ? t : C(-t);
  };
  const C up = detail::gaussian_sum<C>(term, 0, +1, pol, "theta4");
  const C dn = detail::gaussian_sum<C>(term, -1, -1, pol, "theta4");
  return up + dn;
}

// θ₂(x|τ) := θ₁(x + 1/2|τ)
template <class C>
C theta2(const C& x, const C& tau, const TruncationPolicy& pol = {}) {
  return theta1<C>(x + real_t<C>(0.5), tau, pol);
}

// (u;q)_∞
template <class C>
C qpoch1(const C& u, const C& q, const TruncationPolicy& pol = {}) {
  using std::abs;
  detail::require_nome(q, "qpoch1");
  if (u == C(0)) return C(1);
  const real_t<C> aq = abs(q);
  C res(1), z = u;
  for (int n = 0; n < pol.max_terms; ++n) {
    res *= C(1) - z;
    z *= q;
    const real_t<C> az = abs(z);
    if (az == 0) return res;
    // |log Π_{k>n}(1 - z_k)| <= |z|/((1-|q|)(1-|z|))
    if (az < real_t<C>(0.5) && az / ((1 - aq) * (1 - az)) < pol.tail_tol) return res;
  }
  throw DomainError("qpoch1: product did not converge within max_terms");
}

// h(u;q) = (u;q)_∞ (q/u;q)_∞
template <class C>
C h(const C& u, const C& q, const TruncationPolicy& pol = {}) {
  if (u == C(0)) throw DomainError("h: u = 0");
  return qpoch1<C>(u, q, pol) * qpoch1<C>(q / u, q, pol);
}

namespace detail {

// Π_{m,n>=0} (1 - u p^m q^n), grouped by total degree s = m+n with the
// (m,n),(n,m) factors multiplied pairwise so that p<->q gives identical bits.
// If pole_check is set, a vanishing factor throws PoleError(m,n).
template <class C>
C qpoch2_impl(const C& u, const C& p, const C& q, const TruncationPolicy& pol,
              bool pole_check, const char* who) {
  using std::abs;
  require_nome(p, who);
  require_nome(q, who);
  if (u == C(0)) return C(1);
  const real_t<C> r = std::max<real_t<C>>(abs(p), abs(q));
  const real_t<C> au = abs(u);
  const real_t<C> zero_tol = 64 * std::numeric_limits<real_t<C>>::epsilon();
  std::vector<C> pp{C(1)}, qq{C(1)};
  C res(1);
  real_t<C> rs = 1;  // r^s
  auto factor = [&](int m, int n, const C& mono) {
    const C f = C(1) - u * mono;
    if (pole_check && abs(f) < zero_tol) throw PoleError(m, n, std::string(who) + ": pole");
    return f;
  };
  for (int s = 0; s < pol.max_terms; ++s) {
    if (s > 0) {
      pp.push_back(pp.back() * p);
      qq.push_back(qq.back() * q);
      rs *= r;
    }
    C level(1);
    for (int m = 0; 2 * m < s; ++m) {
      const int n = s - m;
      const C a = pp[m] * qq[n];
      const C b = pp[n] * qq[m];
      level *= factor(m, n, a) * factor(n, m, b);
    }
    if (s % 2 == 0) level *= factor(s / 2, s / 2, pp[s / 2] * qq[s / 2]);
    res *= level;
    if (r == 0) return res;
    // tail Σ_{t>s} (t+1)|u| r^t
    const real_t<C> rn = rs * r;
    const real_t<C> tail = au * rn * ((s + 2) / (1 - r) + r / ((1 - r) * (1 - r)));
    if (tail < real_t<C>(0.5) && tail / (1 - tail) < pol.tail_tol) return res;
  }
  throw DomainError(std::string(who) + ": product did not converge within max_terms");
}

}  // namespace detail

// (u;p,q)_∞
template <class C>
C qpoch2(const C& u, const C& p, const C& q, const TruncationPolicy& pol = {}) {
  return detail::qpoch2_impl<C>(u, p, q, pol, false, "qpoch2");
}

// Γ(u;p,q) = (pq/u;p,q)_∞ / (u;p,q)_∞ ; poles at u = p^{-m} q^{-n}
template <class C>
C ell_gamma(const C& u, const C& p, const C& q, const TruncationPolicy& pol = {}) {
  if (u == C(0)) throw DomainError("ell_gamma: u = 0");
  const C den = detail::qpoch2_impl<C>(u, p, q, pol, true, "ell_gamma");
  const C num = detail::qpoch2_impl<C>(p * q / u, p, q, pol, false, "ell_gamma");
  return num / den;
}

// Σ_{k≠0} u^k / (k (1-q^k)(1-p^k)), valid for |pq| < |u| < 1
template <class C>
C log_ell_gamma_series(const C& u, const C& p, const C& q, const TruncationPolicy& pol = {}) {
  using std::abs;
  const C w = p * q / u;
  const real_t<C> ru = abs(u), rw = abs(w);
  if (!(ru < 1) || !(rw < 1)) throw DomainError("log_ell_gamma_series: need |pq| < |u| < 1");
  const real_t<C> rmax = std::max(ru, rw);
  const real_t<C> lo = (1 - abs(p)) * (1 - abs(q)) * (1 - rmax);
  C s(0), uk(1), wk(1), pk(1), qk(1);
  real_t<C> rk = 1;
  for (int k = 1; k <= pol.max_terms; ++k) {
    uk *= u;
    wk *= w;
    pk *= p;
    qk *= q;
    rk *= rmax;
    s += (uk - wk) / (real_t<C>(k) * (C(1) - pk) * (C(1) - qk));
    // Σ_{j>k} 2 rmax^j / (j (1-|p|)(1-|q|))
    const real_t<C> tail = 2 * rk * rmax / (real_t<C>(k + 1) * lo);
    if (tail < pol.tail_tol * std::max<real_t<C>>(1, abs(s))) return s;
  }
  throw DomainError("log_ell_gamma_series: did not converge within max_terms");
}

// Φ(x) = (√(pq) u; p,q)_∞ / (√(pq)/u; p,q)_∞ with √(pq) = e^{iπ(τ+η)}, u = e^{2πix}.
// Poles where √(pq)/u · p^m q^n = 1.
template <class C>
C phi(const C& x, const C& tau, const C& eta, const TruncationPolicy& pol = {}) {
  using std::exp;
  const C i = detail::imag_unit<C>();
  const auto pi = detail::pi_r<C>();
  detail::require_upper(tau, "phi");
  detail::require_upper(eta, "phi");
  const C q = exp(real_t<C>(2) * pi * i * tau);
  const C p = exp(real_t<C>(2) * pi * i * eta);
  const C s = exp(pi * i * (tau + eta));
  const C u = exp(real_t<C>(2) * pi * i * x);
  const C den = detail::qpoch2_impl<C>(s / u, p, q, pol, true, "phi");
  const C num = detail::qpoch2_impl<C>(s * u, p, q, pol, false, "phi");
  return num / den;
}

}  // namespace ellq
