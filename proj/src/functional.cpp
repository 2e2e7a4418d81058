#include "ellq/functional.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace ellq {

cplx Laurent::eval(cplx u) const {
  cplx s = 0.0;
  for (const auto& [k, ck] : c) s += ck * std::pow(u, k);
  return s;
}

cplx SymmetricLaurent::eval(cplx u) const {
  cplx s = c_[0];
  cplx uk = 1.0, ui = 1.0;
  const cplx inv = 1.0 / u;
  for (int k = 1; k <= K(); ++k) {
    uk *= u;
    ui *= inv;
    s += c_[std::size_t(k)] * (uk + ui);
  }
  return s;
}

SymmetricLaurent SymmetricLaurent::operator+(const SymmetricLaurent& o) const {
  std::vector<cplx> r(std::size_t(std::max(K(), o.K()) + 1), 0.0);
  for (int k = 0; k <= K(); ++k) r[std::size_t(k)] += c_[std::size_t(k)];
  for (int k = 0; k <= o.K(); ++k) r[std::size_t(k)] += o.c_[std::size_t(k)];
  return SymmetricLaurent(r);
}

SymmetricLaurent SymmetricLaurent::operator*(const SymmetricLaurent& o) const {
  const int Kr = std::max(K(), o.K());
  // full two-sided coefficients, then fold back to the symmetric basis
  std::map<int, cplx> full;
  auto two_sided = [](const SymmetricLaurent& f) {
    std::map<int, cplx> m;
    m[0] = f.coeff(0);
    for (int k = 1; k <= f.K(); ++k) m[k] = m[-k] = f.coeff(k);
    return m;
  };
  const auto a = two_sided(*this), b = two_sided(o);
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) full[ka + kb] += ca * cb;
  std::vector<cplx> r(std::size_t(Kr + 1), 0.0);
  double dropped = 0.0;
  for (const auto& [k, ck] : full) {
    if (k < 0) continue;
    if (k <= Kr)
      r[std::size_t(k)] = ck;
    else
      dropped = std::max(dropped, std::abs(ck));
  }
  SymmetricLaurent out(r);
  out.dropped_ = std::max({dropped, dropped_, o.dropped_});
  return out;
}

Laurent SymmetricLaurent::to_laurent() const {
  Laurent l;
  l.c[0] = c_[0];
  for (int k = 1; k <= K(); ++k) l.c[k] = l.c[-k] = c_[std::size_t(k)];
  return l;
}

Laurent SymmetricLaurent::scaled(cplx s) const {
  Laurent l = to_laurent();
  for (auto& [k, ck] : l.c) ck *= std::pow(s, k);
  return l;
}

cplx pole_prefactor(cplx u, const LiouvilleParams& lp, const TruncationPolicy& pol) {
  const cplx pq = lp.p * lp.q;
  const cplx a = qpoch2<cplx>(pq / (u * lp.v), lp.p, lp.q, pol);
  const cplx b = qpoch2<cplx>(pq * u / lp.v, lp.p, lp.q, pol);
  return std::pow(a * b, lp.N);
}

ChiFunction ChiFunction::from_H(ScalarFn H, const LiouvilleParams& lp, const TruncationPolicy& pol) {
  ChiFunction c;
  c.H = std::move(H);
  c.lp = lp;
  c.pol = pol;
  return c;
}

ChiFunction ChiFunction::from_evaluator(ScalarFn f) {
  ChiFunction c;
  c.raw = std::move(f);
  return c;
}

cplx ChiFunction::operator()(cplx u) const {
  if (raw) return raw(u);
  const cplx den = pole_prefactor(u, lp, pol);
  if (std::abs(den) < 1e-300) throw PoleError(0, 0, "chi: pole prefactor vanishes");
  return H(u) / den;
}

ScalarFn strip_poles(const ChiFunction& chi) {
  if (!chi.H) throw DomainError("strip_poles: chi is not in H-form");
  return chi.H;
}

cplx tq_residual_q(const ChiFunction& chi, const ScalarFn& t, cplx u, const LiouvilleParams& lp,
                   const TruncationPolicy& pol) {
  const int N = lp.N;
  return t(u) * chi(u) - std::pow(hq(u * lp.v, lp.q, pol), N) * chi(lp.p * u) -
         std::pow(lp.v, N) * std::pow(hq(u / lp.v, lp.q, pol), N) * chi(u / lp.p);
}

cplx tq_residual_p(const ChiFunction& chi, const ScalarFn& t, cplx u, const LiouvilleParams& lp,
                   const TruncationPolicy& pol) {
  const int N = lp.N;
  return t(u) * chi(u) - std::pow(hq(u * lp.v, lp.p, pol), N) * chi(lp.q * u) -
         std::pow(lp.v, N) * std::pow(hq(u / lp.v, lp.p, pol), N) * chi(u / lp.q);
}

cplx liouville_R(cplx u, const LiouvilleParams& lp, const TruncationPolicy& pol) {
  const cplx num = gamma_e(1.0 / (u * lp.v), lp.p, lp.q, pol);
  const cplx den = gamma_e(lp.v / u, lp.p, lp.q, pol);
  return lp.R0 * std::pow(num / den, lp.N);
}

double laplace_residual(cplx u, const LiouvilleParams& lp, const TruncationPolicy& pol) {
  const cplx pq = lp.p * lp.q;
  const cplx a = liouville_R(pq * u, lp, pol) * liouville_R(u, lp, pol);
  const cplx b = std::pow(lp.v, 2 * lp.N) * liouville_R(lp.p * u, lp, pol) * liouville_R(lp.q * u, lp, pol);
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

cplx liouville_residual(const ChiFunction& chi, cplx u, const LiouvilleParams& lp, const TruncationPolicy& pol) {
  const cplx pq = lp.p * lp.q;
  return chi(pq * u) * chi(u) - std::pow(lp.v, lp.N) * chi(lp.p * u) * chi(lp.q * u) - liouville_R(u, lp, pol);
}

cplx liouville_S(cplx u, const LiouvilleParams& lp, const TruncationPolicy& pol) {
  const cplx p = lp.p, q = lp.q, v = lp.v, pq = p * q;
  const cplx prod = qpoch2<cplx>(v / u, p, q, pol) * qpoch2<cplx>(pq * pq * u / v, p, q, pol) *
                    qpoch2<cplx>(pq * u * v, p, q, pol) * qpoch2<cplx>(pq / (u * v), p, q, pol);
  return lp.R0 * std::pow(prod, lp.N);
}

cplx liouville_H_residual(const ScalarFn& H, cplx u, const LiouvilleParams& lp, const TruncationPolicy& pol) {
  const cplx p = lp.p, q = lp.q, v = lp.v, pq = p * q;
  const int N = lp.N;
  const cplx pref = std::pow(v, N) * std::pow(1.0 - 1.0 / (u * v), N) * std::pow(1.0 - pq * u / v, N);
  return H(pq * u) * H(u) - pref * H(p * u) * H(q * u) - liouville_S(u, lp, pol);
}

cplx TransferPolynomial::eval(cplx u, const TruncationPolicy& pol) const {
  cplx s = 0.0;
  for (int k = 0; k < N; ++k) {
    const cplx w = std::exp(2.0 * pi * I * double(k) / double(N));
    s += t[std::size_t(k)] * std::pow(hq(w * u, q, pol), N);
  }
  return s;
}

double TransferPolynomial::symmetry_deviation() const {
  double d = 0.0;
  for (int k = 1; k < N; ++k) d = std::max(d, std::abs(t[std::size_t(N - k)] - t[std::size_t(k)]));
  return d;
}

SymmetryResidual t_symmetry_check(const ScalarFn& t, cplx u, cplx q, int N) {
  const cplx tu = t(u);
  const cplx f = std::pow(-u, -N);
  return {t(q * u) - f * tu, t(1.0 / u) - f * tu};
}

std::vector<cplx> default_sample_points(int N, cplx q) {
  const double r = std::pow(std::abs(q), 0.25);
  std::vector<cplx> us;
  for (int j = 0; j < N; ++j) us.push_back(r * std::exp(2.0 * pi * I * (double(j) + 1.0 / 3.0) / double(N)));
  return us;
}

Decomposition t_decompose(const std::vector<cplx>& us, const std::vector<cplx>& ts, cplx q, int N,
                          const TruncationPolicy& pol) {
  if (int(us.size()) != N || int(ts.size()) != N) throw DomainError("t_decompose: need exactly N samples");
  Eigen::MatrixXcd A(N, N);
  Eigen::VectorXcd b(N);
  for (int j = 0; j < N; ++j) {
    for (int k = 0; k < N; ++k) {
      const cplx w = std::exp(2.0 * pi * I * double(k) / double(N));
      A(j, k) = std::pow(hq(w * us[std::size_t(j)], q, pol), N);
    }
    b(j) = ts[std::size_t(j)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(N - 1);
  if (!std::isfinite(cond) || cond > 1e12) throw IllConditionedError("t_decompose: basis matrix is singular");
  const Eigen::VectorXcd x = A.fullPivLu().solve(b);
  Decomposition dec;
  dec.condition = cond;
  dec.raw.assign(x.data(), x.data() + N);
  dec.poly.N = N;
  dec.poly.q = q;
  dec.poly.t = dec.raw;
  dec.symmetry_deviation = 0.0;
  for (int k = 1; k < N; ++k) {
    const cplx a = dec.raw[std::size_t(k)], c = dec.raw[std::size_t(N - k)];
    dec.symmetry_deviation = std::max(dec.symmetry_deviation, std::abs(a - c));
    dec.poly.t[std::size_t(k)] = 0.5 * (a + c);
  }
  return dec;
}

}  // namespace ellq
