#include "ellq/thermo.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/FFT>

#include "ellq/functional.hpp"
#include "ellq/modular.hpp"

namespace ellq {

double f_ground(int k, int N, double v, double p, double q) {
  const double pk = std::pow(p, k), qk = std::pow(q, k), pqk = pk * qk;
  return double(N) * (std::pow(v, -k) - std::pow(v, k)) * pqk / (double(k) * (1.0 - pk) * (1.0 - qk) * (1.0 + pqk));
}

cplx digamma_F(cplx u, cplx v, cplx p, cplx q, const TruncationPolicy& pol) {
  const cplx pq = p * q, P = pq * pq;
  const cplx den = hq(v / u, P, pol) * hq(pq * u * v, P, pol);
  if (std::abs(den) < 1e-300) throw PoleError(0, 0, "digamma_F: denominator vanishes");
  return v * hq(1.0 / (u * v), P, pol) * hq(pq * u / v, P, pol) / den;
}

Regime regime(cplx v, cplx p, cplx q) {
  Regime r;
  r.applicable = v.imag() == 0.0 && p.imag() == 0.0 && q.imag() == 0.0 && v.real() > 0 && p.real() > 0 && q.real() > 0;
  if (!r.applicable) return r;
  const double pq = p.real() * q.real();
  r.v_in_range = std::sqrt(pq) < v.real() && v.real() < 1.0;
  r.u_min = pq / v.real();
  r.u_max = v.real() / pq;
  return r;
}

std::vector<cplx> ThermoSolution::f() const {
  std::vector<cplx> out(delta_f);
  for (int k = 1; k <= K; ++k) out[std::size_t(k)] += f_g[std::size_t(k)];
  return out;
}

ThermoSolution delta_f_solve(int N, double v, double p, double q, int K, const ThermoOptions& opt) {
  if (N < 1 || K < 1) throw DomainError("delta_f_solve: need N, K >= 1");
  if (std::abs(v - 1.0) < 1e-14) throw RegimeError("delta_f_solve: v = 1 makes ϝ identically 1");
  const Regime rg = regime(v, p, q);
  if (!rg.applicable) throw RegimeError("delta_f_solve: parameters must be real positive");

  ThermoSolution s;
  s.N = N;
  s.K = K;
  s.v = v;
  s.p = p;
  s.q = q;
  s.regime_warning = !rg.v_in_range;
  const double pq = p * q;
  const int M = opt.points_per_mode * K;
  s.M = M;
  s.radius = 1.0 / std::sqrt(pq);
  const double r = s.radius;

  std::vector<cplx> us(static_cast<std::size_t>(M)), FN(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) us[std::size_t(j)] = std::polar(r, 2.0 * pi * double(j) / double(M));
#pragma omp parallel for if (opt.parallel)
  for (int j = 0; j < M; ++j) FN[std::size_t(j)] = std::pow(digamma_F(us[std::size_t(j)], v, p, q), N);
  for (int j = 0; j < M; ++j) s.max_abs_F = std::max(s.max_abs_F, std::pow(std::abs(FN[std::size_t(j)]), 1.0 / N));
  if (s.max_abs_F >= 1.0) throw RegimeError("delta_f_solve: |ϝ| >= 1 on the collocation circle");

  s.f_g.assign(std::size_t(K + 1), 0.0);
  std::vector<double> c1(std::size_t(K + 1)), c2(std::size_t(K + 1));
  for (int k = 1; k <= K; ++k) {
    s.f_g[std::size_t(k)] = f_ground(k, N, v, p, q);
    const double pqk = std::pow(pq, k);
    c1[std::size_t(k)] = (1.0 + pqk) / pqk;
    c2[std::size_t(k)] = (1.0 - std::pow(p, k)) * (1.0 - std::pow(q, k)) / pqk;
  }

  // basis values u^{-k} + (pq u)^k on the circle
  std::vector<std::vector<cplx>> basis(std::size_t(K + 1), std::vector<cplx>(std::size_t(M)));
  for (int k = 1; k <= K; ++k)
    for (int j = 0; j < M; ++j)
      basis[std::size_t(k)][std::size_t(j)] = std::pow(us[std::size_t(j)], -k) + std::pow(pq * us[std::size_t(j)], k);

  Eigen::FFT<double> fft;
  std::vector<cplx> df(static_cast<std::size_t>(K + 1), 0.0), g(static_cast<std::size_t>(M)), G;
  auto rhs = [&](const std::vector<cplx>& d) {
#pragma omp parallel for if (opt.parallel)
    for (int j = 0; j < M; ++j) {
      cplx F2 = 0.0;
      for (int k = 1; k <= K; ++k) F2 += d[std::size_t(k)] * c2[std::size_t(k)] * basis[std::size_t(k)][std::size_t(j)];
      g[std::size_t(j)] = -std::log(1.0 - FN[std::size_t(j)] * std::exp(-F2));
    }
    fft.fwd(G, g);
    // coefficient of u^n sits at index n mod M, scaled by the circle radius
    for (int j = 0; j < M; ++j) G[std::size_t(j)] *= (j <= M / 2 ? std::pow(r, -j) : std::pow(r, M - j)) / double(M);
  };

  double last = INFINITY;
  for (int it = 1; it <= opt.max_iter; ++it) {
    rhs(df);
    std::vector<cplx> nw(std::size_t(K + 1));
    nw[0] = 0.5 * G[0];
    for (int k = 1; k <= K; ++k) nw[std::size_t(k)] = G[std::size_t(M - k)] / c1[std::size_t(k)];
    double inc = 0.0;
    for (int k = 0; k <= K; ++k) inc = std::max(inc, std::abs(nw[std::size_t(k)] - df[std::size_t(k)]));
    df = nw;
    s.increments.push_back(inc);
    if (std::isfinite(last) && last > 0.0) s.contraction.push_back(inc / last);
    last = inc;
    s.iterations = it;
    if (!std::isfinite(inc)) break;
    if (inc <= opt.tol) break;
  }
  if (!(last <= opt.tol))
    throw ConvergenceError("delta_f_solve: Picard iteration did not converge", last);
  s.delta_f = df;

  // residual of the fixed-point equation and mirror consistency G_k = (pq)^k G_{-k}
  rhs(df);
  for (int k = 1; k <= K; ++k)
    s.mirror_mismatch = std::max(s.mirror_mismatch, std::abs(G[std::size_t(k)] - std::pow(pq, k) * G[std::size_t(M - k)]));
  for (int j = 0; j < M; ++j) {
    cplx F1 = 2.0 * df[0];
    for (int k = 1; k <= K; ++k) F1 += df[std::size_t(k)] * c1[std::size_t(k)] * basis[std::size_t(k)][std::size_t(j)];
    s.final_residual = std::max(s.final_residual, std::abs(F1 - g[std::size_t(j)]));
  }
  return s;
}

cplx thermo_log_chi(const ThermoSolution& s, cplx u) {
  cplx L = s.delta_f[0];
  const cplx ui = 1.0 / u;
  for (int k = 1; k <= s.K; ++k) L += s.delta_f[std::size_t(k)] * (std::pow(u, k) + std::pow(ui, k));
  const double rho = s.p * s.q / s.v * std::max(std::abs(u), std::abs(ui));
  if (rho >= 1.0) throw DomainError("thermo_log_chi: point outside the convergence annulus");
  for (int k = 1; k < 2000; ++k) {
    const double fk = f_ground(k, s.N, s.v, s.p, s.q);
    L += fk * (std::pow(u, k) + std::pow(ui, k));
    // bound, not the term: u^k + u^{-k} can vanish at isolated points
    if (std::abs(fk) * (std::pow(std::abs(u), k) + std::pow(std::abs(ui), k)) < 1e-18 * (1.0 + std::abs(L))) break;
  }
  return L;
}

double thermo_liouville_residual(const ThermoSolution& s, int n) {
  LiouvilleParams lp{s.v, s.p, s.q, s.N, 1.0};
  const double pq = s.p * s.q;
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const cplx u = std::polar(s.radius, 2.0 * pi * (double(j) + 0.25) / double(n));
    const cplx a = std::exp(thermo_log_chi(s, pq * u) + thermo_log_chi(s, u));
    const cplx b = std::pow(s.v, s.N) * std::exp(thermo_log_chi(s, s.p * u) + thermo_log_chi(s, s.q * u));
    const cplx R = liouville_R(u, lp);
    worst = std::max(worst, std::abs(a - b - R) / std::abs(R));
  }
  return worst;
}

double thermo_reconstruction_excess(const ThermoSolution& s) {
  // on |u| = 1 the modes of log χ separate cleanly
  const int M = std::max(64, 8 * s.K);
  std::vector<cplx> vals(static_cast<std::size_t>(M)), G;
  for (int j = 0; j < M; ++j) vals[std::size_t(j)] = thermo_log_chi(s, std::polar(1.0, 2.0 * pi * double(j) / double(M)));
  Eigen::FFT<double> fft;
  fft.fwd(G, vals);
  double excess = -INFINITY;
  for (int k = 1; k <= s.K; ++k) {
    const cplx fk = G[std::size_t(k)] / double(M);
    excess = std::max(excess, std::abs(fk - s.f_g[std::size_t(k)]) - std::abs(s.delta_f[std::size_t(k)]));
  }
  return excess;
}

cplx free_energy_term(int k, cplx u, double v, double p, double q) {
  auto a = [&](int kk) {
    const double pk = std::pow(p, kk), qk = std::pow(q, kk), pqk = pk * qk;
    return pqk / (double(kk) * (1.0 - pk) * (1.0 - qk) * (1.0 + pqk));
  };
  const cplx uv = u * v, vu = v / u;
  return a(k) * (std::pow(uv, -k) + std::pow(vu, -k)) + a(-k) * (std::pow(uv, k) + std::pow(vu, k));
}

FreeEnergy free_energy(cplx u, double v, double p, double q, double tail_tol) {
  const double rho = p * q / v * std::max(std::abs(u), 1.0 / std::abs(u));
  if (!(rho < 1.0)) throw DomainError("free_energy: series diverges outside the regime annulus");
  FreeEnergy fe;
  cplx s = 0.0;
  const double c = 2.0 / ((1.0 - p) * (1.0 - q));
  for (int k = 1; k < 100000; ++k) {
    s += free_energy_term(k, u, v, p, q);
    fe.terms = k;
    // |term_j| <= c ρ^j / j for j > k
    fe.tail_bound = c * std::pow(rho, k + 1) / (double(k + 1) * (1.0 - rho));
    if (fe.tail_bound < tail_tol * (1.0 + std::abs(s))) break;
  }
  fe.value = s.real();
  return fe;
}

FiniteNComparison compare_finite_N(const PerturbativeSolution& sol, cplx u, double p, double q) {
  LiouvilleParams lp{sol.v, p, q, sol.N, 1.0};
  const cplx chi = sol.H.eval(p, q, u) / pole_prefactor(u, lp);
  const cplx R0 = sol.R0.eval(p, q, 1.0);
  FiniteNComparison c;
  c.finite = (std::log(chi) - 0.5 * std::log(R0)) / double(sol.N);
  c.fren = free_energy(u, sol.v.real(), p, q).value;
  c.difference = std::abs(c.finite - c.fren);
  return c;
}

json thermo_json(const ThermoSolution& s, const std::vector<cplx>& sample_u) {
  json j;
  j["N"] = s.N;
  j["K"] = s.K;
  j["v"] = s.v;
  j["p"] = s.p;
  j["q"] = s.q;
  j["collocation_radius"] = s.radius;
  j["collocation_points"] = s.M;
  j["max_abs_digamma"] = s.max_abs_F;
  j["regime_warning"] = s.regime_warning;
  j["f_g"] = std::vector<double>(s.f_g.begin() + 1, s.f_g.end());
  json d = json::array();
  for (std::size_t k = 1; k < s.delta_f.size(); ++k) d.push_back(cjson(s.delta_f[k]));
  j["delta_f"] = d;
  j["delta_f0"] = cjson(s.delta_f[0]);
  j["iterations"] = s.iterations;
  j["contraction"] = s.contraction;
  j["final_residual"] = s.final_residual;
  json fe = json::array();
  for (auto u : sample_u) {
    const FreeEnergy f = free_energy(u, s.v, s.p, s.q);
    fe.push_back({{"u", cjson(u)}, {"value", f.value}, {"tail_bound", f.tail_bound}});
  }
  j["free_energy"] = fe;
  return j;
}

}  // namespace ellq
