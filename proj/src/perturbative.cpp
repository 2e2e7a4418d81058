#include "ellq/perturbative.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <Eigen/Dense>

namespace ellq {

namespace {

constexpr int kNoLower = -1000000;

struct Unknown {
  bool is_r;
  int i, j, k;
};

double rel(double num, double scale) { return scale > 0.0 ? num / scale : num; }

// weight i+j-|k|: shifts by p^{±1} lower the total degree by at most |k|
int weight(int i, int j, int k) { return i + j - std::abs(k); }

GradedSeries filter_weight(const GradedSeries& a, int W) {
  return a.filtered([W](int i, int j, int k) { return weight(i, j, k) <= W; });
}

// product keeping weight <= W; weights are superadditive so both factors can be pre-cut
GradedSeries mul_w(const GradedSeries& a, const GradedSeries& b, int W) {
  std::vector<std::tuple<int, int, int, int, cplx>> ta, tb;
  a.for_each([&](int i, int j, int k, cplx c) { ta.emplace_back(weight(i, j, k), i, j, k, c); });
  b.for_each([&](int i, int j, int k, cplx c) { tb.emplace_back(weight(i, j, k), i, j, k, c); });
  std::sort(tb.begin(), tb.end(), [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });
  GradedSeries r;
  for (const auto& [wa, i, j, k, c] : ta)
    for (const auto& [wb, i2, j2, k2, c2] : tb) {
      if (wa + wb > W) break;
      if (weight(i + i2, j + j2, k + k2) <= W) r.add(i + i2, j + j2, k + k2, c * c2);
    }
  return r;
}

// (c u; q)(q/(c u); q), raised to N
GradedSeries hq_series(cplx c, int N, int dmax) {
  const GradedSeries a = poch1p_series(c, 0, 0, 1, dmax).swapped();
  const GradedSeries b = poch1p_series(1.0 / c, 1, 0, -1, dmax).swapped();
  return GradedSeries::pow(GradedSeries::mul(a, b, dmax), N, dmax);
}

struct Problem {
  int N, m;
  cplx v;
  GradedSeries S, pref;
};

GradedSeries residual_at(const GradedSeries& H, const GradedSeries& R, const Problem& pb, int d, double* scale) {
  const GradedSeries L1 = GradedSeries::mul(H.shifted(1, 1), H, d, d);
  const GradedSeries HpHq = GradedSeries::mul(H.shifted(1, 0), H.shifted(0, 1), d - 2 * pb.N, d);
  const GradedSeries L2 = GradedSeries::mul(HpHq, pb.pref, d, d);
  const GradedSeries L3 = GradedSeries::mul(R, pb.S, d, d);
  if (scale) *scale = std::max({L1.max_abs(), L2.max_abs(), L3.max_abs()});
  return L1 - L2 - L3;
}

GradedSeries delta_of(const Unknown& u, int m) {
  if (u.is_r) return GradedSeries::monomial(u.i - m, u.j - m, 0, 1.0);
  GradedSeries s = GradedSeries::monomial(u.i, u.j, u.k, 1.0);
  if (u.k != 0) s.add(u.i, u.j, -u.k, 1.0);
  return s;
}

// first-order change of E_d when an unknown moves from 0 to 1
GradedSeries column(const Unknown& u, const GradedSeries& H, const Problem& pb, int d) {
  const GradedSeries dl = delta_of(u, pb.m);
  if (u.is_r) return GradedSeries::mul(dl, pb.S, d, d).scaled(-1.0);
  GradedSeries c = GradedSeries::mul(H.shifted(1, 1), dl, d, d);
  c += GradedSeries::mul(dl.shifted(1, 1), H, d, d);
  GradedSeries pp = GradedSeries::mul(H.shifted(1, 0), dl.shifted(0, 1), d - 2 * pb.N, d);
  pp += GradedSeries::mul(dl.shifted(1, 0), H.shifted(0, 1), d - 2 * pb.N, d);
  c -= GradedSeries::mul(pp, pb.pref, d, d);
  return c;
}

PerturbativeSolution solve_seeded(int N, cplx v, int m, const std::vector<cplx>& P, const PerturbativeOptions& opt) {
  if (N < 1) throw DomainError("solve: N must be >= 1");
  if (opt.D < 2) throw DomainError("solve: order D must be >= 2");
  const auto hits = resonance_scan(v, opt.probe_p, opt.probe_q, opt.D, opt.resonance_tol);
  if (!hits.empty()) throw ResonanceError(hits.front().first, hits.front().second);

  Problem pb{N, m, v, {}, {}};
  const int cap = opt.D + 2 * m + 2 * N + 2;
  pb.S = s_series(N, v, cap);
  pb.pref = liouville_prefactor_series(N, v, cap);

  PerturbativeSolution sol;
  sol.N = N;
  sol.m = m;
  sol.D = opt.D;
  sol.v = v;
  for (int k = -m; k <= m; ++k) sol.H.set(0, 0, k, P[std::size_t(k + m)]);
  const int gauge = m;

  for (int d = -2 * m; d <= opt.D; ++d) {
    std::vector<Unknown> unk;
    const int kmax = m + N + (d + 2 * m) + opt.k_extra;
    for (int k = 0; k <= kmax; ++k) {
      if (k == gauge) continue;
      const int s = d + 2 * std::max(k, m);
      const int lo = std::max(0, k - m);
      for (int i = lo; i <= s - lo; ++i) {
        const int j = s - i;
        if (k <= m && i == 0 && j == 0) continue;  // seed entries
        unk.push_back({false, i, j, k});
      }
    }
    for (int i = 0; i <= d + 2 * m; ++i) unk.push_back({true, i, d + 2 * m - i, 0});

    const GradedSeries base = residual_at(sol.H, sol.R0, pb, d, nullptr);
    std::vector<GradedSeries> cols(unk.size());
    const int nu = int(unk.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
    for (int t = 0; t < nu; ++t) cols[std::size_t(t)] = column(unk[std::size_t(t)], sol.H, pb, d);

    std::map<std::pair<int, int>, int> row_of;
    auto index_rows = [&](const GradedSeries& s) {
      if (auto b = s.bucket(d))
        for (const auto& [ik, c] : *b) row_of.emplace(ik, 0);
    };
    index_rows(base);
    for (const auto& c : cols) index_rows(c);
    int nr = 0;
    for (auto& [ik, r] : row_of) r = nr++;

    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(nr, nu);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(nr);
    if (auto bb = base.bucket(d))
      for (const auto& [ik, c] : *bb) b(row_of[ik]) = -c;
    for (int t = 0; t < nu; ++t)
      if (auto bc = cols[std::size_t(t)].bucket(d))
        for (const auto& [ik, c] : *bc) A(row_of[ik], t) = c;

    DegreeDiagnostics dg;
    dg.degree = d;
    dg.unknowns = nu;
    dg.rows = nr;
    if (nr > 0 && nu > 0) {
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(A);
      const Eigen::VectorXcd x = cod.solve(b);
      dg.rank = int(cod.rank());
      for (int t = 0; t < nu; ++t) {
        const Unknown& u = unk[std::size_t(t)];
        if (u.is_r) {
          sol.R0.set(u.i - m, u.j - m, 0, x(t));
        } else {
          sol.H.set(u.i, u.j, u.k, x(t));
          if (u.k != 0) sol.H.set(u.i, u.j, -u.k, x(t));
        }
      }
    }
    double scale = 0.0;
    const GradedSeries E = residual_at(sol.H, sol.R0, pb, d, &scale);
    dg.residual = rel(E.max_abs(), scale);
    sol.diagnostics.push_back(dg);
    if (!(dg.residual <= opt.solve_tol)) {
      if (d == -2 * m && m > 0)
        throw SeedError("solve_excited: seed does not solve the lowest-order equation (residual " +
                        std::to_string(dg.residual) + ")");
      throw DegeneracyError("solve: linear system at degree " + std::to_string(d) + " is inconsistent (rank " +
                            std::to_string(dg.rank) + " of " + std::to_string(nu) + ", residual " +
                            std::to_string(dg.residual) + ")");
    }
  }

  sol.H.for_each([&](int i, int j, int k, cplx c) {
    if (k > m && std::abs(c) > opt.coeff_tol && i + j <= opt.D + 2 * k) {
      auto it = sol.Q.find(k);
      if (it == sol.Q.end() || i + j < it->second) sol.Q[k] = i + j;
    }
    sol.pq_asymmetry = std::max(sol.pq_asymmetry, std::abs(c - sol.H.get(j, i, k)));
  });
  return sol;
}

}  // namespace

std::vector<std::pair<int, int>> resonance_scan(cplx v, cplx p, cplx q, int D, double tol) {
  std::vector<std::pair<int, int>> hits;
  for (int s = 0; s <= D; ++s)
    for (int i = 0; i <= s; ++i) {
      const int j = s - i;
      if (std::abs(1.0 - std::pow(p, i) * std::pow(q, j) * v * v) < tol) hits.emplace_back(i, j);
    }
  return hits;
}

GradedSeries s_series(int N, cplx v, int dmax) {
  GradedSeries S = GradedSeries::one();
  const std::tuple<cplx, int, int, int> monos[] = {{v, 0, 0, -1}, {1.0 / v, 2, 2, 1}, {v, 1, 1, 1}, {1.0 / v, 1, 1, -1}};
  for (const auto& [c, a, b, k] : monos)
    S = GradedSeries::mul(S, GradedSeries::pow(poch2_series(c, a, b, k, dmax), N, dmax), dmax);
  return S;
}

GradedSeries liouville_prefactor_series(int N, cplx v, int dmax) {
  GradedSeries f = GradedSeries::one();
  f.add(0, 0, -1, -1.0 / v);
  f.add(1, 1, 1, -1.0 / v);
  f.add(1, 1, 0, 1.0 / (v * v));
  return GradedSeries::pow(f, N, dmax).scaled(std::pow(v, N));
}

GradedSeries liouville_series_residual(const PerturbativeSolution& sol, int d, double* scale) {
  const int cap = sol.D + 2 * sol.m + 2 * sol.N + 2;
  Problem pb{sol.N, sol.m, sol.v, s_series(sol.N, sol.v, cap), liouville_prefactor_series(sol.N, sol.v, cap)};
  return residual_at(sol.H, sol.R0, pb, d, scale);
}

double max_relative_residual(const PerturbativeSolution& sol) {
  const int cap = sol.D + 2 * sol.m + 2 * sol.N + 2;
  Problem pb{sol.N, sol.m, sol.v, s_series(sol.N, sol.v, cap), liouville_prefactor_series(sol.N, sol.v, cap)};
  double worst = 0.0;
  for (int d = -2 * sol.m; d <= sol.D; ++d) {
    double scale = 0.0;
    const GradedSeries E = residual_at(sol.H, sol.R0, pb, d, &scale);
    worst = std::max(worst, rel(E.max_abs(), scale));
  }
  return worst;
}

PerturbativeSolution solve_ground(int N, cplx v, const PerturbativeOptions& opt) {
  PerturbativeSolution sol = solve_seeded(N, v, 0, {cplx(1.0)}, opt);
  sol.state.N = N;
  sol.state.m = 0;
  sol.state.v = v;
  sol.state.unit_root = (N % 2 == 1);
  return sol;
}

PerturbativeSolution solve_excited(const SpectralState& state, const PerturbativeOptions& opt) {
  if (state.m == 0) {
    PerturbativeSolution sol = solve_ground(state.N, state.v, opt);
    sol.state = state;
    return sol;
  }
  if (int(state.pairs_P.size()) != state.m) throw SeedError("solve_excited: state has wrong number of P pairs");
  PerturbativeSolution sol = solve_seeded(state.N, state.v, state.m, state.P_laurent(), opt);
  sol.state = state;
  return sol;
}

InducedTransfer induced_transfer(const PerturbativeSolution& sol) {
  const int N = sol.N, m = sol.m;
  const cplx v = sol.v;
  InducedTransfer it;
  it.Dt = sol.D - m;
  const int Dt = it.Dt;
  const int W = Dt + m;
  const int Wpi = W + m;

  GradedSeries invPi = GradedSeries::mul(inv_poch2_series(1.0 / v, 1, 1, -1, 2 * Wpi),
                                         inv_poch2_series(1.0 / v, 1, 1, 1, 2 * Wpi), 2 * Wpi);
  invPi = filter_weight(invPi, Wpi);
  GradedSeries invPiN = GradedSeries::one();
  for (int n = 0; n < N; ++n) invPiN = mul_w(invPiN, invPi, Wpi);
  it.chi = mul_w(filter_weight(sol.H, W), invPiN, W);
  const GradedSeries& chi = it.chi;

  const GradedSeries hv = hq_series(v, N, Dt + m);
  const GradedSeries hiv = hq_series(1.0 / v, N, Dt + m);
  const cplx vN = std::pow(v, N);
  const GradedSeries num = GradedSeries::mul(hv, chi.shifted(1, 0), Dt) +
                           GradedSeries::mul(hiv, chi.shifted(-1, 0), Dt).scaled(vN);

  // χ at degree 0 is P_m(u)
  Poly P(std::size_t(2 * m + 1), 0.0);
  {
    const auto* b0 = chi.bucket(0);
    if (!b0) throw InvalidSolutionError("induced_transfer: chi has no degree-0 part");
    for (const auto& [ik, c] : *b0) {
      if (ik.first != 0 || std::abs(ik.second) > m) throw InvalidSolutionError("induced_transfer: degree-0 part of chi is not P_m");
      P[std::size_t(ik.second + m)] = c;
    }
  }

  const int dlo = num.empty() ? 0 : num.min_degree();
  for (int d = dlo; d <= Dt; ++d) {
    GradedSeries rem = num.only_degree(d) - GradedSeries::mul(it.t, chi, d, d);
    const double scale = std::max(num.max_abs_degree(d), 1e-300);
    const auto* b = rem.bucket(d);
    if (!b) continue;
    std::map<int, std::map<int, cplx>> by_i;
    for (const auto& [ik, c] : *b) by_i[ik.first][ik.second] = c;
    for (const auto& [i, modes] : by_i) {
      const int kmin = modes.begin()->first, kmax = modes.rbegin()->first;
      Poly a(std::size_t(kmax - kmin + 1), 0.0);
      for (const auto& [k, c] : modes) a[std::size_t(k - kmin)] = c;
      auto [quo, r] = poly_divmod(a, P);
      for (auto c : r) it.division_remainder = std::max(it.division_remainder, std::abs(c) / scale);
      for (std::size_t n = 0; n < quo.size(); ++n)
        if (quo[n] != cplx(0.0)) it.t.add(i, d - i, kmin + m + int(n), quo[n]);
    }
  }

  // fit onto Σ_k t_{q,k}(p,q) h_q(ω^k u)^N, lowest q-power first
  it.tk.assign(std::size_t(N), GradedSeries());
  std::vector<GradedSeries> hk;
  std::vector<cplx> omega;
  for (int k = 0; k < N; ++k) {
    omega.push_back(std::exp(2.0 * pi * I * double(k) / double(N)));
    hk.push_back(hq_series(omega.back(), N, Dt + m));
  }
  std::vector<double> binom(std::size_t(N + 1), 1.0);
  for (int n = 1; n <= N; ++n) binom[std::size_t(n)] = binom[std::size_t(n - 1)] * double(N - n + 1) / double(n);
  GradedSeries fitted;
  const double tscale = std::max(it.t.max_abs(), 1e-300);
  for (int d = dlo; d <= Dt; ++d) {
    const GradedSeries diff = it.t.only_degree(d) - fitted.only_degree(d);
    const auto* b = diff.bucket(d);
    if (!b) continue;
    std::map<int, std::map<int, cplx>> by_i;
    for (const auto& [ik, c] : *b) by_i[ik.first][ik.second] = c;
    for (const auto& [i, modes] : by_i) {
      auto coef = [&](int n) {
        auto f = modes.find(n);
        return f == modes.end() ? cplx(0.0) : f->second;
      };
      std::vector<cplx> A(std::size_t(N), 0.0);
      A[0] = coef(0);
      for (int n = 1; n < N; ++n) A[std::size_t(n)] = coef(n) / (binom[std::size_t(n)] * std::pow(-1.0, n));
      std::map<int, cplx> left = modes;
      for (int k = 0; k < N; ++k) {
        cplx ak = 0.0;
        for (int n = 0; n < N; ++n) ak += A[std::size_t(n)] * std::pow(omega[std::size_t(k)], -n);
        ak /= double(N);
        if (ak == cplx(0.0)) continue;
        it.tk[std::size_t(k)].add(i, d - i, 0, ak);
        for (int n = 0; n <= N; ++n)
          left[n] -= ak * binom[std::size_t(n)] * std::pow(-omega[std::size_t(k)], n);
        fitted += GradedSeries::mul(GradedSeries::monomial(i, d - i, 0, ak), hk[std::size_t(k)], Dt);
      }
      for (const auto& [n, c] : left) it.basis_residual = std::max(it.basis_residual, std::abs(c) / tscale);
    }
  }
  for (int k = 1; k < N; ++k)
    it.tk[std::size_t(k)].for_each([&](int i, int j, int, cplx c) {
      it.symmetry_deviation = std::max(it.symmetry_deviation, std::abs(c - it.tk[std::size_t(N - k)].get(i, j, 0)));
    });

  const GradedSeries numq_chk = GradedSeries::mul(it.t, chi, dlo, Dt) - num;
  const GradedSeries nump = GradedSeries::mul(hv.swapped(), chi.shifted(0, 1), Dt) +
                            GradedSeries::mul(hiv.swapped(), chi.shifted(0, -1), Dt).scaled(vN);
  const GradedSeries nump_chk = GradedSeries::mul(it.t.swapped(), chi, dlo, Dt) - nump;
  for (int d = dlo; d <= Dt; ++d) {
    it.q_residual = std::max(it.q_residual, rel(numq_chk.max_abs_degree(d), num.max_abs_degree(d)));
    it.p_residual = std::max(it.p_residual, rel(nump_chk.max_abs_degree(d), nump.max_abs_degree(d)));
  }

  // lowest bucket is p^{-m} t^{(-m)}(u)
  SpectralState st = sol.state;
  if (m == 0) st.pairs_P.clear();
  const Poly tt = tropical_t(st);
  for (int n = 0; n <= N; ++n)
    it.tropical_deviation = std::max(it.tropical_deviation, std::abs(it.t.get(-m, 0, n) - tt[std::size_t(n)]));
  it.t.for_each([&](int i, int j, int k, cplx c) {
    if (i + j == -m && !(i == -m && k >= 0 && k <= N)) it.tropical_deviation = std::max(it.tropical_deviation, std::abs(c));
  });
  if (it.division_remainder > 1e-8) throw InvalidSolutionError("induced_transfer: chi does not divide the TQ numerator");
  if (it.basis_residual > 1e-8) throw InvalidSolutionError("induced_transfer: t_q is not in the span of h_q(w^k u)^N");
  return it;
}

ConjectureReport conjecture_scaling(const PerturbativeSolution& sol, double tol) {
  ConjectureReport r;
  auto lowest = [tol](const GradedSeries& s) {
    for (const auto& [d, b] : s.buckets())
      for (const auto& [ik, c] : b)
        if (std::abs(c) > tol) return d;
    throw InvalidSolutionError("conjecture_scaling: empty series");
  };
  r.chi_degree = lowest(sol.H);  // Π^N starts with 1
  r.R0_degree = lowest(sol.R0);
  r.order = (double(r.chi_degree) - 0.5 * double(r.R0_degree)) / 2.0;
  r.expected = 0.5 * double(sol.m);
  return r;
}

json solution_json(const PerturbativeSolution& sol) {
  json j;
  j["N"] = sol.N;
  j["v"] = cjson(sol.v);
  j["m"] = sol.m;
  j["partition"] = sol.state.P_indices;
  j["D"] = sol.D;
  json H = json::array();
  sol.H.for_each([&](int i, int jj, int k, cplx c) {
    if (k >= 0) H.push_back({i, jj, k, c.real(), c.imag()});
  });
  j["H"] = H;
  json R = json::array();
  sol.R0.for_each([&](int i, int jj, int, cplx c) { R.push_back({i, jj, c.real(), c.imag()}); });
  j["R0"] = R;
  json res = json::array();
  for (const auto& dg : sol.diagnostics)
    res.push_back({{"degree", dg.degree}, {"unknowns", dg.unknowns}, {"rank", dg.rank}, {"residual", dg.residual}});
  j["residual_norms"] = res;
  json Q = json::object();
  for (const auto& [n, q] : sol.Q) Q[std::to_string(n)] = q;
  j["Q"] = Q;
  j["pq_asymmetry"] = sol.pq_asymmetry;
  return j;
}

}  // namespace ellq
