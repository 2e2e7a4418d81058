#include "ellq/tropical.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ellq/multiprecision.hpp"

namespace ellq {

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

cplx poly_eval(const Poly& a, cplx u) {
  cplx s = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) s = s * u + *it;
  return s;
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  if (b.empty() || b.back() == cplx(0.0)) throw DomainError("poly_divmod: zero divisor");
  if (a.size() < b.size()) return {Poly{0.0}, a};
  Poly rem = a;
  Poly quo(a.size() - b.size() + 1, 0.0);
  for (std::size_t i = quo.size(); i-- > 0;) {
    const cplx c = rem[i + b.size() - 1] / b.back();
    quo[i] = c;
    for (std::size_t j = 0; j < b.size(); ++j) rem[i + j] -= c * b[j];
  }
  rem.resize(b.size() - 1);
  return {quo, rem};
}

namespace {

Poly binom_pow(cplx c0, cplx c1, int N) {  // (c0 + c1 u)^N
  Poly r{1.0};
  for (int i = 0; i < N; ++i) r = poly_mul(r, Poly{c0, c1});
  return r;
}

using mpc = mp_complex50;

mpc newton_polish(const Poly& a, cplx z0) {
  std::vector<mpc> c;
  for (auto x : a) c.push_back(to_mp<mpc>(x));
  mpc z = to_mp<mpc>(z0);
  for (int it = 0; it < 60; ++it) {
    mpc f = 0, df = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      df = df * z + f;
      f = f * z + c[i];
    }
    if (df == mpc(0)) break;
    const mpc step = f / df;
    z -= step;
    if (abs(step) < real_t<mpc>(1e-45) * (1 + abs(z))) break;
  }
  return z;
}

bool canonical_less(cplx a, cplx b) {
  const double ra = std::abs(a), rb = std::abs(b);
  if (std::abs(ra - rb) > 1e-12) return ra < rb;
  return std::arg(a) < std::arg(b);
}

cplx representative(cplx a, cplx b) {
  const double ra = std::abs(a), rb = std::abs(b);
  if (std::abs(ra - rb) > 1e-10) return ra > rb ? a : b;
  // both on |u| = 1: pick positive imaginary part, then larger real part
  if (std::abs(a.imag() - b.imag()) > 1e-12) return a.imag() > b.imag() ? a : b;
  return a.real() >= b.real() ? a : b;
}

}  // namespace

Poly g_polynomial(int m, int N, cplx v) {
  if (m < 0 || N < 1) throw DomainError("g_polynomial: need m >= 0, N >= 1");
  if (v == cplx(0.0)) throw DomainError("g_polynomial: v = 0");
  Poly a(std::size_t(2 * m), 0.0);
  a.push_back(1.0);
  a = poly_mul(a, binom_pow(-v, 1.0, N));
  Poly b = binom_pow(-1.0 / v, 1.0, N);
  const cplx vN = std::pow(v, N);
  for (auto& x : b) x *= vN;
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

RootSet find_root_pairs(const Poly& coeffs, double pair_tol) {
  Poly a = coeffs;
  while (!a.empty() && a.back() == cplx(0.0)) a.pop_back();
  const int n = int(a.size()) - 1;
  if (n < 1) throw DomainError("find_root_pairs: constant polynomial");
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -a[std::size_t(i)] / a.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
  RootSet rs;
  double scale = 0.0;
  for (auto c : a) scale = std::max(scale, std::abs(c));
  for (int i = 0; i < n; ++i) {
    const cplx z = to_double(newton_polish(a, es.eigenvalues()(i)));
    rs.all_roots.push_back(z);
    rs.max_abs_G = std::max(rs.max_abs_G, std::abs(poly_eval(a, z)) / scale);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(rs.all_roots[std::size_t(i)] - rs.all_roots[std::size_t(j)]) < 1e-7)
        throw DegeneracyError("find_root_pairs: multiple root near " +
                              std::to_string(rs.all_roots[std::size_t(i)].real()) + "; perturb v");
  std::vector<bool> used(std::size_t(n), false);
  if (n % 2 == 1) {
    int best = -1;
    for (int i = 0; i < n; ++i)
      if (best < 0 || std::abs(rs.all_roots[std::size_t(i)] - 1.0) < std::abs(rs.all_roots[std::size_t(best)] - 1.0))
        best = i;
    if (std::abs(rs.all_roots[std::size_t(best)] - 1.0) > pair_tol)
      throw PairingError("find_root_pairs: odd degree but no root at u = 1");
    used[std::size_t(best)] = true;
    rs.unit_root = true;
  }
  for (int i = 0; i < n; ++i) {
    if (used[std::size_t(i)]) continue;
    used[std::size_t(i)] = true;
    const cplx r = rs.all_roots[std::size_t(i)];
    int best = -1;
    double err = INFINITY;
    for (int j = 0; j < n; ++j) {
      if (used[std::size_t(j)]) continue;
      const double e = std::abs(r * rs.all_roots[std::size_t(j)] - 1.0);
      if (e < err) {
        err = e;
        best = j;
      }
    }
    if (best < 0 || err > pair_tol) throw PairingError("find_root_pairs: root has no reciprocal mate");
    used[std::size_t(best)] = true;
    const cplx s = rs.all_roots[std::size_t(best)];
    const cplx xi = representative(r, s);
    rs.pairs.push_back({xi, xi == r ? s : r});
  }
  std::sort(rs.pairs.begin(), rs.pairs.end(),
            [](const RootPair& x, const RootPair& y) { return canonical_less(x.xi, y.xi); });
  return rs;
}

std::vector<cplx> SpectralState::P_laurent() const {
  Poly P{1.0};
  for (const auto& pr : pairs_P) P = poly_mul(P, poly_mul(Poly{-pr.xi, 1.0}, Poly{-pr.mate, 1.0}));
  return P;  // index k+m holds the coefficient of u^k
}

std::vector<cplx> SpectralState::H0_coeffs() const {
  Poly H{1.0};
  for (const auto& pr : pairs_H) H = poly_mul(H, poly_mul(Poly{-pr.xi, 1.0}, Poly{-pr.mate, 1.0}));
  if (unit_root) H = poly_mul(H, Poly{-1.0, 1.0});
  // u^{-N} H(u): coefficient of u^{-n} is H[N-n]
  std::vector<cplx> out(std::size_t(N + 1), 0.0);
  for (int nn = 0; nn <= N; ++nn) out[std::size_t(nn)] = H[std::size_t(N - nn)];
  return out;
}

std::vector<SpectralState> enumerate_states(int N, int m, cplx v) {
  const RootSet rs = find_root_pairs(g_polynomial(m, N, v));
  const int np = int(rs.pairs.size());
  if (np != m + N / 2) throw PairingError("enumerate_states: unexpected pair count");
  std::vector<SpectralState> out;
  // combinations in lexicographic order
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[std::size_t(i)] = i;
  while (true) {
    SpectralState s;
    s.N = N;
    s.m = m;
    s.v = v;
    s.unit_root = rs.unit_root;
    s.P_indices = idx;
    std::vector<bool> inP(std::size_t(np), false);
    for (int i : idx) inP[std::size_t(i)] = true;
    for (int i = 0; i < np; ++i) (inP[std::size_t(i)] ? s.pairs_P : s.pairs_H).push_back(rs.pairs[std::size_t(i)]);
    out.push_back(s);
    int i = m - 1;
    while (i >= 0 && idx[std::size_t(i)] == np - m + i) --i;
    if (i < 0) break;
    ++idx[std::size_t(i)];
    for (int j = i + 1; j < m; ++j) idx[std::size_t(j)] = idx[std::size_t(j - 1)] + 1;
  }
  return out;
}

Poly tropical_t(const SpectralState& s) {
  // u^m (-u)^N G_m = (1-uv)^N + (v-u)^N u^{2m}
  Poly A = binom_pow(1.0, -s.v, s.N);
  Poly B(std::size_t(2 * s.m), 0.0);
  B.push_back(1.0);
  B = poly_mul(B, binom_pow(s.v, -1.0, s.N));
  Poly sum(std::max(A.size(), B.size()), 0.0);
  for (std::size_t i = 0; i < A.size(); ++i) sum[i] += A[i];
  for (std::size_t i = 0; i < B.size(); ++i) sum[i] += B[i];
  const Poly P = s.P_laurent();
  auto [quo, rem] = poly_divmod(sum, P);
  double scale = 0.0, r = 0.0;
  for (auto c : sum) scale = std::max(scale, std::abs(c));
  for (auto c : rem) r = std::max(r, std::abs(c));
  if (r > 1e-10 * scale) throw ClassificationError("tropical_t: division by P_m leaves a remainder");
  quo.resize(std::size_t(s.N + 1), 0.0);
  return quo;
}

cplx tropical_tq_residual(const SpectralState& s, cplx u) {
  const Poly t = tropical_t(s);
  const Poly P = s.P_laurent();
  const cplx Pm = poly_eval(P, u) * std::pow(u, -s.m);
  return poly_eval(t, u) * Pm - std::pow(1.0 - u * s.v, s.N) * std::pow(u, -s.m) -
         std::pow(s.v - u, s.N) * std::pow(u, s.m);
}

json state_catalog_json(int N, int m, cplx v, const std::vector<SpectralState>& states, const RootSet& roots) {
  json j;
  j["N"] = N;
  j["m"] = m;
  j["v"] = cjson(v);
  json pairs = json::array();
  for (const auto& pr : roots.pairs) pairs.push_back({{"xi", cjson(pr.xi)}});
  j["pairs"] = pairs;
  j["unit_root"] = roots.unit_root;
  json st = json::array();
  for (const auto& s : states) st.push_back({{"P_indices", s.P_indices}});
  j["states"] = st;
  return j;
}

}  // namespace ellq
