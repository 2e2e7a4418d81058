#include "ellq/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace ellq {

ModularData spin_modular(const SpinSet& s, cplx tau, cplx eta) {
  if (s.m < 0 || s.n < 0) throw DomainError("SpinSet: m, n must be non-negative");
  ModularData md = ModularData::from_additive(0.0, 0.0, tau, eta);
  return ModularData::from_additive(0.0, s.y(md), tau, eta);
}

cplx bae_residual(int k, const std::vector<cplx>& roots, int m, int n, int N, cplx tau, cplx eta,
                  const TruncationPolicy& pol) {
  const cplx xk = roots.at(std::size_t(k));
  auto th_sigma = [&](cplx z) { return (n % 2 == 0) ? th4(z, tau, pol) : th1(z, tau, pol); };
  const cplx a = 0.5 * double(m) * eta;
  const cplx den = th_sigma(a + xk);
  if (std::abs(den) < 1e-290) throw PoleError(m, n, "bethe_residual: theta_sigma(m eta/2 + x_k) vanishes");
  cplx lhs = std::pow(th_sigma(a - xk) / den, N);
  for (const cplx xj : roots) {
    const cplx b = th1(0.5 * (xk - xj - eta), 0.5 * tau, pol);
    if (std::abs(b) < 1e-290) throw PoleError(m, n, "bethe_residual: theta_1((x_k - x_j - eta)/2) vanishes");
    lhs *= th1(0.5 * (xk - xj + eta), 0.5 * tau, pol) / b;
  }
  return lhs + 1.0;
}

cplx bethe_residual(int k, const BetheRoots& r, const SpinSet& s, int N, const ModularData& md, Sector sec,
                    const TruncationPolicy& pol) {
  if (sec == Sector::tau) return bae_residual(k, r.x, s.m, s.n, N, md.tau, md.eta, pol);
  return bae_residual(k, r.xp, s.n, s.m, N, md.eta, md.tau, pol);
}

double bethe_max_residual(const BetheRoots& r, const SpinSet& s, int N, const ModularData& md,
                          const TruncationPolicy& pol) {
  double w = 0.0;
  for (int k = 0; k < int(r.x.size()); ++k) w = std::max(w, std::abs(bethe_residual(k, r, s, N, md, Sector::tau, pol)));
  for (int k = 0; k < int(r.xp.size()); ++k) w = std::max(w, std::abs(bethe_residual(k, r, s, N, md, Sector::eta, pol)));
  return w;
}

cplx FactorizedQ::A(cplx z) const {
  cplx a = 1.0;
  for (const cplx xj : x) a *= th4(0.5 * (z - xj), 0.5 * tau);
  return a;
}

cplx FactorizedQ::Ap(cplx z) const {
  cplx a = 1.0;
  for (const cplx xj : xp) a *= th4(0.5 * (z - xj), 0.5 * eta);
  return a;
}

namespace {

double mod2(double a) {
  double r = std::fmod(a, 2.0);
  return r < 0 ? r + 2.0 : r;
}

// representative of {z, -z} mod 2
cplx canonical_pair(cplx z) {
  const cplx a(mod2(z.real()), z.imag()), b(mod2(-z.real()), -z.imag());
  if (std::abs(a.real() - b.real()) > 1e-10) return a.real() < b.real() ? a : b;
  return a.imag() <= b.imag() ? a : b;
}

std::vector<cplx> expand(const std::vector<cplx>& pairs, int fixed_root) {
  std::vector<cplx> r;
  for (const cplx z : pairs) {
    r.push_back(z);
    r.push_back(-z);
  }
  if (fixed_root >= 0) r.push_back(double(fixed_root));
  return r;
}

struct SectorSolve {
  std::vector<std::vector<cplx>> solutions;  // expanded root lists
  std::vector<double> residuals;
  double best = INFINITY;
  bool collided = false;
};

// damped Newton on the pair representatives of one sector
SectorSolve solve_sector(int m, int n, int N, cplx tau, cplx eta, const BetheOptions& opt) {
  SectorSolve out;
  const int total = m * N;
  if (total == 0) {
    out.solutions.push_back({});
    out.residuals.push_back(0.0);
    out.best = 0.0;
    return out;
  }
  const int P = total / 2;
  std::vector<int> fixed = (total % 2 == 1) ? std::vector<int>{0, 1} : std::vector<int>{-1};

  const double it = tau.imag();
  std::vector<std::vector<cplx>> seeds;
  if (P == 1) {
    std::vector<cplx> s1 = opt.seeds;
    if (s1.empty())
      for (int a = 0; a < 14; ++a)
        for (double b : {-0.4, -0.15, 0.1, 0.25, 0.4}) s1.emplace_back(0.15 * a, b * it);
    for (auto s : s1) seeds.push_back({s});
  } else {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(0.0, 2.0), im(-0.45 * it, 0.45 * it);
    for (int t = 0; t < 80; ++t) {
      std::vector<cplx> s;
      for (int j = 0; j < P; ++j) s.emplace_back(re(rng), im(rng));
      seeds.push_back(s);
    }
  }

  auto F = [&](const std::vector<cplx>& z, int f) {
    const std::vector<cplx> roots = expand(z, f);
    Eigen::VectorXcd r(P);
    for (int j = 0; j < P; ++j) r(j) = bae_residual(2 * j, roots, m, n, N, tau, eta);
    return r;
  };

  std::vector<std::tuple<std::vector<cplx>, int, double>> found;
  const int ns = int(seeds.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
  for (int si = 0; si < ns; ++si) {
    for (int f : fixed) {
      std::vector<cplx> z = seeds[std::size_t(si)];
      double res = INFINITY;
      try {
        Eigen::VectorXcd r = F(z, f);
        res = r.cwiseAbs().maxCoeff();
        for (int iter = 0; iter < opt.max_iter && res > opt.tol; ++iter) {
          Eigen::MatrixXcd J(P, P);
          const double hstep = 1e-7;
          for (int j = 0; j < P; ++j) {
            std::vector<cplx> zh = z;
            zh[std::size_t(j)] += hstep;
            J.col(j) = (F(zh, f) - r) / hstep;
          }
          const Eigen::VectorXcd dz = J.fullPivLu().solve(-r);
          double lam = 1.0;
          bool moved = false;
          for (int ls = 0; ls < 12; ++ls, lam *= 0.5) {
            std::vector<cplx> zt = z;
            for (int j = 0; j < P; ++j) zt[std::size_t(j)] += lam * dz(j);
            try {
              const Eigen::VectorXcd rt = F(zt, f);
              const double rr = rt.cwiseAbs().maxCoeff();
              if (std::isfinite(rr) && rr < res) {
                z = zt;
                r = rt;
                res = rr;
                moved = true;
                break;
              }
            } catch (const Error&) {
            }
          }
          if (!moved) break;
        }
      } catch (const Error&) {
        continue;
      }
#pragma omp critical
      found.emplace_back(z, f, res);
    }
  }

  std::vector<std::vector<cplx>> keys;
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return std::get<2>(a) < std::get<2>(b); });
  for (auto& [z, f, res] : found) {
    out.best = std::min(out.best, res);
    if (!(res < opt.accept)) continue;
    std::vector<cplx> key;
    for (const cplx w : z) key.push_back(canonical_pair(w));
    bool bad = false;
    for (const cplx w : key) {
      if (std::abs(w.imag()) >= it) bad = true;
      // a pair degenerating to a self-mirror point
      if (std::abs(w.imag()) < 1e-8 && (std::abs(w.real()) < 1e-8 || std::abs(w.real() - 1.0) < 1e-8)) out.collided = bad = true;
    }
    for (std::size_t a = 0; a < key.size(); ++a)
      for (std::size_t b = a + 1; b < key.size(); ++b)
        if (std::abs(key[a] - key[b]) < 1e-8) out.collided = bad = true;
    if (bad) continue;
    std::sort(key.begin(), key.end(), [](cplx a, cplx b) {
      return std::abs(a.real() - b.real()) > 1e-10 ? a.real() < b.real() : a.imag() < b.imag();
    });
    const bool dup = std::any_of(keys.begin(), keys.end(), [&](const std::vector<cplx>& k2) {
      for (std::size_t a = 0; a < key.size(); ++a)
        if (std::abs(key[a] - k2[a]) > 1e-7) return false;
      return true;
    });
    if (dup) continue;
    keys.push_back(key);
    out.solutions.push_back(expand(key, f));
    out.residuals.push_back(res);
  }
  // canonical order by the first representative
  std::vector<std::size_t> idx(out.solutions.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const cplx za = keys[a].front(), zb = keys[b].front();
    return std::abs(za.real() - zb.real()) > 1e-10 ? za.real() < zb.real() : za.imag() < zb.imag();
  });
  SectorSolve sorted = out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    sorted.solutions[i] = out.solutions[idx[i]];
    sorted.residuals[i] = out.residuals[idx[i]];
  }
  return sorted;
}

}  // namespace

std::vector<BetheRoots> bethe_solve(const SpinSet& s, int N, const ModularData& md, const BetheOptions& opt) {
  if (s.m * N > 6 || s.n * N > 6) throw DomainError("bethe_solve: instance too large (need mN, nN <= 6)");
  const SectorSolve a = solve_sector(s.m, s.n, N, md.tau, md.eta, opt);
  const SectorSolve b = solve_sector(s.n, s.m, N, md.eta, md.tau, opt);
  if (a.solutions.empty() || b.solutions.empty()) {
    if (a.collided || b.collided) throw DegeneracyError("bethe_solve: only colliding roots found");
    throw ConvergenceError("bethe_solve: no solution from any seed", std::max(a.best, b.best));
  }
  std::vector<BetheRoots> out;
  for (std::size_t i = 0; i < a.solutions.size(); ++i)
    for (std::size_t j = 0; j < b.solutions.size(); ++j) {
      BetheRoots r;
      r.x = a.solutions[i];
      r.xp = b.solutions[j];
      r.residual = bethe_max_residual(r, s, N, md);
      // branches where A·A' and B·B' cancel identically give Q = 0
      const FactorizedQ Q{r.x, r.xp, md.tau, md.eta};
      bool null_q = true;
      for (const cplx z : {cplx(0.17, 0.03), cplx(0.59, -0.08), cplx(1.31, 0.11)}) {
        const double size = std::max(std::abs(Q.A(z) * Q.Ap(z)), std::abs(Q.B(z) * Q.Bp(z)));
        if (std::abs(Q(z)) > 1e-10 * size) null_q = false;
      }
      if (!null_q) out.push_back(r);
    }
  if (out.empty()) throw DegeneracyError("bethe_solve: every solution gives Q identically zero");
  return out;
}

TqCheck q_factorized_tq_check(const BetheRoots& r, const SpinSet& s, int N, const ModularData& md,
                              const TruncationPolicy& pol) {
  const FactorizedQ Q{r.x, r.xp, md.tau, md.eta};
  const cplx y = s.y(md), tau = md.tau, eta = md.eta, q = md.q;
  const cplx qq = qpoch1<cplx>(q, q, pol);
  auto t_of_x = [&](cplx x) {
    const cplx Qx = Q(x);
    if (std::abs(Qx) < 1e-200) throw PoleError(s.m, s.n, "q_factorized_tq_check: Q vanishes at a sample point");
    return (std::pow(th1(x + y, tau, pol), N) * Q(x + eta) + std::pow(th1(x - y, tau, pol), N) * Q(x - eta)) / Qx;
  };
  auto t_q = [&](cplx x) {
    const cplx norm = I * std::exp(I * pi * tau / 4.0) * std::exp(-I * pi * (x + y)) * qq;
    return t_of_x(x) / std::pow(norm, N);
  };
  // symmetric basis h(ω^k u)^N + h(ω^{N-k} u)^N, k = 0..floor(N/2)
  const int nb = N / 2 + 1;
  auto basis = [&](int k, cplx u) {
    auto b = [&](int kk) { return std::pow(hq(std::exp(2.0 * pi * I * double(kk) / double(N)) * u, q, pol), N); };
    return (k == 0 || 2 * k == N) ? b(k) : b(k) + b(N - k);
  };
  Eigen::MatrixXcd A(nb, nb);
  Eigen::VectorXcd rhs(nb);
  for (int j = 0; j < nb; ++j) {
    const cplx x(0.11 + 0.26 * double(j) / double(nb), 0.02 + 0.01 * double(j));
    for (int k = 0; k < nb; ++k) A(j, k) = basis(k, expi2pi(x));
    rhs(j) = t_q(x);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const double cond = svd.singularValues()(0) / svd.singularValues()(nb - 1);
  if (!std::isfinite(cond) || cond > 1e12) throw IllConditionedError("q_factorized_tq_check: basis points are degenerate");
  const Eigen::VectorXcd c = A.fullPivLu().solve(rhs);

  TqCheck out;
  out.t.assign(std::size_t(N), 0.0);
  for (int k = 0; k < nb; ++k) {
    out.t[std::size_t(k)] = c(k);
    out.t[std::size_t((N - k) % N)] = c(k);
  }
  out.report.relation = "tq0_factorized";
  out.report.policy = pol;
  const cplx fresh[] = {{0.23, 0.05}, {-0.4, 0.1}, {0.05, 0.2}, {0.61, -0.07}, {0.83, 0.13}};
  for (const cplx x : fresh) {
    cplx fit = 0.0;
    for (int k = 0; k < nb; ++k) fit += c(k) * basis(k, expi2pi(x));
    const cplx tv = t_q(x);
    const double e = std::abs(fit - tv) / std::max(std::abs(tv), 1e-300);
    out.report.add({{"x", cjson(x)}}, e);
    out.fresh_residual = std::max(out.fresh_residual, e);
    out.period_residual = std::max(out.period_residual, std::abs(Q(x + 2.0) - Q(x)) / std::abs(Q(x)));
  }
  out.report.finalize();
  if (out.fresh_residual > 1e-6) throw InvalidSolutionError("q_factorized_tq_check: t is not a basis polynomial for these roots");
  return out;
}

double r_no_denominator_residual(const SpinSet& s, const ModularData& md, cplx u, const TruncationPolicy& pol) {
  const cplx p = md.p, q = md.q, v = md.v;
  const cplx w = 1.0 / (u * v);
  const cplx lhs = gamma_e(w, p, q, pol) / gamma_e(v / u, p, q, pol);
  cplx rhs = 1.0;
  for (int i = 1; i <= s.m; ++i) rhs *= hq(w * std::pow(p, -i), q, pol);
  for (int j = 1; j <= s.n; ++j) rhs *= hq(w * std::pow(p, -s.m) * std::pow(q, -j), p, pol);
  return std::abs(lhs - rhs) / std::abs(rhs);
}

EquivalenceReport q_equivalence_baxter(const BetheRoots& r, int N, const ModularData& md) {
  EquivalenceReport rep;
  const FactorizedQ Q{r.x, r.xp, md.tau, md.eta};
  const cplx tau = md.tau;
  const double it = tau.imag();
  auto reduce = [&](cplx z) {
    z -= std::floor(z.imag() / it) * tau;
    return cplx(z.real() - std::floor(z.real()), z.imag());
  };
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 4; ++b) {
      cplx z((a + 0.3) / 6.0, (b + 0.4) / 4.0 * it);
      for (int iter = 0; iter < 60; ++iter) {
        const double hs = 1e-7;
        const cplx f = Q(z), df = (Q(z + hs) - f) / hs;
        if (df == cplx(0.0)) break;
        const cplx step = f / df;
        z -= step;
        if (std::abs(step) < 1e-15) break;
      }
      if (!(std::abs(Q(z)) < 1e-10)) continue;
      const cplx zr = reduce(z);
      bool dup = false;
      for (const cplx w : rep.xi) {
        cplx d = zr - w;
        d -= std::round(d.imag() / it) * tau;
        d -= std::round(d.real());
        if (std::abs(d) < 1e-7) dup = true;
      }
      if (!dup) rep.xi.push_back(zr);
    }
  if (int(rep.xi.size()) != N / 2) return rep;

  const cplx pts[] = {{0.1, 0.02}, {0.3, -0.05}, {0.77, 0.1}, {0.45, 0.21}, {0.91, -0.13}, {0.63, 0.04}};
  rep.deviation = INFINITY;
  for (int k = -2 * N; k <= 2 * N; ++k) {
    std::vector<cplx> ratio;
    for (const cplx x : pts) {
      cplx den = std::exp(I * pi * double(k) * x);
      for (const cplx xi : rep.xi) den *= th1(x - xi, tau);
      ratio.push_back(Q(x) / den);
    }
    double dev = 0.0;
    for (const cplx c : ratio) dev = std::max(dev, std::abs(c - ratio.front()) / std::abs(ratio.front()));
    if (dev < rep.deviation) {
      rep.deviation = dev;
      rep.k = k;
      rep.constant = ratio.front();
    }
  }
  rep.fitted = rep.deviation < 1e-6;
  return rep;
}

json bethe_json(const SpinSet& s, int N, const std::vector<BetheRoots>& sols, const std::vector<TqCheck>& checks) {
  json j;
  j["m"] = s.m;
  j["n"] = s.n;
  j["N"] = N;
  json arr = json::array();
  for (std::size_t i = 0; i < sols.size(); ++i) {
    json e;
    json x = json::array(), xp = json::array();
    for (auto z : sols[i].x) x.push_back(cjson(z));
    for (auto z : sols[i].xp) xp.push_back(cjson(z));
    e["roots"] = x;
    e["roots_eta"] = xp;
    e["residual"] = sols[i].residual;
    if (i < checks.size()) e["q_check"] = {{"fresh_point_residual", checks[i].fresh_residual}};
    arr.push_back(e);
  }
  j["solutions"] = arr;
  return j;
}

}  // namespace ellq
