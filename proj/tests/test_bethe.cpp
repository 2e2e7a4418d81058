#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ellq/bethe.hpp"
#include "oracle.hpp"

using namespace ellq;

namespace {

const cplx kTau{0.0, 0.6}, kEta{0.13, 0.07};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// distance of z from the lattice 2Z
double dist2(cplx z) { return std::abs(cplx(z.real() - 2.0 * std::round(z.real() / 2.0), z.imag())); }

}  // namespace

TEST_CASE("spin set: v^2 = p^-m q^-n") {
  for (auto [m, n] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 3}}) {
    const ModularData md = spin_modular({m, n}, kTau, kEta);
    CHECK(rel(md.v * md.v, std::pow(md.p, -m) * std::pow(md.q, -n)) < 1e-12);
  }
  CHECK_THROWS_AS(spin_modular({-1, 0}, kTau, kEta), DomainError);
}

TEST_CASE("BAE: diagonal factor, sigma rule, mirrored sector") {
  // j = k factor is -1 since θ₁ is odd
  CHECK(rel(th1(0.5 * kEta, 0.5 * kTau) / th1(-0.5 * kEta, 0.5 * kTau), -1.0) < 1e-15);

  const std::vector<cplx> roots{{0.3, 0.1}, {-0.3, -0.1}};
  const int N = 2;
  for (int n : {0, 1, 2}) {
    const int m = 1;
    auto ths = [&](cplx z) { return n % 2 == 0 ? th4(z, kTau) : th1(z, kTau); };
    const cplx a = 0.5 * kEta, x0 = roots[0];
    cplx lhs = std::pow(ths(a - x0) / ths(a + x0), N);
    for (cplx xj : roots) lhs *= th1(0.5 * (x0 - xj + kEta), 0.5 * kTau) / th1(0.5 * (x0 - xj - kEta), 0.5 * kTau);
    INFO("n = " << n);
    CHECK(rel(bae_residual(0, roots, m, n, N, kTau, kEta), lhs + 1.0) < 1e-13);
  }
  CHECK(std::abs(bae_residual(0, roots, 1, 0, N, kTau, kEta) - bae_residual(0, roots, 1, 1, N, kTau, kEta)) > 1e-3);

  const ModularData md = spin_modular({1, 1}, kTau, kEta);
  BetheRoots r;
  r.x = roots;
  r.xp = {{0.2, 0.05}, {-0.2, -0.05}};
  CHECK(bethe_residual(1, r, {1, 1}, N, md, Sector::eta) == bae_residual(1, r.xp, 1, 1, N, kEta, kTau));
}

TEST_CASE("bethe_solve: classical case m = 1, n = 0, N = 2") {
  const SpinSet s{1, 0};
  const int N = 2;
  const ModularData md = spin_modular(s, kTau, kEta);
  const auto sols = bethe_solve(s, N, md);
  REQUIRE_FALSE(sols.empty());
  for (const auto& r : sols) {
    REQUIRE(r.x.size() == 2);
    CHECK(r.xp.empty());
    CHECK(r.residual < 1e-9);
    // the full, un-reduced system
    CHECK(bethe_max_residual(r, s, N, md) < 1e-9);
    // {x_j} = {-x_j} modulo the period 2
    for (cplx xi : r.x) {
      double best = INFINITY;
      for (cplx xj : r.x) best = std::min(best, dist2(xi + xj));
      CHECK(best < 1e-9);
    }
  }
}

TEST_CASE("bethe_solve: serial and parallel seeds give the same solutions") {
  BetheOptions a, b;
  b.parallel = false;
  const SpinSet s{1, 0};
  const ModularData md = spin_modular(s, kTau, kEta);
  const auto s1 = bethe_solve(s, 2, md, a), s2 = bethe_solve(s, 2, md, b);
  REQUIRE(s1.size() == s2.size());
  for (std::size_t i = 0; i < s1.size(); ++i)
    for (std::size_t k = 0; k < s1[i].x.size(); ++k) CHECK(std::abs(s1[i].x[k] - s2[i].x[k]) < 1e-12);
}

TEST_CASE("factorized Q: TQ at fresh points, period 2, Baxter product form") {
  const SpinSet s{1, 0};
  const int N = 2;
  const ModularData md = spin_modular(s, kTau, kEta);
  for (const auto& r : bethe_solve(s, N, md)) {
    const TqCheck c = q_factorized_tq_check(r, s, N, md);
    MESSAGE("fresh-point TQ residual: " << c.fresh_residual);
    CHECK(c.fresh_residual < 1e-8);
    CHECK(c.period_residual < 1e-10);
    CHECK(c.t.size() == std::size_t(N));

    const FactorizedQ Q{r.x, r.xp, md.tau, md.eta};
    const cplx z{0.37, 0.11};
    CHECK(rel(Q(z + 2.0), Q(z)) < 1e-12);

    const EquivalenceReport e = q_equivalence_baxter(r, N, md);
    REQUIRE(e.fitted);
    CHECK(e.xi.size() == 1);
    CHECK(e.deviation < 1e-8);
    // ξ is a zero of Q
    for (cplx xi : e.xi) CHECK(std::abs(Q(xi)) < 1e-8 * std::abs(Q(xi + 0.5)));
  }
}

TEST_CASE("factorized Q: empty products for m = n = 0") {
  const FactorizedQ Q{{}, {}, kTau, kEta};
  CHECK(Q({0.3, 0.1}) == cplx(2.0));
  CHECK(Q({-1.7, 0.4}) == cplx(2.0));
}

TEST_CASE("R(u) has no denominator at the spin set") {
  const cplx u{0.8, 0.3};
  for (auto [m, n] : {std::pair{1, 0}, {0, 1}, {1, 1}}) {
    const SpinSet s{m, n};
    const ModularData md = spin_modular(s, kTau, kEta);
    INFO("m = " << m << ", n = " << n);
    CHECK(r_no_denominator_residual(s, md, u) < 1e-12);
    // brute-force Γ ratio against the same finite product; |p| = 0.64 needs more terms
    const cplx w = 1.0 / (u * md.v);
    const cplx ratio = oracle::ell_gamma(w, md.p, md.q, 120) / oracle::ell_gamma(md.v / u, md.p, md.q, 120);
    cplx prod = 1.0;
    for (int i = 1; i <= m; ++i) prod *= hq(w * std::pow(md.p, -i), md.q);
    for (int j = 1; j <= n; ++j) prod *= hq(w * std::pow(md.p, -m) * std::pow(md.q, -j), md.p);
    CHECK(rel(ratio, prod) < 1e-12);
  }
}

TEST_CASE("bethe_solve: instance size limit") {
  const SpinSet s{4, 0};
  CHECK_THROWS_AS(bethe_solve(s, 2, spin_modular(s, kTau, kEta)), DomainError);
}

TEST_CASE("bethe JSON") {
  const SpinSet s{1, 0};
  const ModularData md = spin_modular(s, kTau, kEta);
  const auto sols = bethe_solve(s, 2, md);
  std::vector<TqCheck> checks;
  for (const auto& r : sols) checks.push_back(q_factorized_tq_check(r, s, 2, md));
  const json j = bethe_json(s, 2, sols, checks);
  for (const char* k : {"m", "n", "N"}) CHECK(j.contains(k));
  MESSAGE(j.dump().substr(0, 300));
}
