#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ellq/functional.hpp"
#include "ellq/perturbative.hpp"
#include "ellq/suites.hpp"
#include "oracle.hpp"

using namespace ellq;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

const LiouvilleParams kLP{{0.6, 0.1}, {0.12, 0.03}, {0.2, -0.05}, 2, 1.3};

// symmetric in u <-> 1/u and in p <-> q
ChiFunction toy_chi(const LiouvilleParams& lp) {
  const cplx s = lp.p + lp.q;
  return ChiFunction::from_evaluator([s](cplx u) { return 1.0 + 0.3 * s * (u + 1.0 / u) + 0.1 * (u * u + 1.0 / (u * u)); });
}

}  // namespace

TEST_CASE("SymmetricLaurent: inversion symmetry and truncation flag") {
  const SymmetricLaurent f({1.0, {0.2, 0.1}, {0.05, -0.02}});
  const cplx u{0.7, 0.4};
  CHECK(f.eval(1.0 / u) == f.eval(u));
  const SymmetricLaurent g = f * f;
  CHECK(g.K() == 2);
  CHECK(g.truncation_dropped() > 0.0);
  CHECK(rel(g.eval(u), f.eval(u) * f.eval(u)) > 1e-6);
  const SymmetricLaurent c({2.0});
  CHECK(rel((f * c).eval(u), 2.0 * f.eval(u)) < 1e-15);
  CHECK((f * c).truncation_dropped() == 0.0);
  CHECK(rel(f.scaled(0.5).eval(u), f.eval(0.5 * u)) < 1e-15);
}

TEST_CASE("TQ: tropical limit N = 1 with constant chi") {
  const cplx v{0.4, 0.2};
  LiouvilleParams lp{v, 0.0, 0.0, 1, 1.0};
  const ChiFunction one = ChiFunction::from_evaluator([](cplx) { return cplx(1.0); });
  const ScalarFn t = [v](cplx u) { return 1.0 - u * v + v - u; };
  for (cplx u : {cplx{0.3, 0.1}, cplx{-0.8, 0.5}}) CHECK(std::abs(tq_residual_q(one, t, u, lp)) < 1e-15);
}

TEST_CASE("TQ: additive form maps to the multiplicative one") {
  // t_q from the relation itself; then θ₁-form with t = (i q^{1/8}(uv)^{-1/2}(q;q))^N t_q
  const ModularData md = ModularData::from_additive({0.13, 0.02}, {0.21, -0.01}, {0.05, 0.5}, {0.1, 0.3});
  const int N = 3;
  LiouvilleParams lp{md.v, md.p, md.q, N, 1.0};
  const ChiFunction chi = toy_chi(lp);
  const cplx u = md.u, v = md.v;
  const cplx tq = (std::pow(hq(u * v, md.q), N) * chi(md.p * u) + std::pow(v, N) * std::pow(hq(u / v, md.q), N) * chi(u / md.p)) / chi(u);
  CHECK(std::abs(tq_residual_q(chi, [&](cplx) { return tq; }, u, lp)) < 1e-14);

  const cplx norm = std::pow(I * md.q_eighth() / (md.sqrt_u() * md.sqrt_v()) * qpoch1<cplx>(md.q, md.q), N);
  const cplx Q0 = chi(u), Qp = chi(md.p * u), Qm = chi(u / md.p);
  const cplx lhs = norm * tq * Q0;
  const cplx rhs = std::pow(th1(md.x + md.y, md.tau), N) * Qp + std::pow(th1(md.x - md.y, md.tau), N) * Qm;
  CHECK(rel(lhs, rhs) < 1e-13);
}

TEST_CASE("TQ: p-form is the p<->q relabelling of the q-form") {
  const LiouvilleParams lp = kLP;
  LiouvilleParams sw = lp;
  std::swap(sw.p, sw.q);
  const ChiFunction chi = toy_chi(lp);
  const ScalarFn t = [](cplx u) { return 0.7 + 0.2 * u - 0.1 / u; };
  for (cplx u : {cplx{0.8, 0.1}, cplx{1.2, -0.4}})
    CHECK(rel(tq_residual_p(chi, t, u, lp), tq_residual_q(chi, t, u, sw)) < 1e-15);
}

TEST_CASE("TQ and Liouville: perturbative ground state at a numeric point") {
  const cplx p = 0.1, q = 0.2, u = 0.8;
  std::vector<double> rq, rp;
  for (int D : {6, 10}) {
    PerturbativeOptions o;
    o.D = D;
    const PerturbativeSolution sol = solve_ground(2, 0.5, o);
    const InducedTransfer it = induced_transfer(sol);
    const LiouvilleParams lp{0.5, p, q, 2, sol.R0.eval(p, q, 1.0)};
    const ChiFunction chi = ChiFunction::from_H([&](cplx z) { return sol.H.eval(p, q, z); }, lp);
    const GradedSeries tps = it.t.swapped();
    rq.push_back(std::abs(tq_residual_q(chi, [&](cplx z) { return it.t.eval(p, q, z); }, u, lp)));
    rp.push_back(std::abs(tq_residual_p(chi, [&](cplx z) { return tps.eval(p, q, z); }, u, lp)));
  }
  MESSAGE("q-form residual D=6: " << rq[0] << "  D=10: " << rq[1]);
  CHECK(rq[1] < 1e-5);
  CHECK(rp[1] < 1e-5);
  CHECK(rq[1] < rq[0] / 50.0);
  CHECK(rp[1] < rp[0] / 50.0);
}

TEST_CASE("R(u): Laplace identity, v = 1, oracle value") {
  for (cplx u : {cplx{0.7, 0.2}, cplx{1.3, -0.6}, cplx{-0.4, 0.9}}) CHECK(laplace_residual(u, kLP) < 1e-12);
  LiouvilleParams one = kLP;
  one.v = 1.0;
  CHECK(rel(liouville_R({0.7, 0.2}, one), one.R0) < 1e-15);
  const cplx u{0.7, 0.2};
  const cplx want = kLP.R0 * std::pow(oracle::ell_gamma(1.0 / (u * kLP.v), kLP.p, kLP.q) /
                                          oracle::ell_gamma(kLP.v / u, kLP.p, kLP.q),
                                      kLP.N);
  CHECK(rel(liouville_R(u, kLP), want) < 1e-13);
}

TEST_CASE("Liouville residual: negative control and u -> 1/(pqu) invariance") {
  const LiouvilleParams lp = kLP;
  const ChiFunction one = ChiFunction::from_evaluator([](cplx) { return cplx(1.0); });
  const cplx u{0.9, 0.3};
  const cplx r = liouville_residual(one, u, lp);
  CHECK(rel(r, 1.0 - std::pow(lp.v, lp.N) - liouville_R(u, lp)) < 1e-14);
  CHECK(std::abs(r) > 1e-3);

  const ChiFunction chi = toy_chi(lp);
  const cplx pq = lp.p * lp.q;
  for (cplx z : {cplx{0.9, 0.3}, cplx{1.1, -0.2}, cplx{-0.7, 0.6}, cplx{0.5, 0.5}, cplx{1.4, 0.1}})
    CHECK(rel(liouville_residual(chi, z, lp), liouville_residual(chi, 1.0 / (pq * z), lp)) < 1e-12);
}

TEST_CASE("pole-stripped form: equivalence with chi = H / prefactor, S vs R") {
  const LiouvilleParams lp = kLP;
  const SymmetricLaurent H({1.0, {0.2, 0.1}, {0.05, -0.02}});
  const ScalarFn Hf = [&](cplx z) { return H.eval(z); };
  const ChiFunction chi = ChiFunction::from_H(Hf, lp);
  const cplx pq = lp.p * lp.q;
  for (cplx u : {cplx{0.8, 0.2}, cplx{1.1, -0.3}, cplx{-0.6, 0.7}}) {
    const cplx pf = pole_prefactor(pq * u, lp) * pole_prefactor(u, lp);
    CHECK(rel(liouville_residual(chi, u, lp) * pf, liouville_H_residual(Hf, u, lp)) < 1e-10);
    CHECK(rel(liouville_S(u, lp), liouville_R(u, lp) * pf) < 1e-12);
    CHECK(rel(strip_poles(chi)(u), H.eval(u)) < 1e-15);
  }
  LiouvilleParams v1 = lp;
  v1.v = 1.0;
  CHECK(std::abs(liouville_S(1.0, v1)) < 1e-15);
  CHECK(rel(liouville_S({0.8, 0.2}, v1), liouville_R({0.8, 0.2}, v1) * pole_prefactor(pq * cplx{0.8, 0.2}, v1) *
                                             pole_prefactor({0.8, 0.2}, v1)) < 1e-12);
}

TEST_CASE("transfer symmetries: basis functions, random combination, N = 1") {
  const cplx q{0.15, 0.1};
  for (int N : {1, 2, 3, 4}) {
    const cplx w = std::exp(2.0 * pi * I / double(N));
    auto basis = [&](int k) { return ScalarFn([&, k](cplx u) { return std::pow(hq(std::pow(w, k) * u, q), N); }); };
    const cplx u{0.7, 0.3};
    for (int k = 0; k < N; ++k) {
      const ScalarFn b = basis(k);
      CHECK(std::abs(t_symmetry_check(b, u, q, N).shift) / std::abs(b(u)) < 1e-13);
      // u -> 1/u exchanges k and N-k; only symmetric combinations are invariant
      CHECK(rel(b(1.0 / u), std::pow(-u, -N) * basis((N - k) % N)(u)) < 1e-13);
    }
  }
  TransferPolynomial t{4, q, {{0.3, 0.1}, {-0.2, 0.4}, {1.1, 0.0}, {-0.2, 0.4}}};
  const ScalarFn tf = [&](cplx u) { return t.eval(u); };
  double worst = 0.0;
  for (int j = 0; j < 10; ++j) {
    const cplx u = std::polar(0.6 + 0.08 * j, 0.7 * j);
    const auto s = t_symmetry_check(tf, u, q, 4);
    worst = std::max({worst, std::abs(s.shift) / std::abs(tf(u)), std::abs(s.inverse) / std::abs(tf(u))});
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("t_decompose: round trip, independent count, singular basis") {
  const cplx q{0.2, 0.05};
  for (int N : {2, 3, 5}) {
    TransferPolynomial t{N, q, {}};
    for (int k = 0; k < N; ++k) t.t.push_back(cplx(0.3 + 0.1 * std::min(k, N - k), -0.05 * std::min(k, N - k)));
    const auto us = default_sample_points(N, q);
    std::vector<cplx> ts;
    for (cplx u : us) ts.push_back(t.eval(u));
    const Decomposition d = t_decompose(us, ts, q, N);
    CHECK(d.symmetry_deviation < 1e-10);
    for (int k = 0; k < N; ++k) CHECK(std::abs(d.poly.t[std::size_t(k)] - t.t[std::size_t(k)]) < 1e-10);
    CHECK(rel(d.poly.eval({0.77, 0.2}), t.eval({0.77, 0.2})) < 1e-10);
  }
  CHECK(TransferPolynomial{2, q, {}}.independent_count() == 2);
  CHECK(TransferPolynomial{5, q, {}}.independent_count() == 3);
  const std::vector<cplx> same{0.5, 0.5};
  CHECK_THROWS_AS(t_decompose(same, {1.0, 1.0}, q, 2), IllConditionedError);
}

TEST_CASE("Laplace suite: 50 seeded points") {
  const auto reps = laplace_suite(SuiteOptions{});
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].points.size() == 50);
  CHECK(reps[0].below(1e-12));
}
