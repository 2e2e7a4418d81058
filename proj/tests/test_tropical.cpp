#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "ellq/tropical.hpp"

using namespace ellq;

namespace {

// u^m (1 - v/u)^N + v^N u^{-m} (1 - 1/(uv))^N, straight from the definition
cplx G_direct(int m, int N, cplx v, cplx u) {
  return std::pow(u, m) * std::pow(1.0 - v / u, N) + std::pow(v, N) * std::pow(u, -m) * std::pow(1.0 - 1.0 / (u * v), N);
}

long binom(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("G_m: expansion matches the definition, palindromic, u = 1 for odd N") {
  const cplx v{0.5, 0.1};
  for (int N = 1; N <= 6; ++N)
    for (int m = 0; m <= 3; ++m) {
      const Poly g = g_polynomial(m, N, v);
      REQUIRE(g.size() == std::size_t(2 * m + N + 1));
      for (cplx u : {cplx{0.7, 0.3}, cplx{-1.2, 0.4}})
        CHECK(std::abs(poly_eval(g, u) - std::pow(u, m + N) * G_direct(m, N, v, u)) <
              1e-12 * std::abs(std::pow(u, m + N)) * (1.0 + std::abs(G_direct(m, N, v, u))));
      // u^{2m+N} g(1/u) = ± v^N g(u) rescaled: compare normalized coefficient ratios
      const std::size_t d = g.size() - 1;
      const cplx s = g[d] / g[0];
      double pal = 0.0;
      for (std::size_t k = 0; k <= d; ++k) pal = std::max(pal, std::abs(g[d - k] - s * g[k]));
      CHECK(pal < 1e-12);
      CHECK(std::abs(std::abs(s) - 1.0) < 1e-12);
      if (N % 2 == 1) CHECK(std::abs(poly_eval(g, 1.0)) < 1e-13);
    }
}

TEST_CASE("roots: N = 2, m = 0 quadratic formula") {
  const cplx v = 0.5;
  const RootSet rs = find_root_pairs(g_polynomial(0, 2, v));
  REQUIRE(rs.pairs.size() == 1);
  CHECK_FALSE(rs.unit_root);
  // (1+v^2) u^2 - 4v u + (1+v^2)
  const cplx a = 1.0 + v * v, b = -4.0 * v;
  const cplx disc = std::sqrt(b * b - 4.0 * a * a);
  const cplx r1 = (-b + disc) / (2.0 * a), r2 = (-b - disc) / (2.0 * a);
  const cplx xi = rs.pairs[0].xi;
  CHECK(std::min(std::abs(xi - r1), std::abs(xi - r2)) < 1e-14);
  CHECK(xi.imag() > 0.0);  // |ξ| = 1 here; the tie picks Im > 0
  CHECK(std::abs(xi * rs.pairs[0].mate - 1.0) < 1e-14);
}

TEST_CASE("roots: pair counts, unit root, refined residual") {
  const cplx v{0.5, 0.1};
  for (int N = 1; N <= 6; ++N)
    for (int m = 0; m <= 3; ++m) {
      const RootSet rs = find_root_pairs(g_polynomial(m, N, v));
      CHECK(rs.pairs.size() == std::size_t(m + N / 2));
      CHECK(rs.unit_root == (N % 2 == 1));
      CHECK(rs.all_roots.size() == std::size_t(2 * m + N));
      CHECK(rs.max_abs_G < 1e-10);
      for (std::size_t k = 0; k < rs.pairs.size(); ++k) {
        CHECK(std::abs(rs.pairs[k].xi) >= 1.0 - 1e-12);
        CHECK(std::abs(rs.pairs[k].xi * rs.pairs[k].mate - 1.0) < 1e-8);
        if (k > 0) CHECK(std::abs(rs.pairs[k].xi) >= std::abs(rs.pairs[k - 1].xi) - 1e-12);
      }
    }
}

TEST_CASE("roots: degenerate and unpairable inputs raise") {
  // v = 1: (u-1)^N (u^{2m} + 1) has a multiple root at u = 1
  CHECK_THROWS_AS(find_root_pairs(g_polynomial(1, 2, 1.0)), DegeneracyError);
  // (u-2)(u-3) has no reciprocal partners
  CHECK_THROWS_AS(find_root_pairs(Poly{6.0, -5.0, 1.0}), PairingError);
}

TEST_CASE("states: binomial counts and canonical order") {
  const cplx v = 0.5;
  CHECK(enumerate_states(2, 0, v).size() == 1);
  CHECK(enumerate_states(2, 1, v).size() == 2);
  CHECK(enumerate_states(4, 2, v).size() == 6);
  for (int N = 1; N <= 6; ++N)
    for (int m = 0; m <= 3; ++m) {
      const auto st = enumerate_states(N, m, v);
      CHECK(long(st.size()) == binom(m + N / 2, m));
      for (std::size_t i = 1; i < st.size(); ++i) CHECK(st[i - 1].P_indices < st[i].P_indices);
      for (const auto& s : st) {
        CHECK(s.pairs_P.size() == std::size_t(m));
        CHECK(s.pairs_H.size() == std::size_t(N / 2));
        CHECK(s.unit_root == (N % 2 == 1));
      }
    }
}

TEST_CASE("states: normalized P and H forms, reconstruction of G_m") {
  const cplx v{0.5, 0.1};
  for (const auto& s : enumerate_states(4, 2, v)) {
    const auto P = s.P_laurent();
    REQUIRE(P.size() == 5);
    CHECK(std::abs(P.front() - 1.0) < 1e-12);
    CHECK(std::abs(P.back() - 1.0) < 1e-12);
    const auto H = s.H0_coeffs();
    REQUIRE(H.size() == 5);
    CHECK(H[0] == cplx(1.0));
    // P(u)·H(u) ∝ G_m(u)
    const cplx u1{0.8, 0.3}, u2{-1.1, 0.5};
    auto eval = [&](cplx u) {
      cplx p = 0.0, h = 0.0;
      for (int k = -2; k <= 2; ++k) p += P[std::size_t(k + 2)] * std::pow(u, k);
      for (int k = 0; k <= 4; ++k) h += H[std::size_t(k)] * std::pow(u, -k);
      return p * h / G_direct(2, 4, v, u);
    };
    CHECK(std::abs(eval(u1) / eval(u2) - 1.0) < 1e-10);
  }
}

TEST_CASE("tropical t: m = 0 closed form, exact division, TQ identity") {
  const cplx v{0.5, 0.1};
  {
    const auto st = enumerate_states(3, 0, v);
    const Poly t = tropical_t(st[0]);
    const cplx u{0.6, -0.4};
    CHECK(std::abs(poly_eval(t, u) - (std::pow(1.0 - u * v, 3) + std::pow(v - u, 3))) < 1e-13);
  }
  for (const auto& s : enumerate_states(2, 1, v))
    for (cplx u : {cplx{0.3, 0.2}, cplx{1.3, -0.1}}) CHECK(std::abs(tropical_tq_residual(s, u)) < 1e-10);

  // the identity (-u)^N G_m(u) = (1-uv)^N u^{-m} + (v-u)^N u^m at 5 points
  const int N = 3, m = 2;
  for (int k = 0; k < 5; ++k) {
    const cplx u = std::polar(0.5 + 0.25 * k, 1.1 * k);
    const cplx lhs = std::pow(-u, N) * G_direct(m, N, v, u);
    const cplx rhs = std::pow(1.0 - u * v, N) * std::pow(u, -m) + std::pow(v - u, N) * std::pow(u, m);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("tropical t: a non-partition divisor is rejected") {
  auto st = enumerate_states(2, 1, 0.5);
  SpectralState bad = st[0];
  bad.pairs_P[0].xi *= 1.1;
  bad.pairs_P[0].mate = 1.0 / bad.pairs_P[0].xi;
  CHECK_THROWS_AS(tropical_t(bad), ClassificationError);
}

TEST_CASE("catalog JSON: counts and keys") {
  const cplx v = 0.5;
  const auto st = enumerate_states(2, 1, v);
  const json j = state_catalog_json(2, 1, v, st, find_root_pairs(g_polynomial(1, 2, v)));
  CHECK(j["states"].size() == 2);
  CHECK(j["pairs"].size() == 2);
  CHECK(j["N"] == 2);
}
