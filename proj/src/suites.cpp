#include "ellq/suites.hpp"

#include <algorithm>
#include <array>
#include <random>

#include "ellq/functional.hpp"
#include "ellq/modular.hpp"
#include "ellq/multiprecision.hpp"
#include "ellq/scan.hpp"
#include "ellq/vertex_sos.hpp"

namespace ellq {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : g_(seed) {}
  double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(g_); }
  int sign() { return uni(0.0, 1.0) < 0.5 ? -1 : 1; }
  // nome with |z| in [0.05, rmax] and a random phase
  cplx nome(double rmax) { return std::polar(uni(0.05, rmax), uni(-pi, pi)); }
  cplx box(double re, double im) { return {uni(-re, re), uni(-im, im)}; }

 private:
  std::mt19937_64 g_;
};

template <class C>
double rel(const C& a, const C& b) {
  using std::abs;
  const auto s = std::max({abs(a), abs(b), real_t<C>(1e-300)});
  return static_cast<double>(abs(a - b) / s);
}

template <class C>
C lift(cplx z) {
  if constexpr (std::is_same_v<C, cplx>)
    return z;
  else
    return to_mp<C>(z);
}

struct EPoint {
  cplx x, tau, eta;
  cplx xs;  // for the log Γ series, pq < |u| < 1
};

constexpr std::size_t kElliptic = 8;
const std::array<const char*, kElliptic> kEllipticNames = {
    "theta1_shift_1",    "theta1_shift_tau", "theta4_shift_1", "gamma_difference",
    "gamma_reflection", "theta1_from_h",    "phi_shift_ratio", "log_gamma_series"};

template <class C>
std::array<double, kElliptic> elliptic_point(const EPoint& e, const TruncationPolicy& pol) {
  using std::exp;
  const C i = detail::imag_unit<C>();
  const auto pr = detail::pi_r<C>();
  const C one(1);
  const C x = lift<C>(e.x), tau = lift<C>(e.tau), eta = lift<C>(e.eta), xs = lift<C>(e.xs);
  const C two_pi_i = C(2) * pr * i;
  const C u = exp(two_pi_i * x), q = exp(two_pi_i * tau), p = exp(two_pi_i * eta);

  std::array<double, kElliptic> r{};
  const C t1 = theta1<C>(x, tau, pol);
  r[0] = rel<C>(theta1<C>(x + one, tau, pol), -t1);
  r[1] = rel<C>(theta1<C>(x + tau, tau, pol), -exp(-pr * i * tau - two_pi_i * x) * t1);
  r[2] = rel<C>(theta4<C>(x + one, tau, pol), theta4<C>(x, tau, pol));
  const C hu = h<C>(u, q, pol);
  r[3] = rel<C>(ell_gamma<C>(p * u, p, q, pol) / ell_gamma<C>(u, p, q, pol), hu);
  r[4] = rel<C>(ell_gamma<C>(u, p, q, pol) * ell_gamma<C>(p * q / u, p, q, pol), one);
  const C recon = i * exp(pr * i * tau / C(4)) * exp(-pr * i * x) * hu * qpoch1<C>(q, q, pol);
  r[5] = rel<C>(recon, t1);
  const C half = eta / C(2);
  r[6] = rel<C>(phi<C>(x - half, tau, eta, pol) / phi<C>(x + half, tau, eta, pol),
                h<C>(exp(pr * i * tau) * u, q, pol));
  const C us = exp(two_pi_i * xs);
  r[7] = rel<C>(exp(log_ell_gamma_series<C>(us, p, q, pol)), ell_gamma<C>(us, p, q, pol));
  return r;
}

std::vector<ResidualReport> make_reports(const std::vector<std::string>& names, const Context& ctx) {
  std::vector<ResidualReport> out(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    out[k].relation = names[k];
    out[k].policy = ctx.policy;
    out[k].precision = ctx.precision;
  }
  return out;
}

template <std::size_t K>
void fill(std::vector<ResidualReport>& reps, const std::vector<json>& params,
          const std::vector<std::array<double, K>>& vals) {
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (std::size_t k = 0; k < K; ++k) reps[k].add(params[i], vals[i][k]);
  for (auto& r : reps) r.finalize();
}

// a failed evaluation (pole, non-convergence) is an infinite residual, not a crash
template <std::size_t K, class F>
std::vector<std::array<double, K>> run_points(std::size_t n, bool parallel, F f) {
  std::vector<std::array<double, K>> vals(n);
  scan(n,
       [&](std::size_t i) {
         try {
           vals[i] = f(i);
         } catch (const Error&) {
           vals[i].fill(std::numeric_limits<double>::infinity());
         }
         return *std::max_element(vals[i].begin(), vals[i].end());
       },
       parallel);
  return vals;
}

}  // namespace

std::vector<ResidualReport> elliptic_suite(const SuiteOptions& opt) {
  const std::size_t n = opt.points > 0 ? std::size_t(opt.points) : 100;
  Draw d(opt.seed);
  std::vector<EPoint> pts(n);
  std::vector<json> params(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx q = d.nome(opt.max_nome), p = d.nome(opt.max_nome);
    EPoint& e = pts[i];
    e.tau = log_mult(q);
    e.eta = log_mult(p);
    e.x = d.box(0.5, 0.1);
    const double t = d.uni(0.2, 0.8);
    e.xs = cplx(d.uni(-0.5, 0.5), -t * std::log(std::abs(p * q)) / (2.0 * pi));
    params[i] = {{"x", cjson(e.x)}, {"tau", cjson(e.tau)}, {"eta", cjson(e.eta)}, {"x_series", cjson(e.xs)}};
  }

  TruncationPolicy pol = opt.ctx.policy;
  const int bits = opt.ctx.precision.bits;
  if (bits > 53) pol.tail_tol = std::min(pol.tail_tol, std::ldexp(1.0, -bits - 4));
  auto point = [&](std::size_t i) -> std::array<double, kElliptic> {
    if (bits <= 53) return elliptic_point<cplx>(pts[i], pol);
    if (bits <= 64) return elliptic_point<std::complex<long double>>(pts[i], pol);
    if (bits <= 166) return elliptic_point<mp_complex50>(pts[i], pol);
    return elliptic_point<mp_complex100>(pts[i], pol);
  };
  const auto vals = run_points<kElliptic>(n, opt.parallel, point);

  Context ctx = opt.ctx;
  ctx.policy = pol;
  auto reps = make_reports({kEllipticNames.begin(), kEllipticNames.end()}, ctx);
  fill(reps, params, vals);
  return reps;
}

std::vector<ResidualReport> vertex_sos_suite(const SuiteOptions& opt) {
  const std::size_t n = opt.points > 0 ? std::size_t(opt.points) : 20;
  const TruncationPolicy& pol = opt.ctx.policy;

  struct VPoint {
    ModularData md;
    cplx x, xp, x1, x2, a, bp, y;
    std::array<HeightPath, 3> paths;
  };
  Draw d(opt.seed);
  std::vector<VPoint> pts(n);
  std::vector<json> params(n);
  for (std::size_t i = 0; i < n; ++i) {
    VPoint& v = pts[i];
    v.md = ModularData::from_multiplicative(1.0, 1.0, d.nome(opt.max_nome), d.nome(opt.max_nome));
    v.x = d.box(0.5, 0.1);
    v.xp = d.box(0.5, 0.1);
    v.x1 = d.box(0.5, 0.1);
    v.x2 = d.box(0.5, 0.1);
    v.a = d.box(0.4, 0.1);
    v.bp = d.box(0.4, 0.1);
    v.y = d.box(0.5, 0.1);
    for (int N = 1; N <= 3; ++N) {
      HeightPath& hp = v.paths[std::size_t(N - 1)];
      for (int k = 0; k < N; ++k) {
        hp.a.push_back(d.box(0.4, 0.1));
        hp.eps.push_back(d.sign());
      }
    }
    params[i] = {{"tau", cjson(v.md.tau)}, {"eta", cjson(v.md.eta)}, {"x", cjson(v.x)},
                 {"x_prime", cjson(v.xp)}, {"a", cjson(v.a)}, {"b_prime", cjson(v.bp)}};
  }

  constexpr std::size_t K = 7;
  auto point = [&](std::size_t i) {
    const VPoint& v = pts[i];
    std::array<double, K> r{};
    r[0] = inversion_residual(v.a, v.x, v.md, false, pol);
    r[1] = inversion_residual(v.a, v.x, v.md, true, pol);
    r[2] = vertex_sos_duality_residual(v.x, v.xp, v.a, v.md, 1.0, pol);
    double w = 0.0;
    for (int e : {1, -1})
      for (int ep : {1, -1}) w = std::max(w, intertwining_residual(v.x, v.x1, v.x2, v.a, v.bp, e, ep, v.md, pol));
    r[3] = w;
    for (std::size_t k = 0; k < 3; ++k) {
      const HeightPath& in = v.paths[k];
      const HeightPath out = in.shifted(v.md.eta);
      r[4 + k] = std::abs(transfer_prime_element(in, out, v.x, v.y, v.md, pol) -
                          transfer_element(in, out, -v.x, v.y, v.md, pol)) /
                 std::max(std::abs(transfer_element(in, out, -v.x, v.y, v.md, pol)), 1e-300);
    }
    return r;
  };
  const auto vals = run_points<K>(n, opt.parallel, point);
  auto reps = make_reports({"inversion_X", "inversion_Y", "vertex_sos_duality", "intertwining",
                            "transfer_prime_N1", "transfer_prime_N2", "transfer_prime_N3"},
                           opt.ctx);
  fill(reps, params, vals);
  return reps;
}

std::vector<ResidualReport> laplace_suite(const SuiteOptions& opt) {
  const std::size_t n = opt.points > 0 ? std::size_t(opt.points) : 50;
  Draw d(opt.seed);
  std::vector<std::pair<cplx, LiouvilleParams>> pts(n);
  std::vector<json> params(n);
  for (std::size_t i = 0; i < n; ++i) {
    LiouvilleParams lp;
    lp.p = d.nome(opt.max_nome);
    lp.q = d.nome(opt.max_nome);
    lp.v = std::polar(d.uni(0.5, 1.5), d.uni(-pi, pi));
    lp.N = int(d.uni(1.0, 5.0));
    const cplx u = std::polar(d.uni(0.5, 1.5), d.uni(-pi, pi));
    pts[i] = {u, lp};
    params[i] = {{"u", cjson(u)}, {"v", cjson(lp.v)}, {"p", cjson(lp.p)}, {"q", cjson(lp.q)}, {"N", lp.N}};
  }
  const auto vals = run_points<1>(n, opt.parallel, [&](std::size_t i) {
    return std::array<double, 1>{laplace_residual(pts[i].first, pts[i].second, opt.ctx.policy)};
  });
  auto reps = make_reports({"discrete_laplace"}, opt.ctx);
  fill(reps, params, vals);
  return reps;
}

}  // namespace ellq
