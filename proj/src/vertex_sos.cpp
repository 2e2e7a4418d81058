#include "ellq/vertex_sos.hpp"

#include <algorithm>
#include <cmath>

namespace ellq {

namespace {

// θ₁(z|τ) vanishes on z = m + nτ
void check_theta1_zero(cplx z, cplx tau, cplx val, const char* who) {
  if (std::abs(val) > 1e-13) return;
  const int n = int(std::lround(z.imag() / tau.imag()));
  const int m = int(std::lround((z - double(n) * tau).real()));
  throw PoleError(m, n, std::string(who) + ": theta1(2a|tau) = 0");
}

bool same(cplx a, cplx b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b)); }

}  // namespace

RMatrix r_matrix(cplx x, cplx eta, cplx tau, cplx rho, const TruncationPolicy& pol) {
  const cplx t2 = 2.0 * tau;
  const cplx a1 = th1(x + eta, t2, pol), a4 = th4(x + eta, t2, pol);
  const cplx x1 = th1(x, t2, pol), x4 = th4(x, t2, pol);
  const cplx e1 = th1(eta, t2, pol), e4 = th4(eta, t2, pol);
  RMatrix R;
  R.rho = rho;
  const cplx wa = rho * a1 * x4 * e4;
  const cplx wb = rho * a4 * x1 * e4;
  const cplx wc = rho * a4 * x4 * e1;
  const cplx wd = rho * a1 * x1 * e1;
  R.at(0, 0, 0, 0) = R.at(1, 1, 1, 1) = wa;
  R.at(0, 1, 0, 1) = R.at(1, 0, 1, 0) = wb;
  R.at(0, 1, 1, 0) = R.at(1, 0, 0, 1) = wc;
  R.at(0, 0, 1, 1) = R.at(1, 1, 0, 0) = wd;
  return R;
}

BaxterVector baxter_x(cplx a, cplx x, int eps, const ModularData& md, const TruncationPolicy& pol) {
  const cplx z = x - 2.0 * double(eps) * a;
  const cplx t2 = 2.0 * md.tau;
  return {VecKind::X, eps, a, x, {th1(z, t2, pol), th4(z, t2, pol)}};
}

BaxterVector baxter_xbar(cplx a, cplx x, int eps, const ModularData& md, const TruncationPolicy& pol) {
  const cplx den = th1(2.0 * a, md.tau, pol);
  check_theta1_zero(2.0 * a, md.tau, den, "baxter_xbar");
  const cplx z = x + 2.0 * double(eps) * a;
  const cplx t2 = 2.0 * md.tau;
  const double e = double(eps);
  return {VecKind::Xbar, eps, a, x, {-e * th4(z, t2, pol) / den, e * th1(z, t2, pol) / den}};
}

BaxterVector baxter_y(cplx a, cplx x, int eps, const ModularData& md, const TruncationPolicy& pol) {
  const Vec2 v = baxter_x(a, -x, eps, md, pol).value;
  return {VecKind::Y, eps, a, x, {v[1], -v[0]}};
}

BaxterVector baxter_ybar(cplx a, cplx x, int eps, const ModularData& md, const TruncationPolicy& pol) {
  const Vec2 r = baxter_xbar(a, -x, eps, md, pol).value;
  return {VecKind::Ybar, eps, a, x, {r[1], -r[0]}};
}

cplx sos_weight(cplx l, cplx t, cplx r, cplx b, cplx x, cplx xp, const ModularData& md, cplx rho_p,
                const TruncationPolicy& pol) {
  const cplx hh = md.eta / 2.0;
  const cplx z = x - xp;
  const cplx tau = md.tau;
  if (same(l, r)) {
    if ((same(b, l - hh) && same(t, l + hh)) || (same(b, l + hh) && same(t, l - hh)))
      return rho_p * th1(z + md.eta, tau, pol);
  }
  if (!same(b, t)) return 0.0;
  const cplx a = b;
  const bool l_up = same(l, a + hh), l_dn = same(l, a - hh);
  const bool r_up = same(r, a + hh), r_dn = same(r, a - hh);
  if (!(l_up || l_dn) || !(r_up || r_dn)) return 0.0;
  const cplx den = th1(2.0 * a, tau, pol);
  check_theta1_zero(2.0 * a, tau, den, "sos_weight");
  if (l_dn && r_up) return rho_p * th1(z, tau, pol) * th1(2.0 * a + md.eta, tau, pol) / den;
  if (l_up && r_dn) return rho_p * th1(z, tau, pol) * th1(2.0 * a - md.eta, tau, pol) / den;
  if (l_up && r_up) return -rho_p * th1(md.eta, tau, pol) * th1(z - 2.0 * a, tau, pol) / den;
  return rho_p * th1(md.eta, tau, pol) * th1(z + 2.0 * a, tau, pol) / den;
}

cplx duality_kappa(const ModularData& md, const TruncationPolicy& pol) {
  return th2(0.0, md.tau, pol) * th4(0.0, 2.0 * md.tau, pol) / 2.0;
}

namespace {

// returns {max |L-R|, max |L|}
std::pair<double, double> duality_parts(cplx x, cplx xp, cplx a0, const ModularData& md, cplx rho,
                                        const TruncationPolicy& pol) {
  const cplx hh = md.eta / 2.0;
  const RMatrix R = r_matrix(x - xp, md.eta, md.tau, rho, pol);
  const cplx rho_p = duality_kappa(md, pol) * rho;
  double worst = 0.0, scale = 0.0;
  for (int s1 : {1, -1}) {
    for (int s2 : {1, -1}) {
      const cplx a = a0, b = a + double(s1) * hh, c = b + double(s2) * hh;
      const Vec2 vx = baxter_x(a, x, s1, md, pol).value;
      const Vec2 vxp = baxter_x(b, xp, s2, md, pol).value;
      for (int al = 0; al < 2; ++al) {
        for (int be = 0; be < 2; ++be) {
          cplx L = 0.0;
          for (int j1 = 0; j1 < 2; ++j1)
            for (int j2 = 0; j2 < 2; ++j2) L += R(j1, j2, al, be) * vx[j1] * vxp[j2];
          cplx Rs = 0.0;
          for (int sd : {1, -1}) {
            const cplx d = a + double(sd) * hh;
            const cplx step = (c - d) / hh;
            if (std::abs(std::abs(step) - 1.0) > 1e-9) continue;
            const int sc = step.real() > 0 ? 1 : -1;
            Rs += sos_weight(d, c, b, a, x, xp, md, rho_p, pol) * baxter_x(a, xp, sd, md, pol).value[be] *
                  baxter_x(d, x, sc, md, pol).value[al];
          }
          worst = std::max(worst, std::abs(L - Rs));
          scale = std::max(scale, std::abs(L));
        }
      }
    }
  }
  return {worst, scale};
}

}  // namespace

double vertex_sos_duality_residual(cplx x, cplx xp, cplx a, const ModularData& md, cplx rho,
                                   const TruncationPolicy& pol) {
  auto [w, s] = duality_parts(x, xp, a, md, rho, pol);
  return s > 0 ? w / s : w;
}

double vertex_sos_duality_abs_residual(cplx x, cplx xp, cplx a, const ModularData& md, cplx rho,
                                       const TruncationPolicy& pol) {
  return duality_parts(x, xp, a, md, rho, pol).first;
}

double inversion_residual(cplx a, cplx x, const ModularData& md, bool y_type, const TruncationPolicy& pol) {
  const cplx t2v = th2(x, md.tau, pol);
  double worst = 0.0;
  for (int e : {1, -1}) {
    for (int e2 : {1, -1}) {
      const Vec2 row = y_type ? baxter_ybar(a, x, e, md, pol).value : baxter_xbar(a, x, e, md, pol).value;
      const Vec2 col = y_type ? baxter_y(a, x, e2, md, pol).value : baxter_x(a, x, e2, md, pol).value;
      const cplx expect = e == e2 ? t2v : cplx(0.0);
      worst = std::max(worst, std::abs(dot(row, col) - expect) / std::max(1.0, std::abs(t2v)));
    }
  }
  return worst;
}

cplx l_element(cplx a, cplx ap, int eps, int epsp, cplx x, cplx y, const ModularData& md,
               const TruncationPolicy& pol) {
  const double e = eps, ep = epsp;
  const cplx den = th1(2.0 * e * a, md.tau, pol);
  check_theta1_zero(2.0 * e * a, md.tau, den, "l_element");
  return th2(x + e * a - ep * ap, md.tau, pol) * th1(y + e * a + ep * ap, md.tau, pol) / den;
}

cplx l_prime_element(cplx a, cplx ap, int eps, int epsp, cplx x, cplx y, const ModularData& md,
                     const TruncationPolicy& pol) {
  const double e = eps, ep = epsp;
  const cplx den = th1(2.0 * e * a, md.tau, pol);
  check_theta1_zero(2.0 * e * a, md.tau, den, "l_prime_element");
  return th2(x - e * a + ep * ap, md.tau, pol) * th1(y + e * a + ep * ap, md.tau, pol) / den;
}

HeightPath HeightPath::shifted(cplx eta) const {
  HeightPath out = *this;
  for (std::size_t k = 0; k < a.size(); ++k) out.a[k] = a[k] + double(eps[k]) * eta / 2.0;
  return out;
}

namespace {

void check_paths(const HeightPath& in, const HeightPath& out, const ModularData& md) {
  if (in.a.empty() || in.a.size() != in.eps.size() || out.a.size() != in.a.size())
    throw DomainError("transfer_element: malformed height path");
  const HeightPath want = in.shifted(md.eta);
  for (std::size_t k = 0; k < in.size(); ++k)
    if (!same(want.a[k], out.a[k])) throw DomainError("transfer_element: path_out is not path_in + eps*eta/2");
}

template <class F>
cplx path_product(const HeightPath& in, F elem) {
  const std::size_t N = in.size();
  cplx prod = 1.0;
  for (std::size_t k = 0; k < N; ++k) {
    const std::size_t k1 = (k + 1) % N;
    try {
      prod *= elem(in.a[k], in.a[k1], in.eps[k], in.eps[k1]);
    } catch (const PoleError& e) {
      throw PoleError(e.m, e.n, "transfer element factor k=" + std::to_string(k + 1));
    }
  }
  return prod;
}

}  // namespace

cplx transfer_element(const HeightPath& in, const HeightPath& out, cplx x, cplx y, const ModularData& md,
                      const TruncationPolicy& pol) {
  check_paths(in, out, md);
  return path_product(in, [&](cplx a, cplx a1, int e, int e1) { return l_element(a, a1, e, e1, x, y, md, pol); });
}

cplx transfer_prime_element(const HeightPath& in, const HeightPath& out, cplx x, cplx y,
                            const ModularData& md, const TruncationPolicy& pol) {
  check_paths(in, out, md);
  return path_product(in,
                      [&](cplx a, cplx a1, int e, int e1) { return l_prime_element(a, a1, e, e1, x, y, md, pol); });
}

cplx ising_weight_V(cplx xarg, cplx a, cplx b, const ModularData& md, const TruncationPolicy& pol) {
  const cplx h2 = xarg / 2.0;
  const cplx num = phi_md(a - b + h2, md, pol) * phi_md(a + b + h2, md, pol);
  const cplx den = phi_md(a - b - h2, md, pol) * phi_md(a + b - h2, md, pol);
  if (den == cplx(0.0)) throw PoleError(0, 0, "ising_weight_V: zero denominator");
  return num / den;
}

double intertwining_residual(cplx x, cplx x1, cplx x2, cplx a, cplx bp, int eps, int epsp,
                             const ModularData& md, const TruncationPolicy& pol) {
  const cplx hh = md.eta / 2.0;
  const cplx w = x2 - x1;
  const cplx L = ising_weight_V(w, a + double(eps) * hh, bp, md, pol) *
                 dot(baxter_xbar(a, x - x1, eps, md, pol).value, baxter_y(bp, x - x2, epsp, md, pol).value);
  const cplx R = dot(baxter_xbar(a, x - x2, eps, md, pol).value, baxter_y(bp, x - x1, epsp, md, pol).value) *
                 ising_weight_V(w, a, bp + double(epsp) * hh, md, pol);
  const double s = std::max({std::abs(L), std::abs(R), 1e-300});
  return std::abs(L - R) / s;
}

cplx q_kernel(const QKernelSpec& spec, const ModularData& md, const TruncationPolicy& pol) {
  const std::size_t N = spec.a.size();
  if (N == 0 || spec.b.size() != N) throw DomainError("q_kernel: heights a, b must have equal nonzero length");
  cplx prod = 1.0;
  for (std::size_t k = 0; k < N; ++k) {
    const std::size_t k1 = (k + 1) % N;
    try {
      prod *= ising_weight_V(spec.y - spec.x, spec.a[k], spec.b[k], md, pol) *
              ising_weight_V(spec.y + spec.x, spec.b[k], spec.a[k1], md, pol);
    } catch (const PoleError& e) {
      throw PoleError(e.m, e.n, "q_kernel factor k=" + std::to_string(k + 1));
    }
  }
  return prod;
}

}  // namespace ellq
