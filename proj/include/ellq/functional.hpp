#pragma once
// TQ pair, discrete Liouville equation and its pole-stripped form,
// transfer-matrix symmetries and basis decomposition.

#include <functional>
#include <map>
#include <vector>

#include "ellq/modular.hpp"

namespace ellq {

// Σ_k c_k u^k (finite)
struct Laurent {
  std::map<int, cplx> c;
  cplx eval(cplx u) const;
};

// c_0 + Σ_{k=1..K} c_k (u^k + u^{-k})
class SymmetricLaurent {
 public:
  SymmetricLaurent() = default;
  explicit SymmetricLaurent(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(0.0);
  }
  int K() const { return int(c_.size()) - 1; }
  cplx coeff(int k) const { return (k >= 0 && k <= K()) ? c_[std::size_t(k)] : cplx(0.0); }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx eval(cplx u) const;
  SymmetricLaurent operator+(const SymmetricLaurent& o) const;
  // product truncated at K = max(K(), o.K()); truncation_dropped() reports lost mass
  SymmetricLaurent operator*(const SymmetricLaurent& o) const;
  Laurent scaled(cplx s) const;  // f(s u)
  Laurent to_laurent() const;
  double truncation_dropped() const { return dropped_; }

 private:
  std::vector<cplx> c_{cplx(0.0)};
  double dropped_ = 0.0;
};

struct LiouvilleParams {
  cplx v, p, q;
  int N = 1;
  cplx R0 = 1.0;
};

using ScalarFn = std::function<cplx(cplx)>;

// Π(u)^N = (pq/(uv), pq u/v; p,q)_∞^N
cplx pole_prefactor(cplx u, const LiouvilleParams& lp, const TruncationPolicy& pol = {});

// Q-eigenvalue χ(u): either an H evaluator with the pole prefactor divided out, or a bare evaluator
struct ChiFunction {
  ScalarFn H;    // set for form (a)
  ScalarFn raw;  // set for form (b)
  LiouvilleParams lp;
  TruncationPolicy pol;

  static ChiFunction from_H(ScalarFn H, const LiouvilleParams& lp, const TruncationPolicy& pol = {});
  static ChiFunction from_evaluator(ScalarFn f);
  cplx operator()(cplx u) const;
};

// form (a) only
ScalarFn strip_poles(const ChiFunction& chi);

cplx tq_residual_q(const ChiFunction& chi, const ScalarFn& t, cplx u, const LiouvilleParams& lp,
                   const TruncationPolicy& pol = {});
cplx tq_residual_p(const ChiFunction& chi, const ScalarFn& t, cplx u, const LiouvilleParams& lp,
                   const TruncationPolicy& pol = {});

// R(u) = R₀ (Γ(1/(uv))/Γ(v/u))^N
cplx liouville_R(cplx u, const LiouvilleParams& lp, const TruncationPolicy& pol = {});
// R(pqu)R(u) - v^{2N} R(pu)R(qu), relative to |R(pqu)R(u)|
double laplace_residual(cplx u, const LiouvilleParams& lp, const TruncationPolicy& pol = {});

cplx liouville_residual(const ChiFunction& chi, cplx u, const LiouvilleParams& lp,
                        const TruncationPolicy& pol = {});

// S(u) = R₀ (v/u, p²q² u/v, pq uv, pq/(uv); p,q)_∞^N
cplx liouville_S(cplx u, const LiouvilleParams& lp, const TruncationPolicy& pol = {});
cplx liouville_H_residual(const ScalarFn& H, cplx u, const LiouvilleParams& lp, const TruncationPolicy& pol = {});

struct TransferPolynomial {
  int N = 1;
  cplx q;
  std::vector<cplx> t;  // t_{q,k}, k = 0..N-1
  cplx eval(cplx u, const TruncationPolicy& pol = {}) const;
  double symmetry_deviation() const;  // max |t_{N-k} - t_k|
  int independent_count() const { return N / 2 + 1; }
};

struct SymmetryResidual {
  cplx shift;    // t(qu) - (-u)^{-N} t(u)
  cplx inverse;  // t(1/u) - (-u)^{-N} t(u)
};
SymmetryResidual t_symmetry_check(const ScalarFn& t, cplx u, cplx q, int N);

struct Decomposition {
  TransferPolynomial poly;  // symmetrized coefficients
  std::vector<cplx> raw;
  double symmetry_deviation = 0.0;
  double condition = 0.0;
};

// sample points r e^{2πi(j+1/3)/N}, r = |q|^{1/4}
std::vector<cplx> default_sample_points(int N, cplx q);
Decomposition t_decompose(const std::vector<cplx>& us, const std::vector<cplx>& ts, cplx q, int N,
                          const TruncationPolicy& pol = {});

}  // namespace ellq
