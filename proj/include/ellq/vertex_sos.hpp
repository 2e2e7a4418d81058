#pragma once
// Eight-vertex R-matrix, Baxter vectors, SOS weights, L-operators,
// transfer-matrix elements, Ising-type weight V and the Q-kernel.

#include <array>
#include <vector>

#include "ellq/modular.hpp"
#include "ellq/report.hpp"

namespace ellq {

using Vec2 = std::array<cplx, 2>;

inline cplx dot(const Vec2& row, const Vec2& col) { return row[0] * col[0] + row[1] * col[1]; }

// R^{j1 j2}_{i1 i2}; storage index ((j1*2+j2)*2+i1)*2+i2
struct RMatrix {
  std::array<cplx, 16> r{};
  cplx rho{1.0, 0.0};
  cplx operator()(int j1, int j2, int i1, int i2) const { return r[((j1 * 2 + j2) * 2 + i1) * 2 + i2]; }
  cplx& at(int j1, int j2, int i1, int i2) { return r[((j1 * 2 + j2) * 2 + i1) * 2 + i2]; }
};

RMatrix r_matrix(cplx x, cplx eta, cplx tau, cplx rho = 1.0, const TruncationPolicy& pol = {});

enum class VecKind { X, Xbar, Y, Ybar };

struct BaxterVector {
  VecKind kind;
  int eps;  // +1 / -1 ; X^{(-)} carries the upper sign of the display
  cplx a, x;
  Vec2 value;
};

BaxterVector baxter_x(cplx a, cplx x, int eps, const ModularData& md, const TruncationPolicy& pol = {});
BaxterVector baxter_xbar(cplx a, cplx x, int eps, const ModularData& md, const TruncationPolicy& pol = {});
BaxterVector baxter_y(cplx a, cplx x, int eps, const ModularData& md, const TruncationPolicy& pol = {});
BaxterVector baxter_ybar(cplx a, cplx x, int eps, const ModularData& md, const TruncationPolicy& pol = {});

// Heights must differ by ±η/2 along edges; any other pattern gives exact 0.
// The c-type weight with left = right = a+η/2 carries θ₁(-2a) in the denominator.
cplx sos_weight(cplx a_left, cplx a_top, cplx a_right, cplx a_bottom, cplx x, cplx xp,
                const ModularData& md, cplx rho_p = 1.0, const TruncationPolicy& pol = {});

// ϱ'/ϱ needed by the vertex-SOS duality: θ₂(0|τ)θ₄(0|2τ)/2
cplx duality_kappa(const ModularData& md, const TruncationPolicy& pol = {});

// max over the four height patterns a -> b -> c and all (α,β) of
// |Σ R X X - Σ_d W X X| / max|Σ R X X|
double vertex_sos_duality_residual(cplx x, cplx xp, cplx a, const ModularData& md, cplx rho = 1.0,
                                   const TruncationPolicy& pol = {});
// unnormalized maximum absolute residual (homogeneity checks)
double vertex_sos_duality_abs_residual(cplx x, cplx xp, cplx a, const ModularData& md, cplx rho = 1.0,
                                       const TruncationPolicy& pol = {});

double inversion_residual(cplx a, cplx x, const ModularData& md, bool y_type, const TruncationPolicy& pol = {});

cplx l_element(cplx a, cplx ap, int eps, int epsp, cplx x, cplx y, const ModularData& md,
               const TruncationPolicy& pol = {});
cplx l_prime_element(cplx a, cplx ap, int eps, int epsp, cplx x, cplx y, const ModularData& md,
                     const TruncationPolicy& pol = {});

struct HeightPath {
  std::vector<cplx> a;
  std::vector<int> eps;
  std::size_t size() const { return a.size(); }
  HeightPath shifted(cplx eta) const;  // a_k + ε_k η/2
};

// <path_out| T(x) |path_in>, path_out = path_in shifted by ε_k η/2
cplx transfer_element(const HeightPath& in, const HeightPath& out, cplx x, cplx y, const ModularData& md,
                      const TruncationPolicy& pol = {});
// <path_in| T'(x) |path_out>
cplx transfer_prime_element(const HeightPath& in, const HeightPath& out, cplx x, cplx y,
                            const ModularData& md, const TruncationPolicy& pol = {});

cplx ising_weight_V(cplx xarg, cplx a, cplx b, const ModularData& md, const TruncationPolicy& pol = {});

// relative residual of the intertwining relation at one x
double intertwining_residual(cplx x, cplx x1, cplx x2, cplx a, cplx bp, int eps, int epsp,
                             const ModularData& md, const TruncationPolicy& pol = {});

struct QKernelSpec {
  std::vector<cplx> a, b;
  cplx x, y;
};
cplx q_kernel(const QKernelSpec& spec, const ModularData& md, const TruncationPolicy& pol = {});

}  // namespace ellq
