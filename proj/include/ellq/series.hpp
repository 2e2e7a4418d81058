#pragma once
// Truncated series Σ c_{ijk} p^i q^j u^k with numeric coefficients, bucketed by
// total degree i+j (the ε-grading under p -> εp, q -> εq). Negative exponents
// are allowed; every bucket holds finitely many terms.

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "ellq/core.hpp"

namespace ellq {

class GradedSeries {
 public:
  using Bucket = std::map<std::pair<int, int>, cplx>;  // (i, k) -> c, j = d - i

  GradedSeries() = default;
  static GradedSeries one() { return monomial(0, 0, 0, 1.0); }
  static GradedSeries monomial(int i, int j, int k, cplx c);

  void add(int i, int j, int k, cplx c);
  void set(int i, int j, int k, cplx c);
  cplx get(int i, int j, int k) const;
  bool empty() const { return buckets_.empty(); }
  std::size_t size() const;

  int min_degree() const;  // throws on empty
  int max_degree() const;
  const std::map<int, Bucket>& buckets() const { return buckets_; }
  const Bucket* bucket(int d) const;

  // H(p^a q^b u)
  GradedSeries shifted(int a, int b) const;
  GradedSeries swapped() const;  // p <-> q
  GradedSeries only_degree(int d) const;
  GradedSeries truncated(int dmax) const;
  GradedSeries filtered(const std::function<bool(int, int, int)>& keep) const;
  GradedSeries scaled(cplx s) const;
  GradedSeries& operator+=(const GradedSeries& o);
  GradedSeries& operator-=(const GradedSeries& o);
  void prune(double tol);

  // product restricted to total degrees in [dmin, dmax]
  static GradedSeries mul(const GradedSeries& a, const GradedSeries& b, int dmin, int dmax);
  static GradedSeries mul(const GradedSeries& a, const GradedSeries& b, int dmax) {
    return mul(a, b, -1000000, dmax);
  }
  // integer power with the same degree cap
  static GradedSeries pow(const GradedSeries& a, int n, int dmax);

  cplx eval(cplx p, cplx q, cplx u) const;
  double max_abs() const;
  double max_abs_degree(int d) const;

  template <class F>
  void for_each(F f) const {
    for (const auto& [d, b] : buckets_)
      for (const auto& [ik, c] : b) f(ik.first, d - ik.first, ik.second, c);
  }

 private:
  std::map<int, Bucket> buckets_;
};

GradedSeries operator+(GradedSeries a, const GradedSeries& b);
GradedSeries operator-(GradedSeries a, const GradedSeries& b);

// (c p^a q^b u^k ; p, q)_∞ expanded to total degree dmax
GradedSeries poch2_series(cplx c, int a, int b, int k, int dmax);
// (c p^a q^b u^k ; p)_∞ ; use swapped() for the q version
GradedSeries poch1p_series(cplx c, int a, int b, int k, int dmax);
// 1/(c p^a q^b u^k ; p, q)_∞, requires a+b+|k|... monomial of positive degree
GradedSeries inv_poch2_series(cplx c, int a, int b, int k, int dmax);

}  // namespace ellq
