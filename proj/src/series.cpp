#include "ellq/series.hpp"

#include <algorithm>
#include <cmath>

namespace ellq {

GradedSeries GradedSeries::monomial(int i, int j, int k, cplx c) {
  GradedSeries s;
  s.add(i, j, k, c);
  return s;
}

void GradedSeries::add(int i, int j, int k, cplx c) {
  if (c == cplx(0.0)) return;
  buckets_[i + j][{i, k}] += c;
}

void GradedSeries::set(int i, int j, int k, cplx c) {
  auto& b = buckets_[i + j];
  if (c == cplx(0.0)) {
    b.erase({i, k});
    if (b.empty()) buckets_.erase(i + j);
  } else {
    b[{i, k}] = c;
  }
}

cplx GradedSeries::get(int i, int j, int k) const {
  auto it = buckets_.find(i + j);
  if (it == buckets_.end()) return 0.0;
  auto jt = it->second.find({i, k});
  return jt == it->second.end() ? cplx(0.0) : jt->second;
}

std::size_t GradedSeries::size() const {
  std::size_t n = 0;
  for (const auto& [d, b] : buckets_) n += b.size();
  return n;
}

int GradedSeries::min_degree() const {
  if (buckets_.empty()) throw DomainError("min_degree of empty series");
  return buckets_.begin()->first;
}

int GradedSeries::max_degree() const {
  if (buckets_.empty()) throw DomainError("max_degree of empty series");
  return buckets_.rbegin()->first;
}

const GradedSeries::Bucket* GradedSeries::bucket(int d) const {
  auto it = buckets_.find(d);
  return it == buckets_.end() ? nullptr : &it->second;
}

GradedSeries GradedSeries::shifted(int a, int b) const {
  GradedSeries r;
  for_each([&](int i, int j, int k, cplx c) { r.add(i + a * k, j + b * k, k, c); });
  return r;
}

GradedSeries GradedSeries::swapped() const {
  GradedSeries r;
  for_each([&](int i, int j, int k, cplx c) { r.add(j, i, k, c); });
  return r;
}

GradedSeries GradedSeries::only_degree(int d) const {
  GradedSeries r;
  if (auto b = bucket(d)) r.buckets_[d] = *b;
  return r;
}

GradedSeries GradedSeries::truncated(int dmax) const {
  GradedSeries r;
  for (const auto& [d, b] : buckets_)
    if (d <= dmax) r.buckets_[d] = b;
  return r;
}

GradedSeries GradedSeries::filtered(const std::function<bool(int, int, int)>& keep) const {
  GradedSeries r;
  for_each([&](int i, int j, int k, cplx c) {
    if (keep(i, j, k)) r.add(i, j, k, c);
  });
  return r;
}

GradedSeries GradedSeries::scaled(cplx s) const {
  GradedSeries r;
  for_each([&](int i, int j, int k, cplx c) { r.add(i, j, k, s * c); });
  return r;
}

GradedSeries& GradedSeries::operator+=(const GradedSeries& o) {
  o.for_each([&](int i, int j, int k, cplx c) { add(i, j, k, c); });
  return *this;
}

GradedSeries& GradedSeries::operator-=(const GradedSeries& o) {
  o.for_each([&](int i, int j, int k, cplx c) { add(i, j, k, -c); });
  return *this;
}

GradedSeries operator+(GradedSeries a, const GradedSeries& b) { return a += b; }
GradedSeries operator-(GradedSeries a, const GradedSeries& b) { return a -= b; }

void GradedSeries::prune(double tol) {
  for (auto it = buckets_.begin(); it != buckets_.end();) {
    auto& b = it->second;
    for (auto jt = b.begin(); jt != b.end();) {
      if (std::abs(jt->second) <= tol)
        jt = b.erase(jt);
      else
        ++jt;
    }
    if (b.empty())
      it = buckets_.erase(it);
    else
      ++it;
  }
}

GradedSeries GradedSeries::mul(const GradedSeries& a, const GradedSeries& b, int dmin, int dmax) {
  GradedSeries r;
  if (a.empty() || b.empty()) return r;
  const int bmin = b.min_degree();
  for (const auto& [da, ba] : a.buckets_) {
    if (da + bmin > dmax) break;
    for (const auto& [db, bb] : b.buckets_) {
      const int d = da + db;
      if (d > dmax) break;
      if (d < dmin) continue;
      auto& out = r.buckets_[d];
      for (const auto& [ika, ca] : ba)
        for (const auto& [ikb, cb] : bb) out[{ika.first + ikb.first, ika.second + ikb.second}] += ca * cb;
    }
  }
  r.prune(0.0);
  return r;
}

GradedSeries GradedSeries::pow(const GradedSeries& a, int n, int dmax) {
  GradedSeries r = one();
  for (int t = 0; t < n; ++t) r = mul(r, a, dmax);
  return r;
}

cplx GradedSeries::eval(cplx p, cplx q, cplx u) const {
  cplx s = 0.0;
  for_each([&](int i, int j, int k, cplx c) { s += c * std::pow(p, i) * std::pow(q, j) * std::pow(u, k); });
  return s;
}

double GradedSeries::max_abs() const {
  double m = 0.0;
  for_each([&](int, int, int, cplx c) { m = std::max(m, std::abs(c)); });
  return m;
}

double GradedSeries::max_abs_degree(int d) const {
  double m = 0.0;
  if (auto b = bucket(d))
    for (const auto& [ik, c] : *b) m = std::max(m, std::abs(c));
  return m;
}

GradedSeries poch2_series(cplx c, int a, int b, int k, int dmax) {
  GradedSeries r = GradedSeries::one();
  for (int s = 0; a + b + s <= dmax; ++s) {
    for (int m = 0; m <= s; ++m) {
      GradedSeries f = GradedSeries::one();
      f.add(a + m, b + s - m, k, -c);
      r = GradedSeries::mul(r, f, dmax);
    }
  }
  return r;
}

GradedSeries poch1p_series(cplx c, int a, int b, int k, int dmax) {
  GradedSeries r = GradedSeries::one();
  for (int n = 0; a + n + b <= dmax; ++n) {
    GradedSeries f = GradedSeries::one();
    f.add(a + n, b, k, -c);
    r = GradedSeries::mul(r, f, dmax);
  }
  return r;
}

GradedSeries inv_poch2_series(cplx c, int a, int b, int k, int dmax) {
  if (a + b <= 0) throw DomainError("inv_poch2_series: monomial must have positive degree");
  GradedSeries r = GradedSeries::one();
  for (int s = 0; a + b + s <= dmax; ++s) {
    for (int m = 0; m <= s; ++m) {
      const int ia = a + m, jb = b + s - m;
      // 1/(1 - z) = Σ z^n
      GradedSeries g = GradedSeries::one();
      cplx cn = 1.0;
      for (int n = 1; n * (ia + jb) <= dmax; ++n) {
        cn *= c;
        g.add(n * ia, n * jb, n * k, cn);
      }
      r = GradedSeries::mul(r, g, dmax);
    }
  }
  return r;
}

}  // namespace ellq
