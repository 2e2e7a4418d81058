#include "ellq/scan.hpp"

#include <cmath>
#include <exception>


namespace ellq {

namespace {

ScanResult summarize(std::vector<double> v) {
  ScanResult r;
  r.values = std::move(v);
  double s = 0.0;
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    // NaN counts as the worst possible residual
    const double x = std::isnan(r.values[i]) ? INFINITY : r.values[i];
    if (i == 0 || x > r.max) {
      r.max = x;
      r.argmax = i;
    }
    s += x;
  }
  if (!r.values.empty()) r.mean = s / double(r.values.size());
  return r;
}

}  // namespace

ScanResult scan_serial(std::size_t n, const PointFn& f) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(i);
  return summarize(std::move(v));
}

ScanResult scan_parallel(std::size_t n, const PointFn& f) {
  std::vector<double> v(n);
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < long(n); ++i) {
    try {
      v[i] = f(std::size_t(i));
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return summarize(std::move(v));
}

}  // namespace ellq
