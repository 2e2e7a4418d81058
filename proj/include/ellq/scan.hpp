#pragma once
// Residual scans over index ranges. The OpenMP path and the serial reference
// must produce identical per-point values; tests compare them.

#include <cstddef>
#include <functional>
#include <vector>

namespace ellq {

struct ScanResult {
  std::vector<double> values;
  double max = 0.0;
  double mean = 0.0;
  std::size_t argmax = 0;
};

using PointFn = std::function<double(std::size_t)>;

ScanResult scan_serial(std::size_t n, const PointFn& f);
ScanResult scan_parallel(std::size_t n, const PointFn& f);
inline ScanResult scan(std::size_t n, const PointFn& f, bool parallel = true) {
  return parallel ? scan_parallel(n, f) : scan_serial(n, f);
}

}  // namespace ellq
