#pragma once
// Shared scalar types, truncation/precision settings and the error hierarchy.

#include <complex>
#include <stdexcept>
#include <string>

namespace ellq {

using cplx = std::complex<double>;
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr cplx I{0.0, 1.0};

// Evaluators stop once the certified tail bound drops below tail_tol
// (relative to the running value), and throw at max_terms.
struct TruncationPolicy {
  int max_terms = 4000;
  double tail_tol = 1e-18;
};

// bits == 53 is native double; 64 long double; above that Boost cpp_complex.
struct PrecisionContext {
  int bits = 53;
  bool native() const { return bits <= 53; }
};

struct Context {
  TruncationPolicy policy;
  PrecisionContext precision;
};

class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& msg) : Error("domain", msg) {}
};

// u hit p^{-m} q^{-n} (or an analogous lattice point); m,n identify it
struct PoleError : Error {
  PoleError(int m_, int n_, const std::string& msg)
      : Error("pole", msg + " (m=" + std::to_string(m_) + ", n=" + std::to_string(n_) + ")"),
        m(m_), n(n_) {}
  int m, n;
};

struct ResonanceError : Error {
  ResonanceError(int i_, int j_)
      : Error("resonance", "resonant denominator 1 - p^" + std::to_string(i_) + " q^" +
                               std::to_string(j_) + " v^2 vanishes"),
        i(i_), j(j_) {}
  int i, j;
};

struct DegeneracyError : Error {
  explicit DegeneracyError(const std::string& msg) : Error("degeneracy", msg) {}
};

struct ConvergenceError : Error {
  ConvergenceError(const std::string& msg, double last)
      : Error("convergence", msg + " (last residual " + std::to_string(last) + ")"),
        last_residual(last) {}
  double last_residual;
};

struct ClassificationError : Error {
  explicit ClassificationError(const std::string& msg) : Error("classification", msg) {}
};

struct PairingError : Error {
  explicit PairingError(const std::string& msg) : Error("pairing", msg) {}
};

struct IllConditionedError : Error {
  explicit IllConditionedError(const std::string& msg) : Error("ill_conditioned", msg) {}
};

struct InvalidSolutionError : Error {
  explicit InvalidSolutionError(const std::string& msg) : Error("invalid_solution", msg) {}
};

struct SeedError : Error {
  explicit SeedError(const std::string& msg) : Error("seed_inconsistency", msg) {}
};

struct RegimeError : Error {
  explicit RegimeError(const std::string& msg) : Error("regime", msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("config", msg) {}
};

}  // namespace ellq
