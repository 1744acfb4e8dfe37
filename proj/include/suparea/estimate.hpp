#pragma once

#include <complex>
#include <string_view>

namespace suparea {

enum class ErrorKind { statistical_stderr, quadrature_bound };

constexpr std::string_view to_string(ErrorKind k) {
  return k == ErrorKind::statistical_stderr ? "statistical_stderr" : "quadrature_bound";
}

/// A value together with a non-negative error figure. For Monte Carlo results
/// the error is one standard error; for deterministic numerics it is an
/// (estimated) absolute bound.
struct EstimateWithError {
  double value = 0.0;
  double error = 0.0;
  ErrorKind kind = ErrorKind::quadrature_bound;
};

struct ComplexEstimate {
  std::complex<double> value;
  double error = 0.0;
};

}  // namespace suparea
