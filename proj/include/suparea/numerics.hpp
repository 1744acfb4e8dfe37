#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "suparea/errors.hpp"
#include "suparea/estimate.hpp"

namespace suparea::numerics {

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// ln Γ(x) for x > 0. Stirling series with Bernoulli corrections for x >= 15,
/// upward recurrence below that. Relative error below 1e-13 away from the
/// roots x = 1, 2 (which are returned exactly).
double log_gamma(double x);

/// Γ(x) for x > 0 via log_gamma.
double gamma_fn(double x);

/// Sum Σ_k Π(a_i)_k / (Π(b_j)_k k!) z^k, truncated once a term and its
/// successor are both below tol·|partial sum|. The error field carries the
/// magnitude of the last term plus a rounding allowance.
EstimateWithError hyp_pfq(std::span<const double> upper, std::span<const double> lower,
                          double z, double tol = 1e-17, std::size_t max_terms = 5000);

struct ExtendedSum {
  long double value = 0.0L;
  double error = 0.0;
};

/// hyp_pfq in long double throughout, for callers that combine several large
/// series whose sum is small (parameters and z must not be rounded to double).
ExtendedSum hyp_pfq_extended(std::span<const long double> upper,
                             std::span<const long double> lower, long double z,
                             double tol = 1e-17, std::size_t max_terms = 5000);

// ---------------------------------------------------------------------------
// Summation
// ---------------------------------------------------------------------------

/// Neumaier's variant of Kahan summation.
template <class T>
class BasicCompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_ = 0;
  T comp_ = 0;
};

using CompensatedSum = BasicCompensatedSum<double>;

template <class T>
class BasicComplexCompensatedSum {
 public:
  void add(std::complex<T> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<T> value() const { return {re_.value(), im_.value()}; }

 private:
  BasicCompensatedSum<T> re_, im_;
};

using ComplexCompensatedSum = BasicComplexCompensatedSum<double>;

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  /// Maximum number of interval bisections across all pieces.
  int max_refinements = 4000;
  /// Split point between the √x-mapped head and the 1/t²-mapped tail.
  double tail_cut = 1.0;

  void validate() const;
};

using RealFunction = std::function<double(double)>;

/// Globally adaptive Gauss–Kronrod (7/15) on [a, b]. Throws ConvergenceError
/// if the refinement budget runs out before the tolerance is met.
EstimateWithError integrate(const RealFunction& f, double a, double b,
                            const QuadratureConfig& cfg = {});

/// ∫_a^b f with an integrable x^(-1/2)-type singularity at a (x = a + u²).
EstimateWithError integrate_sqrt_endpoint(const RealFunction& f, double a, double b,
                                          const QuadratureConfig& cfg = {});

/// ∫_0^∞ f. The head (0, tail_cut] is mapped by x = u² to absorb x^(-1/2)
/// singularities, the tail by x = tail_cut / t², which turns x^(-3/2) decay
/// into a constant and exponential decay into a flat zero at t = 0.
EstimateWithError integrate_semi_infinite(const RealFunction& f,
                                          const QuadratureConfig& cfg = {});

// ---------------------------------------------------------------------------
// Streaming statistics
// ---------------------------------------------------------------------------

/// Welford accumulator with Chan's pairwise merge.
class RunningStats {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    sum_sq_dev_ += delta * (x - mean_);
  }

  void merge(const RunningStats& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double sum_sq_dev() const { return sum_sq_dev_; }
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const;
  double stderr_of_mean() const;

  EstimateWithError estimate() const {
    return {mean_, stderr_of_mean(), ErrorKind::statistical_stderr};
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double sum_sq_dev_ = 0.0;
};

}  // namespace suparea::numerics
