#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "suparea/analytic.hpp"
#include "suparea/estimate.hpp"
#include "suparea/numerics.hpp"
#include "suparea/parallel.hpp"
#include "suparea/random.hpp"

// Monte Carlo for A(T) = ∫_0^T S(t) dt.
//
// Path engine: Gaussian increments on an n-step grid with a running maximum.
// Excursion engine: the area up to an exponential time T₁ ~ Exp(λ), built from
// the Poisson process of (local time, length) excursion marks. Unmarked
// excursions before the first mark contribute Σ τℓ (A′); the marked one
// contributes ζ times the offset of T₁ from its left endpoint (A″).
namespace suparea::simulate {

using numerics::RandomSource;
using numerics::RandomStream;
using parallel::ExecutionPolicy;

enum class Scheme { left_rectangle, trapezoid };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);

struct PathConfig {
  double horizon = 1.0;
  std::int64_t steps = 1000;
  Scheme scheme = Scheme::trapezoid;
  std::uint64_t replications = 100000;
  /// Replace each step's endpoint maximum by an exact draw of the Brownian
  /// bridge maximum over the step. Removes the O(√Δt) bias of the grid maximum.
  bool bridge_maximum = false;

  void validate() const;
  nlohmann::json to_json() const;
};

struct McReport {
  EstimateWithError estimate;
  std::uint64_t replications = 0;
  std::uint64_t seed = 0;
  nlohmann::json config;
};

/// β = −ζ(1/2)/√(2π) ≈ 0.5826: the grid maximum of a Brownian path falls short
/// of the true supremum by β√Δt on average.
inline constexpr double kGridMaximumBias = 0.5825971579390106;

/// Leading-order deficit E A(T) − E Â(T) of the grid scheme without bridge
/// correction: β √(T/n) · T.
double path_mean_bias(const PathConfig& cfg);

/// Leading-order deficit of E Â(T)²: 2 E A(T) · β √(T/n) · T.
double path_second_moment_bias(const PathConfig& cfg);

/// One sample of Â(T). S₀ = 0, S_i = max(S_{i−1}, B_i) (or the bridge maximum
/// over step i). `sup_trace`, when non-empty, receives S₀..S_n and must have
/// size steps + 1.
template <RandomSource R>
double simulate_area_path(R& rng, const PathConfig& cfg, std::span<double> sup_trace = {}) {
  const auto n = cfg.steps;
  const double dt = cfg.horizon / static_cast<double>(n);
  const double sd = std::sqrt(dt);
  const bool trace = !sup_trace.empty();
  if (trace && sup_trace.size() != static_cast<std::size_t>(n + 1))
    throw DomainError("simulate_area_path: sup_trace must have steps + 1 entries");
  double b = 0.0;
  double s = 0.0;
  double sum = 0.0;
  if (trace) sup_trace[0] = 0.0;
  if (cfg.scheme == Scheme::left_rectangle) {
    for (std::int64_t i = 1; i <= n; ++i) {
      sum += s;
      const double a = b;
      b += sd * rng.normal();
      double m = b;
      if (cfg.bridge_maximum) {
        const double d = b - a;
        m = 0.5 * (a + b + std::sqrt(d * d - 2.0 * dt * std::log(rng.uniform_open())));
      }
      s = std::max(s, m);
      if (trace) sup_trace[i] = s;
    }
    return sum * dt;
  }
  for (std::int64_t i = 1; i <= n; ++i) {
    const double prev = s;
    const double a = b;
    b += sd * rng.normal();
    double m = b;
    if (cfg.bridge_maximum) {
      const double d = b - a;
      m = 0.5 * (a + b + std::sqrt(d * d - 2.0 * dt * std::log(rng.uniform_open())));
    }
    s = std::max(s, m);
    sum += 0.5 * (prev + s);
    if (trace) sup_trace[i] = s;
  }
  return sum * dt;
}

/// Raw moments E Â^k, k = 0..max_order (max_order ≤ 8), in one pass.
std::vector<McReport> estimate_moments_mc(const RandomStream& stream, const PathConfig& cfg,
                                          int max_order, const ExecutionPolicy& policy = {});

/// All path samples, in replication order (for histograms and tail counts).
std::vector<double> sample_areas(const RandomStream& stream, const PathConfig& cfg,
                                 const ExecutionPolicy& policy = {});

/// Mean of Â(T)/T^(3/2) for each horizon; horizon i uses stream.child(i).
std::vector<McReport> scaling_check(const RandomStream& stream, const PathConfig& cfg,
                                    std::span<const double> horizons,
                                    const ExecutionPolicy& policy = {});

/// E e^{−α Â(T)} with T ~ Exp(λ) drawn per replication; cfg.horizon is ignored.
McReport estimate_path_marked_time_lt(const RandomStream& stream, const PathConfig& cfg,
                                      const analytic::DoubleLaplaceParams& params,
                                      const ExecutionPolicy& policy = {});

// ---------------------------------------------------------------------------
// Excursion engine
// ---------------------------------------------------------------------------

struct ExcursionPoint {
  double tau = 0.0;
  double length = 0.0;
};

struct ExcursionConfig {
  analytic::DoubleLaplaceParams params;
  /// ε: excursions shorter than this are not sampled.
  double length_floor = 1e-4;
  /// Add back the expected Σ τℓ of the excursions shorter than ε.
  bool compensate = true;
  std::uint64_t replications = 100000;
  /// Largest Poisson count allowed in one draw.
  std::uint64_t point_cap = 10'000'000;

  void validate() const;
  nlohmann::json to_json() const;
};

/// Intensity integrals of the unmarked excursion process
/// (2πℓ³)^(−1/2) e^{−λℓ} dτ dℓ, truncated at ℓ ≥ ε. Computed once by quadrature.
class ExcursionModel {
 public:
  ExcursionModel(double lambda, double eps);

  double lambda() const { return lambda_; }
  double eps() const { return eps_; }
  /// Expected number of points per unit local time.
  double rate() const { return rate_; }
  /// Expected Σ τℓ over the excluded points ℓ < ε, divided by ζ²:
  /// (1/2)(2π)^(−1/2) ∫_0^ε ℓ^(−1/2) e^{−λℓ} dℓ.
  double compensator() const { return compensator_; }

 private:
  double lambda_;
  double eps_;
  double rate_;
  double compensator_;
};

/// Poisson points on [0, ζ] × [ε, ∞) appended to `out`.
void sample_truncated_points(RandomStream& rng, const ExcursionModel& model, double zeta,
                             std::uint64_t point_cap, std::vector<ExcursionPoint>& out);

/// A′ given ζ: Σ τℓ over the sampled points plus, if enabled, ζ²·compensator.
double sample_a_prime(RandomStream& rng, const ExcursionConfig& cfg, const ExcursionModel& model,
                      double zeta);
double sample_a_prime(RandomStream& rng, const ExcursionConfig& cfg, double zeta);

/// A″ given ζ: ζ·Y with Y ~ Gamma(1/2, λ).
template <RandomSource R>
double sample_a_double_prime(R& rng, double lambda, double zeta) {
  if (!(zeta >= 0.0)) throw DomainError("sample_a_double_prime: zeta must be >= 0");
  return zeta * numerics::sample_gamma_half(rng, lambda);
}

/// E e^{−α A(T₁)}, ζ ~ Exp(√(2λ)), A = A′ + A″.
McReport estimate_marked_time_lt(const RandomStream& stream, const ExcursionConfig& cfg,
                                 const ExecutionPolicy& policy = {});

/// E[e^{−αA′} | ζ] by simulation.
McReport estimate_conditional_a_prime_lt(const RandomStream& stream, const ExcursionConfig& cfg,
                                         double zeta, const ExecutionPolicy& policy = {});

/// E[e^{−αA″} | ζ] by simulation.
McReport estimate_conditional_a_double_prime_lt(const RandomStream& stream,
                                                const analytic::DoubleLaplaceParams& params,
                                                double zeta, std::uint64_t replications,
                                                const ExecutionPolicy& policy = {});

/// Campbell mean of Σ τℓ over the truncated points: (ζ²/2)(2π)^(−1/2) ∫_ε^∞ ℓ^(−1/2) e^{−λℓ} dℓ.
double truncated_sum_mean(const ExcursionModel& model, double zeta);

struct PoissonFunctionalReport {
  /// E exp{−Σ α τ ℓ} over the truncated point process.
  McReport empirical;
  /// exp{−∫∫ (1 − e^{−ατℓ}) dμ} by nested quadrature.
  double quadrature = 1.0;
  double difference = 0.0;
  /// Point count in [0, ζ/2] × [2ε, 10ε] against its intensity measure.
  McReport rectangle_count;
  double rectangle_measure = 0.0;
};

PoissonFunctionalReport poisson_functional_check(const RandomStream& stream, double zeta,
                                                 double lambda, double alpha, double eps,
                                                 std::uint64_t reps,
                                                 const ExecutionPolicy& policy = {});

}  // namespace suparea::simulate
