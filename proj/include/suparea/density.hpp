#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "suparea/estimate.hpp"
#include "suparea/parallel.hpp"
#include "suparea/random.hpp"
#include "suparea/simulate.hpp"

// Density of A by numerical inversion of ψ, and tail diagnostics.
namespace suparea::density {

enum class InversionMethod { fixed_deformed_contour, bromwich_series_acceleration };

std::string_view to_string(InversionMethod m);
InversionMethod method_from_string(std::string_view s);

struct ContourConfig {
  /// Trapezoid nodes on the half contour (fixed contour) or 4× the
  /// continued-fraction order (series acceleration).
  int node_count = 192;
  /// Multiplier on the contour scale μ = 2 (fixed contour) or on the period
  /// factor (series acceleration).
  double shape = 1.0;
  InversionMethod method = InversionMethod::fixed_deformed_contour;
  /// Fall back to the other method when the first is unstable on the grid.
  bool allow_fallback = true;

  void validate() const;
  nlohmann::json to_json() const;
};

using Transform = std::function<ComplexEstimate(std::complex<double>)>;

/// f(x) for each x > 0 from F(s) = ∫_0^∞ e^{−sx} f(x) dx, F entire or analytic
/// right of the contour. The error combines the discretization estimate (full
/// vs half node set) and the propagated transform error.
///
/// Fixed contour: s(u) = μ(1 + sin(iu − δ)), δ = π/8, u ∈ [−U, U], one set of
/// nodes shared by every x, with U chosen from the smallest x so that e^{s x}
/// has decayed to below 1e−16 at the ends.
std::vector<EstimateWithError> invert_laplace(const Transform& transform,
                                              std::span<const double> xs,
                                              const ContourConfig& config);

struct DensityGrid {
  std::vector<double> xs;
  std::vector<double> fs;
  std::vector<double> errors;
  /// ln f(x) + 3x²/2 − (1/3) ln x; NaN where f ≤ 0.
  std::vector<double> tail_diag;
  /// ∫ f over [0, x_max] by the trapezoid rule from f(0+) = √(2/π), plus the
  /// conjectured tail beyond x_max (reported separately).
  double normalization = 0.0;
  double normalization_tail_conjectural = 0.0;
  double mean_check = 0.0;
  double second_moment_check = 0.0;
  double min_value = 0.0;
  InversionMethod method_used = InversionMethod::fixed_deformed_contour;
};

/// Values below this are treated as contour failure, not ringing.
inline constexpr double kNegativeTolerance = 1e-6;
/// Largest acceptable pointwise error estimate before the method counts as unstable.
inline constexpr double kInstabilityTolerance = 1e-6;

/// Grid x_i = x_max·i/points, i = 1..points.
std::vector<double> uniform_grid(double x_max, int points);

/// Inverts ψ on xs (strictly increasing, positive). Throws
/// ContourInstabilityError when no method gives a finite, non-negative density
/// within kInstabilityTolerance.
DensityGrid invert_density(std::span<const double> xs, const ContourConfig& config = {});

/// Self-test on F(s) = 1/(1+s), f(x) = e^{−x}. Returns max |f̂ − e^{−x}| over xs.
double inversion_self_test(std::span<const double> xs, const ContourConfig& config = {});

// ---------------------------------------------------------------------------
// Tail diagnostics
// ---------------------------------------------------------------------------

enum class ProbeStatus { ok, insufficient_hits };

struct TailProbeRow {
  double x = 0.0;
  std::uint64_t hits = 0;
  /// P(Â > x) with its binomial standard error.
  simulate::McReport probability;
  double log_p = 0.0;
  /// ln P / (−3x²/2). Decreases toward 1 from above.
  double ratio = std::numeric_limits<double>::quiet_NaN();
  /// (−3x²/2) / ln P, the reciprocal. Increases toward 1 from below.
  double inverse_ratio = std::numeric_limits<double>::quiet_NaN();
  ProbeStatus status = ProbeStatus::ok;
};

/// One batch of cfg.replications path samples, thresholded at every x.
std::vector<TailProbeRow> tail_probe(const numerics::RandomStream& stream,
                                     std::span<const double> xs, const simulate::PathConfig& cfg,
                                     const parallel::ExecutionPolicy& policy = {},
                                     std::uint64_t min_hits = 100);

/// Least-squares fit of ln f(x) + 3x²/2 = a + b ln x over x ≥ x_lo.
/// CONJECTURAL: compares b with 1/3 and e^a with 2·3^(1/6)/Γ(2/3).
struct ConjectureSummary {
  bool sufficient = false;
  std::string status;
  std::size_t points = 0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double slope_stderr = std::numeric_limits<double>::quiet_NaN();
  double constant = std::numeric_limits<double>::quiet_NaN();
  double reference_slope = 1.0 / 3.0;
  double reference_constant = 0.0;
};

ConjectureSummary conjecture_diagnostic(const DensityGrid& grid, double x_lo = 0.8);

}  // namespace suparea::density
