#pragma once

#include <complex>
#include <functional>

#include "suparea/estimate.hpp"
#include "suparea/numerics.hpp"

// Closed forms for A = ∫_0^1 S(t) dt, S the running maximum of a standard
// Brownian motion: moments, the Laplace transform ψ(s) = E exp(-sA), the
// double Laplace transform identity, and the pieces of the excursion
// decomposition up to the first exponential mark.
//
// The Laplace rate against A is written alpha throughout.
namespace suparea::analytic {

/// (alpha, lambda): Laplace rate against the area and against time.
struct DoubleLaplaceParams {
  double alpha = 1.0;
  double lambda = 1.0;

  void validate() const;
};

struct MomentResult {
  int n = 0;
  double value = 1.0;
  double log_value = 0.0;
};

struct ConditionalSplit {
  double zeta = 0.0;
  double lt_a_prime = 1.0;
  double lt_a_double_prime = 1.0;
};

/// 3√2/4, the per-order scale in the moment formula.
double moment_scale();

/// E A^n = n! Γ(n+2/3) / (Γ(2/3) Γ(3n/2+1)) (3√2/4)^n, evaluated in log space.
MomentResult exact_moment(int n);

/// ln of (2√(3π) / (3Γ(2/3))) n^(1/6) (n/(3e))^(n/2).
double log_moment_asymptote(int n);
double moment_asymptote(int n);

// ---------------------------------------------------------------------------
// ψ(s)
// ---------------------------------------------------------------------------

/// Series terms stop once two consecutive terms are below tol·|sum|.
/// Throws CancellationError when max|term| / |sum| exceeds this.
inline constexpr double kCancellationLimit = 1e12;

/// Power series (1/Γ(2/3)) Σ Γ(n+2/3)/Γ(3n/2+1) (-3√2 s/4)^n, compensated.
EstimateWithError psi_series(double s, double tol = 1e-17);
ComplexEstimate psi_series(std::complex<double> s, double tol = 1e-17);

/// Cancellation index max|term|/|ψ(s)| of the power series, without summing
/// to full precision. Used to decide which representation to trust.
double psi_series_cancellation_index(std::complex<double> s);

/// ₁F₁(5/6; 2/3; s²/6) − (4s/(3√(2π))) ₂F₂(1, 4/3; 7/6, 3/2; s²/6).
EstimateWithError psi_hypergeometric(double s);

/// Large-|s| expansion, valid for |arg s| < 3π/4:
///   ψ(s) ~ K Σ_j (-1)^j [ Γ(3j+3/2)/Γ(2j+4/3) (cs)^(-2j-1)
///                        + Γ(3j+5/2)/Γ(2j+2)   (cs)^(-2j-5/3) ],
/// K = 2/(√3 Γ(2/3)), c = 3√2/4. Optimally truncated; the error is the
/// first omitted term. The series and this expansion overlap near |s| ≈ 10.
EstimateWithError psi_asymptotic(double s);
ComplexEstimate psi_asymptotic(std::complex<double> s);

/// ψ from whichever representation reports the smaller error.
EstimateWithError psi(double s);
ComplexEstimate psi(std::complex<double> s);

/// lim_{s→∞} s ψ(s) = √(2/π), the density of A at 0+.
double density_at_zero();

// ---------------------------------------------------------------------------
// Double Laplace transform
// ---------------------------------------------------------------------------

/// Default tolerances for the double-transform integrals.
numerics::QuadratureConfig theorem1_quadrature();

/// ∫_0^∞ ψ(α s^(3/2)) e^(-λs) ds. The error adds the quadrature bound and the
/// accumulated ψ evaluation error.
EstimateWithError theorem1_lhs(const DoubleLaplaceParams& p,
                               const numerics::QuadratureConfig& q = theorem1_quadrature());

/// ∫_0^∞ (1 + 3αs/(2√(2λ)))^(-2/3) e^(-λs) ds.
EstimateWithError theorem1_rhs(const DoubleLaplaceParams& p,
                               const numerics::QuadratureConfig& q = theorem1_quadrature());

/// n-th derivative at 0+ of a function smooth on [0, ∞), by forward
/// differences with steps h0·2^(-k), k = 0..levels-1, Richardson-extrapolated.
EstimateWithError forward_derivative_at_zero(const std::function<double(double)>& g, int order,
                                             double h0 = 1e-2, int levels = 4);

/// Tighter tolerances: high-order differences amplify quadrature noise by h^(-n).
numerics::QuadratureConfig moment_extraction_quadrature();

/// E A^n recovered from the n-th derivative at 0+ of I(γ) = theorem1_lhs(γ, 1),
/// divided by (-1)^n Γ(3n/2+1).
EstimateWithError moment_from_double_transform(
    int n, const numerics::QuadratureConfig& q = moment_extraction_quadrature());

// ---------------------------------------------------------------------------
// Excursion decomposition up to the first mark
// ---------------------------------------------------------------------------

/// E[e^{-αA'} | ζ] = exp{ √(2λ)ζ − (2√2/(3α)) ((λ+αζ)^(3/2) − λ^(3/2)) }.
double conditional_lt_a_prime(const DoubleLaplaceParams& p, double zeta);

/// E[e^{-αA''} | ζ] = √λ (λ+αζ)^(-1/2).
double conditional_lt_a_double_prime(const DoubleLaplaceParams& p, double zeta);

ConditionalSplit conditional_split(const DoubleLaplaceParams& p, double zeta);

/// ∫_0^∞ E[e^{-αA'}|ζ] E[e^{-αA''}|ζ] √(2λ) e^{-√(2λ)ζ} dζ, i.e. E e^{-αA(T₁)}.
EstimateWithError marked_time_transform(const DoubleLaplaceParams& p,
                                        const numerics::QuadratureConfig& q = theorem1_quadrature());

// ---------------------------------------------------------------------------
// Tail
// ---------------------------------------------------------------------------

/// Leading term −3x²/2 of ln P(A > x).
double tail_log_asymptote(double x);

/// 2·3^(1/6)/Γ(2/3). CONJECTURAL.
double conjectured_density_prefactor();

/// prefactor · x^(1/3) · e^(-3x²/2). CONJECTURAL: the density's existence and
/// this form are unproven.
double conjectured_density(double x);

}  // namespace suparea::analytic
