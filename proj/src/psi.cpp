#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <type_traits>

#include "suparea/analytic.hpp"
#include "suparea/errors.hpp"

namespace suparea::analytic {
namespace {

using cplx = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kSeriesTermBudget = 20000;

template <class T>
struct SeriesSum {
  T value{};
  double error = 0.0;
  double max_term = 0.0;
  double cancellation = 1.0;
};

using ext = long double;
template <class T>
struct Extended {
  using type = ext;
  using sum = numerics::BasicCompensatedSum<ext>;
};
template <>
struct Extended<cplx> {
  using type = std::complex<ext>;
  using sum = numerics::BasicComplexCompensatedSum<ext>;
};

// Terms t_n = Γ(n+2/3)/(Γ(2/3)Γ(3n/2+1)) x^n, x = -cs. Even and odd terms each
// follow a step-2 recurrence with rational coefficients:
//   t_{n+2}/t_n = (n+2/3)(n+5/3) / ((3n/2+1)(3n/2+2)(3n/2+3)) · x²,
// t_0 = 1, t_1 = Γ(5/3)/(Γ(2/3)Γ(5/2)) x = 8x/(9√π).
// Terms and sums are carried in long double; the alternating terms peak near
// e^{|s|²/6}, and the extra bits keep that from eating the double result.
template <class T>
SeriesSum<T> sum_series(T s, double tol) {
  using E = typename Extended<T>::type;
  if (!(tol > 0.0)) throw DomainError("psi_series: tol must be positive");
  if (!std::isfinite(std::abs(s))) throw DomainError("psi_series: argument must be finite");
  constexpr double ext_eps = std::numeric_limits<ext>::epsilon();
  const E x = -(3.0L * std::numbers::sqrt2_v<ext> / 4.0L) * E(s);
  const E x2 = x * x;
  auto ratio = [](int n) {
    const ext a = n + 2.0L / 3.0L;
    const ext b = n + 5.0L / 3.0L;
    const ext m = 1.5L * n;
    return a * b / ((m + 1.0L) * (m + 2.0L) * (m + 3.0L));
  };
  std::array<E, 2> chain{E(1.0L), E(8.0L / (9.0L * std::sqrt(std::numbers::pi_v<ext>))) * x};
  typename Extended<T>::sum sum;
  double weighted = 0.0;
  double max_term = 0.0;
  for (int n = 0; n < kSeriesTermBudget; ++n) {
    const E term = chain[n % 2];
    const double mag = static_cast<double>(std::abs(term));
    if (!std::isfinite(mag)) throw NumericalError("psi_series: overflow");
    sum.add(term);
    // Each recurrence step carries a few roundings; they accumulate along the chain.
    weighted += mag * (3.0 + std::sqrt(static_cast<double>(n)));
    max_term = std::max(max_term, mag);
    chain[n % 2] = term * ratio(n) * x2;
    const double next = static_cast<double>(std::abs(chain[(n + 1) % 2]));
    const double after = static_cast<double>(std::abs(chain[n % 2]));
    const double scale = tol * static_cast<double>(std::abs(sum.value()));
    if (n >= 1 && next <= scale && after <= scale) {
      SeriesSum<T> out;
      if constexpr (std::is_same_v<T, double>) {
        out.value = static_cast<double>(sum.value());
      } else {
        const auto v = sum.value();
        out.value = cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
      }
      const double v = std::abs(out.value);
      out.error = next + after + ext_eps * weighted + kEps * v;
      out.max_term = max_term;
      out.cancellation = v > 0.0 ? max_term / v : std::numeric_limits<double>::infinity();
      return out;
    }
  }
  throw ConvergenceError("psi_series: term budget exhausted",
                         {static_cast<double>(std::abs(sum.value())), max_term,
                          ErrorKind::quadrature_bound});
}

struct AsymptoticSum {
  cplx value;
  double error;
  bool valid;
};

constexpr double kAsymptoticSector = 0.75 * std::numbers::pi;

// Optimally truncated large-|s| expansion. The error has two parts: the first
// omitted pair of terms, and the exponentially small e^{s²/6} contribution that
// switches on across the Stokes line arg s = ±π/2 (fitted: 1.8|s|^{1/3}e^{Re s²/6}
// times ½erfc(0.5|s|(π/2 − |arg s|))).
AsymptoticSum sum_asymptotic(cplx s) {
  const double r = std::abs(s);
  const double theta = std::abs(std::arg(s));
  if (!(r > 0.0) || !(theta < kAsymptoticSector) || !std::isfinite(r))
    return {cplx(0.0), std::numeric_limits<double>::infinity(), false};
  static const double k_const = 2.0 / (std::sqrt(3.0) * numerics::gamma_fn(2.0 / 3.0));
  static const double a0 = std::sqrt(std::numbers::pi) / 2.0 / numerics::gamma_fn(4.0 / 3.0);
  const double b0 = 0.75 * std::sqrt(std::numbers::pi);
  const cplx w = moment_scale() * s;
  const cplx inv_w2 = 1.0 / (w * w);
  cplx a_term = a0 / w;
  cplx b_term = b0 * std::exp(-(5.0 / 3.0) * std::log(w));
  numerics::ComplexCompensatedSum sum;
  double prev = std::numeric_limits<double>::infinity();
  double omitted = 0.0;
  bool stopped = false;
  for (int j = 0; j < 400; ++j) {
    const double mag = std::abs(a_term) + std::abs(b_term);
    if (mag >= prev) {
      omitted = mag;
      stopped = true;
      break;
    }
    sum.add(a_term + b_term);
    prev = mag;
    if (mag <= 1e-17 * std::abs(sum.value())) {
      const double jd = j;
      const double ra = (3 * jd + 1.5) * (3 * jd + 2.5) * (3 * jd + 3.5) /
                        ((2 * jd + 4.0 / 3.0) * (2 * jd + 7.0 / 3.0));
      omitted = mag * ra * std::abs(inv_w2);
      stopped = true;
      break;
    }
    const double jd = j;
    a_term *= -(3 * jd + 1.5) * (3 * jd + 2.5) * (3 * jd + 3.5) /
              ((2 * jd + 4.0 / 3.0) * (2 * jd + 7.0 / 3.0)) * inv_w2;
    b_term *= -(3 * jd + 2.5) * (3 * jd + 3.5) * (3 * jd + 4.5) / ((2 * jd + 2.0) * (2 * jd + 3.0)) *
              inv_w2;
  }
  if (!stopped) omitted = prev;
  const cplx value = k_const * sum.value();
  double stokes = 0.0;
  if (theta > 0.25 * std::numbers::pi) {
    const double sigma = 0.5 * r * (0.5 * std::numbers::pi - theta);
    stokes = 1.8 * std::cbrt(r) * std::exp(std::real(s * s) / 6.0) * 0.5 * std::erfc(sigma);
  }
  const double error = k_const * omitted + stokes + 4.0 * kEps * std::abs(value);
  return {value, error, std::isfinite(std::abs(value))};
}

// Below this modulus the series is accurate to a few ulps and cheap.
constexpr double kSeriesOnlyRadius = 6.0;

ComplexEstimate dispatch(cplx s) {
  const double r = std::abs(s);
  if (!std::isfinite(r)) throw DomainError("psi: argument must be finite");
  if (r < kSeriesOnlyRadius) {
    const auto series = sum_series<cplx>(s, 1e-17);
    return {series.value, series.error};
  }
  const AsymptoticSum asym = sum_asymptotic(s);
  if (asym.valid && asym.error <= 1e-15 * std::abs(asym.value)) return {asym.value, asym.error};
  ComplexEstimate best{asym.value, asym.valid ? asym.error : std::numeric_limits<double>::infinity()};
  try {
    const auto series = sum_series<cplx>(s, 1e-17);
    if (series.error < best.error) best = {series.value, series.error};
  } catch (const NumericalError&) {
  }
  if (!std::isfinite(best.error))
    throw NumericalError("psi: no representation is accurate at this argument");
  return best;
}

}  // namespace

EstimateWithError psi_series(double s, double tol) {
  const auto r = sum_series<double>(s, tol);
  if (r.cancellation > kCancellationLimit)
    throw CancellationError("psi_series: cancellation index exceeds limit", r.cancellation);
  return {r.value, r.error, ErrorKind::quadrature_bound};
}

ComplexEstimate psi_series(cplx s, double tol) {
  const auto r = sum_series<cplx>(s, tol);
  if (r.cancellation > kCancellationLimit)
    throw CancellationError("psi_series: cancellation index exceeds limit", r.cancellation);
  return {r.value, r.error};
}

double psi_series_cancellation_index(cplx s) {
  try {
    return sum_series<cplx>(s, 1e-17).cancellation;
  } catch (const NumericalError&) {
    return std::numeric_limits<double>::infinity();
  }
}

EstimateWithError psi_hypergeometric(double s) {
  if (!std::isfinite(s)) throw DomainError("psi_hypergeometric: argument must be finite");
  const ext z = static_cast<ext>(s) * s / 6.0L;
  const std::array<ext, 1> up1{5.0L / 6.0L};
  const std::array<ext, 1> lo1{2.0L / 3.0L};
  const std::array<ext, 2> up2{1.0L, 4.0L / 3.0L};
  const std::array<ext, 2> lo2{7.0L / 6.0L, 1.5L};
  const auto f1 = numerics::hyp_pfq_extended(up1, lo1, z);
  const auto f2 = numerics::hyp_pfq_extended(up2, lo2, z);
  const ext coef = 4.0L * s / (3.0L * std::sqrt(2.0L * std::numbers::pi_v<ext>));
  const double value = static_cast<double>(f1.value - coef * f2.value);
  const double error = f1.error + static_cast<double>(std::abs(coef)) * f2.error + kEps * std::abs(value);
  return {value, error, ErrorKind::quadrature_bound};
}

EstimateWithError psi_asymptotic(double s) {
  const auto r = sum_asymptotic(cplx(s, 0.0));
  if (!r.valid) throw DomainError("psi_asymptotic: requires s > 0");
  return {r.value.real(), r.error, ErrorKind::quadrature_bound};
}

ComplexEstimate psi_asymptotic(cplx s) {
  const auto r = sum_asymptotic(s);
  if (!r.valid) throw DomainError("psi_asymptotic: requires |arg s| < 3π/4");
  return {r.value, r.error};
}

EstimateWithError psi(double s) {
  const auto r = dispatch(cplx(s, 0.0));
  return {r.value.real(), r.error, ErrorKind::quadrature_bound};
}

ComplexEstimate psi(cplx s) { return dispatch(s); }

double density_at_zero() { return std::sqrt(2.0 / std::numbers::pi); }

}  // namespace suparea::analytic
