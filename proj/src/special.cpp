#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "suparea/numerics.hpp"

namespace suparea::numerics {
namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr int kZetaTerms = 64;

// zeta(k) - 1 for k = 0..kZetaTerms (entries 0 and 1 unused).
const std::array<double, kZetaTerms + 1>& zeta_minus_one() {
  static const std::array<double, kZetaTerms + 1> table = [] {
    std::array<double, kZetaTerms + 1> t{};
    constexpr double pi = std::numbers::pi;
    t[2] = pi * pi / 6.0 - 1.0;
    t[3] = 0.20205690315959428540;
    t[4] = pi * pi * pi * pi / 90.0 - 1.0;
    t[5] = 0.03692775514336992633;
    // Direct sum with an Euler-Maclaurin tail from n = N.
    constexpr int N = 64;
    for (int k = 6; k <= kZetaTerms; ++k) {
      const double kd = k;
      const double n = N;
      double s = std::pow(n, 1.0 - kd) / (kd - 1.0) + 0.5 * std::pow(n, -kd) +
                 kd * std::pow(n, -kd - 1.0) / 12.0 -
                 kd * (kd + 1.0) * (kd + 2.0) * std::pow(n, -kd - 3.0) / 720.0;
      for (int m = N - 1; m >= 2; --m) s += std::pow(static_cast<double>(m), -kd);
      t[k] = s;
    }
    return t;
  }();
  return table;
}

// ln Γ(1+e), |e| <= 1/2.
double log_gamma_near_one(double e) {
  const auto& z = zeta_minus_one();
  double sum = 0.0;
  double power = -e;
  for (int k = 2; k <= kZetaTerms; ++k) {
    power *= -e;
    const double term = (1.0 + z[k]) / k * power;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return -kEulerGamma * e + sum;
}

// ln Γ(2+e), |e| <= 1/2.
double log_gamma_near_two(double e) {
  const auto& z = zeta_minus_one();
  double sum = 0.0;
  double power = -e;
  for (int k = 2; k <= kZetaTerms; ++k) {
    power *= -e;
    const double term = z[k] / k * power;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return (1.0 - kEulerGamma) * e + sum;
}

double log_gamma_stirling(double x) {
  // Bernoulli corrections B_2k / (2k (2k-1) x^(2k-1)), k = 1..7
  constexpr std::array<double, 7> c{1.0 / 12.0,        -1.0 / 360.0,   1.0 / 1260.0,
                                    -1.0 / 1680.0,     1.0 / 1188.0,   -691.0 / 360360.0,
                                    1.0 / 156.0};
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) series = series * inv2 + *it;
  series *= inv;
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || std::isinf(x))
    throw DomainError("log_gamma: argument must be positive and finite, got " +
                      std::to_string(x));
  if (x == 1.0 || x == 2.0) return 0.0;
  if (x >= 15.0) return log_gamma_stirling(x);
  if (x < 0.5) return log_gamma_near_one(x) - std::log(x);
  if (x < 1.5) return log_gamma_near_one(x - 1.0);
  if (x < 2.5) return log_gamma_near_two(x - 2.0);
  double product = 1.0;
  double y = x;
  while (y >= 2.5) {
    y -= 1.0;
    product *= y;
  }
  return std::log(product) + log_gamma_near_two(y - 2.0);
}

double gamma_fn(double x) { return std::exp(log_gamma(x)); }

ExtendedSum hyp_pfq_extended(std::span<const long double> upper,
                             std::span<const long double> lower, long double z, double tol,
                             std::size_t max_terms) {
  for (long double b : lower) {
    if (b <= 0.0 && b == std::floor(b))
      throw DomainError("hyp_pfq: lower parameter is a non-positive integer");
  }
  const std::size_t p = upper.size();
  const std::size_t q = lower.size();
  if (p > q + 1) throw DomainError("hyp_pfq: series diverges for p > q + 1");
  if (p == q + 1 && std::abs(z) >= 1.0L)
    throw DomainError("hyp_pfq: p = q + 1 requires |z| < 1");

  // Terms and partial sums are carried in extended precision.
  using ext = long double;
  constexpr double ext_eps = std::numeric_limits<ext>::epsilon();
  BasicCompensatedSum<ext> sum;
  ext abs_sum = 1.0L;
  ext term = 1.0L;
  sum.add(term);
  for (std::size_t k = 0; k < max_terms; ++k) {
    ext ratio = z / static_cast<ext>(k + 1);
    for (ext a : upper) ratio *= a + static_cast<ext>(k);
    for (ext b : lower) ratio /= b + static_cast<ext>(k);
    const ext next = term * ratio;
    const ext scale = static_cast<ext>(tol) * std::abs(sum.value());
    if (std::abs(term) <= scale && std::abs(next) <= scale) {
      const double rounding =
          2.0 * ext_eps * static_cast<double>(abs_sum) * std::sqrt(static_cast<double>(k + 1));
      return {sum.value(), static_cast<double>(std::abs(next)) + rounding};
    }
    term = next;
    sum.add(term);
    abs_sum += std::abs(term);
  }
  throw ConvergenceError("hyp_pfq: term budget exhausted",
                         {static_cast<double>(sum.value()), static_cast<double>(std::abs(term)),
                          ErrorKind::quadrature_bound});
}

EstimateWithError hyp_pfq(std::span<const double> upper, std::span<const double> lower,
                          double z, double tol, std::size_t max_terms) {
  const std::vector<long double> up(upper.begin(), upper.end());
  const std::vector<long double> lo(lower.begin(), lower.end());
  const ExtendedSum r = hyp_pfq_extended(up, lo, z, tol, max_terms);
  const double value = static_cast<double>(r.value);
  return {value, r.error + 0.5 * std::numeric_limits<double>::epsilon() * std::abs(value),
          ErrorKind::quadrature_bound};
}

}  // namespace suparea::numerics
