#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "suparea/analytic.hpp"
#include "suparea/errors.hpp"

namespace suparea::analytic {

using numerics::log_gamma;

void DoubleLaplaceParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DomainError("alpha must be positive and finite");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("lambda must be positive and finite");
}

double moment_scale() { return 3.0 * std::numbers::sqrt2 / 4.0; }

MomentResult exact_moment(int n) {
  if (n < 0) throw DomainError("exact_moment: n must be non-negative");
  if (n == 0) return {0, 1.0, 0.0};
  const double nd = n;
  const double lv = log_gamma(nd + 1.0) + log_gamma(nd + 2.0 / 3.0) - log_gamma(2.0 / 3.0) -
                    log_gamma(1.5 * nd + 1.0) + nd * std::log(moment_scale());
  return {n, std::exp(lv), lv};
}

double log_moment_asymptote(int n) {
  if (n < 1) throw DomainError("moment_asymptote: n must be >= 1");
  const double nd = n;
  const double lead = std::log(2.0 * std::sqrt(3.0 * std::numbers::pi) / 3.0) - log_gamma(2.0 / 3.0);
  return lead + std::log(nd) / 6.0 + 0.5 * nd * (std::log(nd / 3.0) - 1.0);
}

double moment_asymptote(int n) { return std::exp(log_moment_asymptote(n)); }

numerics::QuadratureConfig theorem1_quadrature() {
  numerics::QuadratureConfig q;
  q.rel_tol = 1e-10;
  q.abs_tol = 1e-13;
  q.max_refinements = 4000;
  q.tail_cut = 1.0;
  return q;
}

numerics::QuadratureConfig moment_extraction_quadrature() {
  numerics::QuadratureConfig q;
  q.rel_tol = 1e-13;
  q.abs_tol = 1e-16;
  q.max_refinements = 20000;
  q.tail_cut = 1.0;
  return q;
}

EstimateWithError theorem1_lhs(const DoubleLaplaceParams& p, const numerics::QuadratureConfig& q) {
  p.validate();
  double worst_psi_error = 0.0;
  const numerics::RealFunction f = [&](double s) {
    const auto v = psi(p.alpha * s * std::sqrt(s));
    worst_psi_error = std::max(worst_psi_error, v.error);
    return v.value * std::exp(-p.lambda * s);
  };
  const auto r = numerics::integrate_semi_infinite(f, q);
  // ∫ |δψ| e^{-λs} ds ≤ max|δψ| / λ
  return {r.value, r.error + worst_psi_error / p.lambda, ErrorKind::quadrature_bound};
}

EstimateWithError theorem1_rhs(const DoubleLaplaceParams& p, const numerics::QuadratureConfig& q) {
  p.validate();
  const double k = 3.0 * p.alpha / (2.0 * std::sqrt(2.0 * p.lambda));
  const numerics::RealFunction f = [&](double s) {
    return std::pow(1.0 + k * s, -2.0 / 3.0) * std::exp(-p.lambda * s);
  };
  return numerics::integrate_semi_infinite(f, q);
}

EstimateWithError forward_derivative_at_zero(const std::function<double(double)>& g, int order,
                                             double h0, int levels) {
  if (order < 1) throw DomainError("forward_derivative_at_zero: order must be >= 1");
  if (!(h0 > 0.0)) throw DomainError("forward_derivative_at_zero: h0 must be positive");
  if (levels < 2) throw DomainError("forward_derivative_at_zero: levels must be >= 2");
  std::vector<double> binom(order + 1, 1.0);
  for (int i = 1; i <= order; ++i) binom[i] = binom[i - 1] * (order - i + 1) / i;

  const double g0 = g(0.0);
  std::vector<std::vector<double>> table(levels);
  for (int k = 0; k < levels; ++k) {
    const double h = std::ldexp(h0, -k);
    numerics::CompensatedSum diff;
    for (int i = 0; i <= order; ++i) {
      const double sign = ((order - i) % 2 == 0) ? 1.0 : -1.0;
      diff.add(sign * binom[i] * (i == 0 ? g0 : g(i * h)));
    }
    table[k].push_back(diff.value() / std::pow(h, order));
    // The forward difference error is a power series in h.
    for (int j = 1; j <= k; ++j) {
      const double w = std::ldexp(1.0, j);
      table[k].push_back((w * table[k][j - 1] - table[k - 1][j - 1]) / (w - 1.0));
    }
  }
  const auto& last = table[levels - 1];
  const double value = last.back();
  const double error = std::max(std::abs(value - last[last.size() - 2]),
                                std::abs(value - table[levels - 2].back()));
  return {value, error, ErrorKind::quadrature_bound};
}

EstimateWithError moment_from_double_transform(int n, const numerics::QuadratureConfig& q) {
  if (n < 1) throw DomainError("moment_from_double_transform: n must be >= 1");
  // I(γ) = ∫ ψ(γ s^{3/2}) e^{-s} ds is finite only for γ >= 0, hence one-sided differences.
  const auto g = [&q](double gamma) {
    if (gamma == 0.0) return 1.0;
    return theorem1_lhs({gamma, 1.0}, q).value;
  };
  const auto d = forward_derivative_at_zero(g, n);
  const double scale = (n % 2 == 0 ? 1.0 : -1.0) * std::exp(log_gamma(1.5 * n + 1.0));
  return {d.value / scale, d.error / std::abs(scale), ErrorKind::quadrature_bound};
}

namespace {

// (1+u)^{3/2} - 1 - 3u/2 without cancellation at small u.
double excess_three_halves(double u) {
  if (std::abs(u) >= 0.1) return std::pow(1.0 + u, 1.5) - 1.0 - 1.5 * u;
  double coef = 3.0 / 8.0;
  double power = u * u;
  double sum = 0.0;
  for (int k = 2; k < 60; ++k) {
    const double term = coef * power;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    coef *= (1.5 - k) / (k + 1.0);
    power *= u;
  }
  return sum;
}

void check_zeta(double zeta) {
  if (!(zeta >= 0.0) || !std::isfinite(zeta))
    throw DomainError("zeta must be non-negative and finite");
}

}  // namespace

double conditional_lt_a_prime(const DoubleLaplaceParams& p, double zeta) {
  p.validate();
  check_zeta(zeta);
  const double u = p.alpha * zeta / p.lambda;
  const double rate = 2.0 * std::numbers::sqrt2 / (3.0 * p.alpha) * std::pow(p.lambda, 1.5);
  return std::exp(-rate * excess_three_halves(u));
}

double conditional_lt_a_double_prime(const DoubleLaplaceParams& p, double zeta) {
  p.validate();
  check_zeta(zeta);
  return 1.0 / std::sqrt(1.0 + p.alpha * zeta / p.lambda);
}

ConditionalSplit conditional_split(const DoubleLaplaceParams& p, double zeta) {
  return {zeta, conditional_lt_a_prime(p, zeta), conditional_lt_a_double_prime(p, zeta)};
}

EstimateWithError marked_time_transform(const DoubleLaplaceParams& p,
                                        const numerics::QuadratureConfig& q) {
  p.validate();
  const double rate = std::sqrt(2.0 * p.lambda);
  const numerics::RealFunction f = [&](double zeta) {
    const auto split = conditional_split(p, zeta);
    return split.lt_a_prime * split.lt_a_double_prime * rate * std::exp(-rate * zeta);
  };
  return numerics::integrate_semi_infinite(f, q);
}

double tail_log_asymptote(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("tail_log_asymptote: x must be positive");
  return -1.5 * x * x;
}

double conjectured_density_prefactor() {
  return 2.0 * std::pow(3.0, 1.0 / 6.0) / numerics::gamma_fn(2.0 / 3.0);
}

double conjectured_density(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("conjectured_density: x must be positive");
  return conjectured_density_prefactor() * std::cbrt(x) * std::exp(-1.5 * x * x);
}

}  // namespace suparea::analytic
