#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "oracles.hpp"
#include "suparea/analytic.hpp"
#include "suparea/errors.hpp"

using namespace suparea;
using namespace suparea::analytic;

namespace {
bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }
}  // namespace

TEST_CASE("exact moments match the closed forms for n = 1..4") {
  const double table[] = {oracle::kMoment1, oracle::kMoment2, oracle::kMoment3, oracle::kMoment4};
  for (int n = 1; n <= 4; ++n) {
    CAPTURE(n);
    const auto m = exact_moment(n);
    CHECK(m.n == n);
    CHECK(rel_close(m.value, table[n - 1], 1e-12));
    CHECK(rel_close(std::exp(m.log_value), m.value, 1e-14));
  }
  const auto zero = exact_moment(0);
  CHECK(zero.value == 1.0);
  CHECK(zero.log_value == 0.0);
  CHECK_THROWS_AS(exact_moment(-1), DomainError);
}

TEST_CASE("moments are log-convex and stay finite in log space") {
  CHECK(exact_moment(2).value >= exact_moment(1).value * exact_moment(1).value);
  for (int n = 1; n < 20; ++n) {
    CAPTURE(n);
    CHECK(2.0 * exact_moment(n).log_value <= exact_moment(n - 1).log_value + exact_moment(n + 1).log_value);
  }
  const auto big = exact_moment(500);
  CHECK(std::isfinite(big.log_value));
  CHECK(big.log_value > 700.0);
}

TEST_CASE("Stirling asymptote of the moments") {
  CHECK(moment_asymptote(2) == doctest::Approx(0.4161).epsilon(1e-3));
  CHECK(std::isfinite(log_moment_asymptote(1)));
  CHECK_THROWS_AS(log_moment_asymptote(0), DomainError);
  double previous = 0.0;
  for (int n : {10, 50, 100, 200}) {
    CAPTURE(n);
    const double ratio = std::exp(exact_moment(n).log_value - log_moment_asymptote(n));
    CHECK(std::abs(ratio - 1.0) < std::abs(previous - 1.0) + (previous == 0.0 ? 1.0 : 0.0));
    previous = ratio;
  }
  CHECK(std::abs(previous - 1.0) <= 0.02);
}

TEST_CASE("psi_series against extended-precision oracles") {
  CHECK(psi_series(0.0).value == 1.0);
  const std::pair<double, double> cases[] = {{0.5, oracle::kPsi0_5}, {1.0, oracle::kPsi1},
                                             {2.0, oracle::kPsi2},   {4.0, oracle::kPsi4},
                                             {8.0, oracle::kPsi8}};
  for (auto [s, ref] : cases) {
    CAPTURE(s);
    const auto r = psi_series(s);
    CHECK(std::abs(r.value - ref) <= 2e-14);
    CHECK(std::abs(r.value - ref) <= r.error + 1e-16);
  }
  const auto z = psi_series(std::complex<double>(1.0, 1.0));
  CHECK(std::abs(z.value - std::complex<double>(oracle::kPsi1PlusIRe, oracle::kPsi1PlusIIm)) <= 1e-14);
}

TEST_CASE("psi derivative at zero is minus the mean") {
  const double h = 1e-6;
  const double slope = (psi_series(h).value - psi_series(0.0).value) / h;
  CHECK(slope == doctest::Approx(-oracle::kMoment1).epsilon(1e-5));
}

TEST_CASE("psi_hypergeometric agrees with the series") {
  CHECK(psi_hypergeometric(0.0).value == 1.0);
  for (double s : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    CAPTURE(s);
    CHECK(std::abs(psi_hypergeometric(s).value - psi_series(s).value) <= 1e-10);
  }
  const double h = 1e-4;
  const double hyp_slope = (psi_hypergeometric(1.0 + h).value - psi_hypergeometric(1.0 - h).value) / (2 * h);
  const double ser_slope = (psi_series(1.0 + h).value - psi_series(1.0 - h).value) / (2 * h);
  CHECK(hyp_slope == doctest::Approx(ser_slope).epsilon(1e-7));
}

TEST_CASE("psi is a decreasing function into (0, 1] on [0, 8]") {
  double previous = 1.0 + 1e-12;
  for (int i = 0; i <= 80; ++i) {
    const double v = psi_series(0.1 * i).value;
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    CHECK(v < previous);
    previous = v;
  }
}

TEST_CASE("series cancellation guard and the large-s expansion") {
  CHECK(psi_series_cancellation_index(std::complex<double>(1.0, 0.0)) < 10.0);
  CHECK(psi_series_cancellation_index(std::complex<double>(40.0, 0.0)) > 1e12);
  CHECK_THROWS_AS(psi_series(40.0), CancellationError);
  CHECK_THROWS_AS(psi_asymptotic(std::complex<double>(-10.0, 1.0)), DomainError);

  // Overlap region: both representations available.
  for (double s : {9.0, 10.0, 12.0}) {
    CAPTURE(s);
    const auto a = psi_asymptotic(s);
    const auto b = psi_series(s);
    CHECK(std::abs(a.value - b.value) <= a.error + b.error);
  }
  // s ψ(s) = √(2/π) (1 + O(s^(-2/3)))
  const auto far = psi(1e8);
  CHECK(1e8 * far.value == doctest::Approx(density_at_zero()).epsilon(1e-4));
  CHECK(density_at_zero() == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)));
  const auto c = psi(std::complex<double>(20.0, 15.0));
  CHECK(std::isfinite(c.value.real()));
  CHECK(c.error < 1e-10);
}

TEST_CASE("double Laplace transform identity, limits and invariance") {
  const auto q = theorem1_quadrature();
  const DoubleLaplaceParams p{1.0, 1.0};
  const auto lhs = theorem1_lhs(p, q);
  const auto rhs = theorem1_rhs(p, q);
  CHECK(std::abs(lhs.value - rhs.value) <= lhs.error + rhs.error);
  CHECK((lhs.error + rhs.error) / rhs.value <= 1e-6);

  for (double lambda : {0.5, 2.0}) {
    const DoubleLaplaceParams tiny{1e-9, lambda};
    CHECK(theorem1_lhs(tiny, q).value == doctest::Approx(1.0 / lambda).epsilon(1e-7));
    CHECK(theorem1_rhs(tiny, q).value == doctest::Approx(1.0 / lambda).epsilon(1e-7));
  }

  const double beta = 2.0;
  const DoubleLaplaceParams scaled{std::pow(beta, 1.5) * 1.0, beta * 1.0};
  CHECK(rel_close(beta * theorem1_lhs(scaled, q).value, lhs.value, 1e-8));
  CHECK(rel_close(beta * theorem1_rhs(scaled, q).value, rhs.value, 1e-8));

  CHECK_THROWS_AS(theorem1_lhs({0.0, 1.0}, q), DomainError);
  CHECK_THROWS_AS(theorem1_rhs({1.0, -1.0}, q), DomainError);
}

TEST_CASE("first derivative of the right side in alpha") {
  const auto q = moment_extraction_quadrature();
  const auto d = forward_derivative_at_zero(
      [&q](double a) { return a == 0.0 ? 1.0 : theorem1_rhs({a, 1.0}, q).value; }, 1);
  CHECK(d.value == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("forward differences on a known function") {
  const auto d1 = forward_derivative_at_zero([](double x) { return std::exp(-2.0 * x); }, 1);
  const auto d2 = forward_derivative_at_zero([](double x) { return std::exp(-2.0 * x); }, 2);
  CHECK(d1.value == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(d2.value == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("moments from the double transform") {
  const auto m1 = moment_from_double_transform(1);
  const auto m2 = moment_from_double_transform(2);
  CHECK(rel_close(m1.value, oracle::kMoment1, 1e-3));
  CHECK(rel_close(m2.value, oracle::kMoment2, 1e-2));
}

TEST_CASE("conditional transforms of the excursion pieces") {
  CHECK(conditional_lt_a_prime({1e-10, 1.0}, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(conditional_lt_a_double_prime({1.0, 1.0}, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  for (double a : {0.1, 1.0, 5.0})
    for (double l : {0.2, 1.0, 3.0})
      for (double z : {0.01, 1.0, 10.0}) {
        const DoubleLaplaceParams p{a, l};
        const double x = conditional_lt_a_prime(p, z);
        const double y = conditional_lt_a_double_prime(p, z);
        CHECK(x > 0.0);
        CHECK(x <= 1.0);
        CHECK(y > 0.0);
        CHECK(y <= 1.0);
        const auto split = conditional_split(p, z);
        CHECK(split.lt_a_prime == x);
        CHECK(split.lt_a_double_prime == y);
      }
  for (double l : {0.5, 1.0, 2.0}) {
    const DoubleLaplaceParams p{1.0, l};
    const auto chain = marked_time_transform(p);
    const auto rhs = theorem1_rhs(p);
    CHECK(rel_close(chain.value, l * rhs.value, 1e-9));
  }
}

TEST_CASE("tail and conjectured density") {
  CHECK(tail_log_asymptote(1.0) == -1.5);
  CHECK(tail_log_asymptote(2.0) == -6.0);
  CHECK(tail_log_asymptote(3.0) == doctest::Approx(4.0 * tail_log_asymptote(1.5)));
  CHECK_THROWS_AS(tail_log_asymptote(0.0), DomainError);
  CHECK(conjectured_density_prefactor() == doctest::Approx(oracle::kConjecturePrefactor).epsilon(1e-14));
  CHECK(conjectured_density(1.0) == doctest::Approx(oracle::kConjecturePrefactor * std::exp(-1.5)).epsilon(1e-14));
  for (double x : {0.3, 1.0, 2.5}) {
    const double g = std::log(conjectured_density(x)) + 1.5 * x * x - std::log(x) / 3.0;
    CHECK(g == doctest::Approx(std::log(oracle::kConjecturePrefactor)).epsilon(1e-13));
  }
}
