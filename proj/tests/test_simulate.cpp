#include <doctest.h>

#include <cmath>
#include <deque>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "suparea/analytic.hpp"
#include "suparea/simulate.hpp"

using namespace suparea;
using namespace suparea::simulate;

namespace {

struct ScriptedSource {
  std::deque<double> normals;
  double uniform() { return 0.5; }
  double uniform_open() { return 0.5; }
  double normal() {
    const double z = normals.front();
    normals.pop_front();
    return z;
  }
};

bool same_report(const McReport& a, const McReport& b) {
  return a.estimate.value == b.estimate.value && a.estimate.error == b.estimate.error &&
         a.replications == b.replications && a.seed == b.seed && a.config == b.config;
}

}  // namespace

TEST_CASE("two-step path with forced increments") {
  const double r = std::sqrt(0.5);
  PathConfig cfg;
  cfg.steps = 2;
  cfg.horizon = 1.0;
  cfg.scheme = Scheme::left_rectangle;
  ScriptedSource left{{1.0, -1.0}};
  std::vector<double> trace(3);
  CHECK(simulate_area_path(left, cfg, trace) == doctest::Approx(r / 2.0).epsilon(1e-15));
  CHECK(trace == std::vector<double>{0.0, r, r});

  cfg.scheme = Scheme::trapezoid;
  ScriptedSource trap{{1.0, -1.0}};
  CHECK(simulate_area_path(trap, cfg) == doctest::Approx(3.0 * r / 4.0).epsilon(1e-15));

  std::vector<double> wrong(2);
  ScriptedSource again{{1.0, -1.0}};
  CHECK_THROWS_AS(simulate_area_path(again, cfg, wrong), DomainError);
}

TEST_CASE("bridge maximum dominates the endpoints") {
  // U = 1/2: m = (a + b + √((b−a)² + 2Δt ln 2)) / 2
  PathConfig cfg;
  cfg.steps = 2;
  cfg.bridge_maximum = true;
  cfg.scheme = Scheme::left_rectangle;
  ScriptedSource src{{1.0, -1.0}};
  std::vector<double> trace(3);
  simulate_area_path(src, cfg, trace);
  const double r = std::sqrt(0.5);
  const double m1 = 0.5 * (r + std::sqrt(0.5 + std::log(2.0)));
  CHECK(trace[1] == doctest::Approx(m1).epsilon(1e-14));
  CHECK(trace[2] >= trace[1]);
}

TEST_CASE("sampled suprema are nondecreasing and areas positive") {
  RandomStream rng(11);
  PathConfig cfg;
  cfg.steps = 500;
  std::vector<double> trace(cfg.steps + 1);
  for (int rep = 0; rep < 200; ++rep) {
    const double a = simulate_area_path(rng, cfg, trace);
    CHECK(a >= 0.0);
    for (std::size_t i = 1; i < trace.size(); ++i) REQUIRE(trace[i] >= trace[i - 1]);
  }
}

TEST_CASE("PathConfig validation and scheme names") {
  PathConfig c;
  c.steps = 1;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.horizon = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  CHECK(scheme_from_string("left_rectangle") == Scheme::left_rectangle);
  CHECK(to_string(Scheme::trapezoid) == "trapezoid");
  CHECK_THROWS_AS(scheme_from_string("simpson"), DomainError);
}

TEST_CASE("moment estimates are deterministic across thread counts") {
  PathConfig cfg;
  cfg.steps = 200;
  cfg.replications = 10000;
  const RandomStream root(99);
  ExecutionPolicy one{1, 1000};
  ExecutionPolicy four{4, 1000};
  const auto a = estimate_moments_mc(root, cfg, 3, one);
  const auto b = estimate_moments_mc(root, cfg, 3, four);
  REQUIRE(a.size() == 4);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(same_report(a[k], b[k]));
  CHECK(a[0].estimate.value == 1.0);
  CHECK(a[0].estimate.error == 0.0);
  CHECK(a[1].estimate.kind == ErrorKind::statistical_stderr);
  CHECK(a[1].replications == 10000);
  CHECK_THROWS_AS(estimate_moments_mc(root, cfg, 9), DomainError);
}

TEST_CASE("bridge-corrected paths are unbiased for the first moments") {
  PathConfig cfg;
  cfg.steps = 64;
  cfg.replications = 40000;
  cfg.bridge_maximum = true;
  const auto r = estimate_moments_mc(RandomStream(5), cfg, 2);
  CHECK(path_mean_bias(cfg) == 0.0);
  CHECK(std::abs(r[1].estimate.value - oracle::kMoment1) <= 4.0 * r[1].estimate.error + 2e-3);
  CHECK(std::abs(r[2].estimate.value - oracle::kMoment2) <= 4.0 * r[2].estimate.error + 2e-3);
}

TEST_CASE("grid bias allowance") {
  PathConfig cfg;
  cfg.steps = 10000;
  CHECK(path_mean_bias(cfg) == doctest::Approx(kGridMaximumBias * 0.01));
  cfg.horizon = 4.0;
  CHECK(path_mean_bias(cfg) == doctest::Approx(kGridMaximumBias * 0.02 * 4.0));
}

TEST_CASE("scaling check") {
  PathConfig cfg;
  cfg.steps = 256;
  cfg.replications = 20000;
  cfg.bridge_maximum = true;
  const double hs[] = {0.25, 1.0, 4.0};
  const auto r = scaling_check(RandomStream(17), cfg, hs);
  REQUIRE(r.size() == 3);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double se = std::hypot(r[i].estimate.error, r[j].estimate.error);
      CHECK(std::abs(r[i].estimate.value - r[j].estimate.value) <= 4.0 * se);
    }
  const double one[] = {1.0};
  CHECK_THROWS_AS(scaling_check(RandomStream(1), cfg, one), DomainError);
}

TEST_CASE("A'' sampler") {
  RandomStream a(3), b(3);
  for (int i = 0; i < 50; ++i) CHECK(sample_a_double_prime(a, 1.0, 2.0) == doctest::Approx(2.0 * sample_a_double_prime(b, 1.0, 1.0)));
  CHECK(sample_a_double_prime(a, 1.0, 0.0) == 0.0);
  const auto r = estimate_conditional_a_double_prime_lt(RandomStream(8), {1.0, 1.0}, 1.0, 200000);
  CHECK(std::abs(r.estimate.value - 1.0 / std::sqrt(2.0)) <= 4.0 * r.estimate.error);
}

TEST_CASE("excursion model intensities") {
  const ExcursionModel m(1.0, 1e-2);
  // rate = (2π)^(−1/2) ∫_ε^∞ ℓ^(−3/2) e^(−ℓ) dℓ, compensator = ½(2π)^(−1/2) ∫_0^ε ℓ^(−1/2) e^(−ℓ) dℓ
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const double rate = c * (2.0 * std::exp(-0.01) / 0.1 - 2.0 * std::sqrt(std::numbers::pi) * std::erfc(0.1));
  const double comp = 0.5 * c * std::sqrt(std::numbers::pi) * std::erf(0.1);
  CHECK(m.rate() == doctest::Approx(rate).epsilon(1e-10));
  CHECK(m.compensator() == doctest::Approx(comp).epsilon(1e-10));
  CHECK_THROWS_AS(ExcursionModel(0.0, 1e-3), DomainError);
  CHECK_THROWS_AS(ExcursionModel(1.0, 0.0), DomainError);
}

TEST_CASE("truncated points obey the support and Campbell's formula") {
  const ExcursionModel m(1.0, 1e-3);
  RandomStream rng(21);
  std::vector<ExcursionPoint> pts;
  numerics::RunningStats sum;
  ExcursionConfig cfg;
  cfg.params = {1.0, 1.0};
  cfg.length_floor = 1e-3;
  cfg.compensate = false;
  for (int r = 0; r < 50000; ++r) {
    pts.clear();
    sample_truncated_points(rng, m, 1.0, 10'000'000, pts);
    double s = 0.0;
    for (const auto& p : pts) {
      REQUIRE(p.length >= 1e-3);
      REQUIRE(p.tau > 0.0);
      REQUIRE(p.tau < 1.0);
      s += p.tau * p.length;
    }
    sum.add(s);
  }
  CHECK(std::abs(sum.mean() - truncated_sum_mean(m, 1.0)) <= 4.0 * sum.stderr_of_mean());

  cfg.point_cap = 3;
  CHECK_THROWS_AS(sample_a_prime(rng, cfg, m, 1.0), BudgetError);
}

TEST_CASE("excursion engine at desk scale") {
  ExcursionConfig cfg;
  cfg.params = {1.0, 1.0};
  cfg.length_floor = 1e-3;
  cfg.replications = 100000;
  const auto mt = estimate_marked_time_lt(RandomStream(31), cfg);
  const double ref = analytic::theorem1_rhs(cfg.params).value;
  CHECK(std::abs(mt.estimate.value - ref) <= 4.0 * mt.estimate.error);

  ExcursionConfig tiny = cfg;
  tiny.params.alpha = 1e-12;
  tiny.replications = 1000;
  const auto one = estimate_marked_time_lt(RandomStream(1), tiny);
  CHECK(one.estimate.value == doctest::Approx(1.0).epsilon(1e-9));

  const auto a1 = estimate_conditional_a_prime_lt(RandomStream(32), cfg, 1.0);
  CHECK(std::abs(a1.estimate.value - analytic::conditional_lt_a_prime(cfg.params, 1.0)) <= 4.0 * a1.estimate.error);

  const auto x = estimate_marked_time_lt(RandomStream(31), cfg, {3, 777});
  const auto y = estimate_marked_time_lt(RandomStream(31), cfg, {1, 777});
  CHECK(same_report(x, y));
}

TEST_CASE("Poisson functional check") {
  const auto zero = poisson_functional_check(RandomStream(2), 1.0, 1.0, 0.0, 1e-3, 2000);
  CHECK(zero.empirical.estimate.value == 1.0);
  CHECK(zero.quadrature == 1.0);

  const auto r = poisson_functional_check(RandomStream(3), 1.0, 1.0, 1.0, 1e-3, 50000);
  CHECK(std::abs(r.difference) <= 4.0 * r.empirical.estimate.error);
  const auto& c = r.rectangle_count.estimate;
  CHECK(std::abs(c.value - r.rectangle_measure) <= 4.0 * c.error);
}
