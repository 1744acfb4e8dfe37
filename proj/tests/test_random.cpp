#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "suparea/numerics.hpp"
#include "suparea/random.hpp"

using namespace suparea;
using namespace suparea::numerics;

TEST_CASE("Philox4x32-10 known answers") {
  const auto zero = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(zero == std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  const auto ones = philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff});
  CHECK(ones == std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  const auto pi = philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
  CHECK(pi == std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("RandomStream is reproducible and streams differ") {
  RandomStream a(42), b(42), c(42, 1), d(43);
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 64; ++i) {
    va.push_back(a.next_u64());
    vb.push_back(b.next_u64());
    vc.push_back(c.next_u64());
    vd.push_back(d.next_u64());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
  CHECK(a.counter() == 32);
}

TEST_CASE("child streams are deterministic and distinct") {
  const RandomStream root(7);
  std::set<std::uint64_t> ids;
  for (std::uint64_t i = 0; i < 1000; ++i) ids.insert(root.child(i).stream_id());
  CHECK(ids.size() == 1000);
  RandomStream x = root.child(5), y = root.child(5);
  CHECK(x.seed() == 7);
  for (int i = 0; i < 10; ++i) CHECK(x.next_u64() == y.next_u64());
}

TEST_CASE("uniform ranges") {
  RandomStream r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    const double v = r.uniform_open();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("standard normal golden value and moments") {
  RandomStream golden(20240521);
  const double g0 = sample_standard_normal(golden);
  const double g1 = sample_standard_normal(golden);
  CHECK(g0 == 0.99644956848152488);
  CHECK(g1 == 0.4740245561182368);

  RandomStream r(2024);
  RunningStats s;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) s.add(sample_standard_normal(r));
  CHECK(std::abs(s.mean()) <= 4.0 / std::sqrt(n));
  // Var(sample variance) ≈ 2/n, so 1% is about 7 standard deviations.
  CHECK(std::abs(s.variance() - 1.0) <= 0.01);
}

TEST_CASE("exponential sampling") {
  CHECK(exponential_from_uniform(0.5, 2.0) == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-15));
  RandomStream r(3);
  CHECK_THROWS_AS(sample_exponential(r, 0.0), DomainError);
  CHECK_THROWS_AS(sample_exponential(r, -1.0), DomainError);

  RunningStats s, v;
  const double rate = std::sqrt(2.0);
  for (int i = 0; i < 1000000; ++i) s.add(sample_exponential(r, rate));
  CHECK(std::abs(s.mean() - 1.0 / rate) <= 3.0 * s.stderr_of_mean());
  for (int i = 0; i < 1000000; ++i) v.add(sample_exponential(r, 1.0));
  // Var of the sample variance of Exp(1) is (μ4 − σ⁴)/n = 8/n.
  CHECK(std::abs(v.variance() - 1.0) <= 3.0 * std::sqrt(8.0 / 1e6));
}

TEST_CASE("gamma(1/2) sampling") {
  RandomStream r(4);
  CHECK_THROWS_AS(sample_gamma_half(r, 0.0), DomainError);
  RunningStats mean, lt;
  for (int i = 0; i < 1000000; ++i) {
    const double y = sample_gamma_half(r, 1.0);
    mean.add(y);
    lt.add(std::exp(-y));
  }
  CHECK(std::abs(mean.mean() - 0.5) <= 3.0 * mean.stderr_of_mean());
  CHECK(std::abs(lt.mean() - std::sqrt(0.5)) <= 3.0 * lt.stderr_of_mean());

  RandomStream a(9), b(9);
  for (int i = 0; i < 100; ++i) CHECK(sample_gamma_half(a, 4.0) == doctest::Approx(sample_gamma_half(b, 1.0) / 4.0).epsilon(1e-15));
}

TEST_CASE("truncated excursion length sampler") {
  RandomStream r(5);
  SUBCASE("pure Pareto when lambda = 0") {
    int below = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double l = sample_truncated_excursion_length(r, 0.0, 1.0);
      REQUIRE(l >= 1.0);
      if (l <= 4.0) ++below;
    }
    // CDF(4) = 1 − 4^(−1/2) = 1/2
    const double p = static_cast<double>(below) / n;
    CHECK(std::abs(p - 0.5) <= 3.0 * std::sqrt(0.25 / n));
  }
  SUBCASE("mean against quadrature") {
    const double eps = 0.01;
    const auto num = integrate_semi_infinite([eps](double x) { return std::exp(-(x + eps)) / std::sqrt(x + eps); });
    const auto den = integrate_semi_infinite(
        [eps](double x) { return std::exp(-(x + eps)) / ((x + eps) * std::sqrt(x + eps)); });
    const double expected = num.value / den.value;
    CHECK(expected == doctest::Approx(0.0944545917948697686).epsilon(1e-9));
    RunningStats s;
    for (int i = 0; i < 1000000; ++i) {
      const double l = sample_truncated_excursion_length(r, 1.0, eps);
      REQUIRE(l >= eps);
      s.add(l);
    }
    CHECK(std::abs(s.mean() - expected) <= 3.0 * s.stderr_of_mean());
  }
  SUBCASE("argument checks") {
    CHECK_THROWS_AS(sample_truncated_excursion_length(r, -1.0, 0.1), DomainError);
    CHECK_THROWS_AS(sample_truncated_excursion_length(r, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(sample_truncated_excursion_length(r, 1e6, 1.0, 10), BudgetError);
  }
}
