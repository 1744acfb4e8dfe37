#include <cmath>
#include <numbers>
#include <random>

#include "suparea/simulate.hpp"

namespace suparea::simulate {
namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

numerics::QuadratureConfig intensity_quadrature(double eps) {
  numerics::QuadratureConfig q;
  q.rel_tol = 1e-12;
  q.abs_tol = 1e-15;
  q.max_refinements = 10000;
  q.tail_cut = eps;
  return q;
}

struct StatsBlock {
  std::vector<numerics::RunningStats> stats;
  void merge(const StatsBlock& o) {
    for (std::size_t i = 0; i < stats.size(); ++i) stats[i].merge(o.stats[i]);
  }
};

std::uint64_t draw_count(RandomStream& rng, double mean, std::uint64_t cap) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> poisson(mean);
  const std::uint64_t n = poisson(rng);
  if (n > cap) throw BudgetError("excursion: Poisson count exceeds the point cap; raise eps or the cap");
  return n;
}

}  // namespace

void ExcursionConfig::validate() const {
  params.validate();
  if (!(length_floor > 0.0) || !std::isfinite(length_floor))
    throw DomainError("length_floor must be positive");
  if (replications < 1) throw DomainError("replications must be >= 1");
  if (point_cap < 1) throw DomainError("point_cap must be >= 1");
}

nlohmann::json ExcursionConfig::to_json() const {
  return {{"alpha", params.alpha},       {"lambda", params.lambda},
          {"length_floor", length_floor}, {"compensate", compensate},
          {"replications", replications}, {"point_cap", point_cap}};
}

ExcursionModel::ExcursionModel(double lambda, double eps) : lambda_(lambda), eps_(eps) {
  if (!(lambda > 0.0)) throw DomainError("ExcursionModel: lambda must be positive");
  if (!(eps > 0.0)) throw DomainError("ExcursionModel: eps must be positive");
  const auto q = intensity_quadrature(eps);
  const auto tail = numerics::integrate_semi_infinite(
      [lambda, eps](double x) {
        const double l = x + eps;
        return std::exp(-lambda * l) / (l * std::sqrt(l));
      },
      q);
  rate_ = kInvSqrt2Pi * tail.value;
  const auto head = numerics::integrate_sqrt_endpoint(
      [lambda](double l) { return std::exp(-lambda * l) / std::sqrt(l); }, 0.0, eps, q);
  compensator_ = 0.5 * kInvSqrt2Pi * head.value;
}

double truncated_sum_mean(const ExcursionModel& model, double zeta) {
  const double lambda = model.lambda();
  const double eps = model.eps();
  const auto r = numerics::integrate_semi_infinite(
      [lambda, eps](double x) {
        const double l = x + eps;
        return std::exp(-lambda * l) / std::sqrt(l);
      },
      intensity_quadrature(eps));
  return 0.5 * zeta * zeta * kInvSqrt2Pi * r.value;
}

void sample_truncated_points(RandomStream& rng, const ExcursionModel& model, double zeta,
                             std::uint64_t point_cap, std::vector<ExcursionPoint>& out) {
  if (!(zeta >= 0.0)) throw DomainError("sample_truncated_points: zeta must be >= 0");
  const std::uint64_t n = draw_count(rng, model.rate() * zeta, point_cap);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double tau = zeta * rng.uniform_open();
    const double len = numerics::sample_truncated_excursion_length(rng, model.lambda(), model.eps());
    out.push_back({tau, len});
  }
}

double sample_a_prime(RandomStream& rng, const ExcursionConfig& cfg, const ExcursionModel& model,
                      double zeta) {
  if (!(zeta >= 0.0)) throw DomainError("sample_a_prime: zeta must be >= 0");
  const std::uint64_t n = draw_count(rng, model.rate() * zeta, cfg.point_cap);
  numerics::CompensatedSum sum;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double tau = zeta * rng.uniform_open();
    sum.add(tau * numerics::sample_truncated_excursion_length(rng, model.lambda(), model.eps()));
  }
  if (cfg.compensate) sum.add(zeta * zeta * model.compensator());
  return sum.value();
}

double sample_a_prime(RandomStream& rng, const ExcursionConfig& cfg, double zeta) {
  const ExcursionModel model(cfg.params.lambda, cfg.length_floor);
  return sample_a_prime(rng, cfg, model, zeta);
}

McReport estimate_marked_time_lt(const RandomStream& stream, const ExcursionConfig& cfg,
                                 const ExecutionPolicy& policy) {
  cfg.validate();
  const ExcursionModel model(cfg.params.lambda, cfg.length_floor);
  const double rate = std::sqrt(2.0 * cfg.params.lambda);
  StatsBlock proto{std::vector<numerics::RunningStats>(1)};
  const auto total = parallel::run_blocks(
      stream, cfg.replications, policy, proto,
      [&](RandomStream& rng, std::uint64_t count, StatsBlock& acc) {
        for (std::uint64_t r = 0; r < count; ++r) {
          const double zeta = numerics::sample_exponential(rng, rate);
          const double a1 = sample_a_prime(rng, cfg, model, zeta);
          const double a2 = sample_a_double_prime(rng, cfg.params.lambda, zeta);
          acc.stats[0].add(std::exp(-cfg.params.alpha * (a1 + a2)));
        }
      });
  return {total.stats[0].estimate(), total.stats[0].count(), stream.seed(), cfg.to_json()};
}

McReport estimate_conditional_a_prime_lt(const RandomStream& stream, const ExcursionConfig& cfg,
                                         double zeta, const ExecutionPolicy& policy) {
  cfg.validate();
  if (!(zeta > 0.0)) throw DomainError("zeta must be positive");
  const ExcursionModel model(cfg.params.lambda, cfg.length_floor);
  StatsBlock proto{std::vector<numerics::RunningStats>(1)};
  const auto total = parallel::run_blocks(
      stream, cfg.replications, policy, proto,
      [&](RandomStream& rng, std::uint64_t count, StatsBlock& acc) {
        for (std::uint64_t r = 0; r < count; ++r)
          acc.stats[0].add(std::exp(-cfg.params.alpha * sample_a_prime(rng, cfg, model, zeta)));
      });
  nlohmann::json config = cfg.to_json();
  config["zeta"] = zeta;
  return {total.stats[0].estimate(), total.stats[0].count(), stream.seed(), config};
}

McReport estimate_conditional_a_double_prime_lt(const RandomStream& stream,
                                                const analytic::DoubleLaplaceParams& params,
                                                double zeta, std::uint64_t replications,
                                                const ExecutionPolicy& policy) {
  params.validate();
  if (!(zeta > 0.0)) throw DomainError("zeta must be positive");
  if (replications < 1) throw DomainError("replications must be >= 1");
  StatsBlock proto{std::vector<numerics::RunningStats>(1)};
  const auto total = parallel::run_blocks(
      stream, replications, policy, proto,
      [&](RandomStream& rng, std::uint64_t count, StatsBlock& acc) {
        for (std::uint64_t r = 0; r < count; ++r)
          acc.stats[0].add(std::exp(-params.alpha * sample_a_double_prime(rng, params.lambda, zeta)));
      });
  const nlohmann::json config{{"alpha", params.alpha},
                              {"lambda", params.lambda},
                              {"zeta", zeta},
                              {"replications", replications}};
  return {total.stats[0].estimate(), total.stats[0].count(), stream.seed(), config};
}

PoissonFunctionalReport poisson_functional_check(const RandomStream& stream, double zeta,
                                                 double lambda, double alpha, double eps,
                                                 std::uint64_t reps,
                                                 const ExecutionPolicy& policy) {
  if (!(zeta > 0.0) || !(lambda > 0.0) || !(alpha >= 0.0) || !(eps > 0.0))
    throw DomainError("poisson_functional_check: parameters must be positive");
  if (reps < 1) throw DomainError("poisson_functional_check: reps must be >= 1");
  const ExcursionModel model(lambda, eps);
  const auto q = intensity_quadrature(eps);

  // ∫_ε^∞ ∫_0^ζ (1 − e^{−ατℓ}) dτ (2πℓ³)^{−1/2} e^{−λℓ} dℓ
  numerics::QuadratureConfig inner_q = q;
  inner_q.abs_tol = 1e-17;
  const auto outer = numerics::integrate_semi_infinite(
      [&](double x) {
        const double l = x + eps;
        const auto inner = numerics::integrate(
            [alpha, l](double tau) { return -std::expm1(-alpha * tau * l); }, 0.0, zeta, inner_q);
        return inner.value * kInvSqrt2Pi * std::exp(-lambda * l) / (l * std::sqrt(l));
      },
      q);
  const double quadrature = std::exp(-outer.value);

  const double lo = 2.0 * eps;
  const double hi = 10.0 * eps;
  const auto rect = numerics::integrate(
      [lambda](double l) { return std::exp(-lambda * l) / (l * std::sqrt(l)); }, lo, hi, q);
  const double rectangle_measure = 0.5 * zeta * kInvSqrt2Pi * rect.value;

  StatsBlock proto{std::vector<numerics::RunningStats>(2)};
  const auto total = parallel::run_blocks(
      stream, reps, policy, proto, [&](RandomStream& rng, std::uint64_t count, StatsBlock& acc) {
        std::vector<ExcursionPoint> points;
        for (std::uint64_t r = 0; r < count; ++r) {
          points.clear();
          sample_truncated_points(rng, model, zeta, 10'000'000, points);
          numerics::CompensatedSum f;
          std::uint64_t inside = 0;
          for (const auto& p : points) {
            f.add(alpha * p.tau * p.length);
            if (p.tau <= 0.5 * zeta && p.length >= lo && p.length <= hi) ++inside;
          }
          acc.stats[0].add(std::exp(-f.value()));
          acc.stats[1].add(static_cast<double>(inside));
        }
      });

  const nlohmann::json config{{"zeta", zeta}, {"lambda", lambda}, {"alpha", alpha},
                              {"eps", eps},   {"reps", reps}};
  PoissonFunctionalReport out;
  out.empirical = {total.stats[0].estimate(), reps, stream.seed(), config};
  out.quadrature = quadrature;
  out.difference = out.empirical.estimate.value - quadrature;
  out.rectangle_count = {total.stats[1].estimate(), reps, stream.seed(), config};
  out.rectangle_measure = rectangle_measure;
  return out;
}

}  // namespace suparea::simulate
