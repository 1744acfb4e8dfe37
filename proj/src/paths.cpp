#include <cmath>
#include <string>

#include "suparea/simulate.hpp"

namespace suparea::simulate {
namespace {

struct StatsBlock {
  std::vector<numerics::RunningStats> stats;
  void merge(const StatsBlock& o) {
    for (std::size_t i = 0; i < stats.size(); ++i) stats[i].merge(o.stats[i]);
  }
};

struct SampleBlock {
  std::vector<double> values;
  void merge(const SampleBlock& o) { values.insert(values.end(), o.values.begin(), o.values.end()); }
};

McReport make_report(const numerics::RunningStats& s, const RandomStream& stream,
                     nlohmann::json config) {
  return {s.estimate(), s.count(), stream.seed(), std::move(config)};
}

}  // namespace

std::string_view to_string(Scheme s) {
  return s == Scheme::left_rectangle ? "left_rectangle" : "trapezoid";
}

Scheme scheme_from_string(std::string_view s) {
  if (s == "left_rectangle") return Scheme::left_rectangle;
  if (s == "trapezoid") return Scheme::trapezoid;
  throw DomainError("unknown scheme: " + std::string(s));
}

void PathConfig::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive");
  if (steps < 2) throw DomainError("steps must be >= 2");
  if (replications < 1) throw DomainError("replications must be >= 1");
}

nlohmann::json PathConfig::to_json() const {
  return {{"horizon", horizon},
          {"steps", steps},
          {"scheme", std::string(to_string(scheme))},
          {"replications", replications},
          {"bridge_maximum", bridge_maximum}};
}

double path_mean_bias(const PathConfig& cfg) {
  if (cfg.bridge_maximum) return 0.0;
  return kGridMaximumBias * std::sqrt(cfg.horizon / static_cast<double>(cfg.steps)) * cfg.horizon;
}

double path_second_moment_bias(const PathConfig& cfg) {
  const double mean = analytic::exact_moment(1).value * std::pow(cfg.horizon, 1.5);
  return 2.0 * mean * path_mean_bias(cfg);
}

std::vector<McReport> estimate_moments_mc(const RandomStream& stream, const PathConfig& cfg,
                                          int max_order, const ExecutionPolicy& policy) {
  cfg.validate();
  if (max_order < 0 || max_order > 8) throw DomainError("max_order must be in [0, 8]");
  std::vector<McReport> out;
  nlohmann::json config = cfg.to_json();
  config["max_order"] = max_order;
  // Order 0 is exact and consumes no randomness.
  out.push_back({{1.0, 0.0, ErrorKind::statistical_stderr}, cfg.replications, stream.seed(), config});
  if (max_order == 0) return out;
  StatsBlock proto{std::vector<numerics::RunningStats>(max_order)};
  const auto total = parallel::run_blocks(
      stream, cfg.replications, policy, proto,
      [&cfg, max_order](RandomStream& rng, std::uint64_t count, StatsBlock& acc) {
        for (std::uint64_t r = 0; r < count; ++r) {
          const double a = simulate_area_path(rng, cfg);
          double p = 1.0;
          for (int k = 0; k < max_order; ++k) {
            p *= a;
            acc.stats[k].add(p);
          }
        }
      });
  for (int k = 0; k < max_order; ++k) out.push_back(make_report(total.stats[k], stream, config));
  return out;
}

std::vector<double> sample_areas(const RandomStream& stream, const PathConfig& cfg,
                                 const ExecutionPolicy& policy) {
  cfg.validate();
  return parallel::run_blocks(stream, cfg.replications, policy, SampleBlock{},
                              [&cfg](RandomStream& rng, std::uint64_t count, SampleBlock& acc) {
                                acc.values.reserve(count);
                                for (std::uint64_t r = 0; r < count; ++r)
                                  acc.values.push_back(simulate_area_path(rng, cfg));
                              })
      .values;
}

std::vector<McReport> scaling_check(const RandomStream& stream, const PathConfig& cfg,
                                    std::span<const double> horizons,
                                    const ExecutionPolicy& policy) {
  cfg.validate();
  if (horizons.size() < 2) throw DomainError("scaling_check: need at least two horizons");
  std::vector<McReport> out;
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    PathConfig c = cfg;
    c.horizon = horizons[i];
    c.validate();
    const double norm = std::pow(c.horizon, -1.5);
    StatsBlock proto{std::vector<numerics::RunningStats>(1)};
    const auto total = parallel::run_blocks(
        stream.child(i), c.replications, policy, proto,
        [&c, norm](RandomStream& rng, std::uint64_t count, StatsBlock& acc) {
          for (std::uint64_t r = 0; r < count; ++r) acc.stats[0].add(simulate_area_path(rng, c) * norm);
        });
    out.push_back(make_report(total.stats[0], stream, c.to_json()));
  }
  return out;
}

McReport estimate_path_marked_time_lt(const RandomStream& stream, const PathConfig& cfg,
                                      const analytic::DoubleLaplaceParams& params,
                                      const ExecutionPolicy& policy) {
  cfg.validate();
  params.validate();
  StatsBlock proto{std::vector<numerics::RunningStats>(1)};
  const auto total = parallel::run_blocks(
      stream, cfg.replications, policy, proto,
      [&cfg, &params](RandomStream& rng, std::uint64_t count, StatsBlock& acc) {
        PathConfig c = cfg;
        for (std::uint64_t r = 0; r < count; ++r) {
          c.horizon = numerics::sample_exponential(rng, params.lambda);
          acc.stats[0].add(std::exp(-params.alpha * simulate_area_path(rng, c)));
        }
      });
  nlohmann::json config = cfg.to_json();
  config.erase("horizon");
  config["alpha"] = params.alpha;
  config["lambda"] = params.lambda;
  return make_report(total.stats[0], stream, config);
}

}  // namespace suparea::simulate
