#include "suparea/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>

#include <CLI11.hpp>

#include "suparea/analytic.hpp"
#include "suparea/cli/output.hpp"
#include "suparea/density.hpp"
#include "suparea/errors.hpp"
#include "suparea/simulate.hpp"
#include "suparea/version.hpp"

namespace suparea::cli {
namespace {

using nlohmann::json;

struct Globals {
  std::uint64_t seed = 20240521;
  unsigned threads = 1;
  std::string format = "csv";
  std::string out = "-";
  int precision = 12;
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  std::string verbosity = "info";
};

struct MomentsOpts {
  int max_n = 4;
};

struct PsiOpts {
  double s_min = 0.0;
  double s_max = 8.0;
  double step = 0.1;
  std::string method = "both";
};

struct Theorem1Opts {
  std::vector<double> alphas{0.5, 1.0, 2.0};
  std::vector<double> lambdas{0.5, 1.0, 2.0};
  std::vector<double> betas{0.5, 2.0};
};

struct McOpts {
  std::string engine;
  std::uint64_t reps = 100000;
  std::uint64_t block_size = 4096;
  // paths, scaling, tail
  std::int64_t steps = 0;  // 0: engine default
  double horizon = 1.0;
  std::string scheme = "trapezoid";
  bool bridge = false;
  bool no_bridge = false;
  int max_order = 4;
  std::vector<double> horizons{0.25, 1.0, 4.0};
  std::vector<double> xs{0.8, 1.0, 1.2};
  std::uint64_t min_hits = 100;
  // excursion, lemma_check
  double alpha = 1.0;
  double lambda = 1.0;
  double eps = 0.0;  // 0: engine default
  bool no_compensate = false;
  double zeta = 1.0;
  std::uint64_t point_cap = 10'000'000;
  std::int64_t path_steps = 0;
  std::vector<double> gamma_lambdas{0.5, 1.0, 2.0};
};

struct DensityOpts {
  double x_max = 3.0;
  int points = 300;
  int nodes = 192;
  double shape = 1.0;
  std::string method = "fixed_deformed_contour";
  bool no_fallback = false;
  bool self_test = false;
  double x_lo = 0.8;
};

OutputSpec output_spec(const Globals& g) {
  OutputSpec spec;
  if (g.format == "csv")
    spec.format = Format::csv;
  else if (g.format == "json")
    spec.format = Format::json;
  else
    throw DomainError("format must be csv or json");
  spec.destination = g.out;
  spec.precision = g.precision;
  spec.validate();
  return spec;
}

numerics::QuadratureConfig quadrature(const Globals& g) {
  numerics::QuadratureConfig q = analytic::theorem1_quadrature();
  q.rel_tol = g.rel_tol;
  q.abs_tol = g.abs_tol;
  q.validate();
  return q;
}

json base_config(const Globals& g, const std::string& command) {
  return {{"version", kVersion},         {"command", command},         {"seed", g.seed},
          {"threads", g.threads},        {"format", g.format},         {"precision", g.precision},
          {"rel_tol", g.rel_tol},        {"abs_tol", g.abs_tol}};
}

parallel::ExecutionPolicy policy(const Globals& g, const McOpts& o) {
  parallel::ExecutionPolicy p;
  p.threads = g.threads;
  p.block_size = o.block_size;
  p.validate();
  return p;
}

double z_score(double estimate, double stderr_, double reference) {
  if (stderr_ > 0.0) return (estimate - reference) / stderr_;
  return estimate == reference ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), estimate - reference);
}

// ---------------------------------------------------------------------------

int cmd_moments(const Globals& g, const MomentsOpts& o, Table& t) {
  if (o.max_n < 0) throw DomainError("--max-n must be >= 0");
  t.config = base_config(g, "moments");
  t.config["max_n"] = o.max_n;
  t.columns = {"n", "exact", "log_exact", "asymptote", "ratio"};
  for (int n = 0; n <= o.max_n; ++n) {
    const auto m = analytic::exact_moment(n);
    if (n == 0) {
      t.add_row({std::int64_t{0}, m.value, m.log_value, std::monostate{}, std::monostate{}});
      continue;
    }
    const double la = analytic::log_moment_asymptote(n);
    t.add_row({std::int64_t{n}, m.value, m.log_value, std::exp(la), std::exp(m.log_value - la)});
  }
  return kExitOk;
}

int cmd_psi(const Globals& g, const PsiOpts& o, Table& t) {
  if (!(o.s_min >= 0.0) || !(o.s_max > o.s_min)) throw DomainError("need 0 <= s_min < s_max");
  if (!(o.step > 0.0)) throw DomainError("--step must be positive");
  const std::vector<std::string> methods{"series", "hypergeometric", "both", "auto"};
  if (std::find(methods.begin(), methods.end(), o.method) == methods.end())
    throw DomainError("--method must be series, hypergeometric, both or auto");
  t.config = base_config(g, "psi");
  t.config.update({{"s_min", o.s_min}, {"s_max", o.s_max}, {"step", o.step}, {"method", o.method}});
  if (o.method == "both")
    t.columns = {"s", "psi_series", "psi_hypergeometric", "abs_diff"};
  else
    t.columns = {"s", "psi", "error"};

  const auto count = static_cast<std::int64_t>(std::floor((o.s_max - o.s_min) / o.step + 1e-9));
  double max_diff = 0.0;
  bool decreasing = true;
  double previous = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i <= count; ++i) {
    const double s = o.s_min + static_cast<double>(i) * o.step;
    double value;
    if (o.method == "both") {
      const auto a = analytic::psi_series(s);
      const auto b = analytic::psi_hypergeometric(s);
      const double d = std::abs(a.value - b.value);
      max_diff = std::max(max_diff, d);
      value = a.value;
      t.add_row({s, a.value, b.value, d});
    } else {
      const EstimateWithError e = o.method == "series"           ? analytic::psi_series(s)
                                  : o.method == "hypergeometric" ? analytic::psi_hypergeometric(s)
                                                                 : analytic::psi(s);
      value = e.value;
      t.add_row({s, e.value, e.error});
    }
    if (!(value < previous)) decreasing = false;
    previous = value;
  }
  t.summary["rows"] = count + 1;
  t.summary["decreasing"] = decreasing;
  if (o.method == "both") t.summary["max_abs_diff"] = max_diff;
  return kExitOk;
}

int cmd_verify_theorem1(const Globals& g, const Theorem1Opts& o, Table& t) {
  if (o.alphas.empty() || o.lambdas.empty()) throw DomainError("empty (alpha, lambda) grid");
  for (double b : o.betas)
    if (!(b > 0.0)) throw DomainError("betas must be positive");
  const auto q = quadrature(g);
  t.config = base_config(g, "verify-theorem1");
  t.config.update({{"alphas", o.alphas}, {"lambdas", o.lambdas}, {"betas", o.betas}});
  t.columns = {"alpha", "lambda", "lhs", "lhs_error", "rhs", "rhs_error", "abs_diff",
               "combined_bound", "rel_bound", "beta_invariance_rel", "pass", "beta_pass"};
  bool all = true;
  constexpr double kRelBoundLimit = 1e-6;
  for (double a : o.alphas) {
    for (double l : o.lambdas) {
      const analytic::DoubleLaplaceParams p{a, l};
      const auto lhs = analytic::theorem1_lhs(p, q);
      const auto rhs = analytic::theorem1_rhs(p, q);
      const double diff = std::abs(lhs.value - rhs.value);
      const double bound = lhs.error + rhs.error;
      const double rel_bound = bound / std::abs(rhs.value);
      double invariance = 0.0;
      for (double b : o.betas) {
        const analytic::DoubleLaplaceParams pb{std::pow(b, 1.5) * a, b * l};
        const double lb = b * analytic::theorem1_lhs(pb, q).value;
        const double rb = b * analytic::theorem1_rhs(pb, q).value;
        invariance = std::max({invariance, std::abs(lhs.value - lb) / std::abs(lhs.value),
                               std::abs(rhs.value - rb) / std::abs(rhs.value)});
      }
      const bool pass = diff <= bound && rel_bound <= kRelBoundLimit;
      const bool beta_pass = invariance <= kRelBoundLimit;
      all = all && pass && beta_pass;
      t.add_row({a, l, lhs.value, lhs.error, rhs.value, rhs.error, diff, bound, rel_bound,
                 invariance, pass, beta_pass});
    }
  }
  t.summary["all_pass"] = all;
  return all ? kExitOk : kExitVerificationFailure;
}

simulate::PathConfig path_config(const McOpts& o, std::int64_t default_steps, bool default_bridge) {
  simulate::PathConfig c;
  c.horizon = o.horizon;
  c.steps = o.steps > 0 ? o.steps : default_steps;
  c.scheme = simulate::scheme_from_string(o.scheme);
  c.replications = o.reps;
  c.bridge_maximum = o.bridge ? true : o.no_bridge ? false : default_bridge;
  c.validate();
  return c;
}

int mc_paths(const Globals& g, const McOpts& o, Table& t) {
  const auto cfg = path_config(o, 10000, false);
  const numerics::RandomStream stream(g.seed);
  const auto reports = simulate::estimate_moments_mc(stream, cfg, o.max_order, policy(g, o));
  t.config.update(cfg.to_json());
  t.config["max_order"] = o.max_order;
  t.columns = {"order", "estimate", "stderr", "reference", "bias_allowance", "z_raw", "z_corrected", "within"};
  for (int k = 0; k <= o.max_order; ++k) {
    const auto& r = reports[k];
    const double ref = analytic::exact_moment(k).value * std::pow(cfg.horizon, 1.5 * k);
    const double se = r.estimate.error;
    Cell allowance = std::monostate{};
    Cell zc = std::monostate{};
    Cell within = std::monostate{};
    const double z = z_score(r.estimate.value, se, ref);
    if (k == 1 || k == 2) {
      const double b = k == 1 ? simulate::path_mean_bias(cfg) : simulate::path_second_moment_bias(cfg);
      allowance = b;
      zc = z_score(r.estimate.value, se, ref - b);
      within = r.estimate.value >= ref - b - 3.0 * se && r.estimate.value <= ref + 3.0 * se;
    }
    t.add_row({std::int64_t{k}, r.estimate.value, se, ref, allowance, z, zc, within});
  }
  return kExitOk;
}

int mc_excursion(const Globals& g, const McOpts& o, Table& t) {
  simulate::ExcursionConfig cfg;
  cfg.params = {o.alpha, o.lambda};
  cfg.length_floor = o.eps > 0.0 ? o.eps : 1e-4;
  cfg.compensate = !o.no_compensate;
  cfg.replications = o.reps;
  cfg.point_cap = o.point_cap;
  cfg.validate();
  const auto pol = policy(g, o);
  const numerics::RandomStream root(g.seed);
  t.config.update(cfg.to_json());
  t.config["zeta"] = o.zeta;
  t.config["path_steps"] = o.path_steps;
  t.columns = {"quantity", "estimate", "stderr", "reference", "z"};

  const auto mt = simulate::estimate_marked_time_lt(root.child(0), cfg, pol);
  const double ref = cfg.params.lambda * analytic::theorem1_rhs(cfg.params, quadrature(g)).value;
  t.add_row({std::string("marked_time_lt"), mt.estimate.value, mt.estimate.error, ref,
             z_score(mt.estimate.value, mt.estimate.error, ref)});

  const auto a1 = simulate::estimate_conditional_a_prime_lt(root.child(1), cfg, o.zeta, pol);
  const double r1 = analytic::conditional_lt_a_prime(cfg.params, o.zeta);
  t.add_row({std::string("conditional_a_prime_lt"), a1.estimate.value, a1.estimate.error, r1,
             z_score(a1.estimate.value, a1.estimate.error, r1)});

  const auto a2 = simulate::estimate_conditional_a_double_prime_lt(root.child(2), cfg.params, o.zeta,
                                                                   cfg.replications, pol);
  const double r2 = analytic::conditional_lt_a_double_prime(cfg.params, o.zeta);
  t.add_row({std::string("conditional_a_double_prime_lt"), a2.estimate.value, a2.estimate.error, r2,
             z_score(a2.estimate.value, a2.estimate.error, r2)});

  if (o.path_steps > 0) {
    simulate::PathConfig pc;
    pc.steps = o.path_steps;
    pc.replications = o.reps;
    pc.scheme = simulate::Scheme::trapezoid;
    pc.bridge_maximum = true;
    const auto cross = simulate::estimate_path_marked_time_lt(root.child(3), pc, cfg.params, pol);
    const double se = std::hypot(cross.estimate.error, mt.estimate.error);
    t.add_row({std::string("path_marked_time_lt"), cross.estimate.value, cross.estimate.error,
               mt.estimate.value, z_score(cross.estimate.value, se, mt.estimate.value)});
  }
  return kExitOk;
}

int mc_scaling(const Globals& g, const McOpts& o, Table& t) {
  const auto cfg = path_config(o, 1000, false);
  const numerics::RandomStream stream(g.seed);
  const auto reports = simulate::scaling_check(stream, cfg, o.horizons, policy(g, o));
  t.config.update(cfg.to_json());
  t.config.erase("horizon");
  t.config["horizons"] = o.horizons;
  t.columns = {"horizon", "mean_scaled", "stderr", "reference", "z_vs_first"};
  const double ref = analytic::exact_moment(1).value;
  double max_z = 0.0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& e = reports[i].estimate;
    const auto& f = reports[0].estimate;
    const double z = i == 0 ? 0.0 : (e.value - f.value) / std::hypot(e.error, f.error);
    t.add_row({o.horizons[i], e.value, e.error, ref, z});
    for (std::size_t j = 0; j < i; ++j) {
      const auto& p = reports[j].estimate;
      max_z = std::max(max_z, std::abs(e.value - p.value) / std::hypot(e.error, p.error));
    }
  }
  t.summary["max_pairwise_z"] = max_z;
  t.summary["grid_bias_per_unit_horizon"] = simulate::path_mean_bias({1.0, cfg.steps, cfg.scheme, 1, cfg.bridge_maximum});
  return kExitOk;
}

int mc_lemma_check(const Globals& g, const McOpts& o, Table& t) {
  const double eps = o.eps > 0.0 ? o.eps : 1e-3;
  const auto q = quadrature(g);
  t.config["zeta"] = o.zeta;
  t.config["lambda"] = o.lambda;
  t.config["alpha"] = o.alpha;
  t.config["eps"] = eps;
  t.config["reps"] = o.reps;
  t.config["gamma_lambdas"] = o.gamma_lambdas;
  t.columns = {"check", "lambda", "value", "error", "reference", "abs_diff", "z"};
  for (double l : o.gamma_lambdas) {
    if (!(l > 0.0)) throw DomainError("gamma lambdas must be positive");
    const auto r = numerics::integrate_semi_infinite(
        [l](double x) { return -std::expm1(-l * x) / (x * std::sqrt(x)); }, q);
    const double ref = 2.0 * std::sqrt(std::numbers::pi * l);
    t.add_row({std::string("gamma_integral"), l, r.value, r.error, ref, std::abs(r.value - ref),
               std::monostate{}});
  }
  const auto rep = simulate::poisson_functional_check(numerics::RandomStream(g.seed), o.zeta, o.lambda,
                                                      o.alpha, eps, o.reps, policy(g, o));
  const auto& e = rep.empirical.estimate;
  t.add_row({std::string("poisson_functional"), o.lambda, e.value, e.error, rep.quadrature,
             std::abs(rep.difference), z_score(e.value, e.error, rep.quadrature)});
  const auto& c = rep.rectangle_count.estimate;
  t.add_row({std::string("rectangle_count"), o.lambda, c.value, c.error, rep.rectangle_measure,
             std::abs(c.value - rep.rectangle_measure), z_score(c.value, c.error, rep.rectangle_measure)});
  return kExitOk;
}

int mc_tail(const Globals& g, const McOpts& o, Table& t) {
  const auto cfg = path_config(o, 256, true);
  const auto rows = density::tail_probe(numerics::RandomStream(g.seed), o.xs, cfg, policy(g, o), o.min_hits);
  t.config.update(cfg.to_json());
  t.config["xs"] = o.xs;
  t.config["min_hits"] = o.min_hits;
  t.columns = {"x", "hits", "p", "stderr", "log_p", "leading_log_p", "ratio", "inverse_ratio", "status"};
  bool short_of_hits = false;
  for (const auto& r : rows) {
    const bool ok = r.status == density::ProbeStatus::ok;
    short_of_hits = short_of_hits || !ok;
    t.add_row({r.x, r.hits, r.probability.estimate.value, r.probability.estimate.error, r.log_p,
               r.x > 0.0 ? Cell{analytic::tail_log_asymptote(r.x)} : Cell{0.0}, r.ratio,
               r.inverse_ratio, std::string(ok ? "ok" : "insufficient_hits")});
  }
  return short_of_hits ? kExitBudget : kExitOk;
}

int cmd_mc(const Globals& g, const McOpts& o, Table& t) {
  t.config = base_config(g, "mc");
  t.config["engine"] = o.engine;
  t.config["block_size"] = o.block_size;
  if (o.reps < 1) throw DomainError("--reps must be >= 1");
  if (o.bridge && o.no_bridge) throw DomainError("--bridge and --no-bridge are exclusive");
  if (o.engine == "paths") return mc_paths(g, o, t);
  if (o.engine == "excursion") return mc_excursion(g, o, t);
  if (o.engine == "scaling") return mc_scaling(g, o, t);
  if (o.engine == "lemma_check") return mc_lemma_check(g, o, t);
  if (o.engine == "tail") return mc_tail(g, o, t);
  throw DomainError("unknown engine: " + o.engine);
}

int cmd_density(const Globals& g, const DensityOpts& o, Table& t) {
  density::ContourConfig c;
  c.node_count = o.nodes;
  c.shape = o.shape;
  c.method = density::method_from_string(o.method);
  c.allow_fallback = !o.no_fallback;
  c.validate();
  t.config = base_config(g, "density");
  t.config.update(c.to_json());
  t.config["self_test"] = o.self_test;

  if (o.self_test) {
    const auto xs = density::uniform_grid(5.0, 50);
    const density::Transform f = [](std::complex<double> s) {
      return ComplexEstimate{1.0 / (1.0 + s), 0.0};
    };
    const auto r = density::invert_laplace(f, xs, c);
    t.columns = {"x", "inverted", "exact", "abs_error"};
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double exact = std::exp(-xs[i]);
      const double e = std::abs(r[i].value - exact);
      worst = std::max(worst, e);
      t.add_row({xs[i], r[i].value, exact, e});
    }
    constexpr double kSelfTestTolerance = 1e-6;
    t.summary["max_abs_error"] = worst;
    t.summary["tolerance"] = kSelfTestTolerance;
    t.summary["pass"] = worst <= kSelfTestTolerance;
    return worst <= kSelfTestTolerance ? kExitOk : kExitVerificationFailure;
  }

  const auto xs = density::uniform_grid(o.x_max, o.points);
  t.config["x_max"] = o.x_max;
  t.config["points"] = o.points;
  t.config["x_lo_conjectural"] = o.x_lo;
  const auto grid = density::invert_density(xs, c);
  t.columns = {"x", "f", "error", "tail_diag_conjectural", "conjectured_density_conjectural"};
  for (std::size_t i = 0; i < grid.xs.size(); ++i) {
    t.add_row({grid.xs[i], grid.fs[i], grid.errors[i], grid.tail_diag[i],
               analytic::conjectured_density(grid.xs[i])});
  }
  const auto d = density::conjecture_diagnostic(grid, o.x_lo);
  t.summary = {{"method_used", std::string(density::to_string(grid.method_used))},
               {"normalization", grid.normalization},
               {"normalization_tail_conjectural", grid.normalization_tail_conjectural},
               {"mean_check", grid.mean_check},
               {"mean_reference", analytic::exact_moment(1).value},
               {"second_moment_check", grid.second_moment_check},
               {"second_moment_reference", analytic::exact_moment(2).value},
               {"min_value", grid.min_value},
               {"status_conjectural", d.status},
               {"points_conjectural", d.points},
               {"slope_conjectural", d.slope},
               {"slope_stderr_conjectural", d.slope_stderr},
               {"constant_conjectural", d.constant},
               {"reference_slope_conjectural", d.reference_slope},
               {"reference_constant_conjectural", d.reference_constant}};
  return kExitOk;
}

void emit(const Table& t, const OutputSpec& spec, std::ostream& out) {
  if (spec.destination == "-") {
    write_table(t, spec, out);
    return;
  }
  std::ofstream file(spec.destination, std::ios::binary);
  if (!file) throw DomainError("cannot open output file: " + spec.destination);
  write_table(t, spec, file);
  if (!file) throw DomainError("failed writing output file: " + spec.destination);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distribution of the area under the Brownian supremum process", "suparea"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for Monte Carlo")
      ->check(CLI::Range(1u, 4096u))
      ->capture_default_str();
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", g.out, "Output path, - for stdout")->capture_default_str();
  app.add_option("--precision", g.precision, "Significant digits")
      ->check(CLI::Range(6, 17))
      ->capture_default_str();
  app.add_option("--rel-tol", g.rel_tol, "Quadrature relative tolerance")->capture_default_str();
  app.add_option("--abs-tol", g.abs_tol, "Quadrature absolute tolerance")->capture_default_str();
  app.add_option("--verbosity", g.verbosity, "Log level on stderr")
      ->check(CLI::IsMember({"quiet", "info"}))
      ->capture_default_str();

  MomentsOpts mo;
  auto* moments = app.add_subcommand("moments", "Exact moments and their Stirling asymptote");
  moments->add_option("--max-n", mo.max_n, "Highest order")->capture_default_str();

  PsiOpts po;
  auto* psi = app.add_subcommand("psi", "Laplace transform curve");
  psi->add_option("--s-min", po.s_min)->capture_default_str();
  psi->add_option("--s-max", po.s_max)->capture_default_str();
  psi->add_option("--step", po.step)->capture_default_str();
  psi->add_option("--method", po.method, "series, hypergeometric, both or auto")->capture_default_str();

  Theorem1Opts to;
  auto* th = app.add_subcommand("verify-theorem1", "Double Laplace transform identity on a grid");
  th->add_option("--alphas", to.alphas)->delimiter(',')->capture_default_str();
  th->add_option("--lambdas", to.lambdas)->delimiter(',')->capture_default_str();
  th->add_option("--betas", to.betas, "Scalings for the invariance column")->delimiter(',')->capture_default_str();

  McOpts mc;
  auto* mcc = app.add_subcommand("mc", "Monte Carlo engines");
  mcc->add_option("--engine", mc.engine)
      ->required()
      ->check(CLI::IsMember({"paths", "excursion", "scaling", "lemma_check", "tail"}));
  mcc->add_option("--reps", mc.reps)->capture_default_str();
  mcc->add_option("--block-size", mc.block_size)->capture_default_str();
  mcc->add_option("--steps", mc.steps, "Grid steps (engine default if omitted)");
  mcc->add_option("--horizon", mc.horizon)->capture_default_str();
  mcc->add_option("--scheme", mc.scheme)->check(CLI::IsMember({"left_rectangle", "trapezoid"}))->capture_default_str();
  mcc->add_flag("--bridge", mc.bridge, "Bridge-maximum correction on");
  mcc->add_flag("--no-bridge", mc.no_bridge, "Bridge-maximum correction off");
  mcc->add_option("--max-order", mc.max_order)->capture_default_str();
  mcc->add_option("--horizons", mc.horizons)->delimiter(',')->capture_default_str();
  mcc->add_option("--xs", mc.xs)->delimiter(',')->capture_default_str();
  mcc->add_option("--min-hits", mc.min_hits)->capture_default_str();
  mcc->add_option("--alpha", mc.alpha)->capture_default_str();
  mcc->add_option("--lambda", mc.lambda)->capture_default_str();
  mcc->add_option("--eps", mc.eps, "Excursion length floor (engine default if omitted)");
  mcc->add_flag("--no-compensate", mc.no_compensate);
  mcc->add_option("--zeta", mc.zeta)->capture_default_str();
  mcc->add_option("--point-cap", mc.point_cap)->capture_default_str();
  mcc->add_option("--path-steps", mc.path_steps, "Also run the path-engine cross-check")->capture_default_str();
  mcc->add_option("--gamma-lambdas", mc.gamma_lambdas)->delimiter(',')->capture_default_str();

  DensityOpts dopt;
  auto* den = app.add_subcommand("density", "Density by Laplace inversion");
  den->add_option("--x-max", dopt.x_max)->capture_default_str();
  den->add_option("--points", dopt.points)->capture_default_str();
  den->add_option("--nodes", dopt.nodes)->capture_default_str();
  den->add_option("--shape", dopt.shape)->capture_default_str();
  den->add_option("--method", dopt.method)
      ->check(CLI::IsMember({"fixed_deformed_contour", "bromwich_series_acceleration"}))
      ->capture_default_str();
  den->add_flag("--no-fallback", dopt.no_fallback);
  den->add_flag("--self-test", dopt.self_test, "Invert 1/(1+s) and compare with e^-x");
  den->add_option("--x-lo", dopt.x_lo, "Start of the tail-fit range")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const OutputSpec spec = output_spec(g);
    Table t;
    int code = kExitOk;
    if (*moments)
      code = cmd_moments(g, mo, t);
    else if (*psi)
      code = cmd_psi(g, po, t);
    else if (*th)
      code = cmd_verify_theorem1(g, to, t);
    else if (*mcc)
      code = cmd_mc(g, mc, t);
    else
      code = cmd_density(g, dopt, t);
    emit(t, spec, out);
    if (g.verbosity == "info") {
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      err << "[info] " << t.config["command"].get<std::string>() << ": " << t.rows.size() << " rows, "
          << format_double(secs, 3) << " s, exit " << code << '\n';
    }
    return code;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BudgetError& e) {
    err << "budget: " << e.what() << '\n';
    return kExitBudget;
  } catch (const NumericalError& e) {
    err << "numerical: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace suparea::cli
