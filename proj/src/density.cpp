#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "suparea/analytic.hpp"
#include "suparea/density.hpp"
#include "suparea/errors.hpp"

namespace suparea::density {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kDelta = kPi / 8.0;
// e^{s x} at the contour ends must fall below e^{-37} ≈ 1e-16.
constexpr double kEndDecay = 37.0;

void check_grid(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("density: empty grid");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !std::isfinite(xs[i])) throw DomainError("density: x must be positive");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw DomainError("density: grid must be strictly increasing");
  }
}

std::vector<EstimateWithError> invert_fixed_contour(const Transform& transform,
                                                    std::span<const double> xs,
                                                    const ContourConfig& c) {
  const double mu = 2.0 * c.shape;
  const double x_min = xs.front();
  const double u_max =
      std::max(3.0, std::acosh(1.0 + kEndDecay / (x_min * mu * std::sin(kDelta))));
  const int m = c.node_count;
  const double h = u_max / m;

  std::vector<cplx> s(m + 1), ds(m + 1), f(m + 1);
  std::vector<double> ferr(m + 1);
  for (int k = 0; k <= m; ++k) {
    const cplx w(-kDelta, k * h);  // i·u − δ
    s[k] = mu * (1.0 + std::sin(w));
    ds[k] = mu * cplx(0.0, 1.0) * std::cos(w);
    const ComplexEstimate v = transform(s[k]);
    f[k] = v.value;
    ferr[k] = v.error;
  }

  std::vector<EstimateWithError> out;
  out.reserve(xs.size());
  for (double x : xs) {
    // (1/2πi) ∫ e^{sx} F(s) s'(u) du; nodes ±u are conjugate, so sum Re over u ≥ 0.
    numerics::CompensatedSum full, half;
    double prop = 0.0;
    double last = 0.0;
    for (int k = 0; k <= m; ++k) {
      const cplx e = std::exp(s[k] * x);
      const double term = (e * f[k] * ds[k] / cplx(0.0, 1.0)).real();
      const double w = k == 0 ? 1.0 : 2.0;
      full.add(w * term);
      if (k % 2 == 0) half.add(w * term);
      prop += w * std::abs(e) * std::abs(ds[k]) * ferr[k];
      if (k == m) last = std::abs(term);
    }
    const double value = h / (2.0 * kPi) * full.value();
    const double coarse = 2.0 * h / (2.0 * kPi) * half.value();
    const double error = std::abs(value - coarse) + h / (2.0 * kPi) * (prop + 2.0 * last);
    if (!std::isfinite(value)) throw ContourInstabilityError("fixed contour: non-finite value");
    out.push_back({value, error, ErrorKind::quadrature_bound});
  }
  return out;
}

// Shifted-line Fourier series with quotient-difference continued-fraction
// acceleration (de Hoog, Knight and Stokes).
EstimateWithError invert_series_acceleration(const Transform& transform, double x,
                                             const ContourConfig& c) {
  const int m = std::clamp(c.node_count / 4, 8, 60);
  const double period = 4.0 * c.shape * x;
  const double tol = 1e-14;
  const double gamma = -std::log(tol) / (2.0 * period);

  const int n = 2 * m;
  std::vector<cplx> fv(n + 1);
  double prop = 0.0;
  for (int k = 0; k <= n; ++k) {
    const ComplexEstimate v = transform(cplx(gamma, k * kPi / period));
    fv[k] = k == 0 ? 0.5 * v.value : v.value;
    prop += (k == 0 ? 0.5 : 1.0) * v.error;
  }

  // q[r][i], e[r][i]
  std::vector<std::vector<cplx>> q(m + 1, std::vector<cplx>(n + 1));
  std::vector<std::vector<cplx>> e(m + 1, std::vector<cplx>(n + 1));
  for (int i = 0; i < n; ++i) q[1][i] = fv[i + 1] / fv[i];
  for (int r = 1; r <= m; ++r) {
    if (r > 1) {
      for (int i = 0; i <= n - 2 * r + 1; ++i) q[r][i] = q[r - 1][i + 1] * e[r - 1][i + 1] / e[r - 1][i];
    }
    for (int i = 0; i <= n - 2 * r; ++i) e[r][i] = q[r][i + 1] - q[r][i] + e[r - 1][i + 1];
  }
  std::vector<cplx> d(n + 1);
  d[0] = fv[0];
  for (int r = 1; r <= m; ++r) {
    d[2 * r - 1] = -q[r][0];
    d[2 * r] = -e[r][0];
  }

  const cplx z = std::polar(1.0, kPi * x / period);
  // a[j], b[j] hold A_{j-1}, B_{j-1}.
  std::vector<cplx> a(n + 2), b(n + 2);
  a[0] = 0.0;
  b[0] = 1.0;
  a[1] = d[0];
  b[1] = 1.0;
  for (int j = 2; j <= n + 1; ++j) {
    a[j] = a[j - 1] + d[j - 1] * z * a[j - 2];
    b[j] = b[j - 1] + d[j - 1] * z * b[j - 2];
  }
  const cplx h2m = 0.5 * (1.0 + z * (d[n - 1] - d[n]));
  const cplx r2m = -h2m * (1.0 - std::sqrt(1.0 + z * d[n] / (h2m * h2m)));
  const cplx a_acc = a[n] + r2m * a[n - 1];
  const cplx b_acc = b[n] + r2m * b[n - 1];

  const double scale = std::exp(gamma * x) / period;
  const double value = scale * (a_acc / b_acc).real();
  const double previous = scale * (a[n] / b[n]).real();
  const double error = std::abs(value - previous) + scale * prop;
  if (!std::isfinite(value)) throw ContourInstabilityError("series acceleration: non-finite value");
  return {value, error, ErrorKind::quadrature_bound};
}

bool acceptable(const std::vector<EstimateWithError>& r) {
  for (const auto& v : r) {
    if (!std::isfinite(v.value) || !std::isfinite(v.error)) return false;
    if (v.error > kInstabilityTolerance) return false;
    if (v.value < -kNegativeTolerance) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(InversionMethod m) {
  return m == InversionMethod::fixed_deformed_contour ? "fixed_deformed_contour"
                                                      : "bromwich_series_acceleration";
}

InversionMethod method_from_string(std::string_view s) {
  if (s == "fixed_deformed_contour") return InversionMethod::fixed_deformed_contour;
  if (s == "bromwich_series_acceleration") return InversionMethod::bromwich_series_acceleration;
  throw DomainError("unknown inversion method: " + std::string(s));
}

void ContourConfig::validate() const {
  if (node_count < 8) throw DomainError("node_count must be >= 8");
  if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("shape must be positive");
}

nlohmann::json ContourConfig::to_json() const {
  return {{"node_count", node_count},
          {"shape", shape},
          {"method", std::string(to_string(method))},
          {"allow_fallback", allow_fallback}};
}

std::vector<EstimateWithError> invert_laplace(const Transform& transform,
                                              std::span<const double> xs,
                                              const ContourConfig& config) {
  config.validate();
  check_grid(xs);
  if (config.method == InversionMethod::fixed_deformed_contour)
    return invert_fixed_contour(transform, xs, config);
  std::vector<EstimateWithError> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(invert_series_acceleration(transform, x, config));
  return out;
}

std::vector<double> uniform_grid(double x_max, int points) {
  if (!(x_max > 0.0) || !std::isfinite(x_max)) throw DomainError("x_max must be positive");
  if (points < 1) throw DomainError("points must be >= 1");
  std::vector<double> xs(points);
  for (int i = 0; i < points; ++i) xs[i] = x_max * (i + 1) / points;
  return xs;
}

DensityGrid invert_density(std::span<const double> xs, const ContourConfig& config) {
  config.validate();
  check_grid(xs);
  const Transform psi = [](cplx s) { return analytic::psi(s); };

  std::vector<InversionMethod> order{config.method};
  if (config.allow_fallback) {
    order.push_back(config.method == InversionMethod::fixed_deformed_contour
                        ? InversionMethod::bromwich_series_acceleration
                        : InversionMethod::fixed_deformed_contour);
  }
  std::vector<EstimateWithError> values;
  InversionMethod used = config.method;
  bool ok = false;
  std::string reason = "no method attempted";
  for (InversionMethod m : order) {
    ContourConfig c = config;
    c.method = m;
    try {
      values = invert_laplace(psi, xs, c);
    } catch (const NumericalError& e) {
      reason = e.what();
      continue;
    }
    if (acceptable(values)) {
      used = m;
      ok = true;
      break;
    }
    reason = std::string(to_string(m)) + ": error bound or negative ringing beyond tolerance";
  }
  if (!ok) throw ContourInstabilityError("density inversion unstable on this grid (" + reason + ")");

  DensityGrid g;
  g.method_used = used;
  g.xs.assign(xs.begin(), xs.end());
  for (const auto& v : values) {
    g.fs.push_back(v.value);
    g.errors.push_back(v.error);
  }
  g.min_value = *std::min_element(g.fs.begin(), g.fs.end());
  for (std::size_t i = 0; i < g.xs.size(); ++i) {
    const double x = g.xs[i];
    const double f = g.fs[i];
    g.tail_diag.push_back(f > 0.0 ? std::log(f) + 1.5 * x * x - std::log(x) / 3.0
                                  : std::numeric_limits<double>::quiet_NaN());
  }

  // Trapezoid from (0, f(0+)).
  numerics::CompensatedSum m0, m1, m2;
  double px = 0.0;
  double pf = analytic::density_at_zero();
  for (std::size_t i = 0; i < g.xs.size(); ++i) {
    const double x = g.xs[i];
    const double f = g.fs[i];
    const double w = 0.5 * (x - px);
    m0.add(w * (pf + f));
    m1.add(w * (px * pf + x * f));
    m2.add(w * (px * px * pf + x * x * f));
    px = x;
    pf = f;
  }
  // Conjectured tail beyond the grid, for the closing of the integrals only.
  numerics::QuadratureConfig q;
  q.tail_cut = 1.0;
  const double x_max = g.xs.back();
  const auto tail0 = numerics::integrate_semi_infinite(
      [x_max](double t) { return analytic::conjectured_density(x_max + t); }, q);
  const auto tail1 = numerics::integrate_semi_infinite(
      [x_max](double t) { return (x_max + t) * analytic::conjectured_density(x_max + t); }, q);
  const auto tail2 = numerics::integrate_semi_infinite(
      [x_max](double t) {
        return (x_max + t) * (x_max + t) * analytic::conjectured_density(x_max + t);
      },
      q);
  g.normalization_tail_conjectural = tail0.value;
  g.normalization = m0.value() + tail0.value;
  g.mean_check = m1.value() + tail1.value;
  g.second_moment_check = m2.value() + tail2.value;
  return g;
}

double inversion_self_test(std::span<const double> xs, const ContourConfig& config) {
  const Transform f = [](cplx s) { return ComplexEstimate{1.0 / (1.0 + s), 0.0}; };
  const auto r = invert_laplace(f, xs, config);
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    worst = std::max(worst, std::abs(r[i].value - std::exp(-xs[i])));
  return worst;
}

std::vector<TailProbeRow> tail_probe(const numerics::RandomStream& stream,
                                     std::span<const double> xs, const simulate::PathConfig& cfg,
                                     const parallel::ExecutionPolicy& policy,
                                     std::uint64_t min_hits) {
  for (double x : xs) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("tail_probe: x must be >= 0");
  }
  const std::vector<double> samples = simulate::sample_areas(stream, cfg, policy);
  const double n = static_cast<double>(samples.size());
  std::vector<TailProbeRow> rows;
  for (double x : xs) {
    TailProbeRow row;
    row.x = x;
    row.hits = static_cast<std::uint64_t>(
        std::count_if(samples.begin(), samples.end(), [x](double a) { return a > x; }));
    const double p = static_cast<double>(row.hits) / n;
    nlohmann::json config = cfg.to_json();
    config["x"] = x;
    row.probability = {{p, std::sqrt(p * (1.0 - p) / n), ErrorKind::statistical_stderr},
                       samples.size(),
                       stream.seed(),
                       config};
    row.log_p = std::log(p);
    if (x > 0.0 && row.hits > 0) {
      const double lead = analytic::tail_log_asymptote(x);
      row.ratio = row.log_p / lead;
      row.inverse_ratio = lead / row.log_p;
    }
    if (x > 0.0 && row.hits < min_hits) row.status = ProbeStatus::insufficient_hits;
    rows.push_back(row);
  }
  return rows;
}

ConjectureSummary conjecture_diagnostic(const DensityGrid& grid, double x_lo) {
  ConjectureSummary out;
  out.x_lo = x_lo;
  out.reference_constant = analytic::conjectured_density_prefactor();
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < grid.xs.size(); ++i) {
    const double x = grid.xs[i];
    const double f = grid.fs[i];
    if (x < x_lo || !(f > 0.0)) continue;
    lx.push_back(std::log(x));
    ly.push_back(std::log(f) + 1.5 * x * x);
    out.x_hi = x;
  }
  out.points = lx.size();
  if (lx.size() < 3) {
    out.status = "insufficient range";
    return out;
  }
  const double k = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) {
    out.status = "insufficient range";
    return out;
  }
  out.slope = sxy / sxx;
  const double intercept = my - out.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - intercept - out.slope * lx[i];
    rss += r * r;
  }
  out.slope_stderr = std::sqrt(rss / (k - 2.0) / sxx);
  out.constant = std::exp(intercept);
  out.sufficient = true;
  out.status = "ok";
  return out;
}

}  // namespace suparea::density
