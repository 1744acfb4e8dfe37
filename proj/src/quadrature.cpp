#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "suparea/numerics.hpp"

namespace suparea::numerics {
namespace {

// Gauss–Kronrod 7/15 nodes on [-1, 1] (nonnegative half).
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const RealFunction& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

// Several pieces are refined under one shared budget and one global tolerance.
EstimateWithError integrate_pieces(const std::vector<std::pair<RealFunction, std::array<double, 2>>>& pieces,
                                   const QuadratureConfig& cfg) {
  cfg.validate();
  struct Item {
    Panel panel;
    std::size_t piece;
    bool operator<(const Item& o) const { return panel < o.panel; }
  };
  std::priority_queue<Item> queue;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& [f, range] = pieces[i];
    const Panel p = gauss_kronrod(f, range[0], range[1]);
    total += p.value;
    total_err += p.error;
    queue.push({p, i});
  }
  int refinements = 0;
  while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
    if (refinements >= cfg.max_refinements || !std::isfinite(total)) {
      throw ConvergenceError("quadrature: refinement budget exhausted",
                             {total, total_err, ErrorKind::quadrature_bound});
    }
    const Item worst = queue.top();
    queue.pop();
    const auto& f = pieces[worst.piece].first;
    const double mid = 0.5 * (worst.panel.a + worst.panel.b);
    const Panel left = gauss_kronrod(f, worst.panel.a, mid);
    const Panel right = gauss_kronrod(f, mid, worst.panel.b);
    total += left.value + right.value - worst.panel.value;
    total_err += left.error + right.error - worst.panel.error;
    queue.push({left, worst.piece});
    queue.push({right, worst.piece});
    ++refinements;
  }
  // Re-sum to shed drift from the running updates.
  CompensatedSum value;
  double err = 0.0;
  while (!queue.empty()) {
    value.add(queue.top().panel.value);
    err += queue.top().panel.error;
    queue.pop();
  }
  return {value.value(), err, ErrorKind::quadrature_bound};
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("quadrature: rel_tol must be positive");
  if (!(abs_tol > 0.0)) throw DomainError("quadrature: abs_tol must be positive");
  if (max_refinements < 1) throw DomainError("quadrature: max_refinements must be >= 1");
  if (!(tail_cut > 0.0)) throw DomainError("quadrature: tail_cut must be positive");
}

EstimateWithError integrate(const RealFunction& f, double a, double b,
                            const QuadratureConfig& cfg) {
  if (a == b) return {0.0, 0.0, ErrorKind::quadrature_bound};
  return integrate_pieces({{f, {a, b}}}, cfg);
}

EstimateWithError integrate_sqrt_endpoint(const RealFunction& f, double a, double b,
                                          const QuadratureConfig& cfg) {
  if (a == b) return {0.0, 0.0, ErrorKind::quadrature_bound};
  const RealFunction mapped = [&f, a](double u) { return 2.0 * u * f(a + u * u); };
  return integrate_pieces({{mapped, {0.0, std::sqrt(b - a)}}}, cfg);
}

EstimateWithError integrate_semi_infinite(const RealFunction& f, const QuadratureConfig& cfg) {
  cfg.validate();
  const double cut = cfg.tail_cut;
  const RealFunction head = [&f](double u) { return 2.0 * u * f(u * u); };
  const RealFunction tail = [&f, cut](double t) {
    const double x = cut / (t * t);
    if (!std::isfinite(x)) return 0.0;
    const double fx = f(x);
    if (fx == 0.0) return 0.0;
    return fx * 2.0 * cut / (t * t * t);
  };
  return integrate_pieces({{head, {0.0, std::sqrt(cut)}}, {tail, {0.0, 1.0}}}, cfg);
}

}  // namespace suparea::numerics
