#include "bimeans/sharp_bounds.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "bimeans/bisection.hpp"
#include "bimeans/errors.hpp"
#include "bimeans/lemma_analysis.hpp"
#include "bimeans/ulp.hpp"
#include "blend_parts.hpp"
#include "parallel.hpp"

namespace bimeans {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_residual(double residual, const char* what) {
  if (!(residual <= kConstantTolerance)) {
    throw InternalInconsistency(std::string("compute_constants: ") + what +
                                " cross-check residual exceeds 1e-12");
  }
}

RatioId ratio_for(BoundFamily family) {
  return family == BoundFamily::QA ? RatioId::R1 : RatioId::R2;
}

}  // namespace

SharpConstants compute_constants() {
  SharpConstants c;
  const double t_max = two_pow_sixth();

  c.alpha0 = alpha0_closed_form();
  c.alpha0_root = bisect([t_max](double p) { return f_p(p, t_max); }, 0.01, 0.99);
  c.alpha0_residual = std::fabs(c.alpha0 - c.alpha0_root);

  c.lambda0 = lambda0_closed_form();
  c.lambda0_root = bisect([t_max](double p) { return F_p(p, t_max); }, 0.01, 0.99);
  c.lambda0_residual = std::fabs(c.lambda0 - c.lambda0_root);

  c.p0 = solve_p0();
  c.p0_residual = std::fabs(p0_residual_function(c.p0));

  check_residual(c.alpha0_residual, "alpha0");
  check_residual(c.lambda0_residual, "lambda0");
  check_residual(c.p0_residual, "p0");
  if (!(0.0 < c.alpha0 && c.alpha0 < c.beta && c.beta < 1.0 && 0.0 < c.lambda0 &&
        c.lambda0 < c.mu && c.mu < 1.0)) {
    throw InternalInconsistency("compute_constants: constants are not ordered");
  }
  return c;
}

const SharpConstants& sharp_constants() {
  static const SharpConstants cached = compute_constants();
  return cached;
}

double lower_constant(BoundFamily family) {
  const auto& c = sharp_constants();
  return family == BoundFamily::QA ? c.alpha0 : c.lambda0;
}

double upper_constant(BoundFamily family) {
  const auto& c = sharp_constants();
  return family == BoundFamily::QA ? c.beta : c.mu;
}

double blend(double p, BoundFamily family, const PositivePair& pair) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParamOutOfRange("blend: p must lie in [0, 1]");
  if (pair.degenerate()) return pair.a();
  const NormalizedArg arg = normalize(pair);
  const double geometric = detail::sixth_root_1p(arg.x * arg.x);
  return arg.scale * (geometric + p * detail::blend_gap(family, arg.x));
}

Enclosure enclose(BoundFamily family, const PositivePair& pair) {
  Enclosure e;
  e.family = family;
  e.lower = blend(lower_constant(family), family, pair);
  e.upper = blend(upper_constant(family), family, pair);
  e.width = e.upper - e.lower;
  return e;
}

SimpleBoundsReport simple_bounds_check(const PositivePair& pair) {
  if (pair.degenerate()) throw DegeneratePair("simple_bounds_check: requires a != b");
  const NormalizedArg arg = normalize(pair);
  const double numerator = detail::blend_numerator(arg.x);

  auto margins = [&](BoundFamily family) {
    const double gap = detail::blend_gap(family, arg.x);
    SimpleFamilyMargins m;
    m.geometric_margin = arg.scale * numerator;
    m.convex_margin = arg.scale * (gap - numerator);
    m.lower_gain = arg.scale * lower_constant(family) * gap;
    m.upper_gain = arg.scale * (1.0 - upper_constant(family)) * gap;
    return m;
  };

  SimpleBoundsReport report;
  report.qa = margins(BoundFamily::QA);
  report.ca = margins(BoundFamily::CA);
  report.holds = report.qa.geometric_margin > 0.0 && report.qa.convex_margin > 0.0 &&
                 report.ca.geometric_margin > 0.0 && report.ca.convex_margin > 0.0;
  report.sharp_inside = report.qa.lower_gain > 0.0 && report.qa.upper_gain > 0.0 &&
                        report.ca.lower_gain > 0.0 && report.ca.upper_gain > 0.0;
  return report;
}

LpBoundsReport lp_bounds_check(const PositivePair& pair, double p0) {
  if (pair.degenerate()) throw DegeneratePair("lp_bounds_check: requires a != b");
  const NormalizedArg arg = normalize(pair);
  const MeanKind lower = MeanKind::generalized_log(p0);
  const MeanKind upper = MeanKind::generalized_log(2.0);
  const MeanKind ns = MeanKind::neuman_sandor();

  LpBoundsReport report;
  report.l_p0 = mean(lower, arg);
  report.neuman_sandor = mean(ns, arg);
  report.l_2 = mean(upper, arg);
  const double e_ns = mean_excess(ns, arg);
  report.lower_margin = arg.scale * (e_ns - mean_excess(lower, arg));
  report.upper_margin = arg.scale * (mean_excess(upper, arg) - e_ns);
  const double slack = 4.0 * ulp(report.neuman_sandor);
  report.holds = report.lower_margin > -slack && report.upper_margin > -slack;
  return report;
}

double reduced_containment_margin(BoundFamily family, double p, double x) {
  if (x > 0.0 && x < series::kLongSeriesThreshold) {
    // (p - r0) gap + (r0 gap - numerator) with r0 = 4/5 or 8/25, the limit of
    // the ratio at 0; both pieces keep relative accuracy as x -> 0.
    const double y = x * x;
    const bool qa = family == BoundFamily::QA;
    const double num = qa ? 4.0 : 8.0;
    const double den = qa ? 5.0 : 25.0;
    const double offset = std::fma(den, p, -num) / den;
    const double deficit = series::horner(qa ? series::kQaDeficit : series::kCaDeficit, y, 2);
    return y * y * (offset * detail::blend_gap_scaled(family, y) + y * deficit);
  }
  return (p - ratio(ratio_for(family), x)) * detail::blend_gap(family, x);
}

std::vector<double> endpoint_grid(BoundSide side, int n) {
  if (n < 2) throw ParamOutOfRange("endpoint_grid: need at least 2 points");
  constexpr double kNearest = 1e-9;
  std::vector<double> xs(static_cast<std::size_t>(n));
  const double log_lo = std::log(kNearest);
  const double log_hi = std::log(0.5);
  for (int i = 0; i < n; ++i) {
    const double h = i == n - 1 ? 0.5 : std::exp(log_lo + (log_hi - log_lo) * i / (n - 1));
    xs[static_cast<std::size_t>(i)] = side == BoundSide::Upper ? h : 1.0 - h;
  }
  return xs;
}

SharpnessProbe sharpness_probe(BoundFamily family, BoundSide side, double perturbation, int n,
                               Execution exec) {
  SharpnessProbe probe;
  probe.weight = side == BoundSide::Lower ? lower_constant(family) + perturbation
                                          : upper_constant(family) - perturbation;
  probe.grid_size = n;
  const std::vector<double> xs = endpoint_grid(side, n);
  std::vector<double> margin(xs.size());
  const double weight = probe.weight;
  detail::map(exec, std::span<const double>(xs), std::span<double>(margin), [&](double x) {
    return reduced_containment_margin(family, weight, x);
  });

  // A lower bound fails where blend - M > 0, an upper bound where it is < 0.
  // Ties within a few ulps of the weight are not counted.
  const double tol = 4.0 * kEps * weight;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double gap = detail::blend_gap(family, xs[i]);
    const double scaled = gap > 0.0 ? margin[i] / gap : 0.0;
    const bool failed = side == BoundSide::Lower ? scaled > tol : scaled < -tol;
    if (failed) {
      ++probe.violations;
      if (!probe.witness) probe.witness = xs[i];
    }
  }
  return probe;
}

}  // namespace bimeans
