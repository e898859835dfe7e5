#include "bimeans/lemma_analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "bimeans/bisection.hpp"
#include "bimeans/constants.hpp"
#include "bimeans/errors.hpp"
#include "bimeans/means.hpp"
#include "blend_parts.hpp"
#include "parallel.hpp"
#include "series.hpp"

namespace bimeans {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_lemma_args(double p, double t, const char* op) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ParamOutOfRange(std::string(op) + ": p must lie in (0, 1)");
  }
  if (!(t >= 1.0 && t <= two_pow_sixth())) {
    throw ParamOutOfRange(std::string(op) + ": t must lie in [1, 2^(1/6)]");
  }
}

// y = t^6 - 1 without cancellation near t = 1 (t - 1 is exact there).
double sixth_power_minus_one(double t) { return std::expm1(6.0 * std::log1p(t - 1.0)); }

double numerator_constant(LemmaId id) { return id == LemmaId::L21 ? 3.0 : 6.0; }

double lemma_denominator(LemmaId id, double p, double t, double y) {
  if (id == LemmaId::L21) return p * t * t * t + 3.0 * (1.0 - p) * t + 2.0 * p;
  return p * (1.0 + y) + 6.0 * (1.0 - p) * t + 5.0 * p;
}

// With x = sqrt(t^6 - 1) the lemma function is x h(y), where
//   h(y) = asinh(x)/x - c / q(y),   q(y) = denominator as a series in y.
// h(0) = h'(0) = 0 for every p; the remaining coefficients are built here.
series::Table lemma_coefficients(LemmaId id, double p) {
  series::Table q{};
  for (std::size_t k = 0; k < series::kTerms; ++k) {
    if (id == LemmaId::L21) {
      q[k] = p * series::kSqrt[k] + 3.0 * (1.0 - p) * series::kSixthRoot[k];
    } else {
      q[k] = 6.0 * (1.0 - p) * series::kSixthRoot[k];
    }
  }
  if (id == LemmaId::L21) {
    q[0] += 2.0 * p;
  } else {
    q[0] += 6.0 * p;
    q[1] += p;
  }
  const double c = numerator_constant(id);
  const series::Table r = series::reciprocal(q);
  series::Table h{};
  for (std::size_t k = 3; k < series::kTerms; ++k) h[k] = series::kAsinhOverX[k] - c * r[k];
  // The leading coefficient vanishes at the endpoint limit of the blend ratio
  // (p = 4/5 and p = 8/25); form it with that factor exact.
  h[2] = id == LemmaId::L21 ? std::fma(5.0, p, -4.0) / 180.0 : std::fma(25.0, p, -8.0) / 360.0;
  return h;
}

double lemma_value(LemmaId id, double p, double t, const series::Table& coeffs) {
  const double y = sixth_power_minus_one(t);
  if (y == 0.0) return 0.0;
  if (y < series::kLongSeriesThreshold * series::kLongSeriesThreshold) {
    return std::sqrt(y) * y * y * series::horner(coeffs, y, 2);
  }
  return detail::lemma_direct(id, p, t);
}

constexpr std::array<double, 7> g_coefficients(double p) {
  const double p2 = p * p;
  return {-3.0 * (1.0 - p),
          -6.0 * (1.0 - p),
          4.0 * p2 + 6.0 * p - 9.0,
          2.0 * (-2.0 * p2 + 9.0 * p - 6.0),
          3.0 * (-p2 + 4.0 * p - 2.0),
          2.0 * p2,
          p2};
}

constexpr std::array<double, 13> G_coefficients(double p) {
  const double p2 = p * p;
  return {-12.0 * (1.0 - p),
          -24.0 * (1.0 - p),
          25.0 * p2 + 36.0 * p - 36.0,
          2.0 * (-5.0 * p2 + 54.0 * p - 24.0),
          3.0 * (-3.0 * p2 + 36.0 * p - 8.0),
          2.0 * p * (33.0 - 4.0 * p),
          p * (48.0 - 7.0 * p),
          6.0 * p * (5.0 - p),
          p * (12.0 + 5.0 * p),
          2.0 * p * (3.0 + 2.0 * p),
          3.0 * p2,
          2.0 * p2,
          p2};
}

template <std::size_t N>
double polynomial(const std::array<double, N>& c, double t) {
  return series::horner(std::span<const double>(c), t);
}

template <std::size_t N>
double polynomial_derivative(const std::array<double, N>& c, double t) {
  double acc = 0.0;
  for (std::size_t k = N; k-- > 1;) acc = acc * t + static_cast<double>(k) * c[k];
  return acc;
}

double derivative_numerator(LemmaId id, double p, double t) {
  return id == LemmaId::L21 ? polynomial(g_coefficients(p), t) : polynomial(G_coefficients(p), t);
}

double closed_derivative(LemmaId id, double p, double t) {
  check_lemma_args(p, t, "lemma derivative");
  const double y = sixth_power_minus_one(t);
  if (y == 0.0) return 0.0;
  const double den = lemma_denominator(id, p, t, y);
  const double tm1 = t - 1.0;
  return 3.0 * tm1 * tm1 * derivative_numerator(id, p, t) / (den * den * std::sqrt(y));
}

}  // namespace

std::string_view to_string(LemmaId id) { return id == LemmaId::L21 ? "L21" : "L22"; }

std::string_view to_string(RatioId id) { return id == RatioId::R1 ? "r1" : "r2"; }

double f_p(double p, double t) {
  check_lemma_args(p, t, "f_p");
  return lemma_value(LemmaId::L21, p, t, lemma_coefficients(LemmaId::L21, p));
}

double F_p(double p, double t) {
  check_lemma_args(p, t, "F_p");
  return lemma_value(LemmaId::L22, p, t, lemma_coefficients(LemmaId::L22, p));
}

double g_p(double p, double t) {
  check_lemma_args(p, t, "g_p");
  return polynomial(g_coefficients(p), t);
}

double G_p(double p, double t) {
  check_lemma_args(p, t, "G_p");
  return polynomial(G_coefficients(p), t);
}

double g_p_derivative(double p, double t) {
  check_lemma_args(p, t, "g_p_derivative");
  return polynomial_derivative(g_coefficients(p), t);
}

double G_p_derivative(double p, double t) {
  check_lemma_args(p, t, "G_p_derivative");
  return polynomial_derivative(G_coefficients(p), t);
}

double f_p_derivative(double p, double t) { return closed_derivative(LemmaId::L21, p, t); }

double F_p_derivative(double p, double t) { return closed_derivative(LemmaId::L22, p, t); }

double g_four_fifths_factored(double t) {
  constexpr std::array<double, 6> c = {15.0, 45.0, 86.0, 90.0, 48.0, 16.0};
  return (t - 1.0) / 25.0 * polynomial(c, t);
}

double G_eight_25ths_factored(double t) {
  constexpr std::array<double, 12> c = {1275.0, 3825.0, 7250.0, 9510.0, 8004.0, 4832.0,
                                        2544.0, 1140.0, 460.0,  96.0,   48.0,   16.0};
  return 4.0 * (t - 1.0) / 625.0 * polynomial(c, t);
}

int expected_sign(LemmaId id, double p) {
  const double upper = id == LemmaId::L21 ? kBeta : kMu;
  const double lower = id == LemmaId::L21 ? alpha0_closed_form() : lambda0_closed_form();
  if (p >= upper) return 1;
  if (p <= lower) return -1;
  return 0;
}

std::vector<double> chebyshev_nodes(int n) {
  const double lo = 1.0;
  const double hi = two_pow_sixth();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::vector<double> nodes(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    // k = n gives the node nearest t = 1, so filling from the back sorts them.
    const double theta = std::numbers::pi * (2.0 * k - 1.0) / (2.0 * n);
    nodes[static_cast<std::size_t>(n - k)] = mid + half * std::cos(theta);
  }
  return nodes;
}

LemmaReport verify_lemma(LemmaId id, double p, int n, Execution exec) {
  if (n < 100) throw ParamOutOfRange("verify_lemma: need at least 100 samples");
  if (!(p > 0.0 && p < 1.0)) throw ParamOutOfRange("verify_lemma: p must lie in (0, 1)");

  const double t_max = two_pow_sixth();
  const series::Table coeffs = lemma_coefficients(id, p);
  const std::vector<double> nodes = chebyshev_nodes(n);
  std::vector<double> values(nodes.size());
  detail::map(exec, std::span<const double>(nodes), std::span<double>(values),
              [&](double t) { return lemma_value(id, p, t, coeffs); });

  LemmaReport report;
  report.lemma_id = id;
  report.p = p;
  report.sample_count = n;
  report.expected_sign = expected_sign(id, p);
  report.min_value = *std::min_element(values.begin(), values.end());
  report.max_value = *std::max_element(values.begin(), values.end());
  report.endpoint_values = {lemma_value(id, p, 1.0, coeffs), lemma_value(id, p, t_max, coeffs)};

  if (report.expected_sign != 0) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const bool ok = report.expected_sign > 0 ? values[i] > 0.0 : values[i] < 0.0;
      if (!ok) {
        throw SignViolation(std::string(to_string(id)) + ": sample contradicts the expected sign",
                            nodes[i]);
      }
    }
    report.sign_verified = true;
  }

  auto poly = [&](double t) { return derivative_numerator(id, p, t); };
  // poly(1) is 9(5p-4) or 18(25p-8); at the upper constants it vanishes and
  // only rounding noise remains, which must not be mistaken for a sign change.
  const double poly_lo = poly(1.0);
  const double poly_hi = poly(t_max);
  const double noise = 1e-12;
  double split = poly_lo >= -noise ? 1.0 : t_max;  // monotone throughout
  if (poly_lo < -noise && poly_hi > 0.0) {
    const double root = bisect(poly, 1.0, t_max);
    report.switch_point = root;
    report.switch_residual = std::fabs(poly(root));
    split = root;
  }

  bool monotone = true;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double diff = values[i + 1] - values[i];
    const double tol = 4.0 * kEps * std::max(std::fabs(values[i]), std::fabs(values[i + 1]));
    if (nodes[i + 1] <= split && diff > tol) monotone = false;
    if (nodes[i] >= split && diff < -tol) monotone = false;
  }
  report.monotonicity_verified = monotone;
  return report;
}

double detail::lemma_direct(LemmaId id, double p, double t) {
  const double y = sixth_power_minus_one(t);
  const double u = std::sqrt(y);
  return stable_arcsinh(u) - numerator_constant(id) * u / lemma_denominator(id, p, t, y);
}

double detail::ratio_series(RatioId id, double x) {
  const double y = x * x;
  const BoundFamily family = id == RatioId::R1 ? BoundFamily::QA : BoundFamily::CA;
  return blend_numerator_scaled(y) / blend_gap_scaled(family, y);
}

double detail::ratio_direct(RatioId id, double x) {
  const double y = x * x;
  const double s = sixth_root_1p(y);
  const double ash = stable_arcsinh(x);
  if (id == RatioId::R1) {
    return 3.0 * (x - s * ash) / ((std::sqrt(1.0 + y) - 3.0 * s + 2.0) * ash);
  }
  return 6.0 * (x - s * ash) / ((y + 6.0 - 6.0 * s) * ash);
}

double ratio(RatioId id, double x) {
  if (!(x > 0.0 && x <= 1.0)) throw ParamOutOfRange("ratio: x must lie in (0, 1]");
  if (x < series::kLongSeriesThreshold) return detail::ratio_series(id, x);
  return detail::ratio_direct(id, x);
}

double ratio_R1(double x) { return ratio(RatioId::R1, x); }

double ratio_R2(double x) { return ratio(RatioId::R2, x); }

RatioProfile sharpness_scan(RatioId id, int n, Execution exec) {
  if (n < 1000) throw ParamOutOfRange("sharpness_scan: need at least 1000 samples");

  // Endpoint refinement depth; beyond 2^-20 the ratio's distance from its
  // limit at 0 drops under the rounding level of the limit itself.
  const int depth = std::min(20, static_cast<int>(std::floor(std::log2(n))));
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n));
  for (int k = 2; k <= depth; ++k) {
    xs.push_back(std::ldexp(1.0, -k));
    xs.push_back(1.0 - std::ldexp(1.0, -k));
  }
  // Uniform midpoints (2i - 1) / (2u) fill the rest. With u odd none of them
  // is a dyadic 2^-k or 1 - 2^-k for k >= 2, so all n points are distinct;
  // one extra point near 0 fixes the parity.
  if ((n - static_cast<int>(xs.size())) % 2 == 0) xs.push_back(std::ldexp(1.0, -(depth + 1)));
  const int uniform = n - static_cast<int>(xs.size());
  for (int i = 1; i <= uniform; ++i) xs.push_back((i - 0.5) / uniform);
  std::sort(xs.begin(), xs.end());

  std::vector<double> values(xs.size());
  detail::map(exec, std::span<const double>(xs), std::span<double>(values),
              [id](double x) { return ratio(id, x); });

  RatioProfile profile;
  profile.ratio_id = id;
  profile.samples.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) profile.samples.push_back({xs[i], values[i]});
  profile.inf_observed = *std::min_element(values.begin(), values.end());
  profile.sup_observed = *std::max_element(values.begin(), values.end());

  // Near 0 the ratio is even in x: corrections go as h^2, h^4.
  {
    const double r0 = ratio(id, std::ldexp(1.0, -(depth - 2)));
    const double r1 = ratio(id, std::ldexp(1.0, -(depth - 1)));
    const double r2 = ratio(id, std::ldexp(1.0, -depth));
    const double a = (4.0 * r1 - r0) / 3.0;
    const double b = (4.0 * r2 - r1) / 3.0;
    profile.limit_at_0 = (16.0 * b - a) / 15.0;
  }
  // Near 1 the ratio is smooth in h = 1 - x: corrections go as h, h^2.
  {
    const double r0 = ratio(id, 1.0 - std::ldexp(1.0, -(depth - 2)));
    const double r1 = ratio(id, 1.0 - std::ldexp(1.0, -(depth - 1)));
    const double r2 = ratio(id, 1.0 - std::ldexp(1.0, -depth));
    const double a = 2.0 * r1 - r0;
    const double b = 2.0 * r2 - r1;
    profile.limit_at_1 = (4.0 * b - a) / 3.0;
  }
  return profile;
}

double p0_residual_function(double p) {
  return std::pow(p + 1.0, 1.0 / p) - 2.0 * log_one_plus_sqrt2();
}

double solve_p0() { return bisect(p0_residual_function, 1.0, 3.0); }

}  // namespace bimeans
