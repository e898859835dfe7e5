#include "bimeans/means.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bimeans/errors.hpp"
#include "series.hpp"

namespace bimeans {

namespace {

using series::horner;
using series::kLongSeriesThreshold;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Ky Fan gaps are relative; allow a few ulps of rounding.
constexpr double kKyFanSlack = 4.0 * kEps;

// Orders this close to 0 or -1 use the identric/logarithmic closed forms.
constexpr double kGenLogSpecialBand = 1e-12;

const series::Table& table_for(MeanFamily family) {
  switch (family) {
    case MeanFamily::NeumanSandor:
      return series::kNeumanSandor;
    case MeanFamily::FirstSeiffert:
      return series::kFirstSeiffert;
    case MeanFamily::SecondSeiffert:
      return series::kSecondSeiffert;
    default:
      return series::kLogarithmic;
  }
}

// 0.5 * ln(a/b) with a >= b.
double half_log_ratio(const NormalizedArg& arg) {
  return 0.5 * std::log1p(2.0 * arg.x / arg.one_minus);
}

double transcendental_direct(MeanFamily family, const NormalizedArg& arg) {
  const double x = arg.x;
  switch (family) {
    case MeanFamily::NeumanSandor:
      return x / stable_arcsinh(x);
    case MeanFamily::FirstSeiffert:
      // asin(x) through atan2 keeps full accuracy as x -> 1.
      return x / std::atan2(x, std::sqrt(arg.one_plus * arg.one_minus));
    case MeanFamily::SecondSeiffert:
      return x / std::atan(x);
    default:
      return x / half_log_ratio(arg);
  }
}

double transcendental_ratio(MeanFamily family, const NormalizedArg& arg) {
  if (arg.x < detail::kMeanSeriesThreshold) {
    const auto& c = table_for(family);
    const double y = arg.x * arg.x;
    return 1.0 + y * (c[1] + y * c[2]);
  }
  return transcendental_direct(family, arg);
}

double transcendental_excess(MeanFamily family, const NormalizedArg& arg) {
  if (arg.x < kLongSeriesThreshold) {
    const double y = arg.x * arg.x;
    return y * horner(table_for(family), y, 1);
  }
  return transcendental_direct(family, arg) - 1.0;
}

// ln(I/A) for the identric mean I = L_0.
double log_identric_ratio(const NormalizedArg& arg) {
  const double x = arg.x;
  if (x < kLongSeriesThreshold) {
    const double y = x * x;
    return y * horner(series::kLogIdentric, y, 1);
  }
  const double up = arg.one_plus * std::log1p(x);
  const double down = arg.one_minus * std::log(arg.one_minus);
  return (up - down) / (2.0 * x) - 1.0;
}

// ln(sinh w / w) for w >= 0.
long double log_sinhc(long double w) {
  if (w < 1e-3L) {
    const long double w2 = w * w;
    return w2 * (1.0L / 6.0L + w2 * (-1.0L / 180.0L + w2 * (1.0L / 2835.0L)));
  }
  if (w < 20.0L) return std::log(std::sinh(w) / w);
  return w - std::log(2.0L * w) + std::log1p(-std::exp(-2.0L * w));
}

// ln(L_p / A) for the general order p (p != 0, -1), with q = p + 1 and a >= b.
//
// Small x and moderate q: (L_p/A)^p = [(1+x)^q - (1-x)^q] / (2 q x) summed as
// a series in y, with the factors of each coefficient formed from p so that
// the leading one stays exact as p -> 0.
//
// Otherwise, with G the geometric mean and z = atanh(x),
//   ln(L_p / G) = [S(|q| z) - S(z)] / p,   S(w) = ln(sinh w / w),
// and for small |p| the difference is taken in the form
//   S(z + d) - S(z) = log1p(2 sinh^2(d/2) + coth(z) sinh d) - log1p(d / z)
// with d = p z, which keeps relative accuracy as p -> 0. This path is carried
// in extended precision so that the logarithms do not limit the result.
long double log_genlog_ratio(double p, const NormalizedArg& arg) {
  using ld = long double;
  const double x = arg.x;
  const double q = p + 1.0;
  if (x < kLongSeriesThreshold && std::fabs(q) <= 4.0) {
    const double y = x * x;
    double coeff = 1.0;
    double term_sum = 0.0;
    double power = 1.0;
    for (std::size_t k = 1; k < series::kTerms; ++k) {
      const double dk = static_cast<double>(k);
      coeff *= (p - (2.0 * dk - 1.0)) * (p - (2.0 * dk - 2.0)) / ((2.0 * dk) * (2.0 * dk + 1.0));
      power *= y;
      const double term = coeff * power;
      term_sum += term;
      if (coeff == 0.0 || std::fabs(term) <= 1e-20 * std::fabs(term_sum)) break;
    }
    return std::log1p(term_sum) / p;
  }
  const ld lx = x;
  const ld z = 0.5L * std::log1p(2.0L * lx / static_cast<ld>(arg.one_minus));
  const ld log_g_over_a = x < kLongSeriesThreshold
                              ? 0.5L * std::log1p(-lx * lx)
                              : 0.5L * (std::log1p(lx) + std::log(static_cast<ld>(arg.one_minus)));
  ld diff;
  if (std::fabs(p) < 0.5) {
    const ld d = static_cast<ld>(p) * z;
    const ld sh = std::sinh(0.5L * d);
    diff = std::log1p(2.0L * sh * sh + std::sinh(d) / std::tanh(z)) - std::log1p(d / z);
  } else {
    diff = log_sinhc(std::fabs(static_cast<ld>(q)) * z) - log_sinhc(z);
  }
  return log_g_over_a + diff / static_cast<ld>(p);
}

// Orders within the band around -1 are served by the logarithmic mean itself.
bool is_logarithmic_order(double p) { return std::fabs(p + 1.0) < kGenLogSpecialBand; }

long double log_generalized_ratio(double p, const NormalizedArg& arg) {
  if (std::fabs(p) < kGenLogSpecialBand) return log_identric_ratio(arg);
  return log_genlog_ratio(p, arg);
}

void require_distinct(const PositivePair& pair, const char* op) {
  if (pair.degenerate()) {
    throw DegeneratePair(std::string(op) + ": requires a != b");
  }
}

// Rounding error of s = a + b (Knuth's TwoSum).
double two_sum_error(double a, double b, double s) {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

// (n + n_lo) / (d + d_lo) to about half an ulp.
double corrected_quotient(double n, double n_lo, double d, double d_lo) {
  const double q = n / d;
  const double r = std::fma(-q, d, n);
  return q + (r + n_lo - q * d_lo) / d;
}

// scale * r with the low part of the scale folded in.
double scaled(const NormalizedArg& arg, double r) {
  return std::fma(arg.scale, r, arg.scale_lo * r);
}

std::string format_order(double p) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, res.ptr);
}

}  // namespace

PositivePair::PositivePair(double a, double b) : a_(a), b_(b) {
  if (!(std::isfinite(a) && std::isfinite(b) && a > 0.0 && b > 0.0)) {
    throw InvalidPair("pair components must be finite and positive");
  }
}

NormalizedArg normalize(const PositivePair& pair) {
  const double hi = pair.larger();
  const double lo = pair.smaller();
  NormalizedArg arg;
  if (hi == lo) {
    arg.scale = hi;
    return arg;
  }
  const double sum = hi + lo;
  if (!std::isfinite(sum)) {
    arg.scale = 0.5 * hi + 0.5 * lo;
    arg.x = (0.5 * hi - 0.5 * lo) / arg.scale;
    arg.one_plus = hi / arg.scale;
    arg.one_minus = lo / arg.scale;
    return arg;
  }
  // Error-free sum and difference, then one Newton-style correction of the
  // quotients so that x, 1+x and 1-x are each good to about half an ulp.
  const double sum_lo = two_sum_error(hi, lo, sum);
  const double diff = hi - lo;
  const double diff_lo = two_sum_error(hi, -lo, diff);
  arg.scale = 0.5 * sum;
  arg.scale_lo = 0.5 * sum_lo;
  arg.x = corrected_quotient(diff, diff_lo, sum, sum_lo);
  arg.one_plus = corrected_quotient(2.0 * hi, 0.0, sum, sum_lo);
  arg.one_minus = corrected_quotient(2.0 * lo, 0.0, sum, sum_lo);
  return arg;
}

std::string to_string(MeanKind kind) {
  switch (kind.family) {
    case MeanFamily::Arithmetic:
      return "arithmetic";
    case MeanFamily::Geometric:
      return "geometric";
    case MeanFamily::Logarithmic:
      return "logarithmic";
    case MeanFamily::ContraHarmonic:
      return "contra-harmonic";
    case MeanFamily::Quadratic:
      return "quadratic";
    case MeanFamily::FirstSeiffert:
      return "first-seiffert";
    case MeanFamily::SecondSeiffert:
      return "second-seiffert";
    case MeanFamily::NeumanSandor:
      return "neuman-sandor";
    case MeanFamily::GeneralizedLog:
      return "genlog:" + format_order(kind.order);
  }
  return "unknown";
}

std::optional<MeanKind> parse_mean_kind(std::string_view name) {
  for (const auto& kind : chain_kinds()) {
    if (to_string(kind) == name) return kind;
  }
  constexpr std::string_view prefix = "genlog:";
  if (name.starts_with(prefix)) {
    const auto digits = name.substr(prefix.size());
    double p = 0.0;
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (res.ec == std::errc{} && res.ptr == digits.data() + digits.size() && std::isfinite(p)) {
      return MeanKind::generalized_log(p);
    }
  }
  return std::nullopt;
}

const std::vector<MeanKind>& chain_kinds() {
  static const std::vector<MeanKind> kinds = {
      MeanKind::geometric(),       MeanKind::logarithmic(),     MeanKind::first_seiffert(),
      MeanKind::arithmetic(),      MeanKind::neuman_sandor(),   MeanKind::second_seiffert(),
      MeanKind::quadratic(),       MeanKind::contra_harmonic(),
  };
  return kinds;
}

double stable_arcsinh(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  const double ax = std::fabs(x);
  double r;
  if (ax < kLongSeriesThreshold) {
    const double y = ax * ax;
    r = ax * horner(series::kAsinhOverX, y, 0, y < 1e-8 ? 4 : 30);
  } else if (ax < 0x1p28) {
    r = std::log1p(ax + ax * ax / (1.0 + std::sqrt(1.0 + ax * ax)));
  } else {
    r = std::log(ax) + std::numbers::ln2;
  }
  return std::copysign(r, x);
}

double mean(MeanKind kind, const PositivePair& pair) {
  if (pair.degenerate()) return pair.a();
  return mean(kind, normalize(pair));
}

double mean(MeanKind kind, const NormalizedArg& arg) {
  const double x = arg.x;
  if (x == 0.0) return arg.scale;
  switch (kind.family) {
    case MeanFamily::Arithmetic:
      return arg.scale + arg.scale_lo;
    case MeanFamily::Geometric:
      return scaled(arg, std::sqrt(arg.one_plus * arg.one_minus));
    case MeanFamily::Quadratic:
      return scaled(arg, std::sqrt(1.0 + x * x));
    case MeanFamily::ContraHarmonic:
      return scaled(arg, 1.0 + x * x);
    case MeanFamily::Logarithmic:
    case MeanFamily::FirstSeiffert:
    case MeanFamily::SecondSeiffert:
    case MeanFamily::NeumanSandor:
      return scaled(arg, transcendental_ratio(kind.family, arg));
    case MeanFamily::GeneralizedLog:
      if (is_logarithmic_order(kind.order)) {
        return scaled(arg, transcendental_ratio(MeanFamily::Logarithmic, arg));
      }
      return scaled(arg, static_cast<double>(std::exp(log_generalized_ratio(kind.order, arg))));
  }
  return arg.scale;
}

double mean_excess(MeanKind kind, const NormalizedArg& arg) {
  const double x = arg.x;
  if (x == 0.0) return 0.0;
  const double y = x * x;
  switch (kind.family) {
    case MeanFamily::Arithmetic:
      return 0.0;
    case MeanFamily::Geometric:
      return -y / (1.0 + std::sqrt(arg.one_plus * arg.one_minus));
    case MeanFamily::Quadratic:
      return y / (1.0 + std::sqrt(1.0 + y));
    case MeanFamily::ContraHarmonic:
      return y;
    case MeanFamily::Logarithmic:
    case MeanFamily::FirstSeiffert:
    case MeanFamily::SecondSeiffert:
    case MeanFamily::NeumanSandor:
      return transcendental_excess(kind.family, arg);
    case MeanFamily::GeneralizedLog:
      if (is_logarithmic_order(kind.order)) {
        return transcendental_excess(MeanFamily::Logarithmic, arg);
      }
      return static_cast<double>(std::expm1(log_generalized_ratio(kind.order, arg)));
  }
  return 0.0;
}

ChainReport chain_check(const PositivePair& pair) {
  require_distinct(pair, "chain_check");
  const NormalizedArg arg = normalize(pair);
  ChainReport report;
  report.scale = arg.scale;
  std::vector<double> excess;
  for (const auto& kind : chain_kinds()) {
    report.entries.push_back({kind, mean(kind, arg)});
    excess.push_back(mean_excess(kind, arg));
  }
  report.ordered = true;
  for (std::size_t i = 0; i + 1 < excess.size(); ++i) {
    const double gap = arg.scale * (excess[i + 1] - excess[i]);
    report.gaps.push_back(gap);
    if (!(gap > -kChainGapSlack * arg.scale)) report.ordered = false;
  }
  return report;
}

KyFanReport ky_fan_check(const PositivePair& pair) {
  const double a = pair.a();
  const double b = pair.b();
  if (!(a < 0.5 && b < 0.5)) {
    throw OutOfDomain("ky_fan_check: arguments must lie in (0, 1/2)");
  }
  require_distinct(pair, "ky_fan_check");
  const PositivePair complement(1.0 - a, 1.0 - b);
  const NormalizedArg arg = normalize(pair);
  const NormalizedArg carg = normalize(complement);

  static const std::vector<MeanKind> kinds = {
      MeanKind::geometric(),  MeanKind::logarithmic(),   MeanKind::first_seiffert(),
      MeanKind::arithmetic(), MeanKind::neuman_sandor(), MeanKind::second_seiffert(),
  };
  KyFanReport report;
  std::vector<double> log_excess_diff;
  for (const auto& kind : kinds) {
    report.ratios.push_back({kind, mean(kind, arg) / mean(kind, carg)});
    log_excess_diff.push_back(std::log1p(mean_excess(kind, arg)) -
                              std::log1p(mean_excess(kind, carg)));
  }
  report.increasing = true;
  for (std::size_t i = 0; i + 1 < log_excess_diff.size(); ++i) {
    const double gap = log_excess_diff[i + 1] - log_excess_diff[i];
    report.log_gaps.push_back(gap);
    if (!(gap > -kKyFanSlack)) report.increasing = false;
  }
  return report;
}

SquaresReport neuman_sandor_squares_check(const PositivePair& pair) {
  require_distinct(pair, "neuman_sandor_squares_check");
  const NormalizedArg arg = normalize(pair);
  const double x = arg.x;
  const double a2 = arg.scale * arg.scale;
  SquaresReport report;
  if (x < kLongSeriesThreshold) {
    const double y = x * x;
    const double y2 = y * y;
    report.at_below_m2 = a2 * y2 * horner(series::kSquaresLower, y, 2);
    report.m2_below_mean_sq = a2 * y2 * horner(series::kSquaresUpper, y, 2);
    report.pm_below_a2 = a2 * y2 * horner(series::kProductGap, y, 2);
  } else {
    const double m = transcendental_direct(MeanFamily::NeumanSandor, arg);
    const double t = transcendental_direct(MeanFamily::SecondSeiffert, arg);
    const double p = transcendental_direct(MeanFamily::FirstSeiffert, arg);
    report.at_below_m2 = a2 * (m * m - t);
    report.m2_below_mean_sq = a2 * (0.5 * (1.0 + t * t) - m * m);
    report.pm_below_a2 = a2 * (1.0 - p * m);
  }
  report.holds = report.at_below_m2 > 0.0 && report.m2_below_mean_sq > 0.0 &&
                 report.pm_below_a2 > 0.0;
  return report;
}

namespace detail {

double reduced_mean_direct(MeanFamily family, double x) {
  NormalizedArg arg{x, 1.0, 0.0, 1.0 + x, 1.0 - x};
  return transcendental_direct(family, arg);
}

double reduced_mean_series(MeanFamily family, double x) {
  const auto& c = table_for(family);
  const double y = x * x;
  return 1.0 + y * (c[1] + y * c[2]);
}

}  // namespace detail

}  // namespace bimeans
