#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "bimeans/execution.hpp"

namespace bimeans {

/// Lemma functions live on t in [1, 2^(1/6)] with exponent p in (0, 1).
///
/// The first family (L21) is
///   f_p(t) = arcsinh(sqrt(t^6-1)) - 3 sqrt(t^6-1) / (p t^3 + 3(1-p) t + 2p),
/// the second (L22)
///   F_p(t) = arcsinh(sqrt(t^6-1)) - 6 sqrt(t^6-1) / (p t^6 + 6(1-p) t + 5p).
/// Their derivatives are 3 (t-1)^2 g_p(t) / (den^2 sqrt(t^6-1)) with the
/// degree-6 polynomial g_p and degree-12 polynomial G_p respectively.
enum class LemmaId { L21, L22 };

std::string_view to_string(LemmaId id);

double f_p(double p, double t);
double g_p(double p, double t);
double F_p(double p, double t);
double G_p(double p, double t);

/// d/dt of g_p and G_p.
double g_p_derivative(double p, double t);
double G_p_derivative(double p, double t);

/// Closed-form derivatives 3 (t-1)^2 poly(t) / (den^2 sqrt(t^6 - 1)).
double f_p_derivative(double p, double t);
double F_p_derivative(double p, double t);

/// (t - 1)/25 (16t^5 + 48t^4 + 90t^3 + 86t^2 + 45t + 15): g_p at p = 4/5.
double g_four_fifths_factored(double t);
/// 4(t - 1)/625 (16t^11 + ... + 1275): G_p at p = 8/25.
double G_eight_25ths_factored(double t);

/// Sign expected from the lemma for this exponent: +1 for p at or above the
/// upper constant, -1 at or below the lower constant, 0 in between.
int expected_sign(LemmaId id, double p);

struct LemmaReport {
  LemmaId lemma_id = LemmaId::L21;
  double p = 0.0;
  int sample_count = 0;
  double min_value = 0.0;
  double max_value = 0.0;
  int expected_sign = 0;
  bool sign_verified = false;
  /// Root of g_p / G_p inside (1, 2^(1/6)) where the lemma function turns
  /// from decreasing to increasing.
  std::optional<double> switch_point;
  /// |g_p(switch_point)| (or G_p), the bisection residual.
  double switch_residual = 0.0;
  /// Decreasing before the switch point and increasing after (or monotone
  /// throughout when there is none), checked on the sample grid.
  bool monotonicity_verified = false;
  /// Lemma function at t = 1 and at t = 2^(1/6).
  std::pair<double, double> endpoint_values{0.0, 0.0};
};

/// n interior Chebyshev nodes of (1, 2^(1/6)), ascending.
std::vector<double> chebyshev_nodes(int n);

/// Samples the lemma function on n Chebyshev nodes. Throws ParamOutOfRange
/// for n < 100 or p outside (0, 1), and SignViolation (witness t) when a
/// sample contradicts the expected sign.
LemmaReport verify_lemma(LemmaId id, double p, int n,
                         Execution exec = Execution::Parallel);

/// Blend ratios: the weight p at which the blend equals M exactly.
///   R1(x) = 3[x - s asinh x] / ((sqrt(1+x^2) - 3s + 2) asinh x)
///   R2(x) = 6[x - s asinh x] / ((x^2 + 6 - 6s) asinh x),  s = (1+x^2)^(1/6)
/// Both require x in (0, 1].
double ratio_R1(double x);
double ratio_R2(double x);

enum class RatioId { R1, R2 };

std::string_view to_string(RatioId id);
double ratio(RatioId id, double x);

struct RatioSample {
  double x = 0.0;
  double value = 0.0;
};

struct RatioProfile {
  RatioId ratio_id = RatioId::R1;
  std::vector<RatioSample> samples;  // ascending in x
  double limit_at_0 = 0.0;
  double limit_at_1 = 0.0;
  double inf_observed = 0.0;
  double sup_observed = 0.0;
};

/// Samples the ratio on n points (n >= 1000) refined geometrically toward
/// both ends and extrapolates the endpoint limits with three-point
/// Richardson tables. Throws ParamOutOfRange for n < 1000.
RatioProfile sharpness_scan(RatioId id, int n, Execution exec = Execution::Parallel);

/// The exponent p0 with (p+1)^(1/p) = 2 log(1 + sqrt 2), by bisection on [1, 3].
double solve_p0();
double p0_residual_function(double p);

namespace detail {

/// Ratio through its Maclaurin series in x^2 and through the closed form;
/// ratio() switches at x = 0.5.
double ratio_series(RatioId id, double x);
double ratio_direct(RatioId id, double x);

/// The lemma function evaluated directly from its formula.
double lemma_direct(LemmaId id, double p, double t);

}  // namespace detail

}  // namespace bimeans
