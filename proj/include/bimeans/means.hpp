#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bimeans {

/// A pair (a, b) of positive finite doubles, the argument of every mean.
///
/// The order given at construction is kept (Ky Fan complements need it);
/// evaluation canonicalizes to larger/smaller so that every mean is
/// exactly symmetric.
class PositivePair {
 public:
  /// Throws InvalidPair unless both components are finite and > 0.
  PositivePair(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double larger() const noexcept { return a_ >= b_ ? a_ : b_; }
  double smaller() const noexcept { return a_ >= b_ ? b_ : a_; }
  bool degenerate() const noexcept { return a_ == b_; }

 private:
  double a_;
  double b_;
};

/// Symmetry-reduced argument: with a >= b, x = (a-b)/(a+b) and scale = A(a,b).
///
/// scale_lo holds the rounding error of scale (a + b is split exactly), and
/// x is corrected to within about half an ulp. one_plus = 1 + x and
/// one_minus = 1 - x are carried separately, computed as 2a/(a+b) and
/// 2b/(a+b); forming 1 - x from x loses all relative accuracy when a >> b.
struct NormalizedArg {
  double x = 0.0;
  double scale = 0.0;
  double scale_lo = 0.0;
  double one_plus = 1.0;
  double one_minus = 1.0;
};

NormalizedArg normalize(const PositivePair& pair);

enum class MeanFamily {
  Arithmetic,
  Geometric,
  Logarithmic,
  ContraHarmonic,
  Quadratic,
  FirstSeiffert,
  SecondSeiffert,
  NeumanSandor,
  GeneralizedLog,
};

/// A mean selector. GeneralizedLog carries its order p; p = -1 and p = 0
/// dispatch to the logarithmic and identric closed forms.
struct MeanKind {
  MeanFamily family = MeanFamily::Arithmetic;
  double order = 0.0;

  static constexpr MeanKind arithmetic() { return {MeanFamily::Arithmetic, 0.0}; }
  static constexpr MeanKind geometric() { return {MeanFamily::Geometric, 0.0}; }
  static constexpr MeanKind logarithmic() { return {MeanFamily::Logarithmic, 0.0}; }
  static constexpr MeanKind contra_harmonic() { return {MeanFamily::ContraHarmonic, 0.0}; }
  static constexpr MeanKind quadratic() { return {MeanFamily::Quadratic, 0.0}; }
  static constexpr MeanKind first_seiffert() { return {MeanFamily::FirstSeiffert, 0.0}; }
  static constexpr MeanKind second_seiffert() { return {MeanFamily::SecondSeiffert, 0.0}; }
  static constexpr MeanKind neuman_sandor() { return {MeanFamily::NeumanSandor, 0.0}; }
  static constexpr MeanKind generalized_log(double p) { return {MeanFamily::GeneralizedLog, p}; }

  friend bool operator==(const MeanKind&, const MeanKind&) = default;
};

/// Canonical CLI name: "arithmetic", "neuman-sandor", "genlog:<p>", ...
std::string to_string(MeanKind kind);
std::optional<MeanKind> parse_mean_kind(std::string_view name);

/// The eight named means in chain order G < L < P < A < M < T < Q < C.
const std::vector<MeanKind>& chain_kinds();

/// Inverse hyperbolic sine, odd to the bit.
double stable_arcsinh(double x);

/// Evaluate a mean. Returns a exactly when a == b.
double mean(MeanKind kind, const PositivePair& pair);

/// Evaluate a mean from its reduced argument: scale * r(x).
double mean(MeanKind kind, const NormalizedArg& arg);

/// mean / A - 1, computed without cancellation for small x.
double mean_excess(MeanKind kind, const NormalizedArg& arg);

struct MeanValue {
  MeanKind kind;
  double value = 0.0;
};

struct ChainReport {
  /// The eight means in chain order; when `ordered` holds this is also the
  /// ascending order.
  std::vector<MeanValue> entries;
  /// gaps[i] = entries[i+1] - entries[i], evaluated from accurate excesses.
  std::vector<double> gaps;
  double scale = 0.0;
  bool ordered = false;
};

/// Tolerance on chain gaps, relative to A(a, b).
inline constexpr double kChainGapSlack = 1e-15;

/// G < L < P < A < M < T < Q < C. Throws DegeneratePair when a == b.
ChainReport chain_check(const PositivePair& pair);

struct KyFanReport {
  /// mean(a,b) / mean(1-a,1-b) for G, L, P, A, M, T.
  std::vector<MeanValue> ratios;
  /// Differences of consecutive log-ratios (relative gaps).
  std::vector<double> log_gaps;
  bool increasing = false;
};

/// Throws OutOfDomain unless a, b in (0, 1/2), DegeneratePair if a == b.
KyFanReport ky_fan_check(const PositivePair& pair);

struct SquaresReport {
  double at_below_m2 = 0.0;       ///< M^2 - A*T
  double m2_below_mean_sq = 0.0;  ///< (A^2 + T^2)/2 - M^2
  double pm_below_a2 = 0.0;       ///< A^2 - P*M
  bool holds = false;
};

/// A*T < M^2 < (A^2+T^2)/2 and P*M < A^2. Throws DegeneratePair when a == b.
SquaresReport neuman_sandor_squares_check(const PositivePair& pair);

namespace detail {

/// Threshold below which M, L, P, T use their truncated Maclaurin series.
inline constexpr double kMeanSeriesThreshold = 1e-4;

/// r(x) = mean / A for the four transcendental means via the direct formula
/// and via the five-term series; exposed for the crossover tests.
double reduced_mean_direct(MeanFamily family, double x);
double reduced_mean_series(MeanFamily family, double x);

}  // namespace detail

}  // namespace bimeans
