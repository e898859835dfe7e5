#pragma once

#include <optional>
#include <vector>

#include "bimeans/constants.hpp"
#include "bimeans/execution.hpp"
#include "bimeans/means.hpp"

namespace bimeans {

/// Cross-check tolerance between independent routes to each constant.
inline constexpr double kConstantTolerance = 1e-12;

enum class ConstantSource { Exact, ClosedForm, RootFound };

/// Optimal blend weights. alpha0/lambda0 come from their closed forms and are
/// cross-checked against the root in p of the lemma function at t = 2^(1/6);
/// p0 is found by bisection.
struct SharpConstants {
  double alpha0 = 0.0;
  double beta = kBeta;
  double lambda0 = 0.0;
  double mu = kMu;
  double p0 = 0.0;

  ConstantSource alpha0_source = ConstantSource::ClosedForm;
  ConstantSource beta_source = ConstantSource::Exact;
  ConstantSource lambda0_source = ConstantSource::ClosedForm;
  ConstantSource mu_source = ConstantSource::Exact;
  ConstantSource p0_source = ConstantSource::RootFound;

  double alpha0_root = 0.0;
  double lambda0_root = 0.0;
  double alpha0_residual = 0.0;   ///< |closed form - root|
  double lambda0_residual = 0.0;  ///< |closed form - root|
  double p0_residual = 0.0;       ///< |(p0+1)^(1/p0) - 2 log(1+sqrt 2)|
};

/// Computes every constant afresh. Throws InternalInconsistency if any
/// residual exceeds kConstantTolerance.
SharpConstants compute_constants();

/// Process-wide copy, computed once on first use.
const SharpConstants& sharp_constants();

double lower_constant(BoundFamily family);
double upper_constant(BoundFamily family);

/// QA: p (Q/3 + 2A/3) + (1-p) Q^(1/3) A^(2/3)
/// CA: p (C/6 + 5A/6) + (1-p) C^(1/6) A^(5/6)
/// Throws ParamOutOfRange unless 0 <= p <= 1.
double blend(double p, BoundFamily family, const PositivePair& pair);

struct Enclosure {
  double lower = 0.0;
  double upper = 0.0;
  BoundFamily family = BoundFamily::QA;
  double width = 0.0;
};

/// [blend(lower constant), blend(upper constant)] around M(a, b).
Enclosure enclose(BoundFamily family, const PositivePair& pair);

/// Margins of the two-sided simple bounds (blend weights 0 and 1) for one
/// family, and how far the sharp enclosure sits inside them.
struct SimpleFamilyMargins {
  double geometric_margin = 0.0;  ///< M - blend(0)
  double convex_margin = 0.0;     ///< blend(1) - M
  double lower_gain = 0.0;        ///< sharp lower - blend(0)
  double upper_gain = 0.0;        ///< blend(1) - sharp upper
};

struct SimpleBoundsReport {
  SimpleFamilyMargins qa;
  SimpleFamilyMargins ca;
  bool holds = false;         ///< all four simple inequalities
  bool sharp_inside = false;  ///< both sharp enclosures strictly tighter
};

/// Throws DegeneratePair when a == b.
SimpleBoundsReport simple_bounds_check(const PositivePair& pair);

struct LpBoundsReport {
  double l_p0 = 0.0;
  double neuman_sandor = 0.0;
  double l_2 = 0.0;
  double lower_margin = 0.0;  ///< M - L_{p0}
  double upper_margin = 0.0;  ///< L_2 - M
  bool holds = false;
};

/// L_{p0} < M < L_2. Throws DegeneratePair when a == b.
LpBoundsReport lp_bounds_check(const PositivePair& pair, double p0);

/// (blend(p) - M) / A for the pair (1+x, 1-x), computed as
/// (p - ratio(x)) * gap(x) so that its sign is right even where blend and M
/// agree to far more digits than a double carries.
double reduced_containment_margin(BoundFamily family, double p, double x);

enum class BoundSide { Lower, Upper };

struct SharpnessProbe {
  double weight = 0.0;  ///< the perturbed blend weight
  int grid_size = 0;
  int violations = 0;
  std::optional<double> witness;  ///< first x (in grid order) that fails
};

/// Points x with 1 - x (Lower) or x (Upper) log-spaced over [1e-9, 1/2].
std::vector<double> endpoint_grid(BoundSide side, int n);

/// Moves the optimal constant outward by `perturbation` (lower constant up,
/// upper constant down) and counts grid points where the enclosure no
/// longer contains M. perturbation = 0 is the control run.
SharpnessProbe sharpness_probe(BoundFamily family, BoundSide side, double perturbation, int n,
                               Execution exec = Execution::Parallel);

}  // namespace bimeans
