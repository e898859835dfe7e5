#pragma once

// Cancellation-free pieces shared by the blend bounds and the ratio
// functions. With y = x^2 and s = (1+y)^(1/6):
//   M/A            = x / asinh(x)
//   geometric part = s                      (Q^(1/3) A^(2/3) or C^(1/6) A^(5/6), over A)
//   QA gap         = (sqrt(1+y) + 2)/3 - s   (convex minus geometric, over A)
//   CA gap         = 1 + y/6 - s
//   numerator      = M/A - s
// The gaps and the numerator are O(y^2); below x = 0.5 they come from the
// series tables, never from subtracting nearly equal closed forms.

#include <cmath>

#include "bimeans/constants.hpp"
#include "bimeans/means.hpp"
#include "series.hpp"

namespace bimeans::detail {

inline double sixth_root_1p(double y) { return std::exp(std::log1p(y) / 6.0); }

/// (M/A - s) / y^2, valid for x < 0.5.
inline double blend_numerator_scaled(double y) {
  return series::horner(series::kBlendNumerator, y, 2);
}

/// (convex - geometric) / (A y^2), valid for x < 0.5.
inline double blend_gap_scaled(BoundFamily family, double y) {
  return series::horner(family == BoundFamily::QA ? series::kQaGap : series::kCaGap, y, 2);
}

inline double blend_numerator(double x) {
  const double y = x * x;
  if (x < series::kLongSeriesThreshold) return y * y * blend_numerator_scaled(y);
  return x / stable_arcsinh(x) - sixth_root_1p(y);
}

inline double blend_gap(BoundFamily family, double x) {
  const double y = x * x;
  if (x < series::kLongSeriesThreshold) return y * y * blend_gap_scaled(family, y);
  const double s = sixth_root_1p(y);
  return family == BoundFamily::QA ? (std::sqrt(1.0 + y) + 2.0) / 3.0 - s : 1.0 + y / 6.0 - s;
}

}  // namespace bimeans::detail
