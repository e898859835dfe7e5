#pragma once

#include <cmath>
#include <concepts>
#include <limits>

#include "bimeans/errors.hpp"

namespace bimeans {

template <typename F>
concept ScalarFunction = requires(F f, double x) {
  { f(x) } -> std::convertible_to<double>;
};

/// Plain bisection on a bracketing interval [lo, hi].
///
/// Iterates until the bracket is at most two ulps wide (or the midpoint
/// collapses onto an endpoint), so the result is the root to machine
/// precision whenever f is monotone near it. Throws InternalInconsistency
/// when f(lo) and f(hi) do not have opposite signs.
template <ScalarFunction F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi) || std::isnan(flo) || std::isnan(fhi)) {
    throw InternalInconsistency("bisect: function does not change sign on the bracket");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 2200; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double width_limit =
        2.0 * (std::nextafter(std::fabs(mid), inf) - std::fabs(mid));
    if (hi - lo <= width_limit) break;
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if (std::signbit(fmid) == std::signbit(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace bimeans
