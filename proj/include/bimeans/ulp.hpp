#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>

namespace bimeans {

/// Spacing between |x| and the next larger double.
inline double ulp(double x) {
  const double ax = std::fabs(x);
  return std::nextafter(ax, std::numeric_limits<double>::infinity()) - ax;
}

/// Number of representable doubles between a and b (0 when bit-identical).
inline std::uint64_t ulp_distance(double a, double b) {
  auto ordered = [](double v) {
    std::int64_t i;
    std::memcpy(&i, &v, sizeof v);
    return i < 0 ? std::numeric_limits<std::int64_t>::min() - i : i;
  };
  const std::int64_t ia = ordered(a);
  const std::int64_t ib = ordered(b);
  return ia > ib ? static_cast<std::uint64_t>(ia) - static_cast<std::uint64_t>(ib)
                 : static_cast<std::uint64_t>(ib) - static_cast<std::uint64_t>(ia);
}

}  // namespace bimeans
