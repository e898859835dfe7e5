#include "bimeans/constants.hpp"

#include <cmath>
#include <numbers>

namespace bimeans {

std::string_view to_string(BoundFamily family) {
  return family == BoundFamily::QA ? "qa" : "ca";
}

std::optional<BoundFamily> parse_bound_family(std::string_view name) {
  if (name == "qa") return BoundFamily::QA;
  if (name == "ca") return BoundFamily::CA;
  return std::nullopt;
}

double two_pow_sixth() { return std::pow(2.0, 1.0 / 6.0); }

double log_one_plus_sqrt2() { return std::log1p(std::numbers::sqrt2); }

double alpha0_closed_form() {
  const double s = two_pow_sixth();
  const double ell = log_one_plus_sqrt2();
  return (3.0 - 3.0 * s * ell) / ((2.0 + std::numbers::sqrt2 - 3.0 * s) * ell);
}

double lambda0_closed_form() {
  const double s = two_pow_sixth();
  const double ell = log_one_plus_sqrt2();
  return (6.0 - 6.0 * s * ell) / ((7.0 - 6.0 * s) * ell);
}

double lambda0_misprinted_form() {
  const double s = two_pow_sixth();
  const double ell = log_one_plus_sqrt2();
  return (6.0 - 6.0 * s * ell) / (7.0 - 6.0 * s * ell);
}

}  // namespace bimeans
