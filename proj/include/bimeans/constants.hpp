#pragma once

#include <optional>
#include <string_view>

namespace bimeans {

/// The two blend families: Q with A (thirds), C with A (sixths).
enum class BoundFamily { QA, CA };

std::string_view to_string(BoundFamily family);
std::optional<BoundFamily> parse_bound_family(std::string_view name);

/// Upper optimal constants; both are exact rationals.
inline constexpr double kBeta = 4.0 / 5.0;
inline constexpr double kMu = 8.0 / 25.0;

/// 2^(1/6), the right end of the lemma interval (1, 2^(1/6)).
double two_pow_sixth();

/// log(1 + sqrt 2) = arcsinh(1).
double log_one_plus_sqrt2();

/// (3 - 3 * 2^(1/6) L) / ((2 + sqrt 2 - 3 * 2^(1/6)) L), L = log(1 + sqrt 2).
double alpha0_closed_form();

/// (6 - 6 * 2^(1/6) L) / ((7 - 6 * 2^(1/6)) L): the x -> 1 limit of the C-A ratio.
double lambda0_closed_form();

/// (6 - 6 * 2^(1/6) L) / (7 - 6 * 2^(1/6) L). This is the form as commonly
/// printed; it evaluates to about 0.0603 and is kept only so the discrepancy
/// with lambda0_closed_form() can be reported.
double lambda0_misprinted_form();

}  // namespace bimeans
