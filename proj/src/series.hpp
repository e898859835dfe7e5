#pragma once

// Maclaurin coefficient tables in y = x^2 for the even functions used
// throughout the library. Everything is generated at compile time from the
// textbook recurrences; tests compare the leading entries with exact
// rationals and the sums with a 50-digit oracle.

#include <array>
#include <cstddef>
#include <span>

namespace bimeans::series {

inline constexpr std::size_t kTerms = 40;
using Table = std::array<double, kTerms>;

/// asinh(x)/x = sum (-1)^k C(2k,k) / (4^k (2k+1)) y^k
constexpr Table asinh_over_x() {
  Table c{};
  double w = 1.0;  // C(2k,k)/4^k
  for (std::size_t k = 0; k < kTerms; ++k) {
    if (k > 0) w *= (2.0 * k - 1.0) / (2.0 * k);
    c[k] = ((k % 2) ? -w : w) / (2.0 * k + 1.0);
  }
  return c;
}

/// asin(x)/x = sum C(2k,k) / (4^k (2k+1)) y^k
constexpr Table asin_over_x() {
  Table c{};
  double w = 1.0;
  for (std::size_t k = 0; k < kTerms; ++k) {
    if (k > 0) w *= (2.0 * k - 1.0) / (2.0 * k);
    c[k] = w / (2.0 * k + 1.0);
  }
  return c;
}

/// atan(x)/x = sum (-1)^k y^k / (2k+1)
constexpr Table atan_over_x() {
  Table c{};
  for (std::size_t k = 0; k < kTerms; ++k) c[k] = ((k % 2) ? -1.0 : 1.0) / (2.0 * k + 1.0);
  return c;
}

/// atanh(x)/x = sum y^k / (2k+1)
constexpr Table atanh_over_x() {
  Table c{};
  for (std::size_t k = 0; k < kTerms; ++k) c[k] = 1.0 / (2.0 * k + 1.0);
  return c;
}

/// (1+y)^alpha
constexpr Table binomial(double alpha) {
  Table c{};
  c[0] = 1.0;
  for (std::size_t k = 1; k < kTerms; ++k) c[k] = c[k - 1] * (alpha - (k - 1.0)) / static_cast<double>(k);
  return c;
}

/// 1 / s(y) for a series with s[0] != 0.
constexpr Table reciprocal(const Table& s) {
  Table r{};
  r[0] = 1.0 / s[0];
  for (std::size_t k = 1; k < kTerms; ++k) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += s[j] * r[k - j];
    r[k] = -acc / s[0];
  }
  return r;
}

/// -sum_{k>=1} y^k / (2k (2k+1)): log of identric/arithmetic.
constexpr Table log_identric_ratio() {
  Table c{};
  for (std::size_t k = 1; k < kTerms; ++k) c[k] = -1.0 / ((2.0 * k) * (2.0 * k + 1.0));
  return c;
}

inline constexpr Table kAsinhOverX = asinh_over_x();
inline constexpr Table kAsinOverX = asin_over_x();
inline constexpr Table kAtanOverX = atan_over_x();
inline constexpr Table kAtanhOverX = atanh_over_x();

// x/f(x) for the four transcendental means: M/A, P/A, T/A, L/A.
inline constexpr Table kNeumanSandor = reciprocal(kAsinhOverX);
inline constexpr Table kFirstSeiffert = reciprocal(kAsinOverX);
inline constexpr Table kSecondSeiffert = reciprocal(kAtanOverX);
inline constexpr Table kLogarithmic = reciprocal(kAtanhOverX);

inline constexpr Table kSqrt = binomial(0.5);
inline constexpr Table kSixthRoot = binomial(1.0 / 6.0);
inline constexpr Table kLogIdentric = log_identric_ratio();

constexpr Table product(const Table& a, const Table& b) {
  Table r{};
  for (std::size_t k = 0; k < kTerms; ++k)
    for (std::size_t j = 0; j <= k; ++j) r[k] += a[j] * b[k - j];
  return r;
}

/// Tables whose first two coefficients vanish identically; the generated
/// doubles there are pure rounding noise, so they are pinned to zero.
constexpr Table quartic(Table t) {
  t[0] = 0.0;
  t[1] = 0.0;
  return t;
}

constexpr Table blend_numerator() {
  Table t{};
  for (std::size_t k = 0; k < kTerms; ++k) t[k] = kNeumanSandor[k] - kSixthRoot[k];
  return quartic(t);
}

constexpr Table qa_gap() {
  Table t{};
  for (std::size_t k = 0; k < kTerms; ++k) t[k] = kSqrt[k] / 3.0 - kSixthRoot[k];
  return quartic(t);
}

constexpr Table ca_gap() {
  Table t{};
  for (std::size_t k = 0; k < kTerms; ++k) t[k] = -kSixthRoot[k];
  return quartic(t);
}

/// x/asinh(x) - (1+y)^(1/6) = M/A - geometric part; O(y^2).
inline constexpr Table kBlendNumerator = blend_numerator();
/// (sqrt(1+y)+2)/3 - (1+y)^(1/6): convex minus geometric part of the Q-A blend.
inline constexpr Table kQaGap = qa_gap();
/// 1 + y/6 - (1+y)^(1/6): convex minus geometric part of the C-A blend.
inline constexpr Table kCaGap = ca_gap();

/// (r0 gap - numerator) / y for the blend ratio's limit r0 = num/den at
/// x -> 0; the y^2 term of r0 gap - numerator vanishes, so entries start at 2.
constexpr Table limit_deficit(const Table& gap, double num, double den) {
  Table t{};
  for (std::size_t k = 3; k < kTerms; ++k) t[k - 1] = (num * gap[k] - den * kBlendNumerator[k]) / den;
  return t;
}

/// Deficits below the limits 4/5 (Q-A) and 8/25 (C-A).
inline constexpr Table kQaDeficit = limit_deficit(kQaGap, 4.0, 5.0);
inline constexpr Table kCaDeficit = limit_deficit(kCaGap, 8.0, 25.0);

constexpr Table squares_lower() {
  // M^2/A^2 - T/A
  Table t = product(kNeumanSandor, kNeumanSandor);
  for (std::size_t k = 0; k < kTerms; ++k) t[k] -= kSecondSeiffert[k];
  return quartic(t);
}

constexpr Table squares_upper() {
  // (1 + T^2/A^2)/2 - M^2/A^2
  const Table t2 = product(kSecondSeiffert, kSecondSeiffert);
  const Table m2 = product(kNeumanSandor, kNeumanSandor);
  Table t{};
  for (std::size_t k = 0; k < kTerms; ++k) t[k] = 0.5 * t2[k] - m2[k];
  t[0] += 0.5;
  return quartic(t);
}

constexpr Table product_gap() {
  // 1 - P M / A^2
  Table t = product(kFirstSeiffert, kNeumanSandor);
  for (std::size_t k = 0; k < kTerms; ++k) t[k] = -t[k];
  t[0] += 1.0;
  return quartic(t);
}

inline constexpr Table kSquaresLower = squares_lower();
inline constexpr Table kSquaresUpper = squares_upper();
inline constexpr Table kProductGap = product_gap();

/// Below this x (y < 1/4) every table above is summed instead of using the
/// closed form; 40 terms leave a truncation error far below one ulp.
inline constexpr double kLongSeriesThreshold = 0.5;

/// Horner evaluation of sum_{k >= first} c[k] y^(k - first), over n terms.
inline double horner(const Table& c, double y, std::size_t first = 0,
                     std::size_t n = kTerms) {
  const std::size_t last = first + n < kTerms ? first + n : kTerms;
  double acc = 0.0;
  for (std::size_t k = last; k-- > first;) acc = acc * y + c[k];
  return acc;
}

/// Same over a runtime coefficient span.
inline double horner(std::span<const double> c, double y) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * y + c[k];
  return acc;
}

}  // namespace bimeans::series
