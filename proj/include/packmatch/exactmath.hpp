#pragma once

// Exact combinatorial primitives.
//
// Every value produced here is exact: ExactInt is an arbitrary-precision
// integer and ExactRatio an arbitrary-precision rational kept in lowest
// terms with a positive denominator. Rounding only happens in the
// to_fixed / to_scientific renderers at the very end.

#include <cstdint>
#include <deque>
#include <shared_mutex>
#include <span>
#include <string>

#include <gmpxx.h>

namespace packmatch {

using ExactInt = mpz_class;
using ExactRatio = mpq_class;

/// Builds num/den in lowest terms. Throws std::invalid_argument on den == 0.
ExactRatio make_ratio(const ExactInt& num, const ExactInt& den);

/// Parses "a", "a/b" or a plain decimal literal ("0.125", "1e-3") exactly.
/// Throws std::invalid_argument on anything else.
ExactRatio parse_ratio(std::string_view text);

/// Table of k! that grows monotonically on demand.
///
/// Readers take a shared lock; growth takes an exclusive lock. Entries live
/// in a deque so references handed out stay valid while the table grows.
class FactorialCache {
 public:
  FactorialCache();

  /// Process-wide instance used by binomial() and multinomial().
  static FactorialCache& shared();

  /// Returns k!, extending the table up to k if needed.
  const ExactInt& factorial(std::uint64_t k);

  /// Makes sure k! is cached for every k <= bound.
  void reserve(std::uint64_t bound);

  std::uint64_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::deque<ExactInt> table_;
};

/// n choose k; zero when k < 0 or k > n.
ExactInt binomial(std::uint64_t n, std::int64_t k);

/// n! / prod(parts[i]!). Throws std::invalid_argument unless sum(parts) == n.
ExactInt multinomial(std::uint64_t n, std::span<const std::uint32_t> parts);

/// base^exp, with 0^0 == 1.
ExactInt integer_pow(std::uint64_t base, std::uint64_t exp);

enum class Rounding {
  half_away_from_zero,
  toward_zero,  // plain truncation of the digit string
};

/// Decimal rendering with exactly `digits` digits after the point.
/// to_fixed(3/8, 4) == "0.3750".
std::string to_fixed(const ExactRatio& value, unsigned digits = 4,
                     Rounding rounding = Rounding::half_away_from_zero);

/// Scientific rendering with `significant` significant digits, e.g.
/// "9.753e-5". Zero renders as "0".
std::string to_scientific(const ExactRatio& value, unsigned significant = 4,
                          Rounding rounding = Rounding::half_away_from_zero);

}  // namespace packmatch
