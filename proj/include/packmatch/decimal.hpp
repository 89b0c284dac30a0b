#pragma once

// Arbitrary-precision binary floating point with per-value precision.
//
// Thin RAII wrapper over MPFR. Every Decimal carries its own precision;
// binary operations produce a result at the larger of the two operand
// precisions, rounded to nearest. No global precision state is touched.

#include <compare>
#include <string>

#include <mpfr.h>

#include "packmatch/exactmath.hpp"

namespace packmatch {

class Decimal {
 public:
  static constexpr unsigned kDefaultDigits = 128;

  /// Bits needed to hold `digits` significant decimal digits.
  static mpfr_prec_t bits_for_digits(unsigned digits);

  explicit Decimal(mpfr_prec_t bits = bits_for_digits(kDefaultDigits));
  Decimal(long value, mpfr_prec_t bits);
  Decimal(double value, mpfr_prec_t bits);
  Decimal(const ExactInt& value, mpfr_prec_t bits);
  Decimal(const ExactRatio& value, mpfr_prec_t bits);

  Decimal(const Decimal& other);
  Decimal(Decimal&& other) noexcept;
  Decimal& operator=(const Decimal& other);
  Decimal& operator=(Decimal&& other) noexcept;
  ~Decimal();

  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  Decimal& operator+=(const Decimal& rhs);
  Decimal& operator-=(const Decimal& rhs);
  Decimal& operator*=(const Decimal& rhs);
  Decimal& operator/=(const Decimal& rhs);
  Decimal& operator*=(unsigned long rhs);
  Decimal& operator/=(unsigned long rhs);

  friend Decimal operator+(Decimal lhs, const Decimal& rhs) { return lhs += rhs; }
  friend Decimal operator-(Decimal lhs, const Decimal& rhs) { return lhs -= rhs; }
  friend Decimal operator*(Decimal lhs, const Decimal& rhs) { return lhs *= rhs; }
  friend Decimal operator/(Decimal lhs, const Decimal& rhs) { return lhs /= rhs; }
  friend Decimal operator*(Decimal lhs, unsigned long rhs) { return lhs *= rhs; }
  friend Decimal operator/(Decimal lhs, unsigned long rhs) { return lhs /= rhs; }
  Decimal operator-() const;

  friend std::partial_ordering operator<=>(const Decimal& a, const Decimal& b);
  friend bool operator==(const Decimal& a, const Decimal& b) { return (a <=> b) == 0; }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  Decimal abs() const;
  /// Copy rounded to `bits` of precision.
  Decimal with_precision(mpfr_prec_t bits) const;
  Decimal pow(unsigned long exp) const;
  Decimal sqrt() const;
  /// 10^-digits at the given precision.
  static Decimal ten_to_minus(unsigned digits, mpfr_prec_t bits);
  /// Unit roundoff 2^(1-bits) for this value's precision.
  Decimal unit_roundoff() const;

  double to_double() const;
  /// "9.752e-5" style, `significant` digits.
  std::string to_scientific(unsigned significant) const;
  /// Fixed point with `digits` digits after the point.
  std::string to_fixed(unsigned digits) const;

  mpfr_srcptr raw() const { return value_; }

 private:
  mpfr_t value_;
};

}  // namespace packmatch
