#include "packmatch/decimal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <stdexcept>

namespace packmatch {

namespace {

constexpr mpfr_rnd_t kRound = MPFR_RNDN;

void widen_to(mpfr_t x, mpfr_prec_t bits) {
  if (mpfr_get_prec(x) < bits) mpfr_prec_round(x, bits, kRound);
}

std::string formatted(const char* fmt, int digits, mpfr_srcptr x) {
  char* buf = nullptr;
  if (mpfr_asprintf(&buf, fmt, digits, x) < 0) throw std::runtime_error("mpfr_asprintf failed");
  std::unique_ptr<char, decltype(&mpfr_free_str)> guard(buf, &mpfr_free_str);
  return std::string(buf);
}

}  // namespace

mpfr_prec_t Decimal::bits_for_digits(unsigned digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.321928094887362)) + 8;
}

Decimal::Decimal(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

Decimal::Decimal(long value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_si(value_, value, kRound);
}

Decimal::Decimal(double value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_d(value_, value, kRound);
}

Decimal::Decimal(const ExactInt& value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_z(value_, value.get_mpz_t(), kRound);
}

Decimal::Decimal(const ExactRatio& value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_q(value_, value.get_mpq_t(), kRound);
}

Decimal::Decimal(const Decimal& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, kRound);
}

Decimal::Decimal(Decimal&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

Decimal& Decimal::operator=(const Decimal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, kRound);
  }
  return *this;
}

Decimal& Decimal::operator=(Decimal&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Decimal::~Decimal() { mpfr_clear(value_); }

Decimal& Decimal::operator+=(const Decimal& rhs) {
  widen_to(value_, rhs.precision());
  mpfr_add(value_, value_, rhs.value_, kRound);
  return *this;
}

Decimal& Decimal::operator-=(const Decimal& rhs) {
  widen_to(value_, rhs.precision());
  mpfr_sub(value_, value_, rhs.value_, kRound);
  return *this;
}

Decimal& Decimal::operator*=(const Decimal& rhs) {
  widen_to(value_, rhs.precision());
  mpfr_mul(value_, value_, rhs.value_, kRound);
  return *this;
}

Decimal& Decimal::operator/=(const Decimal& rhs) {
  widen_to(value_, rhs.precision());
  mpfr_div(value_, value_, rhs.value_, kRound);
  return *this;
}

Decimal& Decimal::operator*=(unsigned long rhs) {
  mpfr_mul_ui(value_, value_, rhs, kRound);
  return *this;
}

Decimal& Decimal::operator/=(unsigned long rhs) {
  mpfr_div_ui(value_, value_, rhs, kRound);
  return *this;
}

Decimal Decimal::operator-() const {
  Decimal out(*this);
  mpfr_neg(out.value_, out.value_, kRound);
  return out;
}

std::partial_ordering operator<=>(const Decimal& a, const Decimal& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

Decimal Decimal::abs() const {
  Decimal out(*this);
  mpfr_abs(out.value_, out.value_, kRound);
  return out;
}

Decimal Decimal::with_precision(mpfr_prec_t bits) const {
  Decimal out(bits);
  mpfr_set(out.value_, value_, kRound);
  return out;
}

Decimal Decimal::pow(unsigned long exp) const {
  Decimal out(precision());
  mpfr_pow_ui(out.value_, value_, exp, kRound);
  return out;
}

Decimal Decimal::sqrt() const {
  Decimal out(precision());
  mpfr_sqrt(out.value_, value_, kRound);
  return out;
}

Decimal Decimal::ten_to_minus(unsigned digits, mpfr_prec_t bits) {
  Decimal out(10L, bits);
  mpfr_pow_si(out.value_, out.value_, -static_cast<long>(digits), kRound);
  return out;
}

Decimal Decimal::unit_roundoff() const {
  Decimal out(1L, 64);
  mpfr_mul_2si(out.value_, out.value_, 1 - static_cast<long>(precision()), kRound);
  return out;
}

double Decimal::to_double() const { return mpfr_get_d(value_, kRound); }

std::string Decimal::to_scientific(unsigned significant) const {
  if (is_zero()) return "0";
  if (significant == 0) throw std::invalid_argument("to_scientific: need at least one significant digit");
  std::string s = formatted("%.*Re", static_cast<int>(significant) - 1, value_);
  // Normalize "9.752e-05" to "9.752e-5".
  auto e = s.find('e');
  if (e == std::string::npos) return s;
  const long exponent = std::strtol(s.c_str() + e + 1, nullptr, 10);
  return s.substr(0, e) + "e" + std::to_string(exponent);
}

std::string Decimal::to_fixed(unsigned digits) const {
  return formatted("%.*Rf", static_cast<int>(digits), value_);
}

}  // namespace packmatch
