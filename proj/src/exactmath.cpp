#include "packmatch/exactmath.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace packmatch {

namespace {

ExactRatio pow10_ratio(long e) {
  ExactInt p = integer_pow(10, static_cast<std::uint64_t>(e < 0 ? -e : e));
  return e < 0 ? ExactRatio(ExactInt(1), p) : ExactRatio(p);
}

// Integer nearest to a >= 0 under the given rounding.
ExactInt round_nonnegative(const ExactRatio& a, Rounding rounding) {
  ExactInt q;
  if (rounding == Rounding::toward_zero) {
    mpz_fdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    return q;
  }
  ExactInt twice_num = 2 * a.get_num() + a.get_den();
  ExactInt twice_den = 2 * a.get_den();
  mpz_fdiv_q(q.get_mpz_t(), twice_num.get_mpz_t(), twice_den.get_mpz_t());
  return q;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

ExactRatio make_ratio(const ExactInt& num, const ExactInt& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  ExactRatio r(num, den);
  r.canonicalize();
  return r;
}

ExactRatio parse_ratio(std::string_view text) {
  auto fail = [&] { return std::invalid_argument("not a number: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();

  bool negative = false;
  std::string_view body = text;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  ExactRatio value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw fail();
    value = make_ratio(ExactInt(std::string(num), 10), ExactInt(std::string(den), 10));
  } else {
    long exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
      auto exp_text = body.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!all_digits(exp_text) || exp_text.size() > 6) throw fail();
      exponent = std::stol(std::string(exp_text));
      if (exp_negative) exponent = -exponent;
      body = body.substr(0, e);
    }
    std::string_view whole = body, frac;
    if (auto dot = body.find('.'); dot != std::string_view::npos) {
      whole = body.substr(0, dot);
      frac = body.substr(dot + 1);
    }
    if (whole.empty() && frac.empty()) throw fail();
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) throw fail();
    std::string digits = std::string(whole) + std::string(frac);
    value = ExactRatio(ExactInt(digits, 10)) * pow10_ratio(exponent - static_cast<long>(frac.size()));
    value.canonicalize();
  }
  return negative ? ExactRatio(-value) : value;
}

// ---------------------------------------------------------------------------

FactorialCache::FactorialCache() { table_.emplace_back(1); }

FactorialCache& FactorialCache::shared() {
  static FactorialCache cache;
  return cache;
}

const ExactInt& FactorialCache::factorial(std::uint64_t k) {
  {
    std::shared_lock lock(mutex_);
    if (k < table_.size()) return table_[k];
  }
  reserve(k);
  std::shared_lock lock(mutex_);
  return table_[k];
}

void FactorialCache::reserve(std::uint64_t bound) {
  std::unique_lock lock(mutex_);
  while (table_.size() <= bound) {
    ExactInt next = table_.back() * static_cast<unsigned long>(table_.size());
    table_.push_back(std::move(next));
  }
}

std::uint64_t FactorialCache::size() const {
  std::shared_lock lock(mutex_);
  return table_.size();
}

// ---------------------------------------------------------------------------

ExactInt binomial(std::uint64_t n, std::int64_t k) {
  if (k < 0 || static_cast<std::uint64_t>(k) > n) return 0;
  auto& cache = FactorialCache::shared();
  const auto uk = static_cast<std::uint64_t>(k);
  ExactInt denom = cache.factorial(uk) * cache.factorial(n - uk);
  ExactInt out;
  mpz_divexact(out.get_mpz_t(), cache.factorial(n).get_mpz_t(), denom.get_mpz_t());
  return out;
}

ExactInt multinomial(std::uint64_t n, std::span<const std::uint32_t> parts) {
  const std::uint64_t total = std::accumulate(parts.begin(), parts.end(), std::uint64_t{0});
  if (total != n) {
    throw std::invalid_argument("multinomial: parts sum to " + std::to_string(total) + ", expected " +
                                std::to_string(n));
  }
  auto& cache = FactorialCache::shared();
  ExactInt denom = 1;
  for (auto k : parts) {
    if (k > 1) denom *= cache.factorial(k);
  }
  ExactInt out;
  mpz_divexact(out.get_mpz_t(), cache.factorial(n).get_mpz_t(), denom.get_mpz_t());
  return out;
}

ExactInt integer_pow(std::uint64_t base, std::uint64_t exp) {
  ExactInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
  return out;
}

// ---------------------------------------------------------------------------

std::string to_fixed(const ExactRatio& value, unsigned digits, Rounding rounding) {
  const bool negative = sgn(value) < 0;
  ExactRatio a = abs(value);
  ExactInt scaled = round_nonnegative(a * pow10_ratio(digits), rounding);
  std::string s = scaled.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  if (digits > 0) s.insert(s.size() - digits, ".");
  if (negative && scaled != 0) s.insert(0, "-");
  return s;
}

std::string to_scientific(const ExactRatio& value, unsigned significant, Rounding rounding) {
  if (significant == 0) throw std::invalid_argument("to_scientific: need at least one significant digit");
  if (sgn(value) == 0) return "0";
  const bool negative = sgn(value) < 0;
  ExactRatio a = abs(value);

  long e = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 10));
  while (a >= pow10_ratio(e + 1)) ++e;
  while (a < pow10_ratio(e)) --e;

  ExactInt mantissa = round_nonnegative(a / pow10_ratio(e - static_cast<long>(significant) + 1), rounding);
  if (mantissa == integer_pow(10, significant)) {
    mantissa /= 10;
    ++e;
  }
  std::string digits = mantissa.get_str();
  std::string out = negative ? "-" : "";
  out += digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  out += "e" + std::to_string(e);
  return out;
}

}  // namespace packmatch
