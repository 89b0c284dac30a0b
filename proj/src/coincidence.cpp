#include "packmatch/coincidence.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace packmatch {

PackSpec::PackSpec(std::uint32_t pack_size, std::uint32_t colors) : n(pack_size), d(colors) {
  if (d == 0) throw std::invalid_argument("number of colors must be at least 1");
}

std::uint64_t Composition::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

// ---------------------------------------------------------------------------

CompositionCursor::CompositionCursor(PackSpec spec) : counts_(spec.d, 0) { counts_.back() = spec.n; }

CompositionCursor::Move CompositionCursor::advance() {
  if (done_) return {};
  std::size_t j = 1;
  while (j < counts_.size() && counts_[j] == 0) ++j;
  if (j >= counts_.size()) {
    done_ = true;
    return {};
  }
  Move move{j, counts_[j], counts_[0]};
  counts_[0] = 0;
  counts_[j] -= 1;
  counts_[j - 1] = move.prefix + 1;
  return move;
}

void validate_composition(PackSpec spec, std::span<const std::uint32_t> counts) {
  if (counts.size() != spec.d) {
    throw std::invalid_argument("composition has " + std::to_string(counts.size()) + " parts, expected " +
                                std::to_string(spec.d));
  }
  const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total != spec.n) {
    throw std::invalid_argument("composition sums to " + std::to_string(total) + ", expected " +
                                std::to_string(spec.n));
  }
}

ExactRatio endpoint_probability(PackSpec spec, std::span<const std::uint32_t> counts) {
  validate_composition(spec, counts);
  return make_ratio(multinomial(spec.n, counts), integer_pow(spec.d, spec.n));
}

// ---------------------------------------------------------------------------

ExactInt count_closed(PackSpec spec) {
  FactorialCache::shared().reserve(std::max<std::uint64_t>(2ull * spec.n, spec.n + spec.d));

  // The stream starts at (0,..,0,n) whose multinomial is 1. Each move turns
  // (prefix, .., from_count) into (.., prefix+1, from_count-1, ..), which
  // multiplies the multinomial by from_count / (prefix + 1).
  CompositionCursor cursor(spec);
  ExactInt coefficient = 1;
  ExactInt sum = 0;
  ExactInt scratch;
  while (true) {
    mpz_addmul(sum.get_mpz_t(), coefficient.get_mpz_t(), coefficient.get_mpz_t());
    const auto move = cursor.advance();
    if (cursor.done()) break;
    mpz_mul_ui(scratch.get_mpz_t(), coefficient.get_mpz_t(), move.from_count);
    mpz_divexact_ui(coefficient.get_mpz_t(), scratch.get_mpz_t(), move.prefix + 1ul);
  }
  return sum;
}

// ---------------------------------------------------------------------------

ExactInt CoincidenceTable::count(PackSpec spec) {
  std::lock_guard lock(mutex_);
  auto& ones = memo_[1];
  while (ones.size() <= spec.n) ones.emplace_back(1);

  for (std::uint32_t colors = 2; colors <= spec.d; ++colors) {
    const auto& previous = memo_[colors - 1];
    auto& row = memo_[colors];
    for (std::uint32_t m = static_cast<std::uint32_t>(row.size()); m <= spec.n; ++m) {
      ExactInt total = 0;
      for (std::uint32_t k = 0; k <= m; ++k) {
        ExactInt c = binomial(m, k);
        total += c * c * previous[m - k];
      }
      row.push_back(std::move(total));
    }
  }
  return memo_[spec.d][spec.n];
}

std::size_t CoincidenceTable::size() const {
  std::lock_guard lock(mutex_);
  std::size_t total = 0;
  for (const auto& [colors, row] : memo_) total += row.size();
  return total;
}

std::optional<ExactInt> CoincidenceTable::lookup(PackSpec spec) const {
  std::lock_guard lock(mutex_);
  auto it = memo_.find(spec.d);
  if (it == memo_.end() || it->second.size() <= spec.n) return std::nullopt;
  return it->second[spec.n];
}

ExactInt count_recursive(PackSpec spec, CoincidenceTable& table) { return table.count(spec); }

// ---------------------------------------------------------------------------

GfPolynomial GfPolynomial::truncated_product(const GfPolynomial& other) const {
  const std::size_t bound = degree_bound();
  GfPolynomial out{std::vector<ExactRatio>(bound + 1)};
  for (std::size_t i = 0; i <= bound && i < coefficients.size(); ++i) {
    if (sgn(coefficients[i]) == 0) continue;
    for (std::size_t j = 0; i + j <= bound && j < other.coefficients.size(); ++j) {
      if (sgn(other.coefficients[j]) == 0) continue;
      out.coefficients[i + j] += coefficients[i] * other.coefficients[j];
    }
  }
  return out;
}

GfPolynomial squared_exponential_series(std::uint32_t degree) {
  auto& cache = FactorialCache::shared();
  GfPolynomial series{std::vector<ExactRatio>(degree + 1)};
  for (std::uint32_t k = 0; 2 * k <= degree; ++k) {
    const ExactInt& f = cache.factorial(k);
    series.coefficients[2 * k] = make_ratio(1, f * f);
  }
  return series;
}

ExactInt count_gf(PackSpec spec) {
  const std::uint32_t degree = 2 * spec.n;
  GfPolynomial base = squared_exponential_series(degree);
  GfPolynomial result{std::vector<ExactRatio>(degree + 1)};
  result.coefficients[0] = 1;

  for (std::uint32_t e = spec.d; e > 0; e >>= 1) {
    if (e & 1u) result = result.truncated_product(base);
    if (e > 1) base = base.truncated_product(base);
  }

  const ExactInt& nf = FactorialCache::shared().factorial(spec.n);
  ExactRatio scaled = result.coefficients[degree] * ExactRatio(nf * nf);
  if (scaled.get_den() != 1) throw std::logic_error("generating-function coefficient is not an integer");
  return scaled.get_num();
}

// ---------------------------------------------------------------------------

ExactRatio probability_from_count(PackSpec spec, const ExactInt& count) {
  return make_ratio(count, integer_pow(spec.d, 2ull * spec.n));
}

ExactRatio coincidence_probability(PackSpec spec, CoincidenceTable& table) {
  return probability_from_count(spec, count_recursive(spec, table));
}

ExactRatio coincidence_probability(PackSpec spec) {
  static CoincidenceTable table;
  return coincidence_probability(spec, table);
}

ExactRatio two_color_probability(std::uint32_t n) {
  return make_ratio(binomial(2ull * n, n), integer_pow(2, 2ull * n));
}

ExactInt distinct_pack_count(PackSpec spec) {
  return binomial(static_cast<std::uint64_t>(spec.n) + spec.d - 1, spec.d - 1);
}

}  // namespace packmatch
