#pragma once

// Probability that two independently filled packs are identical.
//
// A pack of n items in d colors is the endpoint of an n-step walk on the
// d-dimensional lattice, one axis per color. Two walks "coincide" when they
// end at the same point. |E(n,d)| counts coinciding ordered pairs of walks,
// and P(n,d) = |E(n,d)| / d^(2n).
//
// Three independent routes compute |E(n,d)|:
//   count_closed     sum over compositions k of multinomial(n; k)^2
//   count_recursive  |E(n,d)| = sum_k C(n,k)^2 |E(n-k, d-1)|, |E(m,1)| = 1
//   count_gf         (n!)^2 [x^(2n)] (sum_k x^(2k)/(k!)^2)^d
//
// Throughout, n is the pack size and d the number of colors.

#include <cstdint>
#include <iterator>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "packmatch/exactmath.hpp"

namespace packmatch {

/// Pack size and color count. d >= 1, n >= 0.
struct PackSpec {
  std::uint32_t n = 0;
  std::uint32_t d = 1;

  /// Throws std::invalid_argument when d == 0.
  PackSpec(std::uint32_t pack_size, std::uint32_t colors);

  friend bool operator==(const PackSpec&, const PackSpec&) = default;
};

/// Per-color counts of one pack; counts.size() == d, sum == n.
struct Composition {
  std::vector<std::uint32_t> counts;

  std::uint64_t total() const;
  friend bool operator==(const Composition&, const Composition&) = default;
};

/// Enumerates the weak compositions of n into d parts.
///
/// Order is colexicographic, decreasing: of two compositions, the one with
/// the larger count at the last coordinate where they differ comes first.
/// The first coordinate therefore varies fastest. The stream starts at
/// (0,...,0,n) and ends at (n,0,...,0); for (n=2,d=2) it yields
/// (0,2), (1,1), (2,0).
class CompositionCursor {
 public:
  explicit CompositionCursor(PackSpec spec);

  const std::vector<std::uint32_t>& current() const { return counts_; }
  bool done() const { return done_; }

  /// What changed in one step: coordinate j (>= 1) lost one unit, the old
  /// counts[0] (== prefix, all of counts[1..j) being zero) plus that unit
  /// moved to coordinate j-1.
  struct Move {
    std::size_t coordinate = 0;
    std::uint32_t from_count = 0;  // counts[j] before the move
    std::uint32_t prefix = 0;      // counts[0] before the move
  };

  /// Moves to the successor. At the end of the stream sets done() and
  /// returns a Move with coordinate == 0.
  Move advance();

 private:
  std::vector<std::uint32_t> counts_;
  bool done_ = false;
};

/// Range adaptor so compositions can be walked with range-for.
class CompositionRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = std::vector<std::uint32_t>;
    using difference_type = std::ptrdiff_t;
    using pointer = const value_type*;
    using reference = const value_type&;

    iterator() = default;
    explicit iterator(CompositionCursor* cursor) : cursor_(cursor) {}
    reference operator*() const { return cursor_->current(); }
    iterator& operator++() {
      cursor_->advance();
      return *this;
    }
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& it, std::default_sentinel_t) {
      return it.cursor_ == nullptr || it.cursor_->done();
    }

   private:
    CompositionCursor* cursor_ = nullptr;
  };

  explicit CompositionRange(PackSpec spec) : cursor_(spec) {}
  iterator begin() { return iterator(&cursor_); }
  std::default_sentinel_t end() const { return {}; }

 private:
  CompositionCursor cursor_;
};

/// All weak compositions of spec.n into spec.d parts, in the order above.
inline CompositionRange compositions(PackSpec spec) { return CompositionRange(spec); }

/// Throws std::invalid_argument unless c is a composition of spec.n into
/// spec.d parts.
void validate_composition(PackSpec spec, std::span<const std::uint32_t> counts);

/// Probability that one random walk ends at c: multinomial(n; c) / d^n.
ExactRatio endpoint_probability(PackSpec spec, std::span<const std::uint32_t> counts);

/// |E(n,d)| by summing squared multinomials over every composition. The
/// multinomial is updated incrementally between consecutive compositions.
ExactInt count_closed(PackSpec spec);

/// Memo of |E(n,d)| shared by recursive evaluations.
///
/// Rows are filled bottom-up, so every stored entry satisfies the recursion
/// against entries already present. Thread-safe.
class CoincidenceTable {
 public:
  /// |E(n,d)|, filling any missing subproblems.
  ExactInt count(PackSpec spec);

  /// Number of memoized (n,d) entries.
  std::size_t size() const;

  /// Entry if already memoized.
  std::optional<ExactInt> lookup(PackSpec spec) const;

 private:
  mutable std::mutex mutex_;
  // memo_[d] holds |E(m,d)| for m = 0 .. memo_[d].size()-1.
  std::map<std::uint32_t, std::vector<ExactInt>> memo_;
};

/// |E(n,d)| via the recursion over the count of the first color.
ExactInt count_recursive(PackSpec spec, CoincidenceTable& table);

/// Power series in x with exact coefficients, truncated at a fixed degree.
struct GfPolynomial {
  std::vector<ExactRatio> coefficients;  // coefficients[j] multiplies x^j

  std::size_t degree_bound() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }

  /// Schoolbook product truncated at this->degree_bound().
  GfPolynomial truncated_product(const GfPolynomial& other) const;
};

/// sum_{k} x^(2k) / (k!)^2 truncated at degree `degree`.
GfPolynomial squared_exponential_series(std::uint32_t degree);

/// |E(n,d)| as (n!)^2 times the x^(2n) coefficient of the d-th power of
/// squared_exponential_series(2n).
ExactInt count_gf(PackSpec spec);

/// P(n,d) = |E(n,d)| / d^(2n), computed through count_recursive.
ExactRatio coincidence_probability(PackSpec spec);
ExactRatio coincidence_probability(PackSpec spec, CoincidenceTable& table);

/// |E(n,d)| / d^(2n) for an already computed count.
ExactRatio probability_from_count(PackSpec spec, const ExactInt& count);

/// C(2n, n) / 2^(2n), the two-color closed form.
ExactRatio two_color_probability(std::uint32_t n);

/// Number of distinct packs, C(n+d-1, d-1).
ExactInt distinct_pack_count(PackSpec spec);

}  // namespace packmatch
