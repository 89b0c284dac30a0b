#pragma once

// Number of packs bought until the first duplicate.
//
// X is the index of the first pack identical to an earlier one. Two models:
//
//  * The closed product formula P[X=l] = (1-p)^C(l-1,2) (l-1) p, which
//    treats all pairwise collision events as mutually independent. It is a
//    good approximation when p is small but is not an exact distribution:
//    for one-item packs in three colors its values sum to 29/27.
//
//  * The exact law. With endpoint probabilities q_v, the first m packs are
//    pairwise distinct with probability P[X > m] = m! e_m(q), e_m being the
//    elementary symmetric polynomial. e_m is obtained from the power sums
//    S_j = sum_v q_v^j through Newton's identities.
//
// The pairwise probability under a random pack size (mixture) is also here.

#include <cstdint>
#include <istream>
#include <optional>
#include <utility>
#include <vector>

#include "packmatch/coincidence.hpp"
#include "packmatch/decimal.hpp"
#include "packmatch/exactmath.hpp"

namespace packmatch {

inline constexpr double kDefaultTolerance = 1e-12;

/// Pairwise match probability p in [0, 1].
struct MatchProbability {
  ExactRatio p;

  /// Throws ValidationError outside [0, 1].
  explicit MatchProbability(ExactRatio value);
  static MatchProbability of(PackSpec spec) { return MatchProbability(coincidence_probability(spec)); }
};

// ---------------------------------------------------------------------------
// Product formula

/// (1-p)^C(l-1,2) (l-1) p, exactly. l == 1 gives 0; l == 0 throws
/// ValidationError. Throws ResourceLimit when the exact power would be
/// unreasonably large (use paper_pmf_decimal instead).
ExactRatio paper_pmf(const MatchProbability& p, std::uint64_t ell);

/// Same formula evaluated in floating point at `digits` significant digits.
Decimal paper_pmf_decimal(const MatchProbability& p, std::uint64_t ell, unsigned digits = 50);

/// A truncated series: the evaluated partial sum plus a bound on what was
/// left out.
struct SeriesSum {
  Decimal value;
  Decimal tail_bound;
  std::uint64_t last_index = 0;  // last l included
};

/// sum_l l (l-1) p (1-p)^C(l-1,2). Stops at the first l whose term and
/// geometric tail bound are both below `tol`. Throws ValidationError for
/// p == 0 (the series diverges).
SeriesSum paper_expectation(const MatchProbability& p, double tol = kDefaultTolerance, unsigned digits = 50);

// ---------------------------------------------------------------------------
// Endpoint spectrum and the exact law

enum class SpectrumMode { exact, decimal };

struct SpectrumOptions {
  unsigned precision_digits = Decimal::kDefaultDigits;
  /// Decimal-mode survival values whose error bound exceeds 10^-required_digits
  /// raise the precision alarm.
  unsigned required_digits = 32;
  /// Resource guard on the number of endpoints.
  std::uint64_t max_endpoints = 10'000'000;
  /// Exact rational mode is used only within both of these limits.
  std::uint64_t exact_endpoint_limit = 10'000;
  std::uint32_t exact_power_limit = 200;
};

/// Endpoints that are permutations of each other share a probability; the
/// spectrum stores one entry per such class.
struct SpectrumClass {
  std::vector<std::uint32_t> shape;  // counts sorted in decreasing order
  ExactRatio probability;            // q for each member
  std::uint64_t multiplicity = 0;    // number of endpoints in the class
};

struct EndpointSpectrum {
  PackSpec spec{0, 1};
  SpectrumMode mode = SpectrumMode::exact;
  mpfr_prec_t bits = 0;
  std::uint64_t endpoint_count = 0;
  std::uint32_t max_power = 0;
  std::vector<SpectrumClass> classes;
  /// S_j at index j-1, j = 1..max_power. exact_power_sums only in exact mode.
  std::vector<ExactRatio> exact_power_sums;
  std::vector<Decimal> power_sums;
  /// Relative error bound on power_sums[j-1] (zero in exact mode).
  std::vector<Decimal> power_sum_rel_error;

  const Decimal& power_sum(std::uint32_t j) const { return power_sums.at(j - 1); }
};

/// Builds the spectrum of (n,d) and its power sums S_1..S_max_power in one
/// pass over the composition stream. Throws ValidationError for
/// max_power == 0 and ResourceLimit when the number of endpoints exceeds
/// options.max_endpoints.
EndpointSpectrum endpoint_spectrum(PackSpec spec, std::uint32_t max_power, const SpectrumOptions& options = {});

/// A probability known exactly or to within error_bound.
struct ProbabilityValue {
  std::optional<ExactRatio> exact;
  Decimal approx;
  Decimal error_bound;
  bool precision_alarm = false;
};

/// P[X > m] for every m = 0..max_power of the spectrum.
struct SurvivalSeries {
  SpectrumMode mode = SpectrumMode::exact;
  std::vector<ExactRatio> exact;  // exact mode only
  std::vector<Decimal> approx;
  std::vector<Decimal> error_bound;
  /// First m whose error bound broke the requested precision, if any.
  std::optional<std::uint32_t> alarm_at;

  ProbabilityValue at(std::uint32_t m) const;
};

SurvivalSeries survival_series(const EndpointSpectrum& spectrum, const SpectrumOptions& options = {});

/// P[the first m packs are pairwise distinct] = m! e_m(q). Throws
/// ValidationError when m > spectrum.max_power.
ProbabilityValue exact_survival(const EndpointSpectrum& spectrum, std::uint32_t m,
                                const SpectrumOptions& options = {});

enum class FirstMatchModel { paper_formula, exact_oracle };

struct FirstMatchLaw {
  FirstMatchModel model = FirstMatchModel::exact_oracle;
  /// pmf[i] = P[X = i + 2].
  std::vector<Decimal> pmf;
  std::vector<ExactRatio> exact_pmf;  // filled only when the law is exact
  Decimal expectation;
  std::optional<ExactRatio> exact_expectation;
  std::uint64_t last_ell = 0;
  /// Upper bound on the expectation mass beyond last_ell.
  Decimal tail_bound;
  /// Accumulated floating point error bound on the expectation.
  Decimal error_bound;
  bool precision_alarm = false;

  Decimal pmf_total() const;
};

/// Exact law from the survival function of `spectrum`:
/// P[X=l] = P[X>l-1] - P[X>l], E[X] = sum_{m>=0} P[X>m]. The expectation
/// tail beyond max_power is bounded using the non-increasing ratio
/// P[X>m+1]/P[X>m].
FirstMatchLaw exact_pmf_and_expectation(const EndpointSpectrum& spectrum, double tol = kDefaultTolerance,
                                        const SpectrumOptions& options = {});

/// Chooses max_power for `spec` (growing it until the tail is below tol)
/// and returns the exact law.
FirstMatchLaw exact_first_match(PackSpec spec, double tol = kDefaultTolerance,
                                const SpectrumOptions& options = {});

/// pmf and expectation under the product formula, truncated like
/// paper_expectation.
FirstMatchLaw paper_first_match(const MatchProbability& p, double tol = kDefaultTolerance, unsigned digits = 50);

// ---------------------------------------------------------------------------
// Random pack size

/// Finitely supported distribution f over pack sizes.
struct PackSizeDistribution {
  std::vector<std::pair<std::uint32_t, ExactRatio>> support;  // (n, f(n)), f(n) > 0, n unique
  /// True when the input used decimal weights and was rescaled to sum to 1.
  bool renormalized = false;

  /// Validates and normalizes. With `decimal_input`, the weights must sum to
  /// 1 within 1e-9 and are then rescaled; otherwise they must sum to exactly
  /// 1. Negative weights and repeated sizes are rejected with
  /// ValidationError. Zero weights are dropped.
  static PackSizeDistribution from_weights(std::vector<std::pair<std::uint32_t, ExactRatio>> weights,
                                           bool decimal_input);

  /// Parses "n weight" lines; '#' starts a comment; blank lines are skipped.
  /// Weights are integers, fractions ("3/10") or decimals ("0.3", "3e-1").
  /// Errors carry the offending line number.
  static PackSizeDistribution parse(std::istream& in);
};

/// sum_n f(n)^2 P(n, d).
ExactRatio mixture_match_probability(const PackSizeDistribution& f, std::uint32_t d);
ExactRatio mixture_match_probability(const PackSizeDistribution& f, std::uint32_t d, CoincidenceTable& table);

}  // namespace packmatch
