#pragma once

// Seeded simulation of pack filling.
//
// A pack is simulated the way it is modeled: n independent uniform color
// draws, i.e. a random ordered walk. Two packs are identical when their
// color histograms agree, regardless of draw order.
//
// Every trial owns its own random stream derived from (seed, trial index),
// so results do not depend on how trials are scheduled.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "packmatch/coincidence.hpp"

namespace packmatch {

/// xoshiro256** seeded through SplitMix64.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "xoshiro256**+splitmix64/v1";

  explicit Rng(std::uint64_t seed);

  /// Independent stream for one trial of an experiment seeded with `seed`.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next();

  /// Uniform integer in [0, bound), bound >= 1. Unbiased (Lemire's
  /// multiply-shift with rejection).
  std::uint32_t below(std::uint32_t bound);

 private:
  std::uint64_t s_[4];
};

/// One simulated pack: the draw sequence and its color histogram.
/// Colors are 0-based: steps[i] in [0, d).
struct WalkSample {
  std::vector<std::uint32_t> steps;
  Composition endpoint;
};

WalkSample sample_pack(PackSpec spec, Rng& rng);

/// Same draws as sample_pack without keeping the step sequence; `counts`
/// must have spec.d entries and is overwritten.
void sample_endpoint(PackSpec spec, Rng& rng, std::span<std::uint32_t> counts);

/// 95% Wilson score interval for `successes` out of `trials`.
struct Interval {
  double low = 0.0;
  double high = 0.0;
};
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

struct TrialReport {
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::string rng_algorithm = Rng::kAlgorithm;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<double> analytic_reference;
};

struct PairMatchReport : TrialReport {
  std::uint64_t matches = 0;
};

/// Fraction of trials in which two independent packs are identical, with a
/// Wilson interval. `analytic_reference` is P(n,d) when `with_reference`.
PairMatchReport pair_match_rate(PackSpec spec, std::uint64_t trials, std::uint64_t seed, bool with_reference = true);

/// Draws packs until the newest one equals an earlier one; returns the
/// number of packs drawn (always >= 2).
std::uint64_t first_match_trial(PackSpec spec, Rng& rng);

struct FirstMatchReport : TrialReport {
  /// estimate is the sample mean; ci is mean +/- 1.96 standard errors.
  double standard_error = 0.0;
  std::uint64_t max_observed = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;  // packs drawn -> trials
};

/// Repeats first_match_trial. `analytic_reference`, when given, is copied
/// into the report unchanged.
FirstMatchReport first_match_experiment(PackSpec spec, std::uint64_t trials, std::uint64_t seed,
                                        std::optional<double> analytic_reference = std::nullopt);

}  // namespace packmatch
