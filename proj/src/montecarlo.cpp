#include "packmatch/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "packmatch/errors.hpp"

namespace packmatch {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

struct CountsHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto c : v) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

void require_trials(std::uint64_t trials) {
  if (trials == 0) throw ValidationError("trials must be at least 1");
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  const std::uint64_t base = splitmix64(state);
  std::uint64_t mixed = base ^ (stream * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull);
  return Rng(splitmix64(mixed));
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint32_t Rng::below(std::uint32_t bound) {
  // 32 random bits per draw; reject the sliver that would bias the result.
  auto x = static_cast<std::uint32_t>(next() >> 32);
  std::uint64_t m = static_cast<std::uint64_t>(x) * bound;
  auto low = static_cast<std::uint32_t>(m);
  if (low < bound) {
    const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
    while (low < threshold) {
      x = static_cast<std::uint32_t>(next() >> 32);
      m = static_cast<std::uint64_t>(x) * bound;
      low = static_cast<std::uint32_t>(m);
    }
  }
  return static_cast<std::uint32_t>(m >> 32);
}

// ---------------------------------------------------------------------------

WalkSample sample_pack(PackSpec spec, Rng& rng) {
  WalkSample sample;
  sample.steps.reserve(spec.n);
  sample.endpoint.counts.assign(spec.d, 0);
  for (std::uint32_t i = 0; i < spec.n; ++i) {
    const auto color = rng.below(spec.d);
    sample.steps.push_back(color);
    ++sample.endpoint.counts[color];
  }
  return sample;
}

void sample_endpoint(PackSpec spec, Rng& rng, std::span<std::uint32_t> counts) {
  if (counts.size() != spec.d) throw std::invalid_argument("sample_endpoint: counts must have d entries");
  std::fill(counts.begin(), counts.end(), 0u);
  for (std::uint32_t i = 0; i < spec.n; ++i) ++counts[rng.below(spec.d)];
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double nt = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double centre = (phat + z2 / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt)) / denom;
  // Clamp so that low <= phat <= high survives rounding at the extremes.
  return {std::min(phat, std::max(0.0, centre - half)), std::max(phat, std::min(1.0, centre + half))};
}

PairMatchReport pair_match_rate(PackSpec spec, std::uint64_t trials, std::uint64_t seed, bool with_reference) {
  require_trials(trials);
  PairMatchReport report;
  report.seed = seed;
  report.trials = trials;

  std::vector<std::uint32_t> first(spec.d), second(spec.d);
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::for_stream(seed, t);
    sample_endpoint(spec, rng, first);
    sample_endpoint(spec, rng, second);
    if (first == second) ++report.matches;
  }
  report.estimate = static_cast<double>(report.matches) / static_cast<double>(trials);
  const auto ci = wilson_interval(report.matches, trials);
  report.ci_low = ci.low;
  report.ci_high = ci.high;
  if (with_reference) report.analytic_reference = mpq_get_d(coincidence_probability(spec).get_mpq_t());
  return report;
}

std::uint64_t first_match_trial(PackSpec spec, Rng& rng) {
  std::unordered_set<std::vector<std::uint32_t>, CountsHash> seen;
  std::vector<std::uint32_t> counts(spec.d);
  for (std::uint64_t drawn = 1;; ++drawn) {
    sample_endpoint(spec, rng, counts);
    if (!seen.insert(counts).second) return drawn;
  }
}

FirstMatchReport first_match_experiment(PackSpec spec, std::uint64_t trials, std::uint64_t seed,
                                        std::optional<double> analytic_reference) {
  require_trials(trials);
  FirstMatchReport report;
  report.seed = seed;
  report.trials = trials;
  report.analytic_reference = analytic_reference;

  // Integer accumulators keep the aggregate independent of trial order.
  unsigned __int128 sum = 0, sum_sq = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::for_stream(seed, t);
    const std::uint64_t x = first_match_trial(spec, rng);
    ++report.histogram[x];
    sum += x;
    sum_sq += static_cast<unsigned __int128>(x) * x;
    report.max_observed = std::max(report.max_observed, x);
  }
  const double nt = static_cast<double>(trials);
  const double mean = static_cast<double>(sum) / nt;
  double variance = 0.0;
  if (trials > 1) {
    // (N sum_sq - sum^2) / (N (N-1)); the numerator is formed exactly.
    const long double n = static_cast<long double>(trials);
    const auto numerator = static_cast<long double>(sum_sq * trials - sum * sum);
    variance = static_cast<double>(numerator / (n * (n - 1)));
  }
  report.estimate = mean;
  report.standard_error = std::sqrt(variance / nt);
  report.ci_low = mean - 1.959963984540054 * report.standard_error;
  report.ci_high = mean + 1.959963984540054 * report.standard_error;
  return report;
}

}  // namespace packmatch
