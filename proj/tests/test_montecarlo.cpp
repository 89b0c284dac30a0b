#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>

#include "packmatch/coincidence.hpp"
#include "packmatch/montecarlo.hpp"

using namespace packmatch;

// Thresholds: chi-square at significance 0.001, 95% intervals covering in at
// least 90 of 100 seeds, and 5 standard errors for point estimates.

TEST_CASE("rng is reproducible and streams differ") {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng s0 = Rng::for_stream(7, 0), s1 = Rng::for_stream(7, 1);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += s0.next() == s1.next();
  CHECK(same == 0);
  Rng c(1);
  for (int i = 0; i < 10000; ++i) {
    const auto v = c.below(5);
    CHECK(v < 5);
  }
  CHECK(c.below(1) == 0);
}

TEST_CASE("sample_pack draws n colours and records the histogram") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto s = sample_pack(PackSpec(7, 4), rng);
    CHECK(s.steps.size() == 7);
    std::vector<std::uint32_t> c(4, 0);
    for (auto x : s.steps) {
      CHECK(x < 4);
      ++c[x];
    }
    CHECK(c == s.endpoint.counts);
  }
  Rng r1(11), r2(11);
  std::vector<std::uint32_t> counts(4);
  sample_endpoint(PackSpec(7, 4), r1, counts);
  CHECK(counts == sample_pack(PackSpec(7, 4), r2).endpoint.counts);
}

TEST_CASE("endpoint histogram passes chi-square") {
  constexpr std::uint64_t kSamples = 1'000'000;
  for (std::uint32_t n = 1; n <= 4; ++n) {
    for (std::uint32_t d = 2; d <= 3; ++d) {
      const PackSpec spec(n, d);
      Rng rng(1000 + 10 * n + d);
      std::map<std::vector<std::uint32_t>, std::uint64_t> observed;
      std::vector<std::uint32_t> counts(d);
      for (std::uint64_t i = 0; i < kSamples; ++i) {
        sample_endpoint(spec, rng, counts);
        ++observed[counts];
      }
      double stat = 0.0;
      std::size_t cells = 0;
      for (const auto& c : compositions(spec)) {
        const double expected = endpoint_probability(spec, c).get_d() * kSamples;
        const double got = static_cast<double>(observed[c]);
        stat += (got - expected) * (got - expected) / expected;
        ++cells;
      }
      CHECK(observed.size() == cells);
      const boost::math::chi_squared dist(static_cast<double>(cells - 1));
      const double p_value = boost::math::cdf(boost::math::complement(dist, stat));
      INFO("n=" << n << " d=" << d << " chi2=" << stat);
      CHECK(p_value > 0.001);
    }
  }
}

TEST_CASE("wilson interval") {
  const auto all = wilson_interval(100, 100);
  CHECK(all.high == 1.0);
  CHECK(all.low < 1.0);
  const auto none = wilson_interval(0, 100);
  CHECK(none.low == 0.0);
  const auto half = wilson_interval(50, 100);
  CHECK(half.low == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(half.high == doctest::Approx(0.5962).epsilon(1e-3));
}

TEST_CASE("pair match rate") {
  const auto r = pair_match_rate(PackSpec(2, 2), 1'000'000, 42);
  CHECK(r.ci_low <= 0.375);
  CHECK(r.ci_high >= 0.375);
  REQUIRE(r.analytic_reference);
  CHECK(*r.analytic_reference == 0.375);
  CHECK(r.rng_algorithm == Rng::kAlgorithm);
  CHECK(r.seed == 42);

  const auto empty = pair_match_rate(PackSpec(0, 3), 100, 1);
  CHECK(empty.estimate == 1.0);
  CHECK(empty.matches == 100);
}

TEST_CASE("confidence interval coverage over 100 seeds") {
  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto r = pair_match_rate(PackSpec(2, 2), 2000, seed, false);
    covered += r.ci_low <= 0.375 && 0.375 <= r.ci_high;
  }
  CHECK(covered >= 90);
}

TEST_CASE("reports are reproducible") {
  const auto a = pair_match_rate(PackSpec(5, 3), 20000, 9);
  const auto b = pair_match_rate(PackSpec(5, 3), 20000, 9);
  CHECK(a.matches == b.matches);
  CHECK(a.estimate == b.estimate);
  const auto c = first_match_experiment(PackSpec(3, 3), 5000, 9);
  const auto d = first_match_experiment(PackSpec(3, 3), 5000, 9);
  CHECK(c.estimate == d.estimate);
  CHECK(c.standard_error == d.standard_error);
  CHECK(c.histogram == d.histogram);
  const auto e = first_match_experiment(PackSpec(3, 3), 5000, 10);
  CHECK(c.histogram != e.histogram);
}

TEST_CASE("first match never needs more than K + 1 packs") {
  for (std::uint32_t n = 0; n <= 3; ++n) {
    for (std::uint32_t d = 1; d <= 3; ++d) {
      const PackSpec spec(n, d);
      const auto K = distinct_pack_count(spec).get_ui();
      const auto r = first_match_experiment(spec, 3000, 5);
      CHECK(r.max_observed <= K + 1);
      for (const auto& [x, count] : r.histogram) CHECK(x >= 2);
    }
  }
}

TEST_CASE("first match mean for one-item packs in two colours") {
  const auto r = first_match_experiment(PackSpec(1, 2), 100000, 7, 2.5);
  CHECK(std::abs(r.estimate - 2.5) < 5 * r.standard_error);
  REQUIRE(r.analytic_reference);
  CHECK(*r.analytic_reference == 2.5);
  std::uint64_t total = 0;
  for (const auto& [x, count] : r.histogram) total += count;
  CHECK(total == 100000);
  CHECK(r.max_observed == 3);
}
