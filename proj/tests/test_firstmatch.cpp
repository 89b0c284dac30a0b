#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "packmatch/errors.hpp"
#include "packmatch/firstmatch.hpp"

using namespace packmatch;

namespace {

double dbl(const mpq_class& q) { return q.get_d(); }

}  // namespace

TEST_CASE("match probability range") {
  CHECK_THROWS_AS(MatchProbability(frac(-1, 2)), ValidationError);
  CHECK_THROWS_AS(MatchProbability(frac(3, 2)), ValidationError);
  CHECK(MatchProbability::of(PackSpec(1, 3)).p == frac(1, 3));
}

TEST_CASE("product formula pmf") {
  const MatchProbability p(frac(1, 3));
  CHECK(paper_pmf(p, 1) == 0);
  CHECK(paper_pmf(p, 2) == frac(1, 3));
  CHECK(paper_pmf(p, 3) == frac(4, 9));
  CHECK(paper_pmf(p, 4) == frac(8, 27));
  CHECK_THROWS_AS(paper_pmf(p, 0), ValidationError);
  CHECK(paper_pmf_decimal(p, 4).to_fixed(10) == "0.2962962963");
}

TEST_CASE("product formula is not a distribution for one-item packs in three colours") {
  const MatchProbability p(frac(1, 3));
  mpq_class total = 0;
  for (std::uint64_t l = 1; l <= 4; ++l) total += paper_pmf(p, l);
  // a first match needs at most K + 1 = 4 packs
  CHECK(total == frac(29, 27));
  CHECK(total > 1);
}

TEST_CASE("product formula expectation") {
  const auto one_third = paper_expectation(MatchProbability(frac(1, 3)), 1e-15);
  CHECK(one_third.value.to_double() == doctest::Approx(oracle::paper_expectation(1.0 / 3.0, 200)).epsilon(1e-12));
  CHECK(one_third.value.to_double() == doctest::Approx(3.979887).epsilon(1e-6));
  CHECK(one_third.tail_bound.to_double() <= 1e-15);

  const auto certain = paper_expectation(MatchProbability(mpq_class(1)));
  CHECK(certain.value.to_double() == 2.0);

  CHECK_THROWS_AS(paper_expectation(MatchProbability(mpq_class(0))), ValidationError);

  const auto headline = paper_expectation(MatchProbability::of(PackSpec(60, 5)));
  CHECK(headline.value.to_double() >= 128.5);
  CHECK(headline.value.to_double() <= 129.5);
  CHECK(headline.value.to_double() ==
        doctest::Approx(oracle::paper_expectation(dbl(coincidence_probability(PackSpec(60, 5))), 3000)).epsilon(1e-9));
}

TEST_CASE("exact law for one-item packs") {
  const auto two = exact_first_match(PackSpec(1, 2));
  REQUIRE(two.exact_expectation);
  CHECK(*two.exact_expectation == frac(5, 2));
  REQUIRE(two.exact_pmf.size() >= 2);
  CHECK(two.exact_pmf[0] == frac(1, 2));
  CHECK(two.exact_pmf[1] == frac(1, 2));

  const auto three = exact_first_match(PackSpec(1, 3));
  REQUIRE(three.exact_expectation);
  CHECK(*three.exact_expectation == frac(26, 9));
  REQUIRE(three.exact_pmf.size() >= 3);
  CHECK(three.exact_pmf[0] == frac(1, 3));
  CHECK(three.exact_pmf[1] == frac(4, 9));
  CHECK(three.exact_pmf[2] == frac(2, 9));
  mpq_class total = 0;
  for (const auto& v : three.exact_pmf) total += v;
  CHECK(total == 1);

  const auto empty = exact_first_match(PackSpec(0, 2));
  REQUIRE(empty.exact_expectation);
  CHECK(*empty.exact_expectation == 2);
}

TEST_CASE("survival from Newton's identities matches tuple enumeration") {
  for (std::uint32_t n = 1; n <= 3; ++n) {
    for (std::uint32_t d = 2; d <= 3; ++d) {
      const PackSpec spec(n, d);
      const auto q = oracle::endpoint_probabilities(n, d);
      const std::uint32_t K = static_cast<std::uint32_t>(q.size());
      const auto spectrum = endpoint_spectrum(spec, K + 1);
      REQUIRE(spectrum.mode == SpectrumMode::exact);
      CHECK(spectrum.endpoint_count == K);
      const auto e = oracle::elementary_symmetric(q);
      for (std::uint32_t m = 0; m <= std::min<std::uint32_t>(K + 1, 5); ++m) {
        const auto s = exact_survival(spectrum, m);
        REQUIRE(s.exact);
        CHECK(*s.exact == oracle::survival_by_tuples(q, m));
        const mpq_class via_e = m <= K ? oracle::factorial(m) * e[m] : mpq_class(0);
        CHECK(*s.exact == via_e);
      }
      CHECK_THROWS_AS(exact_survival(spectrum, K + 2), ValidationError);
    }
  }
}

TEST_CASE("spectrum power sums") {
  const auto q = oracle::endpoint_probabilities(4, 3);
  const auto spectrum = endpoint_spectrum(PackSpec(4, 3), 6);
  std::uint64_t members = 0;
  for (const auto& c : spectrum.classes) members += c.multiplicity;
  CHECK(members == q.size());
  for (std::uint32_t j = 1; j <= 6; ++j) {
    mpq_class s = 0;
    for (const auto& x : q) {
      mpq_class t = 1;
      for (std::uint32_t i = 0; i < j; ++i) t *= x;
      s += t;
    }
    CHECK(spectrum.exact_power_sums[j - 1] == s);
  }
  CHECK(spectrum.exact_power_sums[0] == 1);
  CHECK_THROWS_AS(endpoint_spectrum(PackSpec(4, 3), 0), ValidationError);
  SpectrumOptions tiny;
  tiny.max_endpoints = 10;
  CHECK_THROWS_AS(endpoint_spectrum(PackSpec(4, 3), 3, tiny), ResourceLimit);
}

TEST_CASE("decimal mode agrees with exact mode") {
  const PackSpec spec(6, 3);
  SpectrumOptions as_decimal;
  as_decimal.exact_endpoint_limit = 0;
  const auto exact = exact_first_match(spec);
  const auto approx = exact_first_match(spec, kDefaultTolerance, as_decimal);
  REQUIRE(exact.exact_expectation);
  CHECK_FALSE(approx.exact_expectation);
  CHECK_FALSE(approx.precision_alarm);
  const Decimal gap = (approx.expectation - Decimal(*exact.exact_expectation, approx.expectation.precision())).abs();
  CHECK(gap <= approx.error_bound + approx.tail_bound + Decimal(1e-30, 128));
}

TEST_CASE("exact law properties") {
  for (std::uint32_t n = 1; n <= 4; ++n) {
    for (std::uint32_t d = 2; d <= 4; ++d) {
      const auto law = exact_first_match(PackSpec(n, d));
      CHECK_FALSE(law.precision_alarm);
      const double K = distinct_pack_count(PackSpec(n, d)).get_d();
      CHECK(law.last_ell <= K + 1);
      CHECK(law.pmf_total().to_double() == doctest::Approx(1.0).epsilon(1e-12));
      for (const auto& v : law.pmf) CHECK(v.sign() >= 0);
      CHECK(law.expectation.to_double() >= 2.0);
      CHECK(law.expectation.to_double() <= K + 1);
    }
  }
}

TEST_CASE("headline exact expectation") {
  const auto law = exact_first_match(PackSpec(60, 5));
  CHECK_FALSE(law.precision_alarm);
  CHECK(law.expectation.to_double() == doctest::Approx(128.071996).epsilon(1e-8));
  CHECK(law.error_bound.to_double() < 1e-20);
  CHECK(law.tail_bound.to_double() < 1e-12);
}

TEST_CASE("product formula first-match law") {
  const auto law = paper_first_match(MatchProbability(frac(1, 3)), 1e-14);
  CHECK(law.model == FirstMatchModel::paper_formula);
  CHECK(law.pmf[0].to_double() == doctest::Approx(1.0 / 3.0));
  CHECK(law.pmf_total().to_double() > 1.0);
}

TEST_CASE("pack size distributions") {
  std::istringstream uniform("# two sizes\n1 1/2\n\n2 1/2\n");
  const auto f = PackSizeDistribution::parse(uniform);
  CHECK_FALSE(f.renormalized);
  CHECK(mixture_match_probability(f, 2) == frac(7, 32));

  std::istringstream degenerate("60 1\n");
  CHECK(mixture_match_probability(PackSizeDistribution::parse(degenerate), 5) ==
        coincidence_probability(PackSpec(60, 5)));

  std::istringstream decimals("1 0.3333333333\n2 0.6666666666\n");
  const auto g = PackSizeDistribution::parse(decimals);
  CHECK(g.renormalized);
  mpq_class total = 0;
  for (const auto& [n, w] : g.support) total += w;
  CHECK(total == 1);

  std::istringstream zero("3 0\n4 1\n");
  CHECK(PackSizeDistribution::parse(zero).support.size() == 1);

  std::istringstream short_sum("1 0.5\n2 0.4\n");
  CHECK_THROWS_AS(PackSizeDistribution::parse(short_sum), ValidationError);
  std::istringstream short_rational("1 1/2\n2 2/5\n");
  CHECK_THROWS_AS(PackSizeDistribution::parse(short_rational), ValidationError);

  std::istringstream negative("1 3/2\n2 -1/2\n");
  try {
    PackSizeDistribution::parse(negative);
    FAIL("negative weight accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  std::istringstream repeated("1 1/2\n1 1/2\n");
  CHECK_THROWS_AS(PackSizeDistribution::parse(repeated), ValidationError);
  std::istringstream garbage("1 1/2\nfoo\n");
  CHECK_THROWS_AS(PackSizeDistribution::parse(garbage), ValidationError);
}
