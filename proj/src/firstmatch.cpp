#include "packmatch/firstmatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "packmatch/errors.hpp"

namespace packmatch {

namespace {

constexpr mpfr_prec_t kErrorBits = 64;

mpfr_prec_t bits_for(unsigned digits) { return Decimal::bits_for_digits(digits); }

Decimal infinity(mpfr_prec_t bits) { return Decimal(std::numeric_limits<double>::infinity(), bits); }

ExactRatio ratio_pow(const ExactRatio& base, std::uint64_t exp) {
  ExactInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exp);
  return make_ratio(num, den);
}

void require_positive_tolerance(double tol) {
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
}

}  // namespace

MatchProbability::MatchProbability(ExactRatio value) : p(std::move(value)) {
  if (sgn(p) < 0 || p > 1) throw ValidationError("match probability must lie in [0, 1], got " + p.get_str());
}

// ---------------------------------------------------------------------------

ExactRatio paper_pmf(const MatchProbability& p, std::uint64_t ell) {
  if (ell == 0) throw ValidationError("l must be at least 1");
  if (ell == 1) return 0;
  const std::uint64_t exponent = (ell - 1) * (ell - 2) / 2;
  const ExactRatio complement = 1 - p.p;
  const std::uint64_t size_bits =
      mpz_sizeinbase(complement.get_num_mpz_t(), 2) + mpz_sizeinbase(complement.get_den_mpz_t(), 2);
  if (exponent != 0 && size_bits > (std::uint64_t{1} << 27) / exponent) {
    throw ResourceLimit("exact product-formula value at l = " + std::to_string(ell) +
                        " is too large; evaluate it in decimal instead");
  }
  ExactRatio out = ratio_pow(complement, exponent) * ExactRatio(ExactInt(ell - 1)) * p.p;
  out.canonicalize();
  return out;
}

Decimal paper_pmf_decimal(const MatchProbability& p, std::uint64_t ell, unsigned digits) {
  if (ell == 0) throw ValidationError("l must be at least 1");
  const auto bits = bits_for(digits);
  if (ell == 1) return Decimal(bits);
  const Decimal prob(p.p, bits);
  const Decimal complement(ExactRatio(1 - p.p), bits);
  return complement.pow((ell - 1) * (ell - 2) / 2) * prob * static_cast<unsigned long>(ell - 1);
}

namespace {

// Walks the product-formula terms l(l-1)p(1-p)^C(l-1,2), l = 2, 3, ...
// until the term and the geometric tail bound both drop below tol.
template <class OnTerm>
SeriesSum walk_paper_series(const MatchProbability& p, double tol, unsigned digits, OnTerm on_term) {
  require_positive_tolerance(tol);
  if (sgn(p.p) == 0) throw ValidationError("match probability 0: expected first-match time is infinite");
  const auto bits = bits_for(digits);
  const Decimal prob(p.p, bits);
  const Decimal complement(ExactRatio(1 - p.p), bits);
  const Decimal threshold(tol, bits);
  const Decimal one(1L, bits);

  SeriesSum sum{Decimal(bits), Decimal(bits), 0};
  Decimal power(1L, bits);  // (1-p)^C(l-1,2)
  Decimal step(1L, bits);   // (1-p)^(l-1)... starts at (1-p)^0 for l = 1 -> 2
  for (std::uint64_t ell = 2;; ++ell) {
    // entering l: power == (1-p)^C(l-1,2), step == (1-p)^(l-2)
    step *= complement;  // (1-p)^(l-1)
    const Decimal pmf = power * prob * static_cast<unsigned long>(ell - 1);
    const Decimal term = pmf * static_cast<unsigned long>(ell);
    on_term(ell, pmf);
    sum.value += term;
    sum.last_index = ell;

    // Consecutive-term ratio (l+1)/(l-1) (1-p)^(l-1), non-increasing in l.
    const Decimal ratio = step * static_cast<unsigned long>(ell + 1) / static_cast<unsigned long>(ell - 1);
    if (term < threshold && ratio < one) {
      Decimal bound = term * ratio / (one - ratio);
      if (bound < threshold) {
        sum.tail_bound = bound;
        return sum;
      }
    }
    power *= step;  // (1-p)^C(l,2)
  }
}

}  // namespace

SeriesSum paper_expectation(const MatchProbability& p, double tol, unsigned digits) {
  return walk_paper_series(p, tol, digits, [](std::uint64_t, const Decimal&) {});
}

FirstMatchLaw paper_first_match(const MatchProbability& p, double tol, unsigned digits) {
  FirstMatchLaw law;
  law.model = FirstMatchModel::paper_formula;
  auto sum = walk_paper_series(p, tol, digits, [&](std::uint64_t, const Decimal& pmf) { law.pmf.push_back(pmf); });
  law.expectation = sum.value;
  law.tail_bound = sum.tail_bound;
  law.last_ell = sum.last_index;
  law.error_bound = Decimal(kErrorBits);
  return law;
}

// ---------------------------------------------------------------------------

EndpointSpectrum endpoint_spectrum(PackSpec spec, std::uint32_t max_power, const SpectrumOptions& options) {
  if (max_power == 0) throw ValidationError("max_power must be at least 1");
  const ExactInt endpoints = distinct_pack_count(spec);
  if (endpoints > ExactInt(std::to_string(options.max_endpoints))) {
    throw ResourceLimit("(n=" + std::to_string(spec.n) + ", d=" + std::to_string(spec.d) + ") has " +
                        endpoints.get_str() + " endpoints, above the limit of " +
                        std::to_string(options.max_endpoints));
  }

  EndpointSpectrum spectrum;
  spectrum.spec = spec;
  spectrum.endpoint_count = endpoints.get_ui();
  spectrum.max_power = max_power;
  spectrum.mode = (spectrum.endpoint_count <= options.exact_endpoint_limit && max_power <= options.exact_power_limit)
                      ? SpectrumMode::exact
                      : SpectrumMode::decimal;
  spectrum.bits = bits_for(options.precision_digits);

  std::map<std::vector<std::uint32_t>, std::uint64_t> shapes;
  std::vector<std::uint32_t> key;
  for (const auto& counts : compositions(spec)) {
    key.assign(counts.begin(), counts.end());
    std::sort(key.begin(), key.end(), std::greater<>());
    ++shapes[key];
  }

  const ExactInt walks = integer_pow(spec.d, spec.n);
  spectrum.classes.reserve(shapes.size());
  for (auto& [shape, count] : shapes) {
    spectrum.classes.push_back({shape, make_ratio(multinomial(spec.n, shape), walks), count});
  }

  const auto bits = spectrum.bits;
  if (spectrum.mode == SpectrumMode::exact) {
    spectrum.exact_power_sums.assign(max_power, ExactRatio(0));
    for (const auto& c : spectrum.classes) {
      ExactRatio power = c.probability;
      const ExactRatio weight(ExactInt(std::to_string(c.multiplicity)));
      for (std::uint32_t j = 1; j <= max_power; ++j) {
        spectrum.exact_power_sums[j - 1] += weight * power;
        if (j < max_power) power *= c.probability;
      }
    }
    for (const auto& s : spectrum.exact_power_sums) spectrum.power_sums.emplace_back(s, bits);
    spectrum.power_sum_rel_error.assign(max_power, Decimal(kErrorBits));
  } else {
    spectrum.power_sums.assign(max_power, Decimal(bits));
    for (const auto& c : spectrum.classes) {
      const Decimal q(c.probability, bits);
      Decimal power = q;
      Decimal term(bits);
      for (std::uint32_t j = 1; j <= max_power; ++j) {
        term = power;
        term *= static_cast<unsigned long>(c.multiplicity);
        spectrum.power_sums[j - 1] += term;
        if (j < max_power) power *= q;
      }
    }
    // Conversion, j-1 products, the multiplicity scaling and a sum of
    // positive terms: relative error below (2j + classes + 4) u.
    const Decimal u = Decimal(bits).unit_roundoff();
    spectrum.power_sum_rel_error.reserve(max_power);
    for (std::uint32_t j = 1; j <= max_power; ++j) {
      Decimal e(u);
      e *= static_cast<unsigned long>(2ull * j + spectrum.classes.size() + 4);
      spectrum.power_sum_rel_error.push_back(std::move(e));
    }
  }
  return spectrum;
}

// ---------------------------------------------------------------------------

ProbabilityValue SurvivalSeries::at(std::uint32_t m) const {
  ProbabilityValue v{std::nullopt, approx.at(m), error_bound.at(m), alarm_at.has_value() && *alarm_at <= m};
  if (mode == SpectrumMode::exact) v.exact = exact.at(m);
  return v;
}

SurvivalSeries survival_series(const EndpointSpectrum& spectrum, const SpectrumOptions& options) {
  // Newton's identities rewritten for s_m = m! e_m:
  //   s_m = sum_{j=1..m} (-1)^(j-1) (m-1)!/(m-j)! s_{m-j} S_j,  s_0 = 1.
  const std::uint32_t top = spectrum.max_power;
  const auto bits = spectrum.bits;
  SurvivalSeries series;
  series.mode = spectrum.mode;

  if (spectrum.mode == SpectrumMode::exact) {
    series.exact.reserve(top + 1);
    series.exact.emplace_back(1);
    for (std::uint32_t m = 1; m <= top; ++m) {
      ExactRatio acc = 0;
      if (m <= spectrum.endpoint_count) {
        ExactInt falling = 1;  // (m-1)!/(m-j)!
        for (std::uint32_t j = 1; j <= m; ++j) {
          ExactRatio term = ExactRatio(falling) * series.exact[m - j] * spectrum.exact_power_sums[j - 1];
          if (j % 2 == 1) acc += term;
          else acc -= term;
          falling *= (m - j);
        }
      }
      series.exact.push_back(std::move(acc));
    }
    for (const auto& s : series.exact) {
      series.approx.emplace_back(s, bits);
      series.error_bound.emplace_back(kErrorBits);
    }
    return series;
  }

  const Decimal u = Decimal(bits).unit_roundoff();
  const Decimal alarm_level = Decimal::ten_to_minus(options.required_digits, kErrorBits);

  series.approx.reserve(top + 1);
  series.error_bound.reserve(top + 1);
  series.approx.emplace_back(1L, bits);
  series.error_bound.emplace_back(kErrorBits);

  // Low precision copies for the error recurrence.
  std::vector<Decimal> sums_lo;
  sums_lo.reserve(top);
  for (const auto& s : spectrum.power_sums) sums_lo.push_back(s.abs().with_precision(kErrorBits));

  for (std::uint32_t m = 1; m <= top; ++m) {
    if (m > spectrum.endpoint_count) {
      // e_m vanishes once m exceeds the number of endpoints.
      series.approx.emplace_back(bits);
      series.error_bound.emplace_back(kErrorBits);
      continue;
    }
    Decimal acc(bits);
    Decimal falling(1L, bits);
    Decimal propagated(kErrorBits);
    Decimal rounding(kErrorBits);
    Decimal term(bits);
    for (std::uint32_t j = 1; j <= m; ++j) {
      term = falling;
      term *= series.approx[m - j];
      term *= spectrum.power_sums[j - 1];
      if (j % 2 == 1) acc += term;
      else acc -= term;

      // Inherited error from s_{m-j}, scaled by the coefficient.
      Decimal inherited = falling.with_precision(kErrorBits);
      inherited *= sums_lo[j - 1];
      inherited *= series.error_bound[m - j];
      propagated += inherited;
      // Fresh rounding in S_j, the falling factorial, the product and the sum.
      Decimal local = spectrum.power_sum_rel_error[j - 1];
      Decimal extra(u);
      extra *= static_cast<unsigned long>(2ull * j + m + 4);
      local += extra;
      rounding += term.abs().with_precision(kErrorBits) * local;

      falling *= static_cast<unsigned long>(m - j);
    }
    Decimal bound = propagated + rounding;
    bound *= Decimal(1.01, kErrorBits);
    if (!series.alarm_at && bound > alarm_level) series.alarm_at = m;
    series.approx.push_back(std::move(acc));
    series.error_bound.push_back(std::move(bound));
  }
  return series;
}

ProbabilityValue exact_survival(const EndpointSpectrum& spectrum, std::uint32_t m, const SpectrumOptions& options) {
  if (m > spectrum.max_power) {
    throw ValidationError("survival at m = " + std::to_string(m) + " needs power sums up to " + std::to_string(m) +
                          ", spectrum has " + std::to_string(spectrum.max_power));
  }
  EndpointSpectrum truncated = spectrum;
  if (m < spectrum.max_power && m > 0) {
    truncated.max_power = m;
    truncated.power_sums.resize(m, Decimal(spectrum.bits));
    truncated.power_sum_rel_error.resize(m, Decimal(kErrorBits));
    if (!truncated.exact_power_sums.empty()) truncated.exact_power_sums.resize(m);
  }
  return survival_series(truncated, options).at(m);
}

// ---------------------------------------------------------------------------

Decimal FirstMatchLaw::pmf_total() const {
  Decimal total(pmf.empty() ? Decimal(kErrorBits) : Decimal(pmf.front().precision()));
  for (const auto& v : pmf) total += v;
  return total;
}

FirstMatchLaw exact_pmf_and_expectation(const EndpointSpectrum& spectrum, double tol, const SpectrumOptions& options) {
  require_positive_tolerance(tol);
  const auto series = survival_series(spectrum, options);
  const std::uint32_t top = spectrum.max_power;
  const auto bits = spectrum.bits;

  FirstMatchLaw law;
  law.model = FirstMatchModel::exact_oracle;
  law.last_ell = top;
  law.precision_alarm = series.alarm_at.has_value();

  for (std::uint64_t ell = 2; ell <= top; ++ell) law.pmf.push_back(series.approx[ell - 1] - series.approx[ell]);

  law.expectation = Decimal(bits);
  law.error_bound = Decimal(kErrorBits);
  for (std::uint32_t m = 0; m <= top; ++m) {
    law.expectation += series.approx[m];
    law.error_bound += series.error_bound[m];
  }

  const Decimal& last = series.approx[top];
  if (last.sign() <= 0) {
    law.tail_bound = Decimal(bits);
  } else {
    // s_{m+1}/s_m is non-increasing (Newton's inequalities), so the tail
    // past `top` is dominated by a geometric series with the last ratio.
    const Decimal ratio = last / series.approx[top - 1];
    const Decimal one(1L, bits);
    law.tail_bound = ratio < one ? Decimal(last * ratio / (one - ratio)) : infinity(bits);
  }

  if (spectrum.mode == SpectrumMode::exact) {
    for (std::uint64_t ell = 2; ell <= top; ++ell) law.exact_pmf.push_back(series.exact[ell - 1] - series.exact[ell]);
    if (sgn(series.exact[top]) == 0) {
      ExactRatio total = 0;
      for (const auto& s : series.exact) total += s;
      law.exact_expectation = total;
    }
  }
  return law;
}

FirstMatchLaw exact_first_match(PackSpec spec, double tol, const SpectrumOptions& options) {
  require_positive_tolerance(tol);
  const ExactInt endpoints = distinct_pack_count(spec);
  if (endpoints > ExactInt(std::to_string(options.max_endpoints))) {
    throw ResourceLimit("(n=" + std::to_string(spec.n) + ", d=" + std::to_string(spec.d) + ") has " +
                        endpoints.get_str() + " endpoints, above the limit of " +
                        std::to_string(options.max_endpoints));
  }
  const std::uint64_t full = endpoints.get_ui() + 1;  // survival is exactly 0 here

  if (endpoints.get_ui() <= options.exact_endpoint_limit && full <= options.exact_power_limit) {
    return exact_pmf_and_expectation(endpoint_spectrum(spec, static_cast<std::uint32_t>(full), options), tol, options);
  }

  // P[X > m] ~ exp(-m^2 p / 2); start a bit past the point where that hits tol.
  const double p = mpq_get_d(coincidence_probability(spec).get_mpq_t());
  const double guess = 1.5 * std::sqrt(2.0 * std::log(1.0 / tol) / p) + 8.0;
  std::uint64_t power = std::min<std::uint64_t>(full, static_cast<std::uint64_t>(guess));
  const Decimal threshold(tol, kErrorBits);
  while (true) {
    auto spectrum = endpoint_spectrum(spec, static_cast<std::uint32_t>(power), options);
    auto law = exact_pmf_and_expectation(spectrum, tol, options);
    const Decimal remaining = Decimal(1L, spectrum.bits) - law.pmf_total();
    if (power >= full || (law.tail_bound < threshold && remaining < threshold)) return law;
    power = std::min(full, power * 2);
  }
}

// ---------------------------------------------------------------------------

PackSizeDistribution PackSizeDistribution::from_weights(std::vector<std::pair<std::uint32_t, ExactRatio>> weights,
                                                        bool decimal_input) {
  std::sort(weights.begin(), weights.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  PackSizeDistribution f;
  ExactRatio total = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto& [n, w] = weights[i];
    if (i > 0 && weights[i - 1].first == n) throw ValidationError("pack size " + std::to_string(n) + " listed twice");
    if (sgn(w) < 0) throw ValidationError("negative mass " + w.get_str() + " at pack size " + std::to_string(n));
    if (sgn(w) == 0) continue;
    total += w;
    f.support.emplace_back(n, w);
  }
  if (f.support.empty()) throw ValidationError("distribution has no positive mass");

  if (decimal_input) {
    const ExactRatio slack = make_ratio(1, integer_pow(10, 9));
    if (abs(total - 1) > slack) {
      throw ValidationError("weights sum to " + to_fixed(total, 12) + ", expected 1 (within 1e-9)");
    }
    if (total != 1) {
      for (auto& entry : f.support) entry.second /= total;
      f.renormalized = true;
    }
  } else if (total != 1) {
    throw ValidationError("weights sum to " + total.get_str() + ", expected exactly 1");
  }
  return f;
}

PackSizeDistribution PackSizeDistribution::parse(std::istream& in) {
  std::vector<std::pair<std::uint32_t, ExactRatio>> weights;
  bool decimal_input = false;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string size_text, weight_text, extra;
    if (!(fields >> size_text)) continue;
    auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    if (!(fields >> weight_text)) throw ValidationError(where() + "expected 'n weight', got '" + line + "'");
    if (fields >> extra) throw ValidationError(where() + "unexpected trailing field '" + extra + "'");

    if (size_text.empty() || size_text.size() > 9 ||
        !std::all_of(size_text.begin(), size_text.end(), [](unsigned char c) { return std::isdigit(c); })) {
      throw ValidationError(where() + "pack size must be a non-negative integer, got '" + size_text + "'");
    }
    ExactRatio weight;
    try {
      weight = parse_ratio(weight_text);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(where() + e.what());
    }
    if (weight_text.find_first_of(".eE") != std::string::npos) decimal_input = true;
    if (sgn(weight) < 0) throw ValidationError(where() + "negative mass " + weight_text);
    weights.emplace_back(static_cast<std::uint32_t>(std::stoul(size_text)), std::move(weight));
  }
  return from_weights(std::move(weights), decimal_input);
}

ExactRatio mixture_match_probability(const PackSizeDistribution& f, std::uint32_t d, CoincidenceTable& table) {
  ExactRatio total = 0;
  for (const auto& [n, weight] : f.support) {
    total += weight * weight * coincidence_probability(PackSpec(n, d), table);
  }
  return total;
}

ExactRatio mixture_match_probability(const PackSizeDistribution& f, std::uint32_t d) {
  CoincidenceTable table;
  return mixture_match_probability(f, d, table);
}

}  // namespace packmatch
