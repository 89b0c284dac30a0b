#include <cstdio>
#include <fstream>
#include <map>

#include "packmatch/cli.hpp"
#include "packmatch/errors.hpp"
#include "packmatch/firstmatch.hpp"
#include "packmatch/montecarlo.hpp"

namespace packmatch::cli {

namespace {

// Size ceilings for the individual routes; beyond them a command refuses
// rather than running for hours.
constexpr std::uint32_t kTableMaxN = 400;
constexpr std::uint32_t kTableMaxD = 64;
const ExactInt kClosedRouteMaxTerms = 200'000'000;
constexpr std::uint32_t kRecursiveMaxN = 5000;
constexpr std::uint32_t kGfMaxN = 2000;
const ExactInt kReferenceMaxEndpoints = 1'000'000;

template <class Enum>
Enum lookup(const std::string& text, std::initializer_list<std::pair<const char*, Enum>> choices, const char* what) {
  std::string allowed;
  for (const auto& [name, value] : choices) {
    if (text == name) return value;
    allowed += allowed.empty() ? name : std::string("|") + name;
  }
  throw ValidationError(std::string("unknown ") + what + " '" + text + "' (expected " + allowed + ")");
}

std::string format_double(double v, unsigned digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", static_cast<int>(digits), v);
  return buf;
}

bool prefers_scientific(const ExactRatio& v, unsigned digits) {
  return sgn(v) != 0 && abs(v) < make_ratio(1, integer_pow(10, std::max(digits, 3u) - 1));
}

OutputValue exact_value(std::string name, const ExactRatio& v, unsigned digits) {
  OutputValue out;
  out.name = std::move(name);
  out.exact = v;
  out.digits = digits;
  if (v.get_den() == 1) {
    out.decimal = v.get_num().get_str();
    out.digits = 0;
  } else if (prefers_scientific(v, digits)) {
    out.decimal = to_scientific(v, digits);
    out.notation = "scientific";
  } else {
    out.decimal = to_fixed(v, digits);
  }
  return out;
}

OutputValue decimal_value(std::string name, const Decimal& v, unsigned digits) {
  OutputValue out;
  out.name = std::move(name);
  out.decimal = v.to_fixed(digits);
  out.digits = digits;
  return out;
}

OutputValue double_value(std::string name, double v, unsigned digits) {
  OutputValue out;
  out.name = std::move(name);
  out.decimal = format_double(v, digits);
  out.digits = digits;
  out.notation = "significant";
  return out;
}

void with_bound(OutputValue& v, const Decimal& bound, std::string kind) {
  v.bound = bound.is_zero() ? std::string("0") : bound.to_scientific(3);
  v.bound_kind = std::move(kind);
}

void spec_parameters(OutputRecord& r, PackSpec spec) {
  r.parameters.emplace_back("n", std::uint64_t{spec.n});
  r.parameters.emplace_back("d", std::uint64_t{spec.d});
}

const char* route_name(Route r) {
  switch (r) {
    case Route::closed: return "closed";
    case Route::recursive: return "recursive";
    case Route::gf: return "gf";
    case Route::all: return "all";
  }
  return "?";
}

const char* model_name(Model m) {
  switch (m) {
    case Model::paper: return "paper";
    case Model::exact: return "exact";
    case Model::both: return "both";
  }
  return "?";
}

}  // namespace

OutputFormat parse_format(const std::string& text) {
  return lookup<OutputFormat>(text, {{"plain", OutputFormat::plain}, {"csv", OutputFormat::csv}, {"json", OutputFormat::json}},
                "format");
}

TableKind parse_table_kind(const std::string& text) {
  return lookup<TableKind>(text, {{"counts", TableKind::counts}, {"probabilities", TableKind::probabilities}}, "table kind");
}

Route parse_route(const std::string& text) {
  return lookup<Route>(text,
                {{"closed", Route::closed}, {"recursive", Route::recursive}, {"gf", Route::gf}, {"all", Route::all}},
                "route");
}

Model parse_model(const std::string& text) {
  return lookup<Model>(text, {{"paper", Model::paper}, {"exact", Model::exact}, {"both", Model::both}}, "model");
}

Simulation parse_simulation(const std::string& text) {
  return lookup<Simulation>(text, {{"pair", Simulation::pair}, {"firstmatch", Simulation::firstmatch}}, "simulation");
}

// ---------------------------------------------------------------------------

TableRecord cmd_table(std::uint32_t max_n, std::uint32_t max_d, TableKind kind, unsigned digits) {
  if (max_n < 1 || max_d < 1) throw ValidationError("table bounds must be at least 1");
  if (max_n > kTableMaxN || max_d > kTableMaxD) {
    throw ResourceLimit("table bounds limited to n <= " + std::to_string(kTableMaxN) +
                        ", d <= " + std::to_string(kTableMaxD));
  }
  TableRecord table{kind, max_n, max_d, digits, {}};
  CoincidenceTable memo;
  table.cells.resize(max_n);
  for (std::uint32_t n = 1; n <= max_n; ++n) {
    for (std::uint32_t d = 1; d <= max_d; ++d) {
      const PackSpec spec(n, d);
      const ExactInt count = count_recursive(spec, memo);
      table.cells[n - 1].push_back(kind == TableKind::counts ? ExactRatio(count) : probability_from_count(spec, count));
    }
  }
  return table;
}

OutputRecord cmd_prob(PackSpec spec, Route route, unsigned digits) {
  OutputRecord r;
  r.command = "prob";
  spec_parameters(r, spec);
  r.parameters.emplace_back("route", std::string(route_name(route)));

  const bool closed = route == Route::closed || route == Route::all;
  const bool recursive = route == Route::recursive || route == Route::all;
  const bool gf = route == Route::gf || route == Route::all;
  if (closed && distinct_pack_count(spec) > kClosedRouteMaxTerms) {
    throw ResourceLimit("closed route would sum " + distinct_pack_count(spec).get_str() + " terms");
  }
  if (recursive && spec.n > kRecursiveMaxN) throw ResourceLimit("recursive route limited to n <= 5000");
  if (gf && spec.n > kGfMaxN) throw ResourceLimit("generating-function route limited to n <= 2000");

  std::vector<std::pair<std::string, ExactInt>> counts;
  if (closed) counts.emplace_back("count_closed", count_closed(spec));
  if (recursive) {
    CoincidenceTable memo;
    counts.emplace_back("count_recursive", count_recursive(spec, memo));
  }
  if (gf) counts.emplace_back("count_gf", count_gf(spec));

  for (const auto& [name, value] : counts) {
    if (value != counts.front().second) {
      throw InvariantBreach(name + " = " + value.get_str() + " disagrees with " + counts.front().first + " = " +
                            counts.front().second.get_str());
    }
    r.values.push_back(exact_value(name, ExactRatio(value), digits));
  }
  r.values.push_back(exact_value("walk_pairs", ExactRatio(integer_pow(spec.d, 2ull * spec.n)), digits));
  r.values.push_back(exact_value("probability", probability_from_count(spec, counts.front().second), digits));
  if (route == Route::all) r.notes.push_back("closed, recursive and generating-function counts agree exactly");
  return r;
}

OutputRecord cmd_expect(PackSpec spec, Model model, double tol, unsigned digits) {
  if (!(tol > 0.0)) throw ValidationError("--tol must be positive");
  OutputRecord r;
  r.command = "expect";
  spec_parameters(r, spec);
  r.parameters.emplace_back("model", std::string(model_name(model)));
  r.parameters.emplace_back("tol", tol);

  const MatchProbability p = MatchProbability::of(spec);
  r.values.push_back(exact_value("match_probability", p.p, digits));

  std::optional<Decimal> paper_value, exact_value_dec;
  if (model == Model::paper || model == Model::both) {
    const auto sum = paper_expectation(p, tol);
    auto v = decimal_value("paper_expectation", sum.value, digits);
    with_bound(v, sum.tail_bound, "tail");
    r.values.push_back(std::move(v));
    r.notes.push_back("product formula summed up to l = " + std::to_string(sum.last_index));
    paper_value = sum.value;
  }
  if (model == Model::exact || model == Model::both) {
    const auto law = exact_first_match(spec, tol);
    if (law.precision_alarm) {
      throw PrecisionAlarm("exact first-match oracle for (n=" + std::to_string(spec.n) + ", d=" +
                           std::to_string(spec.d) + ") lost too much precision (error bound " +
                           law.error_bound.to_scientific(3) + ")");
    }
    OutputValue v = law.exact_expectation ? exact_value("exact_expectation", *law.exact_expectation, digits)
                                          : decimal_value("exact_expectation", law.expectation, digits);
    with_bound(v, law.tail_bound + law.error_bound, "tail+rounding");
    r.values.push_back(std::move(v));
    r.notes.push_back("exact survival evaluated up to m = " + std::to_string(law.last_ell));
    exact_value_dec = law.expectation;
  }
  if (paper_value && exact_value_dec) {
    r.values.push_back(decimal_value("paper_minus_exact", *paper_value - *exact_value_dec, digits));
  }
  return r;
}

OutputRecord cmd_mixture(const std::string& path, std::uint32_t d, unsigned digits) {
  if (d == 0) throw ValidationError("--d must be at least 1");
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  PackSizeDistribution f;
  try {
    f = PackSizeDistribution::parse(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  for (const auto& [n, w] : f.support) {
    if (n > kRecursiveMaxN) throw ResourceLimit("pack sizes limited to n <= 5000");
  }

  OutputRecord r;
  r.command = "mixture";
  r.parameters.emplace_back("file", path);
  r.parameters.emplace_back("d", std::uint64_t{d});
  r.parameters.emplace_back("support_size", std::uint64_t{f.support.size()});
  r.values.push_back(exact_value("mixture_match_probability", mixture_match_probability(f, d), digits));
  if (f.renormalized) r.notes.push_back("decimal weights rescaled to sum to exactly 1");
  return r;
}

OutputRecord cmd_simulate(Simulation kind, PackSpec spec, std::uint64_t trials, std::uint64_t seed, unsigned digits) {
  if (trials == 0) throw ValidationError("--trials must be at least 1");
  OutputRecord r;
  r.command = "simulate";
  r.parameters.emplace_back("kind", std::string(kind == Simulation::pair ? "pair" : "firstmatch"));
  spec_parameters(r, spec);
  r.parameters.emplace_back("trials", trials);
  r.parameters.emplace_back("seed", seed);
  r.parameters.emplace_back("rng", std::string(Rng::kAlgorithm));

  if (kind == Simulation::pair) {
    const auto report = pair_match_rate(spec, trials, seed, false);
    r.values.push_back(exact_value("matches", ExactRatio(ExactInt(std::to_string(report.matches))), digits));
    r.values.push_back(double_value("estimate", report.estimate, digits));
    r.values.push_back(double_value("ci_low", report.ci_low, digits));
    r.values.push_back(double_value("ci_high", report.ci_high, digits));
    r.values.push_back(exact_value("analytic_reference", coincidence_probability(spec), digits));
    r.notes.push_back("95% Wilson interval");
    return r;
  }

  std::optional<ExactRatio> exact_reference;
  std::optional<Decimal> decimal_reference;
  if (distinct_pack_count(spec) <= kReferenceMaxEndpoints) {
    const auto law = exact_first_match(spec, kDefaultTolerance);
    if (!law.precision_alarm) {
      if (law.exact_expectation) exact_reference = *law.exact_expectation;
      decimal_reference = law.expectation;
    }
  }
  const auto report = first_match_experiment(
      spec, trials, seed, decimal_reference ? std::optional<double>(decimal_reference->to_double()) : std::nullopt);
  r.values.push_back(double_value("mean", report.estimate, digits));
  r.values.push_back(double_value("standard_error", report.standard_error, digits));
  r.values.push_back(double_value("ci_low", report.ci_low, digits));
  r.values.push_back(double_value("ci_high", report.ci_high, digits));
  r.values.push_back(exact_value("max_observed", ExactRatio(ExactInt(std::to_string(report.max_observed))), digits));
  if (exact_reference) {
    r.values.push_back(exact_value("analytic_reference", *exact_reference, digits));
  } else if (decimal_reference) {
    r.values.push_back(decimal_value("analytic_reference", *decimal_reference, digits));
  }
  for (const auto& [x, count] : report.histogram) r.histogram.emplace_back(x, count);
  r.notes.push_back("95% normal interval on the mean");
  return r;
}

}  // namespace packmatch::cli
