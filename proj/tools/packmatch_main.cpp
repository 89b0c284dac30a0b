// packmatch: identical-pack probabilities, first-match times and simulation.
//
// Exit status: 0 on success, 2 on invalid input or a refused oversized
// request, 3 on a precision alarm, 4 on an internal invariant breach.

#include <iostream>

#include <CLI11.hpp>

#include "packmatch/cli.hpp"
#include "packmatch/errors.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitInvariant = 4;

constexpr const char* kDistributionHelp = R"(Pack-size distribution file:
  one "n weight" pair per line; '#' starts a comment; blank lines are ignored.
  n is a non-negative integer pack size, listed at most once.
  weight is an integer, a fraction ("3/10") or a decimal ("0.3", "3e-1").
  Fractions/integers must sum to exactly 1. If any weight is a decimal, the
  weights must sum to 1 within 1e-9 and are then rescaled to sum to 1.
Example:
  # uniform over 59..61
  59 1/3
  60 1/3
  61 1/3)";

}  // namespace

int main(int argc, char** argv) {
  using namespace packmatch;
  using namespace packmatch::cli;

  CLI::App app{"Exact probability that two randomly filled packs are identical, and related quantities"};
  app.require_subcommand(1);

  std::string format_text = "plain";
  unsigned table_digits = 4, prob_digits = 4, expect_digits = 6, mixture_digits = 6, sim_digits = 6;
  std::uint32_t n = 0, d = 1;

  auto add_common = [&](CLI::App* cmd, unsigned& digits) {
    cmd->add_option("--format", format_text, "Output format: plain, csv or json")->capture_default_str();
    cmd->add_option("--digits", digits, "Digits used for decimal renderings")->capture_default_str();
  };

  // table
  auto* table = app.add_subcommand("table", "Grid of |E(n,d)| counts or P(n,d) probabilities");
  std::uint32_t max_n = 5, max_d = 5;
  std::string kind_text = "counts";
  table->add_option("max_n", max_n, "Largest pack size")->capture_default_str();
  table->add_option("max_d", max_d, "Largest number of colors")->capture_default_str();
  table->add_option("which", kind_text, "counts or probabilities")->capture_default_str();
  add_common(table, table_digits);

  // prob
  auto* prob = app.add_subcommand("prob", "Probability that two random packs are identical");
  std::string route_text = "recursive";
  prob->add_option("--n", n, "Pack size")->required();
  prob->add_option("--d", d, "Number of colors")->required();
  prob->add_option("--route", route_text, "closed, recursive, gf or all")->capture_default_str();
  add_common(prob, prob_digits);

  // expect
  auto* expect = app.add_subcommand("expect", "Expected number of packs bought until the first duplicate");
  std::string model_text = "both";
  double tol = 1e-12;
  expect->add_option("--n", n, "Pack size")->required();
  expect->add_option("--d", d, "Number of colors")->required();
  expect->add_option("--model", model_text, "paper, exact or both")->capture_default_str();
  expect->add_option("--tol", tol, "Truncation tolerance for the series")->capture_default_str();
  add_common(expect, expect_digits);

  // mixture
  auto* mixture = app.add_subcommand("mixture", "Match probability when the pack size is random");
  mixture->footer(kDistributionHelp);
  std::string path;
  mixture->add_option("file", path, "Pack-size distribution file")->required();
  mixture->add_option("--d", d, "Number of colors")->required();
  add_common(mixture, mixture_digits);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate (pair match rate or first-match time)");
  std::string sim_text;
  std::uint64_t trials = 100000;
  std::uint64_t seed = kDefaultSeed;
  simulate->add_option("kind", sim_text, "pair or firstmatch")->required();
  simulate->add_option("--n", n, "Pack size")->required();
  simulate->add_option("--d", d, "Number of colors")->required();
  simulate->add_option("--trials", trials, "Number of trials")->capture_default_str();
  simulate->add_option("--seed", seed, "Random seed (always echoed in the output)")->capture_default_str();
  add_common(simulate, sim_digits);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    const OutputFormat format = parse_format(format_text);
    if (table->parsed()) {
      std::cout << render(cmd_table(max_n, max_d, parse_table_kind(kind_text), table_digits), format);
    } else if (prob->parsed()) {
      std::cout << render(cmd_prob(PackSpec(n, d), parse_route(route_text), prob_digits), format);
    } else if (expect->parsed()) {
      std::cout << render(cmd_expect(PackSpec(n, d), parse_model(model_text), tol, expect_digits), format);
    } else if (mixture->parsed()) {
      std::cout << render(cmd_mixture(path, d, mixture_digits), format);
    } else if (simulate->parsed()) {
      std::cout << render(cmd_simulate(parse_simulation(sim_text), PackSpec(n, d), trials, seed, sim_digits), format);
    }
  } catch (const PrecisionAlarm& e) {
    std::cerr << "precision alarm: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const InvariantBreach& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
