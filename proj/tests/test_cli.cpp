#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "oracles.hpp"
#include "packmatch/cli.hpp"
#include "packmatch/errors.hpp"
#include "packmatch/montecarlo.hpp"

using namespace packmatch;
using namespace packmatch::cli;
using Json = nlohmann::json;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("packmatch_test_" + name);
  std::ofstream(path) << body;
  return path;
}

const OutputValue& value(const OutputRecord& r, const std::string& name) {
  for (const auto& v : r.values) {
    if (v.name == name) return v;
  }
  throw std::runtime_error("no value " + name);
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(PACKMATCH_TOOL) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture_tool(const std::string& args) {
  const std::string cmd = std::string(PACKMATCH_TOOL) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  pclose(pipe);
  return out;
}

}  // namespace

TEST_CASE("count table, plain") {
  const std::string expected =
      "n\\d   |      1      2      3      4      5\n"
      "------+-----------------------------------\n"
      "1     |      1      2      3      4      5\n"
      "2     |      1      6     15     28     45\n"
      "3     |      1     20     93    256    545\n"
      "4     |      1     70    639   2716   7885\n"
      "5     |      1    252   4653  31504 127905\n";
  CHECK(render(cmd_table(5, 5, TableKind::counts), OutputFormat::plain) == expected);
}

TEST_CASE("probability table cells") {
  const auto t = cmd_table(5, 5, TableKind::probabilities);
  CHECK(to_fixed(t.cells[1][2], 4) == "0.1852");
  CHECK(to_fixed(t.cells[2][2], 4) == "0.1276");
  CHECK(to_fixed(t.cells[4][4], 4) == "0.0131");
  CHECK(t.cells[1][1] == frac(3, 8));
  const auto one = cmd_table(1, 1, TableKind::counts);
  CHECK(one.cells.size() == 1);
  CHECK(one.cells[0][0] == 1);
  CHECK_THROWS_AS(cmd_table(0, 5, TableKind::counts), ValidationError);
  CHECK_THROWS_AS(cmd_table(100000, 5, TableKind::counts), ResourceLimit);
}

TEST_CASE("prob") {
  const auto r = cmd_prob(PackSpec(3, 3), Route::closed);
  CHECK(*value(r, "probability").exact == frac(93, 729));
  CHECK(*value(r, "count_closed").exact == 93);

  const auto headline = cmd_prob(PackSpec(60, 5), Route::all);
  CHECK(value(headline, "count_closed").exact == value(headline, "count_gf").exact);
  CHECK(value(headline, "count_recursive").exact == value(headline, "count_gf").exact);
  CHECK(value(headline, "probability").decimal == "9.753e-5");
  CHECK(value(headline, "probability").notation == "scientific");

  const auto empty = cmd_prob(PackSpec(0, 4), Route::all);
  CHECK(*value(empty, "probability").exact == 1);
}

TEST_CASE("expect") {
  const auto small = cmd_expect(PackSpec(1, 3), Model::both, 1e-12);
  CHECK(*value(small, "exact_expectation").exact == frac(26, 9));
  CHECK(std::stod(value(small, "paper_expectation").decimal) == doctest::Approx(3.979887).epsilon(1e-6));
  CHECK(value(small, "paper_expectation").bound.has_value());
  CHECK(std::stod(value(small, "paper_minus_exact").decimal) == doctest::Approx(3.979887 - 26.0 / 9.0).epsilon(1e-5));

  const auto empty = cmd_expect(PackSpec(0, 2), Model::exact, 1e-12);
  CHECK(*value(empty, "exact_expectation").exact == 2);

  const auto headline = cmd_expect(PackSpec(60, 5), Model::paper, 1e-12);
  const double v = std::stod(value(headline, "paper_expectation").decimal);
  CHECK(v >= 128.5);
  CHECK(v <= 129.5);

  CHECK_THROWS_AS(cmd_expect(PackSpec(1, 3), Model::both, 0.0), ValidationError);
}

TEST_CASE("mixture") {
  const auto uniform = write_temp("uniform.txt", "1 1/2\n2 1/2\n");
  CHECK(*value(cmd_mixture(uniform.string(), 2), "mixture_match_probability").exact == frac(7, 32));
  CHECK(value(cmd_mixture(uniform.string(), 2), "mixture_match_probability").decimal == "0.218750");

  const auto degenerate = write_temp("degenerate.txt", "# always sixty\n60 1\n");
  CHECK(*value(cmd_mixture(degenerate.string(), 5), "mixture_match_probability").exact ==
        coincidence_probability(PackSpec(60, 5)));

  const auto short_sum = write_temp("short.txt", "1 0.5\n2 0.4\n");
  CHECK_THROWS_AS(cmd_mixture(short_sum.string(), 2), ValidationError);

  const auto bad_line = write_temp("bad.txt", "1 0.5\n\n2 x\n");
  try {
    cmd_mixture(bad_line.string(), 2);
    FAIL("bad weight accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(cmd_mixture("/nonexistent/packmatch.txt", 2), ValidationError);
}

TEST_CASE("simulate") {
  const auto pair = cmd_simulate(Simulation::pair, PackSpec(0, 3), 100, 1);
  CHECK(value(pair, "estimate").decimal == "1");
  CHECK(*value(pair, "matches").exact == 100);

  const auto first = cmd_simulate(Simulation::firstmatch, PackSpec(1, 2), 100000, 7);
  const double mean = std::stod(value(first, "mean").decimal);
  const double se = std::stod(value(first, "standard_error").decimal);
  CHECK(std::abs(mean - 2.5) < 5 * se);
  CHECK(*value(first, "analytic_reference").exact == frac(5, 2));

  bool has_seed = false;
  for (const auto& [k, v] : first.parameters) has_seed = has_seed || k == "seed";
  CHECK(has_seed);
  CHECK(render(first, OutputFormat::json) ==
        render(cmd_simulate(Simulation::firstmatch, PackSpec(1, 2), 100000, 7), OutputFormat::json));
  CHECK_THROWS_AS(cmd_simulate(Simulation::pair, PackSpec(1, 2), 0, 7), ValidationError);
}

TEST_CASE("json round trip keeps exact values") {
  const auto r = cmd_prob(PackSpec(60, 5), Route::recursive);
  const Json j = Json::parse(render(r, OutputFormat::json));
  REQUIRE(j["values"].size() == r.values.size());
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    const auto& v = r.values[i];
    const auto& e = j["values"][i];
    CHECK(e["name"] == v.name);
    mpq_class back(mpz_class(e["numerator"].get<std::string>(), 10), mpz_class(e["denominator"].get<std::string>(), 10));
    CHECK(back == *v.exact);
    CHECK(e["decimal"] == v.decimal);
  }

  const auto t = cmd_table(5, 5, TableKind::probabilities);
  const Json tj = Json::parse(render(t, OutputFormat::json));
  for (std::uint32_t n = 1; n <= 5; ++n) {
    for (std::uint32_t d = 1; d <= 5; ++d) {
      const auto& cell = tj["rows"][n - 1]["cells"][d - 1];
      mpq_class back(mpz_class(cell["numerator"].get<std::string>(), 10),
                     mpz_class(cell["denominator"].get<std::string>(), 10));
      CHECK(back == t.cells[n - 1][d - 1]);
    }
  }
}

TEST_CASE("csv output") {
  const std::string csv = render(cmd_prob(PackSpec(2, 2), Route::gf), OutputFormat::csv);
  CHECK(csv.rfind("name,numerator,denominator,decimal,digits,notation,bound,bound_kind\n", 0) == 0);
  CHECK(csv.find("probability,3,8,0.3750,4,fixed,,\n") != std::string::npos);
}

TEST_CASE("option parsing") {
  CHECK(parse_format("json") == OutputFormat::json);
  CHECK(parse_route("gf") == Route::gf);
  CHECK(parse_model("both") == Model::both);
  CHECK(parse_simulation("firstmatch") == Simulation::firstmatch);
  CHECK(parse_table_kind("probabilities") == TableKind::probabilities);
  CHECK_THROWS_AS(parse_format("xml"), ValidationError);
  CHECK_THROWS_AS(parse_route("fast"), ValidationError);
}

TEST_CASE("exit status") {
  CHECK(run_tool("table") == 0);
  CHECK(run_tool("prob --n 3 --d 3") == 0);
  CHECK(run_tool("prob --n 3 --d 0") == 2);
  CHECK(run_tool("prob --n 3") == 2);
  CHECK(run_tool("prob --n 3 --d 3 --route fast") == 2);
  CHECK(run_tool("table 5000 5") == 2);
  const auto short_sum = write_temp("exit_short.txt", "1 0.5\n2 0.4\n");
  CHECK(run_tool("mixture " + short_sum.string() + " --d 2") == 2);
  CHECK(run_tool("simulate pair --n 2 --d 2 --trials 0") == 2);
  CHECK(run_tool("--help") == 0);
}

TEST_CASE("identical invocations give identical bytes") {
  const std::string args = "simulate pair --n 4 --d 3 --trials 20000 --seed 5 --format json";
  const std::string a = capture_tool(args);
  CHECK_FALSE(a.empty());
  CHECK(a == capture_tool(args));
  CHECK(a.find("\"seed\": 5") != std::string::npos);
}
