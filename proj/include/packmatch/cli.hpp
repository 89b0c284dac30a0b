#pragma once

// Commands behind the `packmatch` executable, kept in a library so tests can
// drive them without spawning a process. Each command returns a record that
// render() turns into plain text, CSV or JSON. The JSON layout is documented
// in docs/json-output.md.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "packmatch/coincidence.hpp"
#include "packmatch/exactmath.hpp"

namespace packmatch::cli {

enum class OutputFormat { plain, csv, json };
enum class TableKind { counts, probabilities };
enum class Route { closed, recursive, gf, all };
enum class Model { paper, exact, both };
enum class Simulation { pair, firstmatch };

OutputFormat parse_format(const std::string& text);
TableKind parse_table_kind(const std::string& text);
Route parse_route(const std::string& text);
Model parse_model(const std::string& text);
Simulation parse_simulation(const std::string& text);

using ParamValue = std::variant<std::string, std::uint64_t, double>;

/// One reported quantity. `exact` holds the value as a rational when it is
/// known exactly; `decimal` is always present and `digits` says how it was
/// rounded (`notation` is "fixed" or "scientific").
struct OutputValue {
  std::string name;
  std::optional<ExactRatio> exact;
  std::string decimal;
  unsigned digits = 0;
  std::string notation = "fixed";
  std::optional<std::string> bound;       // tail / error bound, scientific
  std::optional<std::string> bound_kind;  // what `bound` bounds
};

struct OutputRecord {
  std::string command;
  std::vector<std::pair<std::string, ParamValue>> parameters;
  std::vector<OutputValue> values;
  /// Free-form extras, e.g. an empirical histogram (first, second).
  std::vector<std::pair<std::uint64_t, std::uint64_t>> histogram;
  std::vector<std::string> notes;
};

struct TableRecord {
  TableKind kind = TableKind::counts;
  std::uint32_t max_n = 5;
  std::uint32_t max_d = 5;
  unsigned digits = 4;
  /// cells[n-1][d-1] = |E(n,d)| (counts) or P(n,d) (probabilities).
  std::vector<std::vector<ExactRatio>> cells;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Grid of |E(n,d)| or P(n,d) for 1 <= n <= max_n, 1 <= d <= max_d.
TableRecord cmd_table(std::uint32_t max_n, std::uint32_t max_d, TableKind kind, unsigned digits = 4);

/// P(n,d) by one or all routes. With Route::all the three counts must agree
/// exactly or InvariantBreach is thrown.
OutputRecord cmd_prob(PackSpec spec, Route route, unsigned digits = 4);

/// Expected number of packs until the first duplicate. Throws PrecisionAlarm
/// when the exact oracle cannot certify its result.
OutputRecord cmd_expect(PackSpec spec, Model model, double tol, unsigned digits = 6);

/// Pairwise match probability under a pack-size distribution read from
/// `path` (see PackSizeDistribution::parse).
OutputRecord cmd_mixture(const std::string& path, std::uint32_t d, unsigned digits = 6);

OutputRecord cmd_simulate(Simulation kind, PackSpec spec, std::uint64_t trials, std::uint64_t seed,
                          unsigned digits = 6);

std::string render(const OutputRecord& record, OutputFormat format);
std::string render(const TableRecord& table, OutputFormat format);

}  // namespace packmatch::cli
