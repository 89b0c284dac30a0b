#include <algorithm>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "packmatch/cli.hpp"

namespace packmatch::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string param_text(const ParamValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream os;
          os << x;
          return os.str();
        } else {
          return std::to_string(x);
        }
      },
      v);
}

Json param_json(const ParamValue& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const TableRecord& t, const ExactRatio& v) {
  return t.kind == TableKind::counts ? v.get_num().get_str() : to_fixed(v, t.digits);
}

}  // namespace

std::string render(const OutputRecord& record, OutputFormat format) {
  std::ostringstream os;
  switch (format) {
    case OutputFormat::plain: {
      os << record.command;
      for (const auto& [k, v] : record.parameters) os << ' ' << k << '=' << param_text(v);
      os << '\n';
      std::size_t width = 0;
      for (const auto& v : record.values) width = std::max(width, v.name.size());
      for (const auto& v : record.values) {
        os << "  " << std::left << std::setw(static_cast<int>(width)) << v.name << " = " << v.decimal;
        if (v.exact && v.exact->get_den() != 1) os << "  (" << v.exact->get_str() << ")";
        if (v.bound) os << "  [" << *v.bound_kind << " bound " << *v.bound << "]";
        os << '\n';
      }
      if (!record.histogram.empty()) {
        os << "  histogram:";
        for (const auto& [x, count] : record.histogram) os << ' ' << x << ':' << count;
        os << '\n';
      }
      for (const auto& note : record.notes) os << "  # " << note << '\n';
      break;
    }
    case OutputFormat::csv: {
      os << "name,numerator,denominator,decimal,digits,notation,bound,bound_kind\n";
      for (const auto& v : record.values) {
        os << csv_field(v.name) << ',' << (v.exact ? v.exact->get_num().get_str() : "") << ','
           << (v.exact ? v.exact->get_den().get_str() : "") << ',' << v.decimal << ',' << v.digits << ','
           << v.notation << ',' << v.bound.value_or("") << ',' << v.bound_kind.value_or("") << '\n';
      }
      break;
    }
    case OutputFormat::json: {
      Json j;
      j["command"] = record.command;
      Json params = Json::object();
      for (const auto& [k, v] : record.parameters) params[k] = param_json(v);
      j["parameters"] = params;
      Json values = Json::array();
      for (const auto& v : record.values) {
        Json e;
        e["name"] = v.name;
        if (v.exact) {
          e["numerator"] = v.exact->get_num().get_str();
          e["denominator"] = v.exact->get_den().get_str();
        }
        e["decimal"] = v.decimal;
        e["digits"] = v.digits;
        e["notation"] = v.notation;
        if (v.bound) {
          e["bound"] = *v.bound;
          e["bound_kind"] = *v.bound_kind;
        }
        values.push_back(e);
      }
      j["values"] = values;
      if (!record.histogram.empty()) {
        Json h = Json::array();
        for (const auto& [x, count] : record.histogram) h.push_back({{"packs", x}, {"trials", count}});
        j["histogram"] = h;
      }
      j["notes"] = record.notes;
      os << j.dump(2) << '\n';
      break;
    }
  }
  return os.str();
}

std::string render(const TableRecord& table, OutputFormat format) {
  std::ostringstream os;
  const char* kind = table.kind == TableKind::counts ? "counts" : "probabilities";
  switch (format) {
    case OutputFormat::plain: {
      std::vector<std::vector<std::string>> text(table.max_n);
      std::size_t width = std::to_string(table.max_d).size();
      for (std::uint32_t n = 0; n < table.max_n; ++n) {
        for (const auto& v : table.cells[n]) {
          text[n].push_back(cell_text(table, v));
          width = std::max(width, text[n].back().size());
        }
      }
      const int w = static_cast<int>(width);
      const int label = static_cast<int>(std::max<std::size_t>(5, std::to_string(table.max_n).size()));
      os << std::left << std::setw(label) << "n\\d" << " |";
      for (std::uint32_t d = 1; d <= table.max_d; ++d) os << ' ' << std::right << std::setw(w) << d;
      os << '\n' << std::string(label, '-') << "-+" << std::string((w + 1) * table.max_d, '-') << '\n';
      for (std::uint32_t n = 1; n <= table.max_n; ++n) {
        os << std::left << std::setw(label) << n << " |";
        for (const auto& cell : text[n - 1]) os << ' ' << std::right << std::setw(w) << cell;
        os << '\n';
      }
      break;
    }
    case OutputFormat::csv: {
      os << "n,d,numerator,denominator,decimal\n";
      for (std::uint32_t n = 1; n <= table.max_n; ++n) {
        for (std::uint32_t d = 1; d <= table.max_d; ++d) {
          const auto& v = table.cells[n - 1][d - 1];
          os << n << ',' << d << ',' << v.get_num().get_str() << ',' << v.get_den().get_str() << ','
             << cell_text(table, v) << '\n';
        }
      }
      break;
    }
    case OutputFormat::json: {
      Json j;
      j["command"] = "table";
      j["parameters"] = {{"max_n", table.max_n}, {"max_d", table.max_d}, {"kind", kind}, {"digits", table.digits}};
      Json rows = Json::array();
      for (std::uint32_t n = 1; n <= table.max_n; ++n) {
        Json cells = Json::array();
        for (std::uint32_t d = 1; d <= table.max_d; ++d) {
          const auto& v = table.cells[n - 1][d - 1];
          cells.push_back({{"d", d},
                           {"numerator", v.get_num().get_str()},
                           {"denominator", v.get_den().get_str()},
                           {"decimal", cell_text(table, v)}});
        }
        rows.push_back({{"n", n}, {"cells", cells}});
      }
      j["rows"] = rows;
      os << j.dump(2) << '\n';
      break;
    }
  }
  return os.str();
}

}  // namespace packmatch::cli
