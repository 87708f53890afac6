#include "spectral_walks/cli/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "spectral_walks/version.hpp"

namespace spectral_walks::cli {

Table& Table::row(std::vector<Cell> cells) {
  rows.push_back(std::move(cells));
  return *this;
}

Table& Report::table(std::string name, std::vector<std::string> columns) {
  tables.push_back(Table{std::move(name), std::move(columns), {}});
  return tables.back();
}

bool Report::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (unsigned char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (ch < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += static_cast<char>(ch);
        }
    }
  }
  return out + '"';
}

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

std::string cell_csv(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return csv_escape(v);
        else if constexpr (std::is_same_v<T, double>) return format_number(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return std::to_string(v);
      },
      c);
}

std::string cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return json_string(v);
        else if constexpr (std::is_same_v<T, double>) return json_number(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return std::to_string(v);
      },
      c);
}

}  // namespace

void write_csv(std::ostream& os, const Report& r) {
  os << "# spectral-walks " << kVersion << "\n";
  os << "# command: " << r.command << "\n";
  os << "# seed: " << r.seed << "\n";
  os << "# config_hash: " << hex64(r.config_hash) << "\n";
  for (const auto& t : r.tables) {
    os << "\n# table: " << t.name << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
    os << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_csv(row[i]);
      os << "\n";
    }
  }
  if (!r.checks.empty()) {
    os << "\n# table: checks\nname,estimate,exact,se,sigmas,passed\n";
    for (const auto& c : r.checks) {
      os << csv_escape(c.name) << ',' << format_number(c.estimate) << ',' << format_number(c.exact) << ','
         << format_number(c.se) << ',' << format_number(c.sigmas) << ',' << (c.passed ? "true" : "false") << "\n";
    }
  }
}

void write_json(std::ostream& os, const Report& r) {
  os << "{\n  \"meta\": {\"version\": " << json_string(kVersion) << ", \"command\": " << json_string(r.command)
     << ", \"seed\": " << r.seed << ", \"config_hash\": " << json_string(hex64(r.config_hash)) << "},\n";
  os << "  \"tables\": {";
  for (std::size_t ti = 0; ti < r.tables.size(); ++ti) {
    const auto& t = r.tables[ti];
    os << (ti ? ",\n" : "\n") << "    " << json_string(t.name) << ": [";
    for (std::size_t ri = 0; ri < t.rows.size(); ++ri) {
      os << (ri ? ",\n" : "\n") << "      {";
      for (std::size_t i = 0; i < t.columns.size() && i < t.rows[ri].size(); ++i) {
        os << (i ? ", " : "") << json_string(t.columns[i]) << ": " << cell_json(t.rows[ri][i]);
      }
      os << "}";
    }
    os << (t.rows.empty() ? "]" : "\n    ]");
  }
  os << (r.tables.empty() ? "},\n" : "\n  },\n");
  os << "  \"checks\": [";
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const auto& c = r.checks[i];
    os << (i ? ",\n" : "\n") << "    {\"name\": " << json_string(c.name) << ", \"estimate\": " << json_number(c.estimate)
       << ", \"exact\": " << json_number(c.exact) << ", \"se\": " << json_number(c.se)
       << ", \"sigmas\": " << json_number(c.sigmas) << ", \"passed\": " << (c.passed ? "true" : "false") << "}";
  }
  os << (r.checks.empty() ? "],\n" : "\n  ],\n");
  os << "  \"passed\": " << (r.all_passed() ? "true" : "false") << "\n}\n";
}

void write_report(std::ostream& os, const Report& r, Format f) {
  if (f == Format::json) write_json(os, r);
  else write_csv(os, r);
}

}  // namespace spectral_walks::cli
