#pragma once

// Tabular reports with a metadata header, emitted as CSV or JSON.
// Numbers are written with std::to_chars so output never depends on locale.

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spectral_walks/markov.hpp"

namespace spectral_walks::cli {

enum class Format { csv, json };

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  Table& row(std::vector<Cell> cells);
};

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<Table> tables;
  std::vector<Check> checks;

  Table& table(std::string name, std::vector<std::string> columns);
  bool all_passed() const;
};

/// 17 significant digits, '.' decimals, nan/inf spelled out.
std::string format_number(double v);
std::string hex64(std::uint64_t v);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

void write_csv(std::ostream& os, const Report& r);
void write_json(std::ostream& os, const Report& r);
void write_report(std::ostream& os, const Report& r, Format f);

}  // namespace spectral_walks::cli
