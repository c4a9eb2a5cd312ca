#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qdamp {

using Cell = std::variant<double, std::string>;

/// Ordered key/value metadata; vectors (not maps) so emission order is fixed.
struct TableMeta {
  std::string command;
  std::string version;
  std::string schema_version;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<std::pair<std::string, std::string>> extra;
};

/// Rectangular result table; identical content renders byte-identically.
struct ResultTable {
  TableMeta meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Numbers formatted with %.17g (round-trip exact); deterministic.
std::string format_double(double v);

/// CSV with a '#'-prefixed metadata header block, RFC-4180-style quoting.
std::string to_csv(const ResultTable& t);

/// JSON object {metadata, columns, rows:[{col: val}...]}, insertion-ordered.
std::string to_json(const ResultTable& t);

/// Whitespace-delimited variant for gnuplot, '#' metadata and header lines.
std::string to_gnuplot(const ResultTable& t);

enum class OutputFormat { Csv, Json, Gnuplot };

std::string render(const ResultTable& t, OutputFormat f);

/// Writes atomically-ish (single ofstream write); creates parent directories.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qdamp
