#include "qdamp/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace qdamp {

namespace {

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string csv_quote(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_text(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  return std::get<std::string>(c);
}

void append_meta_lines(const ResultTable& t, std::string& out, const char* prefix) {
  out += prefix;
  out += "qdamp ";
  out += t.meta.command;
  out += " results\n";
  out += prefix;
  out += "version = " + t.meta.version + "\n";
  out += prefix;
  out += "schema = " + t.meta.schema_version + "\n";
  for (const auto& [k, v] : t.meta.config_echo) {
    out += prefix;
    out += "config." + k + " = " + v + "\n";
  }
  for (const auto& [k, v] : t.meta.extra) {
    out += prefix;
    out += k + " = " + v + "\n";
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_csv(const ResultTable& t) {
  std::string out;
  append_meta_lines(t, out, "# ");
  for (size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_quote(t.columns[i]);
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_quote(cell_text(row[i]));
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const ResultTable& t) {
  nlohmann::ordered_json j;
  j["metadata"]["command"] = t.meta.command;
  j["metadata"]["version"] = t.meta.version;
  j["metadata"]["schema"] = t.meta.schema_version;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.meta.config_echo) cfg[k] = v;
  j["metadata"]["config"] = cfg;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.meta.extra) extra[k] = v;
  j["metadata"]["extra"] = extra;
  j["columns"] = t.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (size_t i = 0; i < row.size(); ++i) {
      if (std::holds_alternative<double>(row[i])) {
        obj[t.columns[i]] = std::get<double>(row[i]);
      } else {
        obj[t.columns[i]] = std::get<std::string>(row[i]);
      }
    }
    rows.push_back(obj);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string to_gnuplot(const ResultTable& t) {
  std::string out;
  append_meta_lines(t, out, "# ");
  out += "#";
  for (const auto& c : t.columns) {
    out += ' ';
    out += c;
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ' ';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render(const ResultTable& t, OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return to_csv(t);
    case OutputFormat::Json: return to_json(t);
    case OutputFormat::Gnuplot: return to_gnuplot(t);
  }
  throw std::invalid_argument("render: unknown format");
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path());
  }
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f.write(content.data(), (std::streamsize)content.size());
  if (!f) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace qdamp
