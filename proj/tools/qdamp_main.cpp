#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdamp/report.hpp"
#include "qdamp/runners.hpp"
#include "qdamp/types.hpp"
#include "qdamp/version.hpp"

namespace {

using qdamp::ConfigError;

qdamp::GridSpec parse_grid(const std::string& text, const char* name) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  try {
    if (parts.size() == 1) {
      const double v = std::stod(parts[0]);
      return {v, v, 1};
    }
    if (parts.size() == 3) {
      return {std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2])};
    }
  } catch (const std::exception&) {
  }
  throw ConfigError(std::string("config error: ") + name +
                    " expects 'start:stop:count' or a single value (got '" + text + "')");
}

qdamp::Complex parse_theta0(const std::string& text) {
  try {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ConfigError("config error: theta0 expects 're' or 're,im' (got '" + text + "')");
  }
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    try {
      out.push_back(std::stoi(cur));
    } catch (const std::exception&) {
      throw ConfigError("config error: N-list expects comma-separated integers (got '" + text +
                        "')");
    }
    cur.clear();
  };
  for (char c : text) {
    if (c == ',') {
      flush();
    } else if (!std::isspace((unsigned char)c)) {
      cur += c;
    }
  }
  flush();
  return out;
}

struct CliState {
  qdamp::RunConfig cfg;
  double T = 1.0;
  double xa = 0.0;
  double xb = 1.0;
  bool T_given = false;
  std::string T_grid_s, xa_grid_s, xb_grid_s;
  std::string theta0_s = "0.5";
  std::string N_list_s;
  std::vector<std::string> methods_s;
  std::string format_s = "csv";
  std::string seed_s = "hyperbolic";
  std::string out_s;
  std::string fault_s;
  std::string config_path_s;
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Plain key=value lines; '#' starts a comment; keys are the long option names
// without the leading dashes. Anything set on the command line wins.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config error: " + path + ":" + std::to_string(lineno) +
                        ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty()) {
      throw ConfigError("config error: " + path + ":" + std::to_string(lineno) + ": empty key");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

double config_double(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config error: config key '" + key + "' expects a number (got '" + value +
                    "')");
}

bool config_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config error: config key '" + key + "' expects true/false (got '" + value +
                    "')");
}

void apply_config_file(const CLI::App* sub, CliState& st) {
  const auto entries = read_config_file(st.config_path_s);
  auto overridden = [&](const char* flag) { return sub->count(flag) > 0; };
  for (const auto& [key, value] : entries) {
    if (key == "kappa") {
      if (!overridden("--kappa")) st.cfg.params.kappa = config_double(key, value);
    } else if (key == "hbar") {
      if (!overridden("--hbar")) st.cfg.params.hbar = config_double(key, value);
    } else if (key == "v0") {
      if (!overridden("--v0")) st.cfg.v0 = config_double(key, value);
    } else if (key == "theta0") {
      if (!overridden("--theta0")) st.theta0_s = value;
    } else if (key == "T") {
      if (!overridden("--T") && !overridden("--T-grid")) {
        st.T = config_double(key, value);
        st.T_given = true;
      }
    } else if (key == "T-grid") {
      if (!overridden("--T") && !overridden("--T-grid") && !st.T_given) st.T_grid_s = value;
    } else if (key == "xa") {
      if (!overridden("--xa") && !overridden("--xa-grid")) st.xa = config_double(key, value);
    } else if (key == "xa-grid") {
      if (!overridden("--xa") && !overridden("--xa-grid")) st.xa_grid_s = value;
    } else if (key == "xb") {
      if (!overridden("--xb") && !overridden("--xb-grid")) st.xb = config_double(key, value);
    } else if (key == "xb-grid") {
      if (!overridden("--xb") && !overridden("--xb-grid")) st.xb_grid_s = value;
    } else if (key == "N-list") {
      if (!overridden("--N-list")) st.N_list_s = value;
    } else if (key == "method") {
      if (!overridden("--method")) {
        st.methods_s.clear();
        std::string cur;
        for (char c : value + ",") {
          if (c == ',') {
            if (!trim(cur).empty()) st.methods_s.push_back(trim(cur));
            cur.clear();
          } else {
            cur += c;
          }
        }
      }
    } else if (key == "oracle") {
      if (!overridden("--oracle")) st.cfg.oracle = config_bool(key, value);
    } else if (key == "seed") {
      if (!overridden("--seed")) st.seed_s = value;
    } else if (key == "quad-panels") {
      if (!overridden("--quad-panels")) st.cfg.quad_panels = (int)config_double(key, value);
    } else if (key == "format") {
      if (!overridden("--format")) st.format_s = value;
    } else if (key == "out") {
      if (!overridden("--out")) st.out_s = value;
    } else {
      throw ConfigError("config error: unknown config key '" + key + "'");
    }
  }
  if (st.seed_s != "hyperbolic" && st.seed_s != "polynomial") {
    throw ConfigError("config error: seed must be hyperbolic or polynomial (got '" + st.seed_s +
                      "')");
  }
  if (st.format_s != "csv" && st.format_s != "json" && st.format_s != "gnuplot") {
    throw ConfigError("config error: format must be csv, json, or gnuplot (got '" + st.format_s +
                      "')");
  }
}

void add_common_options(CLI::App* sub, CliState& st) {
  sub->add_option("--kappa", st.cfg.params.kappa, "friction coefficient (>= 0)")
      ->capture_default_str();
  sub->add_option("--hbar", st.cfg.params.hbar, "reduced Planck constant (> 0)")
      ->capture_default_str();
  sub->add_option("--v0", st.cfg.v0, "initial mean velocity")->capture_default_str();
  sub->add_option("--theta0", st.theta0_s, "initial Gaussian width parameter, 're' or 're,im'")
      ->capture_default_str();
  auto* t_scalar = sub->add_option("--T", st.T, "single propagation time");
  auto* t_grid = sub->add_option("--T-grid", st.T_grid_s, "time grid as start:stop:count");
  t_scalar->excludes(t_grid);
  t_grid->excludes(t_scalar);
  auto* xa_scalar = sub->add_option("--xa", st.xa, "start point")->capture_default_str();
  auto* xa_grid = sub->add_option("--xa-grid", st.xa_grid_s, "start-point grid start:stop:count");
  xa_scalar->excludes(xa_grid);
  xa_grid->excludes(xa_scalar);
  auto* xb_scalar = sub->add_option("--xb", st.xb, "end point")->capture_default_str();
  auto* xb_grid = sub->add_option("--xb-grid", st.xb_grid_s, "end-point grid start:stop:count");
  xb_scalar->excludes(xb_grid);
  xb_grid->excludes(xb_scalar);
  sub->add_option("--N-list", st.N_list_s,
                  "comma-separated slice counts (default 125,250,...,8000)");
  sub->add_option("--method", st.methods_s,
                  "method name (lg|kochan|ck|dgst); repeatable or comma-separated")
      ->delimiter(',');
  sub->add_flag("--oracle", st.cfg.oracle, "cross-check against independent quadrature");
  sub->add_option("--seed", st.seed_s, "short-time coefficient seed: hyperbolic|polynomial")
      ->check(CLI::IsMember({"hyperbolic", "polynomial"}));
  sub->add_option("--quad-panels", st.cfg.quad_panels,
                  "override automatic quadrature panel count (0 = auto)");
  sub->add_option("--format", st.format_s, "output format")
      ->check(CLI::IsMember({"csv", "json", "gnuplot"}))
      ->capture_default_str();
  sub->add_option("--out", st.out_s,
                  "output path; relative paths resolve against $QDAMP_OUT_DIR; omit for stdout");
  sub->add_option("--config", st.config_path_s,
                  "key=value config file; command-line flags override it");
}

void finalize(const CLI::App* sub, CliState& st) {
  qdamp::RunConfig& cfg = st.cfg;
  cfg.command = qdamp::command_from_string(sub->get_name());
  if (!st.config_path_s.empty()) apply_config_file(sub, st);
  cfg.theta0 = parse_theta0(st.theta0_s);
  if (!st.T_grid_s.empty()) {
    cfg.T_grid = parse_grid(st.T_grid_s, "T-grid");
  } else if (sub->count("--T") > 0 || st.T_given) {
    cfg.T_grid = {st.T, st.T, 1};
  } else if (cfg.command == qdamp::Command::Evolve || cfg.command == qdamp::Command::Compare) {
    cfg.T_grid = {0.0, 3.0, 61};
  } else {
    cfg.T_grid = {st.T, st.T, 1};
  }
  cfg.xa_grid = !st.xa_grid_s.empty() ? parse_grid(st.xa_grid_s, "xa-grid")
                                      : qdamp::GridSpec{st.xa, st.xa, 1};
  cfg.xb_grid = !st.xb_grid_s.empty() ? parse_grid(st.xb_grid_s, "xb-grid")
                                      : qdamp::GridSpec{st.xb, st.xb, 1};
  if (!st.N_list_s.empty()) cfg.N_list = parse_int_list(st.N_list_s);
  if (!st.methods_s.empty()) {
    cfg.methods.clear();
    for (const std::string& m : st.methods_s) cfg.methods.push_back(qdamp::method_from_string(m));
  }
  cfg.seed = st.seed_s == "polynomial" ? qdamp::SeedKind::Polynomial : qdamp::SeedKind::Hyperbolic;
  if (st.format_s == "csv") {
    cfg.format = qdamp::OutputFormat::Csv;
  } else if (st.format_s == "json") {
    cfg.format = qdamp::OutputFormat::Json;
  } else {
    cfg.format = qdamp::OutputFormat::Gnuplot;
  }
  cfg.fault.target = st.fault_s;

  if (!st.out_s.empty()) {
    std::filesystem::path p(st.out_s);
    if (p.is_relative()) {
      if (const char* dir = std::getenv("QDAMP_OUT_DIR")) p = std::filesystem::path(dir) / p;
    }
    cfg.out_path = p.string();
  }
}

int emit(const qdamp::ResultTable& table, const qdamp::RunConfig& cfg) {
  const std::string text = qdamp::render(table, cfg.format);
  if (cfg.out_path.empty()) {
    std::cout << text;
  } else {
    qdamp::write_text_file(cfg.out_path, text);
    std::cerr << "wrote " << cfg.out_path << "\n";
  }
  if (cfg.command == qdamp::Command::Check) {
    for (const auto& [key, value] : table.meta.extra) {
      if (key == "all_pass" && value != "true") return 2;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qdamp: propagator and wavepacket toolkit for the damped free particle"};
  app.set_version_flag("--version", qdamp::kVersion);
  app.require_subcommand(1);

  CliState st;
  CLI::App* sub_kernel =
      app.add_subcommand("kernel", "evaluate the closed-form propagator on a grid");
  CLI::App* sub_converge =
      app.add_subcommand("converge", "sliced-propagator convergence study at fixed endpoints");
  CLI::App* sub_evolve =
      app.add_subcommand("evolve", "Gaussian wavepacket observables over a time grid");
  CLI::App* sub_compare =
      app.add_subcommand("compare", "compare wavepacket observables across methods");
  CLI::App* sub_check = app.add_subcommand("check", "run the built-in invariant suite");
  for (CLI::App* sub : {sub_kernel, sub_converge, sub_evolve, sub_compare, sub_check}) {
    add_common_options(sub, st);
  }
  sub_check->add_option("--inject-fault", st.fault_s,
                        "deliberately break one invariant (for exit-code testing)")
      ->group("");

  try {
    app.parse(argc, argv);
    const CLI::App* sub = app.get_subcommands().at(0);
    finalize(sub, st);
    const qdamp::ResultTable table = qdamp::dispatch(st.cfg);
    return emit(table, st.cfg);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const qdamp::UnderResolvedGrid& e) {
    std::cerr << "numerical refusal: " << e.what() << "\n";
    return 3;
  } catch (const qdamp::DegenerateRecursion& e) {
    std::cerr << "numerical refusal: " << e.what() << "\n";
    return 3;
  } catch (const qdamp::InvariantFailure& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
