#pragma once

// Flat key=value run configuration and CSV output helpers for the command
// line tool.

#include <boxgal/core.hpp>

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace boxgal {

/// Subcommand plus flag values. Keys are long flag names without dashes.
struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> values;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Lines "key=value"; '#' starts a comment line; the key "subcommand" names the subcommand.
inline RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  unsigned lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw DomainError("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = detail::trim(t.substr(0, eq));
    std::string value = detail::trim(t.substr(eq + 1));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    if (key.empty()) throw DomainError("config line " + std::to_string(lineno) + ": empty key");
    if (key == "subcommand") {
      cfg.subcommand = value;
    } else {
      cfg.values[key] = value;
    }
  }
  return cfg;
}

inline RunConfig parse_run_config(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

inline std::string to_string(const RunConfig& cfg) {
  std::string out;
  if (!cfg.subcommand.empty()) out += "subcommand=" + cfg.subcommand + "\n";
  for (const auto& [k, v] : cfg.values) out += k + "=" + v + "\n";
  return out;
}

/// Builds the argument list with config values placed right after the
/// subcommand token (and its positionals); argv wins for any flag it sets.
/// If argv names no subcommand, the config's subcommand is appended. `args`
/// excludes the program name.
inline std::vector<std::string> merge_config_args(const RunConfig& cfg, const std::vector<std::string>& args,
                                                  const std::vector<std::string>& subcommands) {
  auto given = [&](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  std::vector<std::string> extra;
  for (const auto& [k, v] : cfg.values) {
    if (given(k)) continue;
    if (v == "true") {
      extra.push_back("--" + k);
    } else if (v != "false") {
      extra.push_back("--" + k + "=" + v);
    }
  }
  std::vector<std::string> out(args);
  auto it = std::find_first_of(out.begin(), out.end(), subcommands.begin(), subcommands.end());
  if (it == out.end()) {
    if (cfg.subcommand.empty()) throw DomainError("no subcommand on the command line or in the config");
    out.push_back(cfg.subcommand);
    out.insert(out.end(), extra.begin(), extra.end());
    return out;
  }
  ++it;
  while (it != out.end() && !it->empty() && (*it)[0] != '-') ++it;
  out.insert(it, extra.begin(), extra.end());
  return out;
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& out) const {
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_field(r[i]);
      out << "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

}  // namespace boxgal
