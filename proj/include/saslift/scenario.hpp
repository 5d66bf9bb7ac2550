#pragma once
// Scenario descriptions and their declarative file format: flat key = value
// pairs with [tolerances] overrides and repeated [[homothety]] tables for the
// deformation grid.  Strings are double quoted, arrays are bracketed and
// comma separated, # starts a comment.  See scenarios/full.toml in the repo
// for an annotated example.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace saslift {

/// Configuration errors (bad scenario file, unknown keys, bad values).
struct scenario_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string manifold;
  int n = 1;
  double lambda = 1.0;
  std::vector<std::string> suites;  // empty = every suite applicable to the entry
  int points = 50;
  std::uint64_t seed = 7;
  std::map<std::string, double> tolerances;               // per-suite overrides
  std::vector<std::pair<double, double>> homothety_grid;  // empty = default 3x3 grid
  std::string output;                                     // report path; empty = stdout only
  std::string format = "json";
};

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s = {
      "sasakian",      "structure-eqs", "curvature-relation", "ricci-relation", "ricci-form",
      "phi-sectional", "eta-einstein",  "homothety",          "soliton",        "symmetry"};
  return s;
}

inline void validate_scenario(const Scenario& s) {
  if (s.manifold.empty()) throw scenario_error("scenario: manifold is required");
  if (s.points < 1) throw scenario_error("scenario: points must be >= 1");
  for (const auto& [suite, tol] : s.tolerances) {
    if (!(tol > 0.0)) throw scenario_error("scenario: tolerance for " + suite + " must be > 0");
  }
  for (const std::string& suite : s.suites) {
    bool known = false;
    for (const std::string& k : known_suites()) known = known || k == suite;
    if (!known) throw scenario_error("scenario: unknown suite '" + suite + "'");
  }
  for (const auto& [a, b] : s.homothety_grid)
    if (!(a > 0.0 && b > 0.0)) throw scenario_error("scenario: homothety parameters must be > 0");
}

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

inline double parse_number(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (...) {
    throw scenario_error("scenario: bad numeric value for '" + key + "': " + v);
  }
}

inline std::string parse_string(const std::string& v, const std::string& key) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"')
    throw scenario_error("scenario: expected a quoted string for '" + key + "': " + v);
  return v.substr(1, v.size() - 2);
}

inline std::vector<std::string> parse_string_array(const std::string& v, const std::string& key) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw scenario_error("scenario: expected an array for '" + key + "': " + v);
  std::vector<std::string> out;
  std::string body = v.substr(1, v.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_string(item, key));
  }
  return out;
}

}  // namespace detail

inline Scenario parse_scenario_text(const std::string& text) {
  Scenario s;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.rfind("[[", 0) == 0 && line.size() > 4 && line.substr(line.size() - 2) == "]]") {
        section = line.substr(2, line.size() - 4);
        if (section == "homothety")
          s.homothety_grid.emplace_back(0.0, 0.0);
        else
          throw scenario_error("scenario: unknown table '" + section + "'");
        continue;
      }
      if (line.back() != ']') throw scenario_error("scenario: bad section at line " +
                                                   std::to_string(lineno));
      section = line.substr(1, line.size() - 2);
      if (section != "tolerances")
        throw scenario_error("scenario: unknown section '" + section + "'");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw scenario_error("scenario: expected key = value at line " + std::to_string(lineno));
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));

    // Arrays may span lines; consume until the bracket closes.
    if (!value.empty() && value.front() == '[' && value.back() != ']') {
      std::string extra;
      while (value.back() != ']' && std::getline(in, extra)) {
        ++lineno;
        value += " " + detail::trim(detail::strip_comment(extra));
      }
      if (value.back() != ']')
        throw scenario_error("scenario: unterminated array for '" + key + "'");
    }

    if (section == "tolerances") {
      s.tolerances[key] = detail::parse_number(value, key);
      continue;
    }
    if (section == "homothety") {
      if (s.homothety_grid.empty()) throw scenario_error("scenario: stray homothety key");
      if (key == "alpha")
        s.homothety_grid.back().first = detail::parse_number(value, key);
      else if (key == "beta")
        s.homothety_grid.back().second = detail::parse_number(value, key);
      else
        throw scenario_error("scenario: unknown homothety key '" + key + "'");
      continue;
    }

    if (key == "manifold")
      s.manifold = detail::parse_string(value, key);
    else if (key == "n")
      s.n = static_cast<int>(detail::parse_number(value, key));
    else if (key == "lambda")
      s.lambda = detail::parse_number(value, key);
    else if (key == "points")
      s.points = static_cast<int>(detail::parse_number(value, key));
    else if (key == "seed")
      s.seed = static_cast<std::uint64_t>(detail::parse_number(value, key));
    else if (key == "suites")
      s.suites = detail::parse_string_array(value, key);
    else if (key == "out")
      s.output = detail::parse_string(value, key);
    else if (key == "format")
      s.format = detail::parse_string(value, key);
    else
      throw scenario_error("scenario: unknown key '" + key + "' at line " + std::to_string(lineno));
  }
  validate_scenario(s);
  return s;
}

inline Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw scenario_error("scenario: cannot open file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

}  // namespace saslift
