#pragma once

#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include "etaxi/fock.hpp"
#include "etaxi/scalars.hpp"

namespace etaxi {

/**
 * Effective settings of one runner invocation.  Values come from built-in
 * defaults, then an optional flat key=value file named by ETAXI_CONFIG, then
 * command-line flags; later sources win key by key.
 */
struct RunConfig {
  Sector sector = Sector::NS;
  long level = 8;      // truncation bound of the graded basis
  long max_index = 3;  // |n| bound for the relation suites
  int vars = 4;        // tracked variable count for multi-variable series
  bool vars_set = false;
  long L = 3;                       // label bound for character sums
  Rational t = Rational(3, 2);      // finitization parameter
  Rational lambda = Rational(1);    // pairing weight used by the lambda rule
  std::string zero_mode = "omit";   // omit | lambda | raw
  bool zero_mode_set = false;       // true once a file or flag named it
  Rational delta_T = Rational(-1);  // improvement coefficient of the tilde fields
  int hbar_order = 4;
  std::string ring = "laurent";  // laurent | rational | hbar
  bool symbolic = false;
  std::string format = "json";  // json | csv | text
  std::string out;              // empty writes to stdout
};

inline constexpr const char* kConfigEnvVar = "ETAXI_CONFIG";

inline std::string config_trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline long parse_long_value(const std::string& key, const std::string& text) {
  try {
    std::size_t pos = 0;
    long v = std::stol(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for " + key + ": " + text);
  }
}

inline Rational parse_rational_value(const std::string& key, const std::string& text) {
  auto r = Rational::parse(text);
  if (!r) throw std::invalid_argument("config: bad rational for " + key + ": " + text);
  return *r;
}

inline bool parse_bool_value(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": " + text);
}

inline Sector parse_sector_value(const std::string& key, const std::string& text) {
  auto s = parse_sector(text);
  if (!s) throw std::invalid_argument("config: " + key + " must be NS or R, got " + text);
  return *s;
}

inline void check_choice(const std::string& key, const std::string& value,
                         std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (value == a) return;
  throw std::invalid_argument("config: bad value for " + key + ": " + value);
}

// Keys mirror the command-line flags without the leading dashes.
inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "sector") {
    cfg.sector = parse_sector_value(key, value);
  } else if (key == "level") {
    cfg.level = parse_long_value(key, value);
  } else if (key == "max-index") {
    cfg.max_index = parse_long_value(key, value);
  } else if (key == "vars") {
    cfg.vars = static_cast<int>(parse_long_value(key, value));
    cfg.vars_set = true;
  } else if (key == "L") {
    cfg.L = parse_long_value(key, value);
  } else if (key == "t") {
    cfg.t = parse_rational_value(key, value);
  } else if (key == "lambda") {
    cfg.lambda = parse_rational_value(key, value);
  } else if (key == "zero-mode") {
    check_choice(key, value, {"omit", "lambda", "raw"});
    cfg.zero_mode = value;
    cfg.zero_mode_set = true;
  } else if (key == "delta-T") {
    cfg.delta_T = parse_rational_value(key, value);
  } else if (key == "hbar-order") {
    cfg.hbar_order = static_cast<int>(parse_long_value(key, value));
  } else if (key == "ring") {
    check_choice(key, value, {"laurent", "rational", "hbar"});
    cfg.ring = value;
  } else if (key == "symbolic") {
    cfg.symbolic = parse_bool_value(key, value);
  } else if (key == "format") {
    check_choice(key, value, {"json", "csv", "text"});
    cfg.format = value;
  } else if (key == "out") {
    cfg.out = value;
  } else {
    throw std::invalid_argument("config: unknown key: " + key);
  }
}

// Flat key=value lines; blank lines and #-comments are skipped.
inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = config_trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " of " + path +
                                  " is not key=value");
    apply_config_entry(cfg, config_trim(s.substr(0, eq)), config_trim(s.substr(eq + 1)));
  }
}

inline void load_default_config(RunConfig& cfg) {
  const char* p = std::getenv(kConfigEnvVar);
  if (p != nullptr && *p != '\0') load_config_file(cfg, p);
}

// Bounds keep every reachable computation exact and quick.
inline void validate_config(const RunConfig& cfg) {
  if (cfg.level < 0 || cfg.level > 14)
    throw std::invalid_argument("config: level must be 0..14");
  if (cfg.max_index < 0 || cfg.max_index > 8)
    throw std::invalid_argument("config: max-index must be 0..8");
  if (cfg.vars < 1 || cfg.vars > 8) throw std::invalid_argument("config: vars must be 1..8");
  if (cfg.L < 0 || cfg.L > 12) throw std::invalid_argument("config: L must be 0..12");
  if (cfg.hbar_order < 0 || cfg.hbar_order > 7)
    throw std::invalid_argument("config: hbar-order must be 0..7");
  check_choice("zero-mode", cfg.zero_mode, {"omit", "lambda", "raw"});
  check_choice("ring", cfg.ring, {"laurent", "rational", "hbar"});
  check_choice("format", cfg.format, {"json", "csv", "text"});
}

}  // namespace etaxi
