#pragma once

#include <json.hpp>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "etaxi/characters.hpp"
#include "etaxi/fock.hpp"
#include "etaxi/scalars.hpp"
#include "etaxi/verify.hpp"

namespace etaxi {

using ordered_json = nlohmann::ordered_json;

inline std::string diagram_str(const BasisState& s) {
  auto side = [](const std::vector<HalfInt>& v) {
    std::string out = "{";
    bool first = true;
    for (HalfInt x : v) {
      if (!first) out += ",";
      out += x.str();
      first = false;
    }
    return out + "}";
  };
  std::string out = "(" + side(s.p1) + "|" + side(s.p2) + ")";
  if (s.b) out += "*";  // flagged copy; never drawn as a diagram
  return out;
}

namespace iodetail {

// Integer exponents print bare, fractional ones in parentheses.
inline std::string var_power(const std::string& var, const Rational& e) {
  std::string es = e.str();
  if (es == "1") return var;
  if (es.find('/') != std::string::npos) return var + "^(" + es + ")";
  return var + "^" + es;
}

inline std::string monomial_str(const std::vector<Rational>& e, int nvars) {
  std::string mono;
  for (int i = 0; i < nvars; ++i) {
    const Rational& ei = e[static_cast<std::size_t>(i)];
    if (ei.is_zero()) continue;
    if (!mono.empty()) mono += "*";
    std::string var = nvars == 1 ? "q" : "q" + std::to_string(i);
    mono += var_power(var, ei);
  }
  return mono;
}

inline std::string render_terms(const std::vector<std::pair<std::string, long long>>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [mono, c] : terms) {
    long long a = c;
    if (first) {
      if (a < 0) {
        out += "-";
        a = -a;
      }
    } else {
      out += a < 0 ? " - " : " + ";
      if (a < 0) a = -a;
    }
    if (mono.empty())
      out += std::to_string(a);
    else if (a == 1)
      out += mono;
    else
      out += std::to_string(a) + "*" + mono;
    first = false;
  }
  return out;
}

}  // namespace iodetail

inline std::string series_str(const MonomialSeries& s) {
  std::vector<std::pair<std::string, long long>> terms;
  for (const auto& [e, c] : s.terms) {
    if (c == 0) continue;
    terms.emplace_back(iodetail::monomial_str(e, s.nvars), c);
  }
  return iodetail::render_terms(terms);
}

inline std::string series_str(const std::map<Rational, long long>& s) {
  std::vector<std::pair<std::string, long long>> terms;
  for (const auto& [e, c] : s) {
    if (c == 0) continue;
    terms.emplace_back(e.is_zero() ? "" : iodetail::var_power("q", e), c);
  }
  return iodetail::render_terms(terms);
}

inline ordered_json series_terms_json(const MonomialSeries& s) {
  ordered_json arr = ordered_json::array();
  for (const auto& [e, c] : s.terms) {
    if (c == 0) continue;
    ordered_json t;
    ordered_json exps = ordered_json::array();
    for (const Rational& x : e) exps.push_back(x.str());
    t["exponents"] = exps;
    t["coefficient"] = c;
    arr.push_back(t);
  }
  return arr;
}

inline ordered_json series_terms_json(const std::map<Rational, long long>& s) {
  ordered_json arr = ordered_json::array();
  for (const auto& [e, c] : s) {
    if (c == 0) continue;
    ordered_json t;
    t["exponent"] = e.str();
    t["coefficient"] = c;
    arr.push_back(t);
  }
  return arr;
}

inline ordered_json report_json(const RelationReport& rep) {
  ordered_json j;
  j["suite"] = rep.suite;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : rep.parameters) params[k] = v;
  j["parameters"] = params;
  j["status"] = rep.status;
  ordered_json fails = ordered_json::array();
  for (const FailureEntry& f : rep.failures) {
    ordered_json e;
    e["relation"] = f.relation;
    e["state"] = f.state;
    e["expected"] = f.expected;
    e["actual"] = f.actual;
    fails.push_back(e);
  }
  j["failures"] = fails;
  ordered_json meas = ordered_json::object();
  for (const auto& [k, v] : rep.measurements) meas[k] = v;
  j["measurements"] = meas;
  j["notes"] = rep.notes;
  return j;
}

inline std::string report_text(const RelationReport& rep) {
  std::string out;
  out += "suite: " + rep.suite + "\n";
  out += "status: " + rep.status + "\n";
  for (const auto& [k, v] : rep.parameters) out += "param " + k + " = " + v + "\n";
  for (const auto& [k, v] : rep.measurements) out += "measure " + k + " = " + v + "\n";
  for (const std::string& n : rep.notes) out += "note: " + n + "\n";
  for (const FailureEntry& f : rep.failures) {
    out += "failure: " + f.relation + " on " + f.state + "\n";
    out += "  expected " + f.expected + "\n";
    out += "  actual   " + f.actual + "\n";
  }
  return out;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

struct TextTable {
  std::string name;
  std::vector<std::pair<std::string, std::string>> context;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline ordered_json table_json(const TextTable& t) {
  ordered_json j;
  j["table"] = t.name;
  for (const auto& [k, v] : t.context) j[k] = v;
  j["columns"] = t.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& r : t.rows) rows.push_back(r);
  j["rows"] = rows;
  return j;
}

inline std::string table_csv(const TextTable& t) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string out;
    bool first = true;
    for (const std::string& c : cells) {
      if (!first) out += ",";
      out += csv_escape(c);
      first = false;
    }
    return out + "\n";
  };
  std::string out = line(t.columns);
  for (const auto& r : t.rows) out += line(r);
  return out;
}

inline std::string table_text(const TextTable& t) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string out;
    bool first = true;
    for (const std::string& c : cells) {
      if (!first) out += " | ";
      out += c;
      first = false;
    }
    return out + "\n";
  };
  std::string out = "table: " + t.name + "\n";
  for (const auto& [k, v] : t.context) out += k + ": " + v + "\n";
  out += line(t.columns);
  for (const auto& r : t.rows) out += line(r);
  return out;
}

}  // namespace etaxi
