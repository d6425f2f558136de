#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "etaxi/characters.hpp"
#include "etaxi/config.hpp"
#include "etaxi/currents.hpp"
#include "etaxi/json_io.hpp"
#include "etaxi/laurent.hpp"
#include "etaxi/verify.hpp"

namespace {

using namespace etaxi;

Convention convention_from(const RunConfig& cfg) {
  if (cfg.zero_mode == "raw") return Convention::raw();
  if (cfg.zero_mode == "lambda") return Convention::with_lambda(cfg.lambda);
  return Convention::omit();
}

void emit(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
  f << payload;
}

std::string json_payload(const ordered_json& j) { return j.dump(2) + "\n"; }

int run_verify(const RunConfig& cfg, const std::string& suite) {
  VerifyOptions opt;
  opt.sector = cfg.sector;
  opt.max_level = cfg.level;
  opt.max_index = cfg.max_index;
  if (cfg.zero_mode_set) opt.convention = convention_from(cfg);
  opt.delta_T = cfg.delta_T;
  opt.hbar_order = cfg.hbar_order;
  opt.ring = cfg.symbolic ? "laurent" : cfg.ring;

  static const std::map<std::string, RelationReport (*)(const VerifyOptions&)> suites = {
      {"virasoro", verify_virasoro},
      {"virasoro-alpha", verify_virasoro_alpha},
      {"dq", verify_Dq_algebra},
      {"v-algebra", verify_V_algebra},
      {"iom", verify_involution_and_eigenvalues},
      {"jordan", verify_jordan},
      {"primary-w3", verify_primary_w3},
      {"expansion", verify_expansion},
      {"convention-independence", verify_convention_independence},
  };
  RelationReport rep = suites.at(suite)(opt);

  if (cfg.format == "csv")
    throw std::invalid_argument("csv output is only available for single-variable data");
  emit(cfg.out, cfg.format == "json" ? json_payload(report_json(rep)) : report_text(rep));
  return rep.exit_code();
}

// Two aligned single-variable series as exponent-keyed columns.
TextTable series_columns(const std::string& a_name, const std::map<Rational, long long>& a,
                         const std::string& b_name, const std::map<Rational, long long>& b) {
  TextTable t;
  t.columns = {"exponent", a_name, b_name};
  std::map<Rational, std::pair<long long, long long>> merged;
  for (const auto& [e, c] : a) merged[e].first = c;
  for (const auto& [e, c] : b) merged[e].second = c;
  for (const auto& [e, cc] : merged) {
    if (cc.first == 0 && cc.second == 0) continue;
    t.rows.push_back({e.str(), std::to_string(cc.first), std::to_string(cc.second)});
  }
  return t;
}

std::map<Rational, long long> to_single_var(const MonomialSeries& s) {
  if (s.nvars != 1) throw std::invalid_argument("series is not single-variable");
  std::map<Rational, long long> out;
  for (const auto& [e, c] : s.terms)
    if (c != 0) out[e[0]] += c;
  return out;
}

std::string character_text(const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string out;
  for (const auto& [k, v] : fields) out += k + ": " + v + "\n";
  return out;
}

int run_character(const RunConfig& cfg, const std::string& name) {
  if (name == "general" || name == "iom" || name == "w3") {
    CharacterSpec spec;
    spec.sector = cfg.sector;
    spec.L = cfg.L;
    spec.K = name == "w3" ? 3 : cfg.vars;
    spec.with_normalization = name != "general";
    CharacterPair pair = character_pair(spec);

    if (cfg.format == "csv") {
      if (spec.K != 1)
        throw std::invalid_argument("csv output is only available for single-variable data");
      emit(cfg.out, table_csv(series_columns("trace", to_single_var(pair.trace), "product",
                                             to_single_var(pair.product))));
    } else if (cfg.format == "json") {
      ordered_json j;
      j["name"] = name;
      j["sector"] = sector_str(spec.sector);
      j["L"] = spec.L;
      j["vars"] = spec.K;
      j["with_normalization"] = spec.with_normalization;
      j["trace"] = series_terms_json(pair.trace);
      j["trace_str"] = series_str(pair.trace);
      j["product"] = series_terms_json(pair.product);
      j["product_str"] = series_str(pair.product);
      j["match"] = pair.match;
      emit(cfg.out, json_payload(j));
    } else {
      emit(cfg.out, character_text({{"name", name},
                                    {"sector", sector_str(spec.sector)},
                                    {"L", std::to_string(spec.L)},
                                    {"vars", std::to_string(spec.K)},
                                    {"trace", series_str(pair.trace)},
                                    {"product", series_str(pair.product)},
                                    {"match", pair.match ? "true" : "false"}}));
    }
    return pair.match ? 0 : 1;
  }

  if (name == "d0t") {
    D0tCharacter r = char_D0t(cfg.t, cfg.sector, cfg.L);
    std::string cont = r.continuum_exponent ? r.continuum_exponent->str() : "";
    if (cfg.format == "csv") {
      emit(cfg.out, table_csv(series_columns("trace", r.trace, "product", r.product)));
    } else if (cfg.format == "json") {
      ordered_json j;
      j["name"] = name;
      j["sector"] = sector_str(cfg.sector);
      j["L"] = cfg.L;
      j["t"] = cfg.t.str();
      j["trace"] = series_terms_json(r.trace);
      j["trace_str"] = series_str(r.trace);
      j["product"] = series_terms_json(r.product);
      j["product_str"] = series_str(r.product);
      if (r.continuum_exponent)
        j["continuum_exponent"] = cont;
      else
        j["continuum_exponent"] = nullptr;
      j["match"] = r.match;
      emit(cfg.out, json_payload(j));
    } else {
      std::vector<std::pair<std::string, std::string>> fields = {
          {"name", name},
          {"sector", sector_str(cfg.sector)},
          {"L", std::to_string(cfg.L)},
          {"t", cfg.t.str()},
          {"trace", series_str(r.trace)},
          {"product", series_str(r.product)}};
      if (r.continuum_exponent) fields.emplace_back("continuum-exponent", cont);
      fields.emplace_back("match", r.match ? "true" : "false");
      emit(cfg.out, character_text(fields));
    }
    return r.match ? 0 : 1;
  }

  // d0k: the expansion order comes from the hbar-order knob.
  long k = cfg.hbar_order;
  std::optional<int> K_opt;
  if (cfg.vars_set) K_opt = cfg.vars;
  D0kCharacter r = char_D0k_specialize(k, cfg.sector, cfg.L, K_opt);
  if (cfg.format == "csv") {
    emit(cfg.out, table_csv(series_columns("substituted", r.substituted, "trace", r.trace)));
  } else if (cfg.format == "json") {
    ordered_json j;
    j["name"] = name;
    j["sector"] = sector_str(cfg.sector);
    j["L"] = cfg.L;
    j["k"] = k;
    j["vars"] = K_opt ? *K_opt : static_cast<int>(k) + 1;
    j["substituted"] = series_terms_json(r.substituted);
    j["substituted_str"] = series_str(r.substituted);
    j["trace"] = series_terms_json(r.trace);
    j["trace_str"] = series_str(r.trace);
    j["match"] = r.match;
    emit(cfg.out, json_payload(j));
  } else {
    emit(cfg.out, character_text({{"name", name},
                                  {"sector", sector_str(cfg.sector)},
                                  {"L", std::to_string(cfg.L)},
                                  {"k", std::to_string(k)},
                                  {"substituted", series_str(r.substituted)},
                                  {"trace", series_str(r.trace)},
                                  {"match", r.match ? "true" : "false"}}));
  }
  return r.match ? 0 : 1;
}

int run_table(const RunConfig& cfg, const std::string& what) {
  TextTable t;
  t.name = what;

  if (what == "shifts") {
    t.context.emplace_back("vars", std::to_string(cfg.vars));
    t.columns = {"i", "NS", "R"};
    auto ns = regularized_shifts(cfg.vars, Sector::NS);
    auto ra = regularized_shifts(cfg.vars, Sector::R);
    for (std::size_t i = 0; i < ns.size(); ++i)
      t.rows.push_back({std::to_string(ns[i].first), ns[i].second.str(), ra[i].second.str()});
  } else {
    t.context.emplace_back("sector", sector_str(cfg.sector));
    t.context.emplace_back("level", std::to_string(cfg.level));
    GradedBasis basis = enumerate_basis(cfg.sector, HalfInt(cfg.level));
    bool iom_table = what == "iom-eigenvalues";
    t.columns = {"diagram", "level", "charge"};
    if (iom_table) {
      for (int i = 0; i <= cfg.vars; ++i) t.columns.push_back("I_" + std::to_string(i));
    } else {
      t.columns.push_back("D0_q");
    }
    std::function<LaurentPoly(long)> pw = [](long e) {
      return LaurentPoly::monomial(Var::q, static_cast<int>(e));
    };
    for (const auto& [lv, blk] : basis.blocks) {
      for (const BasisState& s : blk) {
        if (s.b != 0) continue;  // eigenvalues are per diagram
        std::vector<std::string> row = {diagram_str(s), lv.str(), std::to_string(s.charge())};
        if (iom_table) {
          for (long i = 0; i <= cfg.vars; ++i) row.push_back(iom_eigenvalue(i, s).str());
        } else {
          row.push_back(d0_eigenvalue<LaurentPoly>(pw, s, LaurentPoly()).str());
        }
        t.rows.push_back(std::move(row));
      }
    }
  }

  std::string payload = cfg.format == "json"  ? json_payload(table_json(t))
                        : cfg.format == "csv" ? table_csv(t)
                                              : table_text(t);
  emit(cfg.out, payload);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact checker and character calculator for a deformed fermion-bilinear algebra"};
  app.require_subcommand(1);

  std::string sector = "NS", t_text = "3/2", lambda_text = "1", zero_mode = "omit";
  std::string delta_T_text = "-1", ring = "laurent", format = "json", out;
  long level = 8, max_index = 3, L = 3;
  int vars = 4, hbar_order = 4;
  bool symbolic = false;

  auto* o_sector = app.add_option("--sector", sector, "basis sector")
                       ->check(CLI::IsMember({"NS", "R"}));
  auto* o_level = app.add_option("--level", level, "truncation bound of the graded basis");
  auto* o_max_index = app.add_option("--max-index", max_index, "index bound for relation suites");
  auto* o_vars = app.add_option("--vars", vars, "tracked variable count");
  auto* o_L = app.add_option("--L", L, "label bound for character sums");
  auto* o_t = app.add_option("--t", t_text, "finitization parameter (rational p/q)");
  auto* o_lambda = app.add_option("--lambda", lambda_text, "pairing weight of the lambda rule");
  auto* o_zero = app.add_option("--zero-mode", zero_mode, "zero-mode pairing rule")
                     ->check(CLI::IsMember({"omit", "lambda", "raw"}));
  auto* o_delta = app.add_option("--delta-T", delta_T_text, "tilde improvement coefficient");
  auto* o_hbar = app.add_option("--hbar-order", hbar_order, "expansion truncation order");
  auto* o_ring = app.add_option("--ring", ring, "scalar ring of the deformation suite")
                     ->check(CLI::IsMember({"laurent", "rational", "hbar"}));
  auto* o_out = app.add_option("--out", out, "output path (default stdout)");
  auto* o_format = app.add_option("--format", format, "output format")
                       ->check(CLI::IsMember({"json", "csv", "text"}));
  auto* o_symbolic = app.add_flag("--symbolic", symbolic, "force the symbolic Laurent ring");

  std::string suite, character_name, table_name;
  auto* cmd_verify = app.add_subcommand("verify", "run a relation suite and report");
  cmd_verify->fallthrough();
  cmd_verify->add_option("suite", suite, "relation suite")
      ->required()
      ->check(CLI::IsMember({"virasoro", "virasoro-alpha", "dq", "v-algebra", "iom", "jordan",
                             "primary-w3", "expansion", "convention-independence"}));
  auto* cmd_character = app.add_subcommand("character", "compute a graded character two ways");
  cmd_character->fallthrough();
  cmd_character->add_option("name", character_name, "character family")
      ->required()
      ->check(CLI::IsMember({"iom", "w3", "general", "d0t", "d0k"}));
  auto* cmd_table = app.add_subcommand("table", "emit an eigenvalue or shift table");
  cmd_table->fallthrough();
  cmd_table->add_option("what", table_name, "table to emit")
      ->required()
      ->check(CLI::IsMember({"iom-eigenvalues", "d0-eigenvalues", "shifts"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig cfg;
    load_default_config(cfg);
    if (o_sector->count() > 0) cfg.sector = parse_sector_value("sector", sector);
    if (o_level->count() > 0) cfg.level = level;
    if (o_max_index->count() > 0) cfg.max_index = max_index;
    if (o_vars->count() > 0) {
      cfg.vars = vars;
      cfg.vars_set = true;
    }
    if (o_L->count() > 0) cfg.L = L;
    if (o_t->count() > 0) cfg.t = parse_rational_value("t", t_text);
    if (o_lambda->count() > 0) cfg.lambda = parse_rational_value("lambda", lambda_text);
    if (o_zero->count() > 0) {
      cfg.zero_mode = zero_mode;
      cfg.zero_mode_set = true;
    }
    if (o_delta->count() > 0) cfg.delta_T = parse_rational_value("delta-T", delta_T_text);
    if (o_hbar->count() > 0) cfg.hbar_order = hbar_order;
    if (o_ring->count() > 0) cfg.ring = ring;
    if (o_out->count() > 0) cfg.out = out;
    if (o_format->count() > 0) cfg.format = format;
    if (o_symbolic->count() > 0) cfg.symbolic = true;
    validate_config(cfg);

    if (cmd_verify->parsed()) return run_verify(cfg, suite);
    if (cmd_character->parsed()) return run_character(cfg, character_name);
    return run_table(cfg, table_name);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
