#include "irsec/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace irsec {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error("field '" + key + "': expected a number, got '" + text + "'");
  }
  return value;
}

template <typename Int>
Int to_integer(const std::string& key, const std::string& text) {
  Int value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error("field '" + key + "': expected an integer, got '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) items.push_back(trim(item));
  return items;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

Setter real(double ScenarioConfig::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.sweep.base.*field = to_double(k, v);
  };
}

Setter real(double SolverSettings::*field) {
  return [field](RunConfig& c, const std::string& k, const std::string& v) {
    c.sweep.base.solver.*field = to_double(k, v);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"n_tx", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sweep.base.n_tx = to_integer<int>(k, v);
       }},
      {"n_irs", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sweep.base.n_irs = to_integer<int>(k, v);
       }},
      {"p_total_dbm", real(&ScenarioConfig::p_total_dbm)},
      {"noise_bob_dbm", real(&ScenarioConfig::noise_bob_dbm)},
      {"noise_eve_dbm", real(&ScenarioConfig::noise_eve_dbm)},
      {"qos_db", real(&ScenarioConfig::qos_db)},
      {"pl0_db", real(&ScenarioConfig::pl0_db)},
      {"d0_m", real(&ScenarioConfig::d0_m)},
      {"rho_ai", real(&ScenarioConfig::rho_ai)},
      {"rho_ib", real(&ScenarioConfig::rho_ib)},
      {"rho_ie", real(&ScenarioConfig::rho_ie)},
      {"rho_ab", real(&ScenarioConfig::rho_ab)},
      {"rho_ae", real(&ScenarioConfig::rho_ae)},
      {"d_ai", real(&ScenarioConfig::d_ai)},
      {"d_ib", real(&ScenarioConfig::d_ib)},
      {"d_ie", real(&ScenarioConfig::d_ie)},
      {"d_ab", real(&ScenarioConfig::d_ab)},
      {"d_ae", real(&ScenarioConfig::d_ae)},
      {"om_tol", real(&SolverSettings::om_tol)},
      {"mm_tol", real(&SolverSettings::mm_tol)},
      {"eta0", real(&SolverSettings::eta0)},
      {"max_iter", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sweep.base.solver.max_iter = to_integer<int>(k, v);
       }},
      {"cg_rule", [](RunConfig& c, const std::string&, const std::string& v) {
         c.sweep.base.solver.cg_rule = parse_cg_rule(v);
       }},
      {"variable", [](RunConfig& c, const std::string&, const std::string& v) {
         c.sweep.variable = parse_sweep_variable(v);
       }},
      {"values", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sweep.values.clear();
         for (const std::string& item : split_list(v)) c.sweep.values.push_back(to_double(k, item));
       }},
      {"trials", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sweep.trials = to_integer<int>(k, v);
       }},
      {"algorithms", [](RunConfig& c, const std::string&, const std::string& v) {
         c.sweep.algorithms = parse_algorithm_list(v);
       }},
      {"master_seed", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sweep.master_seed = to_integer<std::uint64_t>(k, v);
       }},
      {"l_values", [](RunConfig& c, const std::string& k, const std::string& v) {
         c.l_values.clear();
         for (const std::string& item : split_list(v)) c.l_values.push_back(to_integer<int>(k, item));
       }},
  };
  return table;
}

void assign(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw Error("unknown key '" + key + "'");
  it->second(cfg, key, value);
}

}  // namespace

void RunConfig::validate() const {
  sweep.validate();
  if (l_values.empty()) throw Error("invalid config: l_values must be non-empty");
  for (int l : l_values) {
    if (l < 1) throw Error("invalid config: l_values entries must be >= 1");
  }
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string prefix = source + ":" + std::to_string(line_no) + ": ";
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(prefix + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw Error(prefix + "key '" + key + "' set twice");
    try {
      assign(cfg, key, value);
    } catch (const Error& e) {
      throw Error(prefix + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw Error(path + ": cannot open config file");
  std::ostringstream text;
  text << file.rdbuf();
  return parse_config(text.str(), path);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error("--set " + assignment + ": expected KEY=VALUE");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  try {
    assign(cfg, key, value);
    // Pinning the swept variable collapses the sweep onto that single point.
    if (key == to_string(cfg.sweep.variable)) assign(cfg, "values", value);
  } catch (const Error& e) {
    throw Error("--set " + assignment + ": " + e.what());
  }
}

nlohmann::json to_json(const RunConfig& cfg) {
  const ScenarioConfig& s = cfg.sweep.base;
  nlohmann::json algorithms = nlohmann::json::array();
  for (Algorithm a : cfg.sweep.algorithms) algorithms.push_back(to_string(a));
  return {
      {"n_tx", s.n_tx},
      {"n_irs", s.n_irs},
      {"p_total_dbm", s.p_total_dbm},
      {"noise_bob_dbm", s.noise_bob_dbm},
      {"noise_eve_dbm", s.noise_eve_dbm},
      {"qos_db", s.qos_db},
      {"pl0_db", s.pl0_db},
      {"d0_m", s.d0_m},
      {"rho_ai", s.rho_ai},
      {"rho_ib", s.rho_ib},
      {"rho_ie", s.rho_ie},
      {"rho_ab", s.rho_ab},
      {"rho_ae", s.rho_ae},
      {"d_ai", s.d_ai},
      {"d_ib", s.d_ib},
      {"d_ie", s.d_ie},
      {"d_ab", s.d_ab},
      {"d_ae", s.d_ae},
      {"om_tol", s.solver.om_tol},
      {"mm_tol", s.solver.mm_tol},
      {"eta0", s.solver.eta0},
      {"max_iter", s.solver.max_iter},
      {"cg_rule", to_string(s.solver.cg_rule)},
      {"variable", to_string(cfg.sweep.variable)},
      {"values", cfg.sweep.values},
      {"trials", cfg.sweep.trials},
      {"algorithms", algorithms},
      {"master_seed", cfg.sweep.master_seed},
      {"l_values", cfg.l_values},
  };
}

}  // namespace irsec
