#include "wg/config.hpp"

#include "wg/errors.hpp"
#include "wg/expr.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace wg {

namespace {

const char* kSinSinU = "sin(pi*x)*sin(pi*y)";
const char* kSinSinUx = "pi*cos(pi*x)*sin(pi*y)";
const char* kSinSinUy = "pi*sin(pi*x)*cos(pi*y)";

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_expression_key(const std::string& key) {
  static const std::set<std::string> keys = {"a11", "a12", "a22", "b1", "b2",
                                             "c",   "f",   "g",   "u",  "ux", "uy"};
  return keys.count(key) > 0;
}

[[noreturn]] void config_fail(int line, const std::string& msg) {
  throw Error(ErrorKind::Config, "config line " + std::to_string(line) + ": " + msg);
}

} // namespace

const std::map<std::string, std::map<std::string, std::string>>& builtin_problems() {
  static const std::map<std::string, std::map<std::string, std::string>> registry = {
      {"sinsin",
       {{"u", kSinSinU},
        {"ux", kSinSinUx},
        {"uy", kSinSinUy},
        {"f", "2*pi^2*sin(pi*x)*sin(pi*y)"},
        {"g", "0"}}},
      {"linear",
       {{"u", "1 + 2*x - 3*y"},
        {"ux", "2"},
        {"uy", "-3"},
        {"f", "0"},
        {"g", "1 + 2*x - 3*y"}}},
      {"quadratic",
       {{"u", "x^2 - y^2 + x*y"},
        {"ux", "2*x + y"},
        {"uy", "x - 2*y"},
        {"f", "0"},
        {"g", "x^2 - y^2 + x*y"}}},
      {"variable-coeff",
       {{"a11", "1 + x^2"},
        {"a22", "1 + y^2"},
        {"b1", "1"},
        {"b2", "-1"},
        {"c", "1 + x*y"},
        {"u", kSinSinU},
        {"ux", kSinSinUx},
        {"uy", kSinSinUy},
        {"f",
         "pi^2*(2 + x^2 + y^2)*sin(pi*x)*sin(pi*y) - 2*pi*x*cos(pi*x)*sin(pi*y)"
         " - 2*pi*y*sin(pi*x)*cos(pi*y) + pi*cos(pi*x)*sin(pi*y) - pi*sin(pi*x)*cos(pi*y)"
         " + (1 + x*y)*sin(pi*x)*sin(pi*y)"},
        {"g", "0"}}},
      {"convection",
       {{"b1", "3"},
        {"b2", "1"},
        {"u", kSinSinU},
        {"ux", kSinSinUx},
        {"uy", kSinSinUy},
        {"f",
         "2*pi^2*sin(pi*x)*sin(pi*y) + 3*pi*cos(pi*x)*sin(pi*y) + pi*sin(pi*x)*cos(pi*y)"},
        {"g", "0"}}},
  };
  return registry;
}

namespace {

ProblemConfig parse_config_text(const std::string& text) {
  ProblemConfig cfg;
  std::map<std::string, std::string> explicit_exprs;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_n = false;
  while (std::getline(in, line)) {
    ++line_no;
    // strip comments, but not inside quoted values
    std::string cleaned;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') quoted = !quoted;
      if (ch == '#' && !quoted) break;
      cleaned += ch;
    }
    cleaned = trim(cleaned);
    if (cleaned.empty()) continue;

    size_t eq = cleaned.find('=');
    if (eq == std::string::npos) config_fail(line_no, "expected 'key = value'");
    std::string key = trim(cleaned.substr(0, eq));
    std::string value = trim(cleaned.substr(eq + 1));
    if (key.empty()) config_fail(line_no, "empty key");
    if (value.empty()) config_fail(line_no, "empty value for key '" + key + "'");

    bool is_quoted = value.size() >= 2 && value.front() == '"' && value.back() == '"';
    if (is_quoted) value = value.substr(1, value.size() - 2);

    try {
      if (is_expression_key(key)) {
        if (!is_quoted)
          config_fail(line_no, "expression value for '" + key + "' must be quoted");
        explicit_exprs[key] = value;
      } else if (key == "problem") {
        cfg.problem_name = value;
      } else if (key == "mesh") {
        cfg.mesh_path = value;
      } else if (key == "unit_square") {
        cfg.unit_square_n = std::stoi(value);
        have_n = true;
      } else if (key == "family") {
        if (value == "full")
          cfg.family = Family::Full;
        else if (value == "rt")
          cfg.family = Family::RT;
        else
          config_fail(line_no, "family must be 'full' or 'rt'");
      } else if (key == "j") {
        cfg.j = std::stoi(value);
      } else if (key == "levels") {
        std::istringstream ls(value);
        std::string tok;
        while (std::getline(ls, tok, ',')) cfg.levels.push_back(std::stoi(trim(tok)));
      } else if (key == "quad_boost") {
        cfg.quad_boost = std::stoi(value);
      } else if (key == "solver.rel_residual" || key == "solver_rel_residual") {
        cfg.solver_rtol = std::stod(value);
      } else if (key == "alpha") {
        cfg.alpha = std::stod(value);
      } else if (key == "threads") {
        cfg.threads = std::stoi(value);
      } else {
        config_fail(line_no, "unknown key '" + key + "'");
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      config_fail(line_no, "cannot parse value '" + value + "' for key '" + key + "'");
    }
  }

  if (!cfg.problem_name.empty()) {
    auto it = builtin_problems().find(cfg.problem_name);
    if (it == builtin_problems().end())
      throw Error(ErrorKind::Config, "unknown builtin problem '" + cfg.problem_name + "'");
    cfg.expressions = it->second;
  }
  for (const auto& [k, v] : explicit_exprs) cfg.expressions[k] = v; // explicit wins

  if (have_n && cfg.unit_square_n < 1)
    throw Error(ErrorKind::Config, "unit_square must be >= 1");
  return cfg;
}

void apply_env_overrides(ProblemConfig& cfg) {
  if (const char* v = std::getenv("WG_SOLVER_RTOL")) cfg.solver_rtol = std::atof(v);
  if (const char* v = std::getenv("WG_THREADS")) cfg.threads = std::atoi(v);
}

ScalarField parse_field(const ProblemConfig& cfg, const std::string& key,
                        const std::string& fallback) {
  auto it = cfg.expressions.find(key);
  const std::string& text = it != cfg.expressions.end() ? it->second : fallback;
  try {
    return expr::make_field(expr::parse(text));
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, "key '" + key + "': " + e.what());
  }
}

bool is_structurally_zero(const ProblemConfig& cfg, const std::string& key) {
  auto it = cfg.expressions.find(key);
  if (it == cfg.expressions.end()) return true;
  try {
    auto node = expr::parse(it->second);
    return node->kind == expr::Kind::Number && node->number == 0.0;
  } catch (const Error&) {
    return false;
  }
}

} // namespace

ProblemSpec spec_from_config(const ProblemConfig& cfg) {
  if (cfg.expressions.find("f") == cfg.expressions.end())
    throw Error(ErrorKind::Config, "config defines no source term f");

  ProblemSpec spec;
  spec.a11 = parse_field(cfg, "a11", "1");
  spec.a12 = parse_field(cfg, "a12", "0");
  spec.a22 = parse_field(cfg, "a22", "1");
  spec.b1 = parse_field(cfg, "b1", "0");
  spec.b2 = parse_field(cfg, "b2", "0");
  spec.c = parse_field(cfg, "c", "0");
  spec.f = parse_field(cfg, "f", "0");
  spec.g = parse_field(cfg, "g", "0");
  spec.has_convection = !(is_structurally_zero(cfg, "b1") && is_structurally_zero(cfg, "b2"));
  spec.has_reaction = !is_structurally_zero(cfg, "c");
  spec.alpha = cfg.alpha;
  if (cfg.expressions.count("u")) spec.exact_u = parse_field(cfg, "u", "0");
  if (cfg.expressions.count("ux")) spec.exact_ux = parse_field(cfg, "ux", "0");
  if (cfg.expressions.count("uy")) spec.exact_uy = parse_field(cfg, "uy", "0");

  // Ellipticity spot check before any heavy work; assembly rechecks at its
  // own quadrature points.
  for (int i = 0; i <= 9; ++i)
    for (int k = 0; k <= 9; ++k) spec.check_ellipticity_at(i / 9.0, k / 9.0);
  return spec;
}

LoadedProblem load_problem_text(const std::string& text) {
  LoadedProblem lp;
  lp.config = parse_config_text(text);
  apply_env_overrides(lp.config);
  lp.spec = spec_from_config(lp.config);
  return lp;
}

LoadedProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_problem_text(buf.str());
}

} // namespace wg
