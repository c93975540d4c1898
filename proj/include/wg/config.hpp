#pragma once

#include "wg/problem.hpp"
#include "wg/space.hpp"

#include <map>
#include <string>
#include <vector>

namespace wg {

// Parsed run configuration: flat key = value text, expression values quoted.
// See README for the full key list and the expression grammar.
struct ProblemConfig {
  std::string problem_name;            // builtin registry entry, optional
  std::string mesh_path;               // node/ele file; empty = structured
  int unit_square_n = 8;
  Family family = Family::Full;
  int j = 0;
  std::vector<int> levels;             // structured: n per level; file mesh: refinement count
  std::map<std::string, std::string> expressions; // a11..g, u, ux, uy after builtin merge
  int quad_boost = 3;
  double solver_rtol = 1e-10;
  double alpha = 1e-10;
  int threads = 0;                     // 0 = machine parallelism
};

struct LoadedProblem {
  ProblemConfig config;
  ProblemSpec spec;
};

// Builtin manufactured problems ("sinsin", "linear", "quadratic",
// "variable-coeff", "convection"): expression sets keyed like config entries.
const std::map<std::string, std::map<std::string, std::string>>& builtin_problems();

// Parse config text / file, merge builtin expressions, fill defaults, parse
// all expressions, apply WG_SOLVER_RTOL / WG_THREADS overrides, and run the
// ellipticity spot check on a 10x10 sample grid.
LoadedProblem load_problem_text(const std::string& text);
LoadedProblem load_problem_file(const std::string& path);

// Rebuild the ProblemSpec after mutating config.expressions or tolerances.
ProblemSpec spec_from_config(const ProblemConfig& config);

} // namespace wg
