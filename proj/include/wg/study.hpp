#pragma once

#include "wg/assembly.hpp"
#include "wg/config.hpp"
#include "wg/postprocess.hpp"
#include "wg/reference.hpp"

#include <json.hpp>

#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace wg {

using json = nlohmann::ordered_json;

// Mesh selection: structured unit square (level = n) or a node/ele file
// refined `level` times.
Mesh mesh_for_config(const ProblemConfig& config);
Mesh mesh_for_level(const ProblemConfig& config, int level);

struct SolveOutcome {
  Mesh mesh;
  WgSpace space;
  WeakFunction solution;
  SolveReport solver;
  std::optional<ErrorNorms> errors;
  FluxReport flux;
  int total_dofs = 0;
};

SolveOutcome run_solve(const LoadedProblem& lp, const AssemblyOptions& options = {});

struct ConvergenceLevel {
  int level = 0;
  ErrorNorms norms;
  double rel_residual = 0.0;
  double max_conservation_ratio = 0.0;
  double max_jump_ratio = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceLevel> levels;
  std::vector<StepRate> rate_eH1, rate_eL2proj;
  double slope_eH1 = 0.0, slope_eL2proj = 0.0;
};

// Requires an exact solution and at least two levels.
ConvergenceResult run_convergence(const LoadedProblem& lp);

// Frozen column schema: h,dofs,eH1,eL2proj,eL2,rate_eH1,rate_eL2proj.
std::string convergence_csv(const ConvergenceResult& result);
json convergence_json(const LoadedProblem& lp, const ConvergenceResult& result);

json solution_json(const LoadedProblem& lp, const SolveOutcome& outcome);
json summary_json(const LoadedProblem& lp, const SolveOutcome& outcome);

json flux_json(const FluxReport& report);
std::string flux_elements_csv(const FluxReport& report);
std::string flux_edges_csv(const FluxReport& report);

// Invariant suites behind the `verify` subcommand. RT kernel dimensions are
// reported but not gated.
struct VerifyOutcome {
  json report;
  bool pass = false;
};
VerifyOutcome run_verify(const AssemblyOptions& hook = {});

// Grammar-valid corpus used by the parser suites.
const std::vector<std::string>& expression_corpus();

// Scalar field together with its analytic gradient.
struct SmoothField {
  ScalarField value;
  VectorField gradient;
};
std::vector<SmoothField> random_polynomial_fields(int count, int degree, unsigned seed);
std::vector<SmoothField> transcendental_fields(int count, unsigned seed);

// Single random triangle with inradius/diameter bounded away from zero.
Mesh random_well_shaped_triangle(std::mt19937& rng);

// Elementwise defect of the projection/weak-gradient commutation identity:
// returns (|| grad_w(Q_h u) - R_h(grad u) ||_T, 1 + ||grad u||_T).
std::pair<double, double> commutation_defect(const SmoothField& field, const Mesh& mesh, int t,
                                             const WgSpace& space, const LocalWeakGradient& lwg);

} // namespace wg
