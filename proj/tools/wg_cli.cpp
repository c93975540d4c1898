// Command-line driver: solve, convergence, verify, flux-report.
//
// Exit codes: 0 success, 1 numerical-check failure, 2 usage/config error,
// 3 solver failure. Data outputs (CSV/JSON) are byte-deterministic; run
// timestamps go to a separate run_meta.json.

#include "wg/errors.hpp"
#include "wg/parallel.hpp"
#include "wg/study.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using wg::json;

int exit_code_for(wg::ErrorKind kind) {
  switch (kind) {
    case wg::ErrorKind::Solver:
    case wg::ErrorKind::Degenerate: return 3;
    case wg::ErrorKind::Numeric: return 1;
    default: return 2;
  }
}

void emit_error(const char* type, const std::string& message) {
  json err{{"error", {{"type", type}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw wg::Error(wg::ErrorKind::Config, "cannot write '" + path.string() + "'");
  out << content;
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_file(path, j.dump(2) + "\n");
}

void write_run_meta(const std::filesystem::path& dir, const std::string& command) {
  auto now = std::chrono::system_clock::now().time_since_epoch();
  json meta{{"command", command},
            {"unix_time_ms",
             std::chrono::duration_cast<std::chrono::milliseconds>(now).count()}};
  write_json(dir / "run_meta.json", meta);
}

struct CliOverrides {
  std::string config_path;
  std::string out_dir = ".";
  std::string problem;
  std::string mesh_path;
  int unit_square = 0;
  int j = -1;
  std::string family;
  std::string levels;
  int threads = 0;
};

void add_common_options(CLI::App* sub, CliOverrides& o) {
  sub->add_option("--config", o.config_path, "problem config file");
  sub->add_option("--out", o.out_dir, "output directory (default: .)");
  sub->add_option("--problem", o.problem, "builtin problem name");
  sub->add_option("--mesh", o.mesh_path, "node/ele mesh file");
  sub->add_option("--unit-square", o.unit_square, "structured n x n unit-square mesh");
  sub->add_option("--j", o.j, "interior polynomial degree");
  sub->add_option("--family", o.family, "element family")
      ->check(CLI::IsMember({"full", "rt"}));
  sub->add_option("--levels", o.levels, "comma-separated levels for convergence studies");
  sub->add_option("--threads", o.threads, "worker cap (results are thread-count independent)");
}

wg::LoadedProblem build_problem(const CliOverrides& o, bool need_problem) {
  wg::ProblemConfig cfg;
  if (!o.config_path.empty())
    cfg = wg::load_problem_file(o.config_path).config;

  if (!o.problem.empty()) {
    auto it = wg::builtin_problems().find(o.problem);
    if (it == wg::builtin_problems().end())
      throw wg::Error(wg::ErrorKind::Config, "unknown builtin problem '" + o.problem + "'");
    cfg.problem_name = o.problem;
    cfg.expressions = it->second;
  }
  if (!o.mesh_path.empty()) cfg.mesh_path = o.mesh_path;
  if (o.unit_square > 0) {
    cfg.unit_square_n = o.unit_square;
    cfg.mesh_path.clear();
  }
  if (o.j >= 0) cfg.j = o.j;
  if (!o.family.empty()) cfg.family = (o.family == "rt") ? wg::Family::RT : wg::Family::Full;
  if (!o.levels.empty()) {
    cfg.levels.clear();
    std::istringstream ls(o.levels);
    std::string tok;
    while (std::getline(ls, tok, ',')) cfg.levels.push_back(std::stoi(tok));
  }
  if (o.threads > 0) cfg.threads = o.threads;

  if (need_problem && cfg.expressions.find("f") == cfg.expressions.end())
    throw wg::Error(wg::ErrorKind::Config,
                    "no problem given: pass --config or --problem <builtin>");

  wg::LoadedProblem lp;
  lp.spec = wg::spec_from_config(cfg);
  lp.config = std::move(cfg);
  return lp;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak Galerkin solver for second-order elliptic Dirichlet problems"};
  app.require_subcommand(1);

  CliOverrides o;
  bool inject_bug = false;
  CLI::App* cmd_solve = app.add_subcommand("solve", "assemble and solve one problem");
  CLI::App* cmd_conv = app.add_subcommand("convergence", "mesh-refinement error study");
  CLI::App* cmd_verify = app.add_subcommand("verify", "numerical invariant suites");
  CLI::App* cmd_flux = app.add_subcommand("flux-report", "conservation and flux-jump report");
  for (CLI::App* sub : {cmd_solve, cmd_conv, cmd_verify, cmd_flux}) add_common_options(sub, o);
  cmd_verify->add_flag("--inject-bug", inject_bug,
                       "testing hook: scale one local matrix to break conservation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (o.threads > 0) wg::set_max_threads(o.threads);
    if (const char* env = std::getenv("WG_THREADS"); env && o.threads == 0)
      wg::set_max_threads(std::atoi(env));

    std::filesystem::path out_dir(o.out_dir);
    std::filesystem::create_directories(out_dir);

    if (cmd_verify->parsed()) {
      wg::AssemblyOptions hook;
      if (inject_bug) {
        hook.perturb_element = 0;
        hook.perturb_scale = 1.001;
      }
      wg::VerifyOutcome outcome = wg::run_verify(hook);
      for (const auto& [name, suite] : outcome.report["suites"].items()) {
        bool informational = suite.contains("informational");
        bool pass = informational || suite["pass"].get<bool>();
        std::cout << (informational ? "[info] " : pass ? "[pass] " : "[FAIL] ") << name << "\n";
      }
      write_json(out_dir / "verify.json", outcome.report);
      write_run_meta(out_dir, "verify");
      return outcome.pass ? 0 : 1;
    }

    if (cmd_solve->parsed()) {
      wg::LoadedProblem lp = build_problem(o, true);
      if (lp.config.threads > 0) wg::set_max_threads(lp.config.threads);
      wg::SolveOutcome outcome = wg::run_solve(lp);
      write_json(out_dir / "solution.json", wg::solution_json(lp, outcome));
      write_json(out_dir / "summary.json", wg::summary_json(lp, outcome));
      write_run_meta(out_dir, "solve");
      std::cout << "solved: " << outcome.total_dofs << " dofs, residual "
                << outcome.solver.rel_residual << "\n";
      return 0;
    }

    if (cmd_conv->parsed()) {
      wg::LoadedProblem lp = build_problem(o, true);
      if (lp.config.threads > 0) wg::set_max_threads(lp.config.threads);
      wg::ConvergenceResult result = wg::run_convergence(lp);
      write_file(out_dir / "convergence.csv", wg::convergence_csv(result));
      write_json(out_dir / "convergence.json", wg::convergence_json(lp, result));
      write_run_meta(out_dir, "convergence");
      std::cout << wg::convergence_csv(result);
      return 0;
    }

    if (cmd_flux->parsed()) {
      wg::LoadedProblem lp = build_problem(o, true);
      if (lp.config.threads > 0) wg::set_max_threads(lp.config.threads);
      wg::SolveOutcome outcome = wg::run_solve(lp);
      write_file(out_dir / "flux_elements.csv", wg::flux_elements_csv(outcome.flux));
      write_file(out_dir / "flux_edges.csv", wg::flux_edges_csv(outcome.flux));
      write_json(out_dir / "flux_report.json", wg::flux_json(outcome.flux));
      write_run_meta(out_dir, "flux-report");
      std::cout << "max conservation ratio " << outcome.flux.max_residual_ratio
                << ", max jump ratio " << outcome.flux.max_jump_ratio << "\n";
      bool ok = outcome.flux.max_residual_ratio <= 1e-9 && outcome.flux.max_jump_ratio <= 1e-9;
      return ok ? 0 : 1;
    }
  } catch (const wg::Error& e) {
    emit_error(wg::error_kind_name(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const std::invalid_argument& e) {
    emit_error("invalid-argument", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 3;
  }
  return 0;
}
