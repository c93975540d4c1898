#include "wg/study.hpp"

#include "wg/errors.hpp"
#include "wg/expr.hpp"
#include "wg/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <map>

namespace wg {

namespace {

std::string fmt_sci(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string fmt_rate(const StepRate& r) {
  if (r.exact) return "exact";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", r.rate);
  return buf;
}

json json_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

} // namespace

Mesh mesh_for_level(const ProblemConfig& config, int level) {
  if (config.mesh_path.empty()) return Mesh::unit_square(level);
  Mesh mesh = Mesh::load_node_ele_file(config.mesh_path);
  for (int r = 0; r < level; ++r) mesh = mesh.refined();
  return mesh;
}

Mesh mesh_for_config(const ProblemConfig& config) {
  if (config.mesh_path.empty()) return Mesh::unit_square(config.unit_square_n);
  return Mesh::load_node_ele_file(config.mesh_path);
}

SolveOutcome run_solve(const LoadedProblem& lp, const AssemblyOptions& options) {
  Mesh mesh = mesh_for_config(lp.config);
  WgSpace space(lp.config.family, lp.config.j, lp.config.quad_boost);
  LocalGradientSet grads(mesh, space);
  AssembledSystem system = assemble(lp.spec, mesh, space, grads, options);
  SolveReport report;
  WeakFunction u = solve(system, mesh, space, lp.config.solver_rtol, &report);

  std::optional<ErrorNorms> errors;
  if (lp.spec.exact_u) errors = error_norms(u, *lp.spec.exact_u, mesh, space, grads);
  FluxReport flux = flux_report(u, lp.spec, mesh, space, grads);
  int total = system.dofs.total();
  return SolveOutcome{std::move(mesh), space,  std::move(u), report,
                      std::move(errors), std::move(flux), total};
}

ConvergenceResult run_convergence(const LoadedProblem& lp) {
  if (!lp.spec.exact_u)
    throw Error(ErrorKind::Config, "convergence study requires the exact solution u in the config");
  if (lp.config.levels.size() < 2)
    throw Error(ErrorKind::Config, "convergence study needs at least two levels");

  ConvergenceResult result;
  for (int level : lp.config.levels) {
    Mesh mesh = mesh_for_level(lp.config, level);
    WgSpace space(lp.config.family, lp.config.j, lp.config.quad_boost);
    LocalGradientSet grads(mesh, space);
    AssembledSystem system = assemble(lp.spec, mesh, space, grads);
    SolveReport report;
    WeakFunction u = solve(system, mesh, space, lp.config.solver_rtol, &report);

    ConvergenceLevel lvl;
    lvl.level = level;
    lvl.norms = error_norms(u, *lp.spec.exact_u, mesh, space, grads);
    lvl.rel_residual = report.rel_residual;
    FluxReport flux = flux_report(u, lp.spec, mesh, space, grads);
    lvl.max_conservation_ratio = flux.max_residual_ratio;
    lvl.max_jump_ratio = flux.max_jump_ratio;
    result.levels.push_back(lvl);
  }

  std::vector<double> h, e_h1, e_l2p;
  for (const ConvergenceLevel& lvl : result.levels) {
    h.push_back(lvl.norms.h);
    e_h1.push_back(lvl.norms.eH1);
    e_l2p.push_back(lvl.norms.eL2proj);
  }
  result.rate_eH1 = step_rates(h, e_h1);
  result.rate_eL2proj = step_rates(h, e_l2p);
  result.slope_eH1 = ls_slope(h, e_h1);
  result.slope_eL2proj = ls_slope(h, e_l2p);
  return result;
}

std::string convergence_csv(const ConvergenceResult& result) {
  std::string out = "h,dofs,eH1,eL2proj,eL2,rate_eH1,rate_eL2proj\n";
  for (size_t k = 0; k < result.levels.size(); ++k) {
    const ErrorNorms& n = result.levels[k].norms;
    out += fmt_sci(n.h) + "," + std::to_string(n.dofs) + "," + fmt_sci(n.eH1) + "," +
           fmt_sci(n.eL2proj) + "," + fmt_sci(n.eL2) + ",";
    if (k == 0)
      out += "-,-";
    else
      out += fmt_rate(result.rate_eH1[k - 1]) + "," + fmt_rate(result.rate_eL2proj[k - 1]);
    out += "\n";
  }
  return out;
}

namespace {

json rates_json(const std::vector<StepRate>& rates, double slope) {
  json steps = json::array();
  for (const StepRate& r : rates) {
    if (r.exact)
      steps.push_back("exact");
    else
      steps.push_back(r.rate);
  }
  return json{{"steps", steps}, {"ls_slope", json_or_null(slope)}};
}

json problem_meta(const LoadedProblem& lp) {
  return json{{"problem", lp.config.problem_name.empty() ? "custom" : lp.config.problem_name},
              {"family", lp.config.family == Family::Full ? "full" : "rt"},
              {"j", lp.config.j},
              {"quad_boost", lp.config.quad_boost}};
}

} // namespace

json convergence_json(const LoadedProblem& lp, const ConvergenceResult& result) {
  json levels = json::array();
  for (const ConvergenceLevel& lvl : result.levels) {
    levels.push_back(json{{"level", lvl.level},
                          {"h", lvl.norms.h},
                          {"dofs", lvl.norms.dofs},
                          {"eH1", lvl.norms.eH1},
                          {"eL2proj", lvl.norms.eL2proj},
                          {"eL2", lvl.norms.eL2},
                          {"rel_residual", lvl.rel_residual},
                          {"max_conservation_ratio", lvl.max_conservation_ratio},
                          {"max_jump_ratio", lvl.max_jump_ratio}});
  }
  json out = problem_meta(lp);
  out["levels"] = levels;
  out["rates"] = json{{"eH1", rates_json(result.rate_eH1, result.slope_eH1)},
                      {"eL2proj", rates_json(result.rate_eL2proj, result.slope_eL2proj)}};
  return out;
}

json solution_json(const LoadedProblem& lp, const SolveOutcome& outcome) {
  const WeakFunction& u = outcome.solution;
  json interior = json::array();
  json edges = json::array();
  for (int i = 0; i < u.coeffs().size(); ++i) {
    if (i < u.num_triangles() * u.interior_dim())
      interior.push_back(u.coeffs()(i));
    else
      edges.push_back(u.coeffs()(i));
  }
  json out = problem_meta(lp);
  out["mesh"] = json{{"vertices", outcome.mesh.num_vertices()},
                     {"triangles", outcome.mesh.num_triangles()},
                     {"edges", outcome.mesh.num_edges()},
                     {"boundary_edges", outcome.mesh.num_boundary_edges()},
                     {"h", outcome.mesh.max_diameter()},
                     {"shape_regularity", outcome.mesh.shape_regularity()}};
  out["dofs"] = json{{"total", outcome.total_dofs},
                     {"interior_per_triangle", u.interior_dim()},
                     {"per_edge", u.edge_dim()}};
  out["interior_coeffs"] = interior;
  out["edge_coeffs"] = edges;
  return out;
}

json summary_json(const LoadedProblem& lp, const SolveOutcome& outcome) {
  json out = problem_meta(lp);
  out["dofs"] = outcome.total_dofs;
  out["free_dofs"] = outcome.solver.free_dofs;
  out["rel_residual"] = outcome.solver.rel_residual;
  out["h"] = outcome.mesh.max_diameter();
  out["shape_regularity"] = outcome.mesh.shape_regularity();
  if (outcome.errors) {
    out["errors"] = json{{"eH1", outcome.errors->eH1},
                         {"eL2proj", outcome.errors->eL2proj},
                         {"eL2", outcome.errors->eL2}};
  }
  out["flux"] = json{{"max_conservation_ratio", outcome.flux.max_residual_ratio},
                     {"max_jump_ratio", outcome.flux.max_jump_ratio}};
  return out;
}

json flux_json(const FluxReport& report) {
  return json{{"max_conservation_ratio", report.max_residual_ratio},
              {"mean_conservation_ratio", report.mean_residual_ratio},
              {"max_jump_ratio", report.max_jump_ratio},
              {"mean_jump_ratio", report.mean_jump_ratio},
              {"elements", report.element_residual.size()},
              {"interior_edges", report.interior_edge.size()}};
}

std::string flux_elements_csv(const FluxReport& report) {
  std::string out = "element,residual,scale\n";
  for (size_t t = 0; t < report.element_residual.size(); ++t)
    out += std::to_string(t) + "," + fmt_sci(report.element_residual[t]) + "," +
           fmt_sci(report.element_scale[t]) + "\n";
  return out;
}

std::string flux_edges_csv(const FluxReport& report) {
  std::string out = "edge,jump,scale\n";
  for (size_t k = 0; k < report.interior_edge.size(); ++k)
    out += std::to_string(report.interior_edge[k]) + "," + fmt_sci(report.edge_jump[k]) + "," +
           fmt_sci(report.edge_scale[k]) + "\n";
  return out;
}

const std::vector<std::string>& expression_corpus() {
  static const std::vector<std::string> corpus = {
      "1",
      "0",
      "42",
      "3.5",
      "1e-3",
      "2.5e+2",
      "x",
      "y",
      "pi",
      "x + y",
      "x - y",
      "x*y",
      "x/y",
      "x^2",
      "x^2 + y^2",
      "2^3^2",
      "(x + y)^2",
      "-x",
      "--x",
      "-x^2",
      "(-x)^2",
      "2^-3",
      "x*-y",
      "1 - 2 - 3",
      "6/3/2",
      "1 + 2*3",
      "(1 + 2)*3",
      "x*(y + 1)",
      "x - (y - 1)",
      "sin(x)",
      "cos(y)",
      "exp(x*y)",
      "sqrt(x^2 + y^2)",
      "sin(pi*x)*sin(pi*y)",
      "2*pi^2*sin(pi*x)*sin(pi*y)",
      "pi*cos(pi*x)*sin(pi*y)",
      "1 + x^2",
      "1 + x*y",
      "sin(cos(exp(x)))",
      "sqrt(sqrt(x + 1))",
      "exp(-x^2 - y^2)",
      "x^2*y^3 - 4*x*y + 7",
      "(x + y)/(1 + x*y)",
      "sin(x)^2 + cos(x)^2",
      "x/(y + 1) + y/(x + 1)",
      "2*x - 3*y + 4",
      "0.5*(x + y)",
      "pi/4",
      "sin(2*pi*x + pi/3)",
      "1/(1 + exp(-x))",
  };
  return corpus;
}

std::vector<SmoothField> random_polynomial_fields(int count, int degree, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<SmoothField> fields;
  for (int n = 0; n < count; ++n) {
    auto coeff = std::make_shared<std::vector<std::array<double, 3>>>(); // (c, px, py)
    for (int d = 0; d <= degree; ++d)
      for (int px = d; px >= 0; --px)
        coeff->push_back({unit(rng), static_cast<double>(px), static_cast<double>(d - px)});
    ScalarField u = [coeff](double x, double y) {
      double v = 0.0;
      for (const auto& m : *coeff) v += m[0] * std::pow(x, m[1]) * std::pow(y, m[2]);
      return v;
    };
    VectorField grad = [coeff](double x, double y) {
      Vec2 g{0.0, 0.0};
      for (const auto& m : *coeff) {
        if (m[1] > 0) g.x += m[0] * m[1] * std::pow(x, m[1] - 1) * std::pow(y, m[2]);
        if (m[2] > 0) g.y += m[0] * m[2] * std::pow(x, m[1]) * std::pow(y, m[2] - 1);
      }
      return g;
    };
    fields.push_back({u, grad});
  }
  return fields;
}

std::vector<SmoothField> transcendental_fields(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(0.5, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 6.28);

  std::vector<SmoothField> fields;
  for (int n = 0; n < count; ++n) {
    double a = amp(rng), b = amp(rng), p = phase(rng);
    switch (n % 3) {
      case 0:
        fields.push_back({[a, b, p](double x, double y) { return std::sin(a * x + b * y + p); },
                          [a, b, p](double x, double y) {
                            double c = std::cos(a * x + b * y + p);
                            return Vec2{a * c, b * c};
                          }});
        break;
      case 1:
        fields.push_back(
            {[a, b](double x, double y) { return std::exp(0.4 * (a * x + b * y)); },
             [a, b](double x, double y) {
               double e = std::exp(0.4 * (a * x + b * y));
               return Vec2{0.4 * a * e, 0.4 * b * e};
             }});
        break;
      default:
        fields.push_back(
            {[a, b, p](double x, double y) { return std::cos(a * x + p) * std::cos(b * y); },
             [a, b, p](double x, double y) {
               return Vec2{-a * std::sin(a * x + p) * std::cos(b * y),
                           -b * std::cos(a * x + p) * std::sin(b * y)};
             }});
        break;
    }
  }
  return fields;
}

Mesh random_well_shaped_triangle(std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    Vec2 a{unit(rng), unit(rng)}, b{unit(rng), unit(rng)}, c{unit(rng), unit(rng)};
    double area = 0.5 * std::abs(cross(b - a, c - a));
    if (area < 1e-3) continue;
    double l0 = norm(b - a), l1 = norm(c - b), l2 = norm(a - c);
    double diameter = std::max({l0, l1, l2});
    double inradius = 2.0 * area / (l0 + l1 + l2);
    if (inradius / diameter < 0.12) continue;
    return Mesh::from_vertices({a, b, c}, {{0, 1, 2}});
  }
}

std::pair<double, double> commutation_defect(const SmoothField& field, const Mesh& mesh, int t,
                                             const WgSpace& space, const LocalWeakGradient& lwg) {
  const TriInfo& tri = mesh.triangle(t);
  const int n0 = space.interior_dim();
  const int ne = space.edge_dim();

  Eigen::VectorXd local(space.local_dim());
  local.head(n0) =
      project_q0(field.value, mesh, t, space.interior_degree(), space.volume_exactness());
  for (int le = 0; le < 3; ++le)
    local.segment(n0 + le * ne, ne) =
        project_qb(field.value, mesh, tri.edge[le], space.edge_degree(), space.edge_exactness());

  Eigen::VectorXd lhs = lwg.apply(local);
  Eigen::VectorXd rhs = project_rh(field.gradient, mesh, t, lwg, space.volume_exactness());
  double defect = lwg.coeff_norm(lhs - rhs);

  ElementQuad q = element_quad(mesh, t, triangle_rule(space.volume_exactness()));
  double g2 = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    Vec2 g = field.gradient(q.pts[i].x, q.pts[i].y);
    g2 += q.w[i] * dot(g, g);
  }
  return {defect, 1.0 + std::sqrt(std::max(0.0, g2))};
}

namespace {

json verify_quadrature() {
  double max_rel = 0.0;
  for (int d : {2, 5, 8, 14}) {
    const QuadratureRule& rule = triangle_rule(d);
    for (int p = 0; p + 0 <= d; ++p)
      for (int q = 0; p + q <= d; ++q) {
        double acc = 0.0;
        for (int i = 0; i < rule.size(); ++i)
          acc += rule.w[i] * std::pow(rule.x[i], p) * std::pow(rule.y[i], q);
        double exact = reference_monomial_integral(p, q);
        max_rel = std::max(max_rel, std::abs(acc - exact) / exact);
      }
  }
  for (int d : {1, 3, 7, 13}) {
    const QuadratureRule& rule = edge_rule(d);
    for (int p = 0; p <= d; ++p) {
      double acc = 0.0;
      for (int i = 0; i < rule.size(); ++i) acc += rule.w[i] * std::pow(rule.x[i], p);
      double exact = 1.0 / (p + 1);
      max_rel = std::max(max_rel, std::abs(acc - exact) / exact);
    }
  }
  bool pass = max_rel <= 1e-12;
  return json{{"pass", pass}, {"max_rel_error", max_rel}};
}

json verify_parser() {
  int cases = 0;
  bool pass = true;
  for (const std::string& s : expression_corpus()) {
    try {
      auto ast = expr::parse(s);
      auto round = expr::parse(expr::print(*ast));
      pass = pass && expr::equal(*ast, *round);
    } catch (const Error&) {
      pass = false;
    }
    ++cases;
  }
  auto expect_value = [&](const std::string& s, double want) {
    ++cases;
    try {
      pass = pass && std::abs(expr::eval(*expr::parse(s), 0.3, 0.7) - want) < 1e-12;
    } catch (const Error&) {
      pass = false;
    }
  };
  expect_value("2^3^2", 512.0);
  expect_value("-2^2", -4.0);
  expect_value("2^-3", 0.125);
  expect_value("6/3/2", 1.0);
  expect_value("1 - 2 - 3", -4.0);
  auto expect_error = [&](const std::string& s, bool eval_stage) {
    ++cases;
    try {
      auto ast = expr::parse(s);
      if (!eval_stage) {
        pass = false;
        return;
      }
      expr::eval(*ast, 0.5, 0.5);
      pass = false;
    } catch (const Error&) {
    }
  };
  expect_error("x*y +", false);
  expect_error("bogus(x)", false);
  expect_error("x x", false);
  expect_error("1/(x-x)", true);
  expect_error("sqrt(0-1-x)", true);
  return json{{"pass", pass}, {"cases", cases}};
}

json verify_kernel(bool& rt_all_dim1) {
  std::mt19937 rng(20240811);
  bool pass = true;
  double worst_align = 1.0;
  json rt_dims = json::array();
  rt_all_dim1 = true;
  double max_const_ratio = 0.0;

  for (int j = 0; j <= 2; ++j) {
    for (int n = 0; n < 30; ++n) {
      Mesh tri = random_well_shaped_triangle(rng);
      WgSpace full(Family::Full, j);
      LocalWeakGradient lwg = build_local_weak_gradient(tri, 0, full);
      KernelInfo info = weak_gradient_kernel(lwg);
      if (info.dim != 1) pass = false;

      Eigen::VectorXd c = constant_weak_dofs(full).normalized();
      if (info.dim == 1) {
        double align = std::abs(info.null_basis.col(0).normalized().dot(c));
        worst_align = std::min(worst_align, align);
        if (align < 1.0 - 1e-9) pass = false;
      }
      // Forward direction holds structurally for both families.
      Eigen::VectorXd image = lwg.grad * constant_weak_dofs(full);
      double gnorm = lwg.grad.norm();
      max_const_ratio = std::max(max_const_ratio, image.norm() / (gnorm > 0 ? gnorm : 1.0));

      if (j <= 1 && n < 10) {
        WgSpace rt(Family::RT, j);
        LocalWeakGradient lrt = build_local_weak_gradient(tri, 0, rt);
        KernelInfo irt = weak_gradient_kernel(lrt);
        rt_dims.push_back(irt.dim);
        if (irt.dim != 1) rt_all_dim1 = false;
        Eigen::VectorXd rimage = lrt.grad * constant_weak_dofs(rt);
        double rgnorm = lrt.grad.norm();
        max_const_ratio = std::max(max_const_ratio, rimage.norm() / (rgnorm > 0 ? rgnorm : 1.0));
      }
    }
  }
  if (max_const_ratio > 1e-12) pass = false;
  return json{{"pass", pass},
              {"triangles_per_degree", 30},
              {"worst_constant_alignment", worst_align},
              {"max_constant_image_ratio", max_const_ratio},
              {"rt_kernel_dims", rt_dims}};
}

json verify_commutation() {
  bool pass = true;
  double max_ratio = 0.0;
  Mesh mesh = Mesh::unit_square(4);
  for (Family family : {Family::Full, Family::RT}) {
    for (int j = 0; j <= 1; ++j) {
      // Boost the quadrature so the projections of transcendental fields are
      // exact far below the identity tolerance.
      WgSpace space(family, j, 14 - 2 * (j + 1));
      LocalGradientSet grads(mesh, space);
      std::vector<SmoothField> fields = random_polynomial_fields(20, j + 1, 7u + j);
      std::vector<SmoothField> smooth = transcendental_fields(5, 11u + j);
      fields.insert(fields.end(), smooth.begin(), smooth.end());
      for (const SmoothField& field : fields) {
        for (int t = 0; t < mesh.num_triangles(); ++t) {
          auto [defect, scale] = commutation_defect(field, mesh, t, space, grads[t]);
          max_ratio = std::max(max_ratio, defect / scale);
          if (defect > 1e-10 * scale) pass = false;
        }
      }
    }
  }
  return json{{"pass", pass}, {"max_defect_ratio", max_ratio}};
}

// Solves the sinsin and convection builtins at n=8 and records the worst
// conservation and jump ratios.
void verify_conservation(const AssemblyOptions& hook, double& max_cons, double& max_jump) {
  max_cons = 0.0;
  max_jump = 0.0;
  for (const char* name : {"sinsin", "convection"}) {
    ProblemConfig cfg;
    cfg.problem_name = name;
    cfg.expressions = builtin_problems().at(name);
    cfg.unit_square_n = 8;
    LoadedProblem lp{cfg, spec_from_config(cfg)};
    SolveOutcome outcome = run_solve(lp, hook);
    max_cons = std::max(max_cons, outcome.flux.max_residual_ratio);
    max_jump = std::max(max_jump, outcome.flux.max_jump_ratio);
  }
}

} // namespace

VerifyOutcome run_verify(const AssemblyOptions& hook) {
  VerifyOutcome out;
  json suites;

  suites["quadrature"] = verify_quadrature();
  suites["parser"] = verify_parser();
  bool rt_all_dim1 = true;
  suites["kernel_full"] = verify_kernel(rt_all_dim1);
  suites["kernel_rt"] = json{{"informational", true},
                             {"all_dims_one", rt_all_dim1},
                             {"dims", suites["kernel_full"]["rt_kernel_dims"]}};
  suites["kernel_full"].erase("rt_kernel_dims");
  suites["commutation"] = verify_commutation();

  double max_cons = 0.0, max_jump = 0.0;
  verify_conservation(hook, max_cons, max_jump);
  suites["conservation"] = json{{"pass", max_cons <= 1e-9}, {"max_ratio", max_cons}};
  suites["flux_continuity"] = json{{"pass", max_jump <= 1e-9}, {"max_ratio", max_jump}};

  bool pass = true;
  for (const char* key :
       {"quadrature", "parser", "kernel_full", "commutation", "conservation", "flux_continuity"})
    pass = pass && suites[key]["pass"].get<bool>();

  out.report = json{{"suites", suites}, {"pass", pass}};
  out.pass = pass;
  return out;
}

} // namespace wg
