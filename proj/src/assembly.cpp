#include "wg/assembly.hpp"

#include "wg/errors.hpp"
#include "wg/parallel.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <mutex>
#include <sstream>

namespace wg {

ElementSystem element_system(const ProblemSpec& problem, const Mesh& mesh, int t,
                             const WgSpace& space, const LocalWeakGradient& lwg) {
  const ScalarBasis& sbasis = ScalarBasis::cached(space.interior_degree());
  const int n0 = space.interior_dim();
  const int nv = lwg.basis.dim();
  const int nloc = space.local_dim();

  ElementQuad q = element_quad(mesh, t, triangle_rule(space.volume_exactness()));

  Eigen::MatrixXd mass_a = Eigen::MatrixXd::Zero(nv, nv);      // (a q_n, q_m)
  Eigen::MatrixXd conv = Eigen::MatrixXd::Zero(nv, n0);        // (phi_i b, q_m)
  Eigen::MatrixXd mass_c = Eigen::MatrixXd::Zero(n0, n0);      // (c phi_i, phi_k)
  Eigen::VectorXd load = Eigen::VectorXd::Zero(n0);            // (f, phi_i)

  Eigen::Matrix2Xd vals(2, nv);
  Eigen::VectorXd svals(n0);
  for (int i = 0; i < q.size(); ++i) {
    double x = q.pts[i].x, y = q.pts[i].y;
    problem.check_ellipticity_at(x, y);
    lwg.basis.values(q.pts[i], vals);
    sbasis.values(q.ref[i].x, q.ref[i].y, svals);

    Eigen::Matrix2d a = problem.a(x, y);
    mass_a.noalias() += q.w[i] * (vals.transpose() * (a * vals));
    if (problem.has_convection) {
      Vec2 b = problem.b(x, y);
      Eigen::RowVectorXd bq = b.x * vals.row(0) + b.y * vals.row(1);
      conv.noalias() += q.w[i] * bq.transpose() * svals.transpose();
    }
    if (problem.has_reaction) {
      double c = problem.c(x, y);
      mass_c.noalias() += (q.w[i] * c) * (svals * svals.transpose());
    }
    load.noalias() += (q.w[i] * problem.f(x, y)) * svals;
  }

  ElementSystem sys;
  sys.stiffness.noalias() = lwg.grad.transpose() * mass_a * lwg.grad;
  if (problem.has_convection)
    sys.stiffness.leftCols(n0).noalias() -= lwg.grad.transpose() * conv;
  if (problem.has_reaction) sys.stiffness.topLeftCorner(n0, n0) += mass_c;
  sys.load = Eigen::VectorXd::Zero(nloc);
  sys.load.head(n0) = load;
  return sys;
}

Eigen::VectorXd apply_dirichlet(const ProblemSpec& problem, const Mesh& mesh,
                                const WgSpace& space, const DofMap& dofs) {
  // Boundary data may be far from polynomial; a high exactness floor keeps
  // the computed lift at the exact L2 projection to solver precision.
  const int exactness = std::max(space.edge_exactness(), 21);
  Eigen::VectorXd lift = Eigen::VectorXd::Zero(dofs.total());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.edge(e).boundary) continue;
    lift.segment(dofs.edge_offset(e), dofs.edge_dim()) =
        project_qb(problem.g, mesh, e, space.edge_degree(), exactness);
  }
  return lift;
}

AssembledSystem assemble(const ProblemSpec& problem, const Mesh& mesh, const WgSpace& space,
                         const LocalGradientSet& grads, const AssemblyOptions& options) {
  const int nt = mesh.num_triangles();
  DofMap dofs(mesh, space);

  struct Contribution {
    ElementSystem sys;
    std::vector<int> gdofs;
  };
  std::vector<Contribution> contribs(nt);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  parallel_for(nt, [&](int t) {
    try {
      contribs[t].sys = element_system(problem, mesh, t, space, grads[t]);
      contribs[t].gdofs = dofs.element_dofs(mesh, t);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);

  if (options.perturb_element >= 0 && options.perturb_element < nt)
    contribs[options.perturb_element].sys.stiffness *= options.perturb_scale;

  AssembledSystem out{Eigen::SparseMatrix<double>(dofs.free_count(), dofs.free_count()),
                      Eigen::VectorXd::Zero(dofs.free_count()),
                      apply_dirichlet(problem, mesh, space, dofs),
                      !problem.has_convection,
                      dofs};

  // Fixed-order scatter by ascending element index.
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(nt) * space.local_dim() * space.local_dim());
  for (int t = 0; t < nt; ++t) {
    const Contribution& ct = contribs[t];
    const int nloc = static_cast<int>(ct.gdofs.size());
    for (int r = 0; r < nloc; ++r) {
      int fr = dofs.free_index(ct.gdofs[r]);
      if (fr < 0) continue; // test functions vanish on the boundary
      out.rhs(fr) += ct.sys.load(r);
      for (int cidx = 0; cidx < nloc; ++cidx) {
        int gc = ct.gdofs[cidx];
        int fc = dofs.free_index(gc);
        double v = ct.sys.stiffness(r, cidx);
        if (fc >= 0)
          triplets.emplace_back(fr, fc, v);
        else
          out.rhs(fr) -= v * out.lift(gc);
      }
    }
  }
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  return out;
}

namespace {

[[noreturn]] void solver_failure(const std::string& stage, double residual, bool has_lower_order) {
  std::ostringstream os;
  os << "linear solve failed (" << stage;
  if (residual >= 0.0) os << ", relative residual " << residual;
  os << ")";
  if (has_lower_order)
    os << "; with convection or reaction terms active the discrete problem is guaranteed "
          "solvable only for sufficiently small mesh size h - consider refining";
  throw Error(ErrorKind::Solver, os.str());
}

} // namespace

WeakFunction solve(const AssembledSystem& system, const Mesh& mesh, const WgSpace& space,
                   double rel_tol, SolveReport* report, SolveMethod method) {
  const bool lower_order = !system.symmetric;
  if (method == SolveMethod::Auto)
    method = system.symmetric ? SolveMethod::Cholesky : SolveMethod::SparseLU;

  Eigen::VectorXd x;
  if (method == SolveMethod::Cholesky) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(system.matrix);
    if (solver.info() != Eigen::Success) solver_failure("factorization", -1.0, lower_order);
    x = solver.solve(system.rhs);
  } else if (method == SolveMethod::SparseLU) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> solver(system.matrix);
    if (solver.info() != Eigen::Success) solver_failure("factorization", -1.0, lower_order);
    x = solver.solve(system.rhs);
  } else {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
    solver.setTolerance(rel_tol * 1e-2);
    solver.setMaxIterations(10000);
    solver.compute(system.matrix);
    if (solver.info() != Eigen::Success) solver_failure("preconditioner", -1.0, lower_order);
    x = solver.solve(system.rhs);
  }

  double denom = system.rhs.norm();
  double residual = (system.matrix * x - system.rhs).norm();
  double rel = denom > 0.0 ? residual / denom : residual;
  if (report) {
    report->rel_residual = rel;
    report->free_dofs = static_cast<int>(system.rhs.size());
    report->method = method;
  }
  if (!(rel <= rel_tol)) solver_failure("residual check", rel, lower_order);

  WeakFunction u(mesh, space);
  u.coeffs() = system.lift;
  const std::vector<int>& f2g = system.dofs.free_to_global();
  for (size_t i = 0; i < f2g.size(); ++i) u.coeffs()(f2g[i]) = x(static_cast<Eigen::Index>(i));
  return u;
}

} // namespace wg
