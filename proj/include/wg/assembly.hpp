#pragma once

#include "wg/mesh.hpp"
#include "wg/problem.hpp"
#include "wg/space.hpp"
#include "wg/weak_gradient.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace wg {

struct AssemblyOptions {
  // Test hook: scale one element's local matrix to break the conservation
  // identity on purpose (negative controls).
  int perturb_element = -1;
  double perturb_scale = 1.0;
};

// Dense local system of one element: stiffness over the local weak DOFs
// (interior block, then the three edge blocks) and the local load.
struct ElementSystem {
  Eigen::MatrixXd stiffness;
  Eigen::VectorXd load;
};
ElementSystem element_system(const ProblemSpec& problem, const Mesh& mesh, int t,
                             const WgSpace& space, const LocalWeakGradient& lwg);

// Linear system over the free DOFs after Dirichlet elimination. lift is a
// full-length vector holding the eliminated boundary values.
struct AssembledSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lift;
  bool symmetric = false;
  DofMap dofs;
};

// Q_b projection of the boundary data onto every boundary edge; zero on free
// DOFs.
Eigen::VectorXd apply_dirichlet(const ProblemSpec& problem, const Mesh& mesh,
                                const WgSpace& space, const DofMap& dofs);

// Element loops run in parallel; the global scatter is a fixed-order serial
// reduction, so the result is bitwise independent of the worker count.
AssembledSystem assemble(const ProblemSpec& problem, const Mesh& mesh, const WgSpace& space,
                         const LocalGradientSet& grads, const AssemblyOptions& options = {});

enum class SolveMethod { Auto, SparseLU, Cholesky, BiCGStab };

struct SolveReport {
  double rel_residual = 0.0;
  int free_dofs = 0;
  SolveMethod method = SolveMethod::Auto;
};

// Direct sparse solve; relative residual above rel_tol is an error. The
// returned function includes the Dirichlet boundary values.
WeakFunction solve(const AssembledSystem& system, const Mesh& mesh, const WgSpace& space,
                   double rel_tol = 1e-10, SolveReport* report = nullptr,
                   SolveMethod method = SolveMethod::Auto);

} // namespace wg
