#pragma once

#include "wg/assembly.hpp"
#include "wg/postprocess.hpp"

#include <vector>

namespace wg::ref {

// Plain serial counterparts of the parallel element-loop kernels. They share
// the per-element math and must produce bitwise-identical results; tests and
// the benchmark compare the two paths.

std::vector<LocalWeakGradient> local_gradients(const Mesh& mesh, const WgSpace& space);

AssembledSystem assemble(const ProblemSpec& problem, const Mesh& mesh, const WgSpace& space,
                         const std::vector<LocalWeakGradient>& grads,
                         const AssemblyOptions& options = {});

ErrorNorms error_norms(const WeakFunction& u_h, const ScalarField& exact, const Mesh& mesh,
                       const WgSpace& space, const std::vector<LocalWeakGradient>& grads);

} // namespace wg::ref
