// Benchmark of the OpenMP element-loop kernels against the serial reference
// implementations. The two paths must produce identical systems; the table
// reports wall time and speedup per kernel.
//
//   wg_bench [n1 n2 ...]    mesh sizes, default 16 32 64

#include "wg/config.hpp"
#include "wg/parallel.hpp"
#include "wg/reference.hpp"
#include "wg/study.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

using namespace wg;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_system(const AssembledSystem& a, const AssembledSystem& b) {
  if (a.matrix.nonZeros() != b.matrix.nonZeros()) return false;
  for (Eigen::Index i = 0; i < a.matrix.nonZeros(); ++i)
    if (a.matrix.valuePtr()[i] != b.matrix.valuePtr()[i]) return false;
  return (a.rhs - b.rhs).cwiseAbs().maxCoeff() == 0.0;
}

} // namespace

int main(int argc, char** argv) {
  std::vector<int> sizes;
  for (int i = 1; i < argc; ++i) sizes.push_back(std::atoi(argv[i]));
  if (sizes.empty()) sizes = {16, 32, 64};

  ProblemConfig cfg;
  cfg.problem_name = "variable-coeff";
  cfg.expressions = builtin_problems().at("variable-coeff");
  LoadedProblem lp{cfg, spec_from_config(cfg)};

  // untimed warmup at the largest size: spins up the OpenMP pool, populates
  // the basis and quadrature caches, and grows the allocator arenas so the
  // timed runs measure steady-state kernel cost rather than first-touch page
  // faults
  {
    int n_max = *std::max_element(sizes.begin(), sizes.end());
    Mesh warm = Mesh::unit_square(n_max);
    WgSpace space(Family::Full, 1);
    LocalGradientSet grads(warm, space);
    assemble(lp.spec, warm, space, grads);
    ref::assemble(lp.spec, warm, space, ref::local_gradients(warm, space));
  }

  std::printf("threads: %d\n", max_threads());
  std::printf("%6s %10s %14s %14s %9s %14s %14s %9s %7s\n", "n", "elements", "grad serial",
              "grad openmp", "speedup", "asm serial", "asm openmp", "speedup", "match");

  for (int n : sizes) {
    Mesh mesh = Mesh::unit_square(n);
    WgSpace space(Family::Full, 1);

    auto t0 = std::chrono::steady_clock::now();
    std::vector<LocalWeakGradient> serial_grads = ref::local_gradients(mesh, space);
    double tg_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    LocalGradientSet parallel_grads(mesh, space);
    double tg_parallel = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    AssembledSystem sys_serial = ref::assemble(lp.spec, mesh, space, serial_grads);
    double ta_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    AssembledSystem sys_parallel = assemble(lp.spec, mesh, space, parallel_grads);
    double ta_parallel = seconds_since(t0);

    bool match = same_system(sys_serial, sys_parallel);
    std::printf("%6d %10d %13.4fs %13.4fs %8.2fx %13.4fs %13.4fs %8.2fx %7s\n", n,
                mesh.num_triangles(), tg_serial, tg_parallel, tg_serial / tg_parallel,
                ta_serial, ta_parallel, ta_serial / ta_parallel, match ? "yes" : "NO");
    if (!match) return 1;
  }
  return 0;
}
