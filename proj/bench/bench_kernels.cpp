// Serial vs OpenMP timings for the data-parallel kernels: Gram assembly, the
// cross-kernel table used for prediction, and the fan-out of a small solver grid.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "l0ksvm/admm.hpp"
#include "l0ksvm/data.hpp"
#include "l0ksvm/kernels.hpp"

namespace {

template <class F>
double time_ms(F&& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  const long m = argc > 1 ? std::atol(argv[1]) : 1500;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 5;
  using namespace l0ksvm;

  const Dataset ds = gen_double_circles(m, 0.5, 0.05, 7);
  KernelSpec spec;
  std::printf("m = %ld, threads = %d\n", m, omp_get_max_threads());

  double checksum = 0.0;
  const double serial = time_ms([&] { checksum += gram_matrix_serial(spec, ds.X).entries()(0, 1); }, reps);
  const double parallel = time_ms([&] { checksum += gram_matrix(spec, ds.X).entries()(0, 1); }, reps);
  std::printf("gram_matrix        serial %9.3f ms   openmp %9.3f ms   speedup %.2fx\n", serial, parallel,
              serial / parallel);

  const bool same = gram_matrix_serial(spec, ds.X).entries() == gram_matrix(spec, ds.X).entries();
  std::printf("bitwise identical: %s\n", same ? "yes" : "NO");

  const KernelSpec resolved = spec.resolved(2);
  const double cross_par = time_ms([&] { checksum += cross_kernel(resolved, ds.X, ds.X)(0, 0); }, reps);
  omp_set_num_threads(1);
  const double cross_ser = time_ms([&] { checksum += cross_kernel(resolved, ds.X, ds.X)(0, 0); }, reps);
  omp_set_num_threads(omp_get_num_procs());
  std::printf("cross_kernel       serial %9.3f ms   openmp %9.3f ms   speedup %.2fx\n", cross_ser, cross_par,
              cross_ser / cross_par);

  const Dataset small = gen_double_circles(300, 0.5, 0.05, 7);
  const GramMatrix gram = gram_matrix(spec, small.X);
  const Eigen::VectorXd& y = small.y;
  const double solve_ms = time_ms(
      [&] {
        Hyperparams hp;
        hp.C = 4.0;
        hp.max_iter = 200;
        checksum += solve(gram, y, hp).state.b;
      },
      reps);
  std::printf("admm 200 iters (m=%ld) %9.3f ms\n", static_cast<long>(gram.size()), solve_ms);
  std::printf("(checksum %.6g)\n", checksum);
  return same ? 0 : 1;
}
