// Benchmark: serial reference vs OpenMP kernel on a determinant grid and
// on a real-line scan batch. The two paths must produce identical bytes;
// this tool reports the speedup.

#include <chrono>
#include <cstdio>

#include "ptspec/grid.hpp"
#include "ptspec/parallel.hpp"
#include "ptspec/potential.hpp"

using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int nx = 41, ny = 21;
  if (argc > 2) {
    nx = std::atoi(argv[1]);
    ny = std::atoi(argv[2]);
  }
  const ptspec::PotentialSpec spec(3, {1.0, -1.0});
  const ptspec::GridSpec grid{-1.0, 25.0, -6.0, 6.0, nx, ny};
  ptspec::RaySpec ray;

  std::printf("threads available: %d\n", ptspec::hardware_threads());
  std::printf("grid %d x %d, m = %d\n", nx, ny, spec.m);

  auto t0 = clock_type::now();
  const auto serial = ptspec::evaluate_grid(spec, grid, ray, false);
  const double t_serial = seconds_since(t0);

  t0 = clock_type::now();
  const auto parallel = ptspec::evaluate_grid(spec, grid, ray, true);
  const double t_parallel = seconds_since(t0);

  bool identical = serial.size() == parallel.size();
  for (size_t i = 0; identical && i < serial.size(); ++i)
    identical = serial[i].M == parallel[i].M &&
                serial[i].lambda == parallel[i].lambda;

  std::printf("serial reference : %8.3f s\n", t_serial);
  std::printf("openmp kernel    : %8.3f s\n", t_parallel);
  std::printf("speedup          : %8.2fx\n",
              t_parallel > 0 ? t_serial / t_parallel : 0.0);
  std::printf("bit-identical    : %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
