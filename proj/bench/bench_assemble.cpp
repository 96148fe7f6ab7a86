// Times kernel assembly: serial reference against the OpenMP fill.
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "optcap/kernels.hpp"
#include "optcap/spectra.hpp"

using namespace optcap;

namespace {

template <class Fn>
double best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int order = argc > 1 ? std::atoi(argv[1]) : 32;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
  const OpticalGeometry gm = OpticalGeometry::from_distances(1e-6, 100.0, 100.0, 1e-3, 5e-3);
  std::printf("threads=%d order=%d (%d x %d matrix)\n", omp_get_max_threads(), order, order * order,
              order * order);
  for (Scenario sc : {Scenario::Lens, Scenario::FreeSpace}) {
    const Kernel k(KernelSpec{sc, gm, true});
    const QuadratureGrid in = build_grid(k.input_domain(), order);
    const QuadratureGrid out = build_grid(k.output_domain(), order);
    double checksum_s = 0.0;
    double checksum_p = 0.0;
    const double ts = best_of(reps, [&] { checksum_s = assemble_serial(k, in, out).matrix.norm(); });
    const double tp = best_of(reps, [&] { checksum_p = assemble(k, in, out).matrix.norm(); });
    std::printf("%-10s serial %8.4f s  parallel %8.4f s  speedup %5.2fx  identical=%s\n",
                to_string(sc), ts, tp, ts / tp, checksum_s == checksum_p ? "yes" : "no");
  }
  return 0;
}
