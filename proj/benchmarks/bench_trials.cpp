// Compares the serial and the OpenMP trial loops of the Monte-Carlo
// harness on one fixture and checks that both produce the same report.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "sparsetd/io.hpp"
#include "sparsetd/oracle.hpp"
#include "sparsetd/structure.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace sparsetd;

namespace {

double run_once(const Graph& g, const DecomposeConfig& cfg,
                const PlantedPattern& pattern, int trials, bool parallel,
                SuccessReport* out) {
  auto t0 = std::chrono::steady_clock::now();
  *out = monte_carlo_success(g, cfg, pattern, trials, {6}, 7, parallel);
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::steady_clock::now() - t0)
             .count() /
         1e6;
}

}  // namespace

int main(int argc, char** argv) {
  int rows = argc > 1 ? std::atoi(argv[1]) : 10;
  int cols = argc > 2 ? std::atoi(argv[2]) : 10;
  int k = argc > 3 ? std::atoi(argv[3]) : 9;
  int trials = argc > 4 ? std::atoi(argv[4]) : 2000;

  GraphFile gf = generate_grid(rows, cols);
  DecomposeConfig cfg;
  cfg.k = k;
  PlantedPattern pattern;
  pattern.d = 0;
  SplitRng zr(888);
  VertexSet all(gf.graph.num_vertices());
  for (int i = 0; i < gf.graph.num_vertices(); ++i) all[i] = i;
  for (int i = 0; i < k; ++i) {
    int j = i + zr.uniform(gf.graph.num_vertices() - i);
    std::swap(all[i], all[j]);
  }
  all.resize(k);
  pattern.z = normalized(all);

  std::printf("grid %dx%d, k=%d, %d trials\n", rows, cols, k, trials);
#ifdef _OPENMP
  std::printf("threads available: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both runs are serial\n");
#endif

  SuccessReport serial, parallel;
  double ts = run_once(gf.graph, cfg, pattern, trials, false, &serial);
  double tp = run_once(gf.graph, cfg, pattern, trials, true, &parallel);

  bool identical =
      serial.successes == parallel.successes &&
      serial.run_failures == parallel.run_failures &&
      serial.per_trial_max_intersection == parallel.per_trial_max_intersection &&
      serial.successful_trials == parallel.successful_trials;

  std::printf("serial   : %8.3f s  (%d successes)\n", ts, serial.successes);
  std::printf("parallel : %8.3f s  (%d successes)\n", tp, parallel.successes);
  std::printf("speedup  : %8.2fx\n", tp > 0 ? ts / tp : 0.0);
  std::printf("reports identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
