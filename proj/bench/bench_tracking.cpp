// Serial vs OpenMP path tracking on random QEPs.
//   bench_tracking [n ...] [--threads k] [--reps r]
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pep/homotopy.hpp"
#include "pep/problems.hpp"

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

bool same_outcomes(const std::vector<pep::PathOutcome>& a, const std::vector<pep::PathOutcome>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].status != b[i].status || a[i].terminal.lambda != b[i].terminal.lambda || a[i].terminal.x != b[i].terminal.x)
      return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> dims;
  int threads = 0;
  int reps = 3;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--threads" && i + 1 < argc) {
      threads = std::atoi(argv[++i]);
    } else if (a == "--reps" && i + 1 < argc) {
      reps = std::max(1, std::atoi(argv[++i]));
    } else {
      dims.push_back(static_cast<std::size_t>(std::strtoul(a.c_str(), nullptr, 10)));
    }
  }
  if (dims.empty()) dims = {10, 20, 40};
#ifdef _OPENMP
  const int used = threads > 0 ? threads : omp_get_max_threads();
#else
  const int used = 1;
#endif

  std::printf("n,paths,threads,serial_s,parallel_s,speedup,identical\n");
  for (std::size_t n : dims) {
    const pep::MatrixPolynomial p = pep::random_pep(2, n, 1);
    pep::Rng rng = pep::seeded_stream(1, 1);
    const pep::StartSystem s = pep::make_start_system(2, n, rng);
    const auto starts = pep::enumerate_start_solutions(s);
    pep::TrackerConfig cfg;
    cfg.gamma = std::polar(1.0, 0.7);

    std::vector<pep::PathOutcome> serial, parallel;
    const double ts = best_of(reps, [&] { serial = pep::track_paths_serial(p, s, starts, cfg); });
    const double tp = best_of(reps, [&] { parallel = pep::track_paths_parallel(p, s, starts, cfg, threads); });
    std::printf("%zu,%zu,%d,%.4f,%.4f,%.2f,%s\n", n, starts.size(), used, ts, tp, ts / tp,
                same_outcomes(serial, parallel) ? "yes" : "no");
  }
  return 0;
}
