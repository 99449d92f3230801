// Benchmark comparing the OpenMP drivers against the serial reference
// implementations on the randomized-search kernels.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "funnelkit/corpus.hpp"
#include "funnelkit/oracle.hpp"

namespace fk = funnelkit;

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; parallel drivers run serially\n");
#endif

  fk::SplitMix64 rng(fk::derive_seed(7, 1));
  const fk::ComponentModel comp = fk::random_component(rng, 6);
  const double alpha = 0.6 * comp.entropy_x();

  fk::SearchConfig cfg;
  cfg.trials = 200000;
  cfg.out_alphabet_size = comp.alphabet_x.size() + 1;
  cfg.seed = 7;

  std::printf("\nsearch_min_leakage: %zu trials, |X| = %zu, |Y| = %zu\n", cfg.trials,
              comp.alphabet_x.size(), cfg.out_alphabet_size);
  auto t0 = std::chrono::steady_clock::now();
  const double serial = fk::search_min_leakage_serial(comp, alpha, cfg);
  const double serial_ms = ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  const double parallel = fk::search_min_leakage(comp, alpha, cfg);
  const double parallel_ms = ms_since(t0);
  std::printf("  serial   %10.1f ms  best = %.12g\n", serial_ms, serial);
  std::printf("  parallel %10.1f ms  best = %.12g\n", parallel_ms, parallel);
  std::printf("  speedup  %10.2fx  results match: %s\n", serial_ms / parallel_ms,
              serial == parallel ? "yes" : "NO");

  const fk::JointTable joint = fk::random_joint(rng, 6, 6, false);
  const std::size_t decoder_trials = 200000;
  std::printf("\nsweep_decoders: %zu trials, 6x6 joint\n", decoder_trials);
  t0 = std::chrono::steady_clock::now();
  const double s2 = fk::sweep_decoders_serial(joint, decoder_trials, 7);
  const double s2_ms = ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  const double p2 = fk::sweep_decoders(joint, decoder_trials, 7);
  const double p2_ms = ms_since(t0);
  std::printf("  serial   %10.1f ms  best = %.12g\n", s2_ms, s2);
  std::printf("  parallel %10.1f ms  best = %.12g\n", p2_ms, p2);
  std::printf("  speedup  %10.2fx  results match: %s\n", s2_ms / p2_ms, s2 == p2 ? "yes" : "NO");
  return 0;
}
