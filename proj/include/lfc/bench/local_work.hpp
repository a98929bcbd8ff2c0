#pragma once

#include <cstdint>
#include <random>

namespace lfc::bench {

// Calibrated busy work. Sub-microsecond sleeps are unreliable, so local
// work between operations is simulated by an arithmetic spin loop whose
// per-iteration cost is measured once against the monotonic clock.

// ns per spin iteration (cached after the first call).
double spin_ns_per_iter();

void spin_iterations(std::uint64_t iters);

inline void spin_ns(double ns) {
  if (ns <= 0) return;
  spin_iterations(static_cast<std::uint64_t>(ns / spin_ns_per_iter()) + 1);
}

// Per-thread local-work generator: durations drawn from a normal
// distribution with sd = 25% of the mean, clamped at zero.
class LocalWork {
 public:
  LocalWork(double mean_ns, std::uint64_t seed)
      : rng_(seed), dist_(mean_ns, 0.25 * mean_ns) {}

  // Spins once; returns the nominal duration for subtraction accounting.
  double run_once() {
    double ns = dist_(rng_);
    if (ns < 0) ns = 0;
    spin_ns(ns);
    nominal_total_ns_ += ns;
    return ns;
  }

  double nominal_total_ns() const { return nominal_total_ns_; }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_;
  double nominal_total_ns_ = 0;
};

}  // namespace lfc::bench
