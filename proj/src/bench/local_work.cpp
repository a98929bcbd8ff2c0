#include "lfc/bench/local_work.hpp"

#include <chrono>

namespace lfc::bench {

namespace {

volatile std::uint64_t g_spin_sink = 0x2545F4914F6CDD1DULL;

double measure_ns_per_iter() {
  using clock = std::chrono::steady_clock;
  // Warm up, then time a fixed dependent chain.
  spin_iterations(1'000'000);
  constexpr std::uint64_t kIters = 20'000'000;
  auto t0 = clock::now();
  spin_iterations(kIters);
  auto t1 = clock::now();
  double ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
  double per = ns / static_cast<double>(kIters);
  return per > 0 ? per : 1e-3;
}

}  // namespace

void spin_iterations(std::uint64_t iters) {
  std::uint64_t x = g_spin_sink;
  for (std::uint64_t i = 0; i < iters; ++i)
    x = x * 2862933555777941757ULL + 3037000493ULL;
  g_spin_sink = x;
}

double spin_ns_per_iter() {
  static const double per = measure_ns_per_iter();
  return per;
}

}  // namespace lfc::bench
