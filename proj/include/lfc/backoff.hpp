#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>

namespace lfc {

inline void cpu_relax() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_ia32_pause();
#else
  // fallthrough: plain spin
#endif
}

struct BackoffConfig {
  bool enabled = false;
  std::uint64_t initial_wait_ns = 128;
  std::uint64_t max_wait_ns = 16384;
};

// Exponential backoff: each failed attempt doubles the wait, capped at
// max_wait_ns. One instance per operation invocation.
class Backoff {
 public:
  explicit Backoff(const BackoffConfig& cfg)
      : cfg_(cfg), next_ns_(cfg.initial_wait_ns) {}

  // Returns the wait that was (or would be) applied, for tests.
  std::uint64_t pause() {
    if (!cfg_.enabled) return 0;
    std::uint64_t ns = next_wait_ns();
    spin_for(ns);
    return ns;
  }

  std::uint64_t next_wait_ns() {
    std::uint64_t cur = next_ns_;
    next_ns_ = std::min(cur * 2, cfg_.max_wait_ns);
    return cur;
  }

  static void spin_for(std::uint64_t ns) {
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::nanoseconds(ns);
    while (std::chrono::steady_clock::now() < deadline) cpu_relax();
  }

 private:
  BackoffConfig cfg_;
  std::uint64_t next_ns_;
};

}  // namespace lfc
