#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lfc::bench {

enum class Objects { kQueueQueue, kStackStack, kQueueStack };
enum class Workload { kMoveOnly, kOpsOnly, kMixed };
enum class Impl { kLockFree, kLocked, kBoth };
enum class Contention { kHigh, kLow };

// Mean local-work durations per contention level; spread is 25% of the
// mean (the distribution's variance is a harness choice, documented in the
// README).
inline constexpr double kHighContentionWorkNs = 100.0;
inline constexpr double kLowContentionWorkNs = 500.0;

struct BenchConfig {
  Objects objects = Objects::kQueueQueue;
  Workload workload = Workload::kMoveOnly;
  std::vector<unsigned> thread_counts = {1, 2, 4, 8};
  std::uint64_t total_ops = 100'000;
  unsigned trials = 10;
  Contention contention = Contention::kHigh;
  bool backoff = false;
  std::uint64_t backoff_initial_ns = 128;
  std::uint64_t backoff_max_ns = 16'384;
  Impl impl = Impl::kBoth;
  std::uint64_t seed = 1;
  std::uint64_t seed_elements = 1'000;
  bool simulate_local_work = true;  // off only for harness self-tests

  void validate() const {
    if (thread_counts.empty())
      throw std::invalid_argument("bench: no thread counts");
    for (unsigned t : thread_counts)
      if (t < 1 || t > 16)
        throw std::invalid_argument("bench: threads must be in 1..16");
    if (trials == 0) throw std::invalid_argument("bench: trials must be > 0");
    if (total_ops == 0) throw std::invalid_argument("bench: ops must be > 0");
  }

  double work_mean_ns() const {
    return contention == Contention::kHigh ? kHighContentionWorkNs
                                           : kLowContentionWorkNs;
  }
};

inline std::string to_string(Objects o) {
  switch (o) {
    case Objects::kQueueQueue: return "qq";
    case Objects::kStackStack: return "ss";
    case Objects::kQueueStack: return "qs";
  }
  return "?";
}

inline std::string to_string(Workload w) {
  switch (w) {
    case Workload::kMoveOnly: return "move";
    case Workload::kOpsOnly: return "ops";
    case Workload::kMixed: return "mixed";
  }
  return "?";
}

inline std::string to_string(Contention c) {
  return c == Contention::kHigh ? "high" : "low";
}

inline Objects objects_from_string(const std::string& s) {
  if (s == "qq") return Objects::kQueueQueue;
  if (s == "ss") return Objects::kStackStack;
  if (s == "qs") return Objects::kQueueStack;
  throw std::invalid_argument("bench: unknown objects '" + s + "'");
}

inline Workload workload_from_string(const std::string& s) {
  if (s == "move") return Workload::kMoveOnly;
  if (s == "ops") return Workload::kOpsOnly;
  if (s == "mixed") return Workload::kMixed;
  throw std::invalid_argument("bench: unknown workload '" + s + "'");
}

inline Impl impl_from_string(const std::string& s) {
  if (s == "lockfree") return Impl::kLockFree;
  if (s == "locked") return Impl::kLocked;
  if (s == "both") return Impl::kBoth;
  throw std::invalid_argument("bench: unknown impl '" + s + "'");
}

inline Contention contention_from_string(const std::string& s) {
  if (s == "high") return Contention::kHigh;
  if (s == "low") return Contention::kLow;
  throw std::invalid_argument("bench: unknown contention '" + s + "'");
}

}  // namespace lfc::bench
