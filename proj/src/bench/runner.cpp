#include "lfc/bench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <latch>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "lfc/bench/local_work.hpp"
#include "lfc/compose.hpp"
#include "lfc/locked.hpp"
#include "lfc/queue.hpp"
#include "lfc/stack.hpp"

namespace lfc::bench {

namespace {

// Value spaces: seeded elements and workload inserts must never collide so
// the post-trial multiset accounting is exact.
word seed_value(int side, std::uint64_t i) {
  return (word{1} << 56) | (word(side) << 48) | i;
}
word fresh_value(unsigned thread, std::uint64_t counter) {
  return (word{2} << 56) | (word(thread) << 48) | counter;
}

class PairAdapter {
 public:
  virtual ~PairAdapter() = default;
  virtual bool insert(int side, word v) = 0;
  virtual bool remove(int side, word& out) = 0;
  virtual bool move_from(int side) = 0;
};

template <class A, class B>
class LockFreePair final : public PairAdapter {
 public:
  explicit LockFreePair(BackoffConfig cfg) : a_(cfg), b_(cfg) {}
  bool insert(int side, word v) override {
    return side == 0 ? container_insert(a_, v) : container_insert(b_, v);
  }
  bool remove(int side, word& out) override {
    return side == 0 ? container_remove(a_, out) : container_remove(b_, out);
  }
  bool move_from(int side) override {
    return side == 0 ? lfc::move(a_, b_) : lfc::move(b_, a_);
  }

 private:
  A a_;
  B b_;
};

template <class A, class B>
class LockedPair final : public PairAdapter {
 public:
  explicit LockedPair(BackoffConfig cfg) : a_(cfg), b_(cfg) {}
  bool insert(int side, word v) override {
    return side == 0 ? container_insert(a_, v) : container_insert(b_, v);
  }
  bool remove(int side, word& out) override {
    return side == 0 ? container_remove(a_, out) : container_remove(b_, out);
  }
  bool move_from(int side) override {
    return side == 0 ? locked_move(a_, b_) : locked_move(b_, a_);
  }

 private:
  A a_;
  B b_;
};

std::unique_ptr<PairAdapter> make_adapter(Objects objects, bool lockfree,
                                          BackoffConfig cfg) {
  using LfQ = Queue<>;
  using LfS = Stack<>;
  if (lockfree) {
    switch (objects) {
      case Objects::kQueueQueue:
        return std::make_unique<LockFreePair<LfQ, LfQ>>(cfg);
      case Objects::kStackStack:
        return std::make_unique<LockFreePair<LfS, LfS>>(cfg);
      case Objects::kQueueStack:
        return std::make_unique<LockFreePair<LfQ, LfS>>(cfg);
    }
  } else {
    switch (objects) {
      case Objects::kQueueQueue:
        return std::make_unique<LockedPair<LockedQueue, LockedQueue>>(cfg);
      case Objects::kStackStack:
        return std::make_unique<LockedPair<LockedStack, LockedStack>>(cfg);
      case Objects::kQueueStack:
        return std::make_unique<LockedPair<LockedQueue, LockedStack>>(cfg);
    }
  }
  throw std::logic_error("bench: unknown pairing");
}

struct WorkerOutcome {
  std::vector<word> inserted;
  std::vector<word> removed;
  std::uint64_t retries = 0;
  std::uint64_t helper_writes = 0;
  double nominal_work_ns = 0;
};

void check_conservation(std::vector<word> before, std::vector<word> after,
                        const char* what) {
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  if (before != after) {
    std::ostringstream msg;
    msg << "conservation violated in " << what << ": " << before.size()
        << " elements in, " << after.size() << " elements out";
    throw ConservationError(msg.str());
  }
}

TrialRow run_trial(const BenchConfig& cfg, bool lockfree, unsigned threads,
                   unsigned trial) {
  BackoffConfig bo;
  bo.enabled = cfg.backoff;
  bo.initial_wait_ns = cfg.backoff_initial_ns;
  bo.max_wait_ns = cfg.backoff_max_ns;

  auto adapter = make_adapter(cfg.objects, lockfree, bo);

  std::vector<word> all_in;   // seeded + inserted
  std::vector<word> all_out;  // drained + removed

  for (int side = 0; side < 2; ++side)
    for (std::uint64_t i = 0; i < cfg.seed_elements; ++i) {
      word v = seed_value(side, i);
      adapter->insert(side, v);
      all_in.push_back(v);
    }

  const std::uint64_t base_ops = cfg.total_ops / threads;
  const std::uint64_t extra = cfg.total_ops % threads;

  std::latch started(threads);
  std::atomic<bool> go{false};
  std::vector<WorkerOutcome> outcomes(threads);
  std::vector<std::thread> workers;
  workers.reserve(threads);

  for (unsigned t = 0; t < threads; ++t) {
    std::uint64_t my_ops = base_ops + (t < extra ? 1 : 0);
    workers.emplace_back([&, t, my_ops] {
      ThreadGuard guard;
      WorkerOutcome& out = outcomes[t];
      out.inserted.reserve(my_ops / 2 + 1);
      out.removed.reserve(my_ops / 2 + 1);
      std::mt19937_64 rng(cfg.seed * 0x9E3779B97F4A7C15ULL + trial * 8191 +
                          t * 131 + (lockfree ? 1 : 0));
      std::optional<LocalWork> work;
      if (cfg.simulate_local_work)
        work.emplace(cfg.work_mean_ns(), rng());

      started.count_down();
      while (!go.load(std::memory_order_seq_cst)) cpu_relax();

      std::uint64_t counter = 0;
      for (std::uint64_t i = 0; i < my_ops; ++i) {
        switch (cfg.workload) {
          case Workload::kMoveOnly:
            adapter->move_from(static_cast<int>(rng() & 1));
            break;
          case Workload::kOpsOnly: {
            int side = static_cast<int>(rng() & 1);
            if (rng() & 1) {
              word v = fresh_value(guard.slot().id, counter++);
              adapter->insert(side, v);
              out.inserted.push_back(v);
            } else {
              word v;
              if (adapter->remove(side, v)) out.removed.push_back(v);
            }
            break;
          }
          case Workload::kMixed: {
            std::uint64_t r = rng() & 3;
            if (r < 2) {
              adapter->move_from(static_cast<int>(r));
            } else if (r == 2) {
              word v = fresh_value(guard.slot().id, counter++);
              adapter->insert(static_cast<int>(rng() & 1), v);
              out.inserted.push_back(v);
            } else {
              word v;
              if (adapter->remove(static_cast<int>(rng() & 1), v))
                out.removed.push_back(v);
            }
            break;
          }
        }
        if (work) work->run_once();
      }
      out.retries = guard.slot().stats.retries;
      out.helper_writes = guard.slot().stats.helper_writes;
      if (work) out.nominal_work_ns = work->nominal_total_ns();
    });
  }

  // All workers spin on `go` before the clock starts; measure from release
  // to the last join.
  started.wait();
  auto t0 = std::chrono::steady_clock::now();
  go.store(true, std::memory_order_seq_cst);
  for (auto& w : workers) w.join();
  auto t1 = std::chrono::steady_clock::now();

  double wall_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();

  double nominal = 0;
  TrialRow row;
  for (const WorkerOutcome& o : outcomes) {
    nominal += o.nominal_work_ns;
    row.retries += o.retries;
    row.helper_writes += o.helper_writes;
    all_in.insert(all_in.end(), o.inserted.begin(), o.inserted.end());
    all_out.insert(all_out.end(), o.removed.begin(), o.removed.end());
  }

  for (int side = 0; side < 2; ++side) {
    word v;
    while (adapter->remove(side, v)) all_out.push_back(v);
  }
  check_conservation(std::move(all_in), std::move(all_out),
                     lockfree ? "lockfree trial" : "locked trial");

  // Subtract the per-thread average of simulated local work: wall time is
  // set by the slowest thread, whose critical path carries its own work.
  double elapsed = wall_ns - nominal / threads;
  if (elapsed < 0) elapsed = 0;

  row.impl = lockfree ? "lockfree" : "locked";
  row.objects = to_string(cfg.objects);
  row.workload = to_string(cfg.workload);
  row.threads = threads;
  row.contention = to_string(cfg.contention);
  row.backoff = cfg.backoff ? "on" : "off";
  row.trial = trial;
  row.elapsed_ns = static_cast<std::uint64_t>(elapsed);
  return row;
}

}  // namespace

std::vector<TrialRow> run(const BenchConfig& cfg, std::ostream* log) {
  cfg.validate();
  std::optional<ThreadGuard> guard;
  if (!thread_registered()) guard.emplace();
  if (cfg.simulate_local_work) spin_ns_per_iter();  // calibrate off the clock

  std::vector<bool> impls;
  if (cfg.impl == Impl::kLockFree || cfg.impl == Impl::kBoth)
    impls.push_back(true);
  if (cfg.impl == Impl::kLocked || cfg.impl == Impl::kBoth)
    impls.push_back(false);

  std::vector<TrialRow> rows;
  for (bool lockfree : impls) {
    for (unsigned threads : cfg.thread_counts) {
      for (unsigned trial = 0; trial < cfg.trials; ++trial)
        rows.push_back(run_trial(cfg, lockfree, threads, trial));
      if (log) {
        *log << (lockfree ? "lockfree" : "locked  ") << ' '
             << to_string(cfg.objects) << '/' << to_string(cfg.workload)
             << " threads=" << threads << ": " << cfg.trials
             << " trials done\n";
      }
    }
  }
  return rows;
}

}  // namespace lfc::bench
