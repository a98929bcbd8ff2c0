#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <latch>
#include <thread>
#include <vector>

#include "lfc/pool.hpp"
#include "lfc/runtime.hpp"

using namespace lfc;

namespace {

// Generic protect: load, publish, revalidate until stable.
word protect(ThreadSlot& self, unsigned slot, const AtomicCell& cell) {
  for (;;) {
    word v = cell.load();
    self.publish(slot, v);
    if (cell.load() == v) return v;
  }
}

}  // namespace

TEST_CASE("protect returns the published value") {
  ThreadGuard guard;
  AtomicCell cell(0);
  CHECK(protect(guard.slot(), kHzStackTop, cell) == 0);

  cell.store(kCellAlign * 4);
  word v = protect(guard.slot(), kHzStackTop, cell);
  CHECK(v == kCellAlign * 4);
  CHECK(guard.slot().hazards[kHzStackTop].load() == v);
  guard.slot().clear(kHzStackTop);
}

TEST_CASE("protect under a concurrently flipping cell") {
  ThreadGuard guard;
  const word a = kCellAlign * 10, b = kCellAlign * 11;
  AtomicCell cell(a);
  std::atomic<bool> stop{false};
  std::thread flipper([&] {
    while (!stop.load()) {
      cell.store(a);
      cell.store(b);
    }
  });
  for (int i = 0; i < 20'000; ++i) {
    word v = protect(guard.slot(), kHzStackTop, cell);
    CHECK((v == a || v == b));
    CHECK(guard.slot().hazards[kHzStackTop].load() == v);
  }
  stop.store(true);
  flipper.join();
  guard.slot().clear(kHzStackTop);
}

TEST_CASE("retire then scan moves an unprotected block to the local list") {
  ThreadGuard guard;
  ThreadSlot& self = guard.slot();
  void* b = pool::alloc_block(self, kPoolNodes);
  auto before = self.free_lists[kPoolNodes].count;
  pool::retire_block(self, b, kPoolNodes);
  CHECK(self.retired_count >= 1);
  pool::scan(self);
  CHECK(self.retired_count == 0);
  CHECK(self.free_lists[kPoolNodes].count == before + 1);
}

TEST_CASE("a protected block is withheld until the slot clears") {
  ThreadGuard guard;
  ThreadSlot& self = guard.slot();
  void* b = pool::alloc_block(self, kPoolNodes);

  std::atomic<bool> protected_flag{false};
  std::atomic<bool> release{false};
  std::thread other([&] {
    ThreadGuard g2;
    g2.slot().publish(kHzStackTop, reinterpret_cast<word>(b));
    protected_flag.store(true);
    while (!release.load()) {
    }
    g2.slot().clear(kHzStackTop);
  });
  while (!protected_flag.load()) {
  }

  pool::retire_block(self, b, kPoolNodes);
  pool::scan(self);
  CHECK(self.retired_count == 1);  // withheld by the other thread's slot

  release.store(true);
  other.join();
  pool::scan(self);
  CHECK(self.retired_count == 0);
}

TEST_CASE("single-thread reuse determinism") {
  ThreadGuard guard;
  ThreadSlot& self = guard.slot();
  void* n = pool::alloc_block(self, kPoolNodes);
  pool::retire_block(self, n, kPoolNodes);
  pool::scan(self);
  // The local list is LIFO: the just-reclaimed block comes back first.
  void* again = pool::alloc_block(self, kPoolNodes);
  CHECK(again == n);
  pool::retire_block(self, again, kPoolNodes);
  pool::scan(self);
}

TEST_CASE("the 201st reclaimed block spills a full list to the global stack") {
  ThreadGuard guard;
  ThreadSlot& self = guard.slot();

  std::vector<void*> blocks;
  for (unsigned i = 0; i < pool::kLocalListCapacity + 1; ++i)
    blocks.push_back(pool::alloc_block(self, kPoolNodes));
  pool::flush_local(self, kPoolNodes);  // start from an empty local list

  // Exactly kLocalListCapacity reclaims fill the list without spilling.
  for (unsigned i = 0; i < pool::kLocalListCapacity; ++i)
    pool::retire_block(self, blocks[i], kPoolNodes);
  pool::scan(self);
  CHECK(self.free_lists[kPoolNodes].count == pool::kLocalListCapacity);

  // The next one pushes the full list to the global stack first.
  auto global_before = pool::stats(kPoolNodes).pooled_global;
  pool::retire_block(self, blocks[pool::kLocalListCapacity], kPoolNodes);
  pool::scan(self);
  CHECK(self.free_lists[kPoolNodes].count == 1);
  CHECK(pool::stats(kPoolNodes).pooled_global ==
        global_before + pool::kLocalListCapacity);

  // A dry local list refills from the global stack.
  pool::flush_local(self, kPoolNodes);
  auto pooled_before = pool::stats(kPoolNodes).pooled_global;
  void* a = pool::alloc_block(self, kPoolNodes);
  CHECK(pool::stats(kPoolNodes).pooled_global < pooled_before);
  pool::retire_block(self, a, kPoolNodes);
  pool::scan(self);
}

TEST_CASE("conservation: os blocks = outstanding + pooled at quiescence") {
  ThreadGuard guard;
  ThreadSlot& self = guard.slot();
  std::vector<void*> live;
  for (int i = 0; i < 500; ++i)
    live.push_back(pool::alloc_block(self, kPoolNodes));
  for (std::size_t i = 0; i < live.size(); i += 2)
    pool::retire_block(self, live[i], kPoolNodes);
  pool::scan(self);

  auto st = pool::stats(kPoolNodes);
  CHECK(st.os_blocks == st.outstanding + st.pooled_local + st.pooled_global);

  for (std::size_t i = 1; i < live.size(); i += 2)
    pool::retire_block(self, live[i], kPoolNodes);
  pool::scan(self);
  auto st2 = pool::stats(kPoolNodes);
  CHECK(st2.os_blocks == st2.outstanding + st2.pooled_local + st2.pooled_global);
}

TEST_CASE("descriptors recycle through their own size class") {
  ThreadGuard guard;
  ThreadSlot& self = guard.slot();
  auto nodes_before = pool::stats(kPoolNodes).outstanding;
  void* d = pool::alloc_block(self, kPoolDescriptors);
  CHECK(pool::stats(kPoolNodes).outstanding == nodes_before);
  pool::retire_block(self, d, kPoolDescriptors);
  pool::scan(self);
}

TEST_CASE("registering beyond the thread-id capacity fails explicitly") {
  std::latch hold(1);
  std::latch all_registered(kMaxThreadId);
  std::vector<std::thread> holders;
  for (unsigned i = 0; i < kMaxThreadId; ++i) {
    holders.emplace_back([&] {
      ThreadGuard g;
      all_registered.count_down();
      hold.wait();
    });
  }
  all_registered.wait();
  CHECK(registry().registered_count() == kMaxThreadId);
  CHECK_THROWS_AS(ThreadGuard{}, std::runtime_error);
  hold.count_down();
  for (auto& t : holders) t.join();
  // Slots are recycled: registration works again.
  ThreadGuard again;
  CHECK(registry().registered_count() >= 1);
}

TEST_CASE("registration slots are bounded and recycled") {
  // A fixed registration phase admits at most kMaxThreadId concurrent
  // threads; slots freed by finished threads are reusable.
  std::vector<std::thread> threads;
  std::atomic<unsigned> peak{0};
  for (int round = 0; round < 3; ++round) {
    for (int t = 0; t < 16; ++t) {
      threads.emplace_back([&] {
        ThreadGuard g;
        unsigned now = registry().registered_count();
        unsigned old = peak.load();
        while (now > old && !peak.compare_exchange_weak(old, now)) {
        }
      });
    }
    for (auto& th : threads) th.join();
    threads.clear();
  }
  CHECK(peak.load() <= kMaxThreadId);
}
