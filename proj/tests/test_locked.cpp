#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>
#include <vector>

#include "lfc/locked.hpp"

using namespace lfc;

TEST_CASE("locked queue is FIFO, locked stack is LIFO") {
  ThreadGuard guard;
  LockedQueue q;
  LockedStack s;
  word v = 0;
  CHECK_FALSE(q.dequeue(v));
  q.enqueue(1);
  q.enqueue(2);
  CHECK(q.dequeue(v));
  CHECK(v == 1);
  CHECK(q.dequeue(v));
  CHECK(v == 2);
  CHECK_FALSE(q.dequeue(v));

  CHECK_FALSE(s.pop(v));
  s.push(1);
  s.push(2);
  CHECK(s.pop(v));
  CHECK(v == 2);
  CHECK(s.pop(v));
  CHECK(v == 1);
  CHECK_FALSE(s.pop(v));
}

TEST_CASE("locked move transfers one element") {
  ThreadGuard guard;
  LockedStack a;
  LockedQueue b;
  CHECK_FALSE(locked_move(a, b));  // empty source
  a.push(9);
  CHECK(locked_move(a, b));
  word v = 0;
  CHECK_FALSE(a.pop(v));
  CHECK(b.dequeue(v));
  CHECK(v == 9);
}

TEST_CASE("backoff doubles the wait and caps at the maximum") {
  BackoffConfig cfg;
  cfg.enabled = true;
  cfg.initial_wait_ns = 100;
  cfg.max_wait_ns = 800;
  Backoff b(cfg);
  CHECK(b.next_wait_ns() == 100);
  CHECK(b.next_wait_ns() == 200);
  CHECK(b.next_wait_ns() == 400);
  CHECK(b.next_wait_ns() == 800);
  CHECK(b.next_wait_ns() == 800);  // capped
  CHECK(b.next_wait_ns() == 800);
}

TEST_CASE("disabled backoff performs no wait") {
  BackoffConfig cfg;  // enabled = false
  Backoff b(cfg);
  CHECK(b.pause() == 0);
}

TEST_CASE("ttas lock provides mutual exclusion") {
  constexpr unsigned kThreads = 4;
  constexpr int kIncrements = 50'000;
  TtasLock lock;
  std::uint64_t counter = 0;  // unguarded; the lock is the guard
  std::vector<std::thread> threads;
  for (unsigned t = 0; t < kThreads; ++t) {
    threads.emplace_back([&] {
      ThreadGuard g;
      for (int i = 0; i < kIncrements; ++i) {
        lock.lock();
        counter++;
        lock.unlock();
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(counter == std::uint64_t{kThreads} * kIncrements);
}

TEST_CASE("opposite-direction locked moves terminate") {
  constexpr int kMoves = 20'000;
  ThreadGuard guard;
  LockedQueue a;
  LockedStack b;
  for (int i = 0; i < 500; ++i) {
    a.enqueue(i);
    b.push(1000 + i);
  }
  std::thread t1([&] {
    ThreadGuard g;
    for (int i = 0; i < kMoves; ++i) locked_move(a, b);
  });
  std::thread t2([&] {
    ThreadGuard g;
    for (int i = 0; i < kMoves; ++i) locked_move(b, a);
  });
  t1.join();
  t2.join();

  std::vector<word> remaining;
  word v;
  while (a.dequeue(v)) remaining.push_back(v);
  while (b.pop(v)) remaining.push_back(v);
  CHECK(remaining.size() == 1000);
  std::sort(remaining.begin(), remaining.end());
  CHECK(std::unique(remaining.begin(), remaining.end()) == remaining.end());
}

TEST_CASE("locked containers under contention conserve elements") {
  constexpr unsigned kThreads = 4;
  constexpr int kPerThread = 5'000;
  ThreadGuard guard;
  LockedQueue q;
  std::vector<std::vector<word>> taken(kThreads);
  std::vector<std::thread> threads;
  for (unsigned t = 0; t < kThreads; ++t) {
    threads.emplace_back([&, t] {
      ThreadGuard g;
      for (int i = 0; i < kPerThread; ++i) {
        q.enqueue((word(t) << 32) | word(i));
        word v;
        if (q.dequeue(v)) taken[t].push_back(v);
      }
    });
  }
  for (auto& th : threads) th.join();
  std::vector<word> all;
  for (auto& v : taken) all.insert(all.end(), v.begin(), v.end());
  word v;
  while (q.dequeue(v)) all.push_back(v);
  CHECK(all.size() == std::size_t{kThreads} * kPerThread);
}
