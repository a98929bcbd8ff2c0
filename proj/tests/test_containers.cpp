#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>
#include <vector>

#include "lfc/compose.hpp"
#include "lfc/lincheck.hpp"
#include "lfc/queue.hpp"
#include "lfc/stack.hpp"
#include "support/recorded.hpp"

using namespace lfc;

TEST_CASE("queue is FIFO single-threaded") {
  ThreadGuard guard;
  Queue<> q;
  word v = 0;
  CHECK_FALSE(q.dequeue(v));
  CHECK(q.enqueue(1));
  CHECK(q.enqueue(2));
  CHECK(q.enqueue(3));
  CHECK(q.dequeue(v));
  CHECK(v == 1);
  CHECK(q.dequeue(v));
  CHECK(v == 2);
  CHECK(q.dequeue(v));
  CHECK(v == 3);
  CHECK_FALSE(q.dequeue(v));
}

TEST_CASE("stack is LIFO single-threaded") {
  ThreadGuard guard;
  Stack<> s;
  word v = 0;
  CHECK_FALSE(s.pop(v));
  CHECK(s.push(1));
  CHECK(s.push(2));
  CHECK(s.pop(v));
  CHECK(v == 2);
  CHECK(s.push(3));
  CHECK(s.pop(v));
  CHECK(v == 3);
  CHECK(s.pop(v));
  CHECK(v == 1);
  CHECK_FALSE(s.pop(v));
}

TEST_CASE("versioned-top stack variant keeps LIFO semantics") {
  ThreadGuard guard;
  Stack<MoveReadyPolicy, true> s;
  word v = 0;
  CHECK_FALSE(s.pop(v));
  for (word i = 1; i <= 70; ++i) CHECK(s.push(i));  // wraps the 6-bit counter
  for (word i = 70; i >= 1; --i) {
    CHECK(s.pop(v));
    CHECK(v == i);
  }
  CHECK_FALSE(s.pop(v));
}

TEST_CASE("plain-cas policy containers match move-ready ones outside moves") {
  ThreadGuard guard;
  std::mt19937_64 rng(99);
  for (int round = 0; round < 200; ++round) {
    Queue<MoveReadyPolicy> hooked;
    Queue<PlainCasPolicy> plain;
    Stack<MoveReadyPolicy> hooked_s;
    Stack<PlainCasPolicy> plain_s;
    std::uint64_t seed = rng();
    std::mt19937_64 a(seed), b(seed);
    auto drive = [](auto& q, auto& s, std::mt19937_64& r) {
      std::vector<word> results;
      for (int i = 0; i < 40; ++i) {
        word v = 0;
        switch (r() % 4) {
          case 0: q.enqueue(i); results.push_back(word{1} << 32); break;
          case 1: results.push_back(q.dequeue(v) ? v : ~word{0}); break;
          case 2: s.push(i); results.push_back(word{2} << 32); break;
          default: results.push_back(s.pop(v) ? v : ~word{0}); break;
        }
      }
      return results;
    };
    CHECK(drive(hooked, hooked_s, a) == drive(plain, plain_s, b));
  }
}

TEST_CASE("producer/consumer multiset conservation on the queue") {
  constexpr unsigned kProducers = 4;
  constexpr unsigned kConsumers = 4;
  constexpr int kPerProducer = 10'000;

  ThreadGuard guard;
  Queue<> q;
  std::vector<std::vector<word>> consumed(kConsumers);
  std::atomic<bool> done{false};

  std::vector<std::thread> threads;
  for (unsigned p = 0; p < kProducers; ++p) {
    threads.emplace_back([&, p] {
      ThreadGuard g;
      for (int i = 0; i < kPerProducer; ++i)
        q.enqueue((word(p) << 32) | word(i));
    });
  }
  for (unsigned c = 0; c < kConsumers; ++c) {
    threads.emplace_back([&, c] {
      ThreadGuard g;
      word v;
      for (;;) {
        if (q.dequeue(v))
          consumed[c].push_back(v);
        else if (done.load())
          break;
      }
    });
  }
  for (unsigned p = 0; p < kProducers; ++p) threads[p].join();
  done.store(true);
  for (unsigned c = 0; c < kConsumers; ++c) threads[kProducers + c].join();

  std::vector<word> all;
  for (auto& v : consumed) all.insert(all.end(), v.begin(), v.end());
  word leftover;
  while (q.dequeue(leftover)) all.push_back(leftover);

  std::vector<word> expected;
  for (unsigned p = 0; p < kProducers; ++p)
    for (int i = 0; i < kPerProducer; ++i)
      expected.push_back((word(p) << 32) | word(i));
  std::sort(all.begin(), all.end());
  std::sort(expected.begin(), expected.end());
  CHECK(all == expected);
}

TEST_CASE("stack stress conserves the multiset") {
  constexpr unsigned kThreads = 8;
  constexpr int kOpsPerThread = 10'000;

  ThreadGuard guard;
  Stack<> s;
  std::vector<std::vector<word>> pushed(kThreads), popped(kThreads);

  std::vector<std::thread> threads;
  for (unsigned t = 0; t < kThreads; ++t) {
    threads.emplace_back([&, t] {
      ThreadGuard g;
      std::mt19937_64 rng(t * 7 + 1);
      for (int i = 0; i < kOpsPerThread; ++i) {
        if (rng() & 1) {
          word v = (word(t) << 32) | word(i);
          s.push(v);
          pushed[t].push_back(v);
        } else {
          word v;
          if (s.pop(v)) popped[t].push_back(v);
        }
      }
    });
  }
  for (auto& th : threads) th.join();

  std::vector<word> in, out;
  for (auto& v : pushed) in.insert(in.end(), v.begin(), v.end());
  for (auto& v : popped) out.insert(out.end(), v.begin(), v.end());
  word leftover;
  while (s.pop(leftover)) out.push_back(leftover);
  std::sort(in.begin(), in.end());
  std::sort(out.begin(), out.end());
  CHECK(in == out);
}

TEST_CASE("recorded concurrent histories linearize (queue and stack)") {
  ThreadGuard guard;
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int round = 0; round < 300; ++round) {
    auto exec = support::run_random_execution(rng(), 3);
    auto outcome = lincheck::check(exec.ops, exec.spec);
    REQUIRE(outcome != lincheck::CheckOutcome::kTooLarge);
    CHECK(outcome == lincheck::CheckOutcome::kLinearizable);
    checked++;
  }
  CHECK(checked == 300);
}

TEST_CASE("dequeue on a queue whose only element is being moved out") {
  // Ordinary contention: either the dequeue or the move gets the element,
  // never both, never neither.
  ThreadGuard guard;
  for (int round = 0; round < 200; ++round) {
    Queue<> q;
    Stack<> s;
    q.enqueue(42);
    std::atomic<bool> mover_ok{false}, taker_ok{false};
    std::thread mover([&] {
      ThreadGuard g;
      mover_ok.store(lfc::move(q, s));
    });
    std::thread taker([&] {
      ThreadGuard g;
      word v;
      if (q.dequeue(v)) {
        CHECK(v == 42);
        taker_ok.store(true);
      }
    });
    mover.join();
    taker.join();
    word v;
    bool in_stack = s.pop(v);
    if (in_stack) CHECK(v == 42);
    // Exactly one of the two got the element, and it ended up wherever the
    // winner put it.
    CHECK(mover_ok.load() != taker_ok.load());
    CHECK(mover_ok.load() == in_stack);
    word rest;
    CHECK_FALSE(q.dequeue(rest));
    CHECK_FALSE(s.pop(rest));
  }
}
