#pragma once

#include <stdexcept>

#include "lfc/backoff.hpp"
#include "lfc/pool.hpp"
#include "lfc/runtime.hpp"

// Blocking baseline: queue and stack guarded by a test-test-and-set lock,
// plus a locked move that takes both containers' locks in global address
// order. Nodes come from the same pool as the lock-free containers so both
// implementations share one memory manager.

namespace lfc {

class TtasLock {
 public:
  // Spins on a plain load until the flag looks clear, then attempts the
  // atomic set. A failed set counts as a retry and applies backoff when
  // one is supplied.
  void lock(Backoff* backoff = nullptr) {
    for (;;) {
      while (flag_.load(std::memory_order_seq_cst)) cpu_relax();
      if (!flag_.exchange(true, std::memory_order_seq_cst)) return;
      if (thread_registered()) this_slot().stats.retries++;
      if (backoff) backoff->pause();
    }
  }

  void unlock() { flag_.store(false, std::memory_order_seq_cst); }

 private:
  std::atomic<bool> flag_{false};
};

namespace detail {
struct PlainNode {
  word val;
  word next;
};
static_assert(sizeof(PlainNode) <= pool::kMaxPayloadSize);
}  // namespace detail

class LockedQueue {
 public:
  explicit LockedQueue(BackoffConfig backoff = {}) : backoff_(backoff) {}

  ~LockedQueue() {
    word drained;
    while (dequeue(drained)) {
    }
  }

  LockedQueue(const LockedQueue&) = delete;
  LockedQueue& operator=(const LockedQueue&) = delete;

  bool enqueue(word val) {
    ThreadSlot& self = this_slot();
    auto* n = pool::alloc<detail::PlainNode>(self, kPoolNodes);
    n->val = val;
    n->next = 0;
    Backoff backoff(backoff_);
    lock_.lock(&backoff);
    insert_locked(n);
    lock_.unlock();
    return true;
  }

  bool dequeue(word& out) {
    ThreadSlot& self = this_slot();
    Backoff backoff(backoff_);
    lock_.lock(&backoff);
    detail::PlainNode* n = remove_locked();
    lock_.unlock();
    if (!n) return false;
    out = n->val;
    pool::release_unshared_block(self, n, kPoolNodes);
    return true;
  }

  TtasLock& lock_handle() { return lock_; }
  const BackoffConfig& backoff_config() const { return backoff_; }

  // Callers of the *_locked interface hold lock_handle().
  void insert_locked(detail::PlainNode* n) {
    n->next = 0;
    if (tail_)
      node(tail_)->next = reinterpret_cast<word>(n);
    else
      head_ = reinterpret_cast<word>(n);
    tail_ = reinterpret_cast<word>(n);
  }

  detail::PlainNode* remove_locked() {
    if (!head_) return nullptr;
    detail::PlainNode* n = node(head_);
    head_ = n->next;
    if (!head_) tail_ = 0;
    return n;
  }

 private:
  static detail::PlainNode* node(word v) {
    return reinterpret_cast<detail::PlainNode*>(v);
  }

  TtasLock lock_;
  word head_ = 0;
  word tail_ = 0;
  BackoffConfig backoff_;
};

class LockedStack {
 public:
  explicit LockedStack(BackoffConfig backoff = {}) : backoff_(backoff) {}

  ~LockedStack() {
    word drained;
    while (pop(drained)) {
    }
  }

  LockedStack(const LockedStack&) = delete;
  LockedStack& operator=(const LockedStack&) = delete;

  bool push(word val) {
    ThreadSlot& self = this_slot();
    auto* n = pool::alloc<detail::PlainNode>(self, kPoolNodes);
    n->val = val;
    Backoff backoff(backoff_);
    lock_.lock(&backoff);
    insert_locked(n);
    lock_.unlock();
    return true;
  }

  bool pop(word& out) {
    ThreadSlot& self = this_slot();
    Backoff backoff(backoff_);
    lock_.lock(&backoff);
    detail::PlainNode* n = remove_locked();
    lock_.unlock();
    if (!n) return false;
    out = n->val;
    pool::release_unshared_block(self, n, kPoolNodes);
    return true;
  }

  TtasLock& lock_handle() { return lock_; }
  const BackoffConfig& backoff_config() const { return backoff_; }

  void insert_locked(detail::PlainNode* n) {
    n->next = top_;
    top_ = reinterpret_cast<word>(n);
  }

  detail::PlainNode* remove_locked() {
    if (!top_) return nullptr;
    auto* n = reinterpret_cast<detail::PlainNode*>(top_);
    top_ = n->next;
    return n;
  }

 private:
  TtasLock lock_;
  word top_ = 0;
  BackoffConfig backoff_;
};

inline bool container_insert(LockedQueue& q, word value) {
  return q.enqueue(value);
}
inline bool container_remove(LockedQueue& q, word& out) {
  return q.dequeue(out);
}
inline bool container_insert(LockedStack& s, word value) {
  return s.push(value);
}
inline bool container_remove(LockedStack& s, word& out) {
  return s.pop(out);
}

// Blocking move: acquires both locks in address order (no deadlock between
// opposite-direction movers), then transfers one element node-for-node.
template <class Source, class Target>
bool locked_move(Source& source, Target& target) {
  if (static_cast<const void*>(&source) == static_cast<const void*>(&target))
    throw std::invalid_argument("locked_move: containers must be distinct");
  TtasLock* first = &source.lock_handle();
  TtasLock* second = &target.lock_handle();
  if (first > second) std::swap(first, second);
  Backoff b1(source.backoff_config());
  Backoff b2(target.backoff_config());
  first->lock(&b1);
  second->lock(&b2);
  detail::PlainNode* n = source.remove_locked();
  if (n) target.insert_locked(n);
  second->unlock();
  first->unlock();
  return n != nullptr;
}

}  // namespace lfc
