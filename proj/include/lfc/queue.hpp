#pragma once

#include <cassert>

#include "lfc/backoff.hpp"
#include "lfc/pool.hpp"
#include "lfc/runtime.hpp"
#include "lfc/sync_policy.hpp"

// Michael-Scott queue, move-ready: the linearization CASes go through the
// scas hooks and every cell that can host a descriptor is loaded through
// the descriptor-aware read. A dummy node is always present; head points
// at it and tail lags the last node by at most one link.
//
// Enqueue and dequeue use disjoint protection slots so a move composed of
// the two never tramples its own hazards.

namespace lfc {

template <class Policy = MoveReadyPolicy>
class Queue {
 public:
  static constexpr bool is_move_ready = std::is_same_v<Policy, MoveReadyPolicy>;

  struct Node {
    word val;
    AtomicCell next;
  };
  static_assert(sizeof(Node) <= pool::kMaxPayloadSize);

  explicit Queue(BackoffConfig backoff = {}) : backoff_(backoff) {
    ThreadSlot& self = this_slot();
    Node* dummy = pool::alloc<Node>(self, kPoolNodes);
    dummy->val = 0;
    dummy->next.store(0);
    head_.store(as_word(dummy));
    tail_.store(as_word(dummy));
  }

  ~Queue() {
    word drained;
    while (dequeue(drained)) {
    }
    // Only the dummy remains; the container is quiescent by contract.
    Node* dummy = node_at(head_.load());
    pool::retire_block(this_slot(), dummy, kPoolNodes);
  }

  Queue(const Queue&) = delete;
  Queue& operator=(const Queue&) = delete;

  // Appends val. Returns false only on the in-move abort path, with the
  // queue unchanged and the candidate node recycled.
  bool enqueue(word val) {
    ThreadSlot& self = this_slot();
    Node* node = pool::alloc<Node>(self, kPoolNodes);
    node->val = val;
    node->next.store(0);
    Backoff backoff(backoff_);
    for (;;) {
      word ltail = Policy::read(tail_, self);
      self.publish(kHzEnqueueTail, ltail);
      if (Policy::read(tail_, self) != ltail) continue;
      Node* tail_node = node_at(ltail);
      word lnext = Policy::read(tail_node->next, self);
      self.publish(kHzEnqueueNext, lnext);
      if (Policy::read(tail_, self) != ltail) continue;
      if (lnext != 0) {
        tail_.cas(ltail, lnext);  // help advance the lagging tail
        continue;
      }
      ScasResult res =
          Policy::scas_insert(self, tail_node->next, 0, as_word(node), ltail);
      if (res == ScasResult::kAbort) {
        clear_enqueue_hazards(self);
        pool::release_unshared_block(self, node, kPoolNodes);
        self.stats.insert_aborts++;
        return false;
      }
      if (res == ScasResult::kTrue) {
        tail_.cas(ltail, as_word(node));
        clear_enqueue_hazards(self);
        return true;
      }
      self.stats.retries++;
      backoff.pause();
    }
  }

  // Removes the oldest element into out. False iff observed empty (or the
  // in-move abort path). The value is captured before the linearization
  // CAS.
  bool dequeue(word& out) {
    ThreadSlot& self = this_slot();
    Backoff backoff(backoff_);
    for (;;) {
      word lhead = Policy::read(head_, self);
      self.publish(kHzDequeueHead, lhead);
      if (Policy::read(head_, self) != lhead) continue;
      word ltail = Policy::read(tail_, self);
      Node* head_node = node_at(lhead);
      word lnext = Policy::read(head_node->next, self);
      self.publish(kHzDequeueNext, lnext);
      if (Policy::read(head_, self) != lhead) continue;
      if (lnext == 0) {
        clear_dequeue_hazards(self);
        return false;
      }
      if (lhead == ltail) {
        tail_.cas(ltail, lnext);
        continue;
      }
      out = node_at(lnext)->val;
      ScasResult res =
          Policy::scas_remove(self, head_, lhead, lnext, out, lhead);
      if (res == ScasResult::kAbort) {
        clear_dequeue_hazards(self);
        return false;
      }
      if (res == ScasResult::kTrue) {
        clear_dequeue_hazards(self);
        pool::retire_block(self, head_node, kPoolNodes);
        return true;
      }
      self.stats.retries++;
      backoff.pause();
    }
  }

 private:
  static word as_word(Node* n) { return reinterpret_cast<word>(n); }

  static Node* node_at(word v) {
    assert(!is_descriptor(v));
    Node* n = reinterpret_cast<Node*>(v);
    assert(pool::block_accessible(n));
    return n;
  }

  static void clear_enqueue_hazards(ThreadSlot& self) {
    self.clear(kHzEnqueueTail);
    self.clear(kHzEnqueueNext);
  }
  static void clear_dequeue_hazards(ThreadSlot& self) {
    self.clear(kHzDequeueHead);
    self.clear(kHzDequeueNext);
  }

  AtomicCell head_;
  AtomicCell tail_;
  BackoffConfig backoff_;
};

template <class P>
bool container_insert(Queue<P>& q, word value) {
  return q.enqueue(value);
}

template <class P>
bool container_remove(Queue<P>& q, word& out) {
  return q.dequeue(out);
}

}  // namespace lfc
