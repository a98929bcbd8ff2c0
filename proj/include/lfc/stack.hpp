#pragma once

#include <cassert>

#include "lfc/backoff.hpp"
#include "lfc/pool.hpp"
#include "lfc/runtime.hpp"
#include "lfc/sync_policy.hpp"

// Treiber stack, move-ready. A node's next field is a plain word holding
// the top value observed at push time; only top itself is a shared cell.
//
// VersionedTop packs a 6-bit counter into the tag-bit positions of plain
// top values (bit 0 stays clear, so descriptor detection is unaffected).
// The counter shortens the ABA window that causes false helping in the
// DCAS when an element is popped and re-pushed; it wraps at 64 and is a
// mitigation, not an elimination. Default off, which matches the measured
// configuration in the benchmarks.

namespace lfc {

template <class Policy = MoveReadyPolicy, bool VersionedTop = false>
class Stack {
 public:
  static constexpr bool is_move_ready = std::is_same_v<Policy, MoveReadyPolicy>;

  struct Node {
    word val;
    word next;  // full top word (including version bits) at push time
  };
  static_assert(sizeof(Node) <= pool::kMaxPayloadSize);

  explicit Stack(BackoffConfig backoff = {}) : backoff_(backoff) {}

  ~Stack() {
    word drained;
    while (pop(drained)) {
    }
  }

  Stack(const Stack&) = delete;
  Stack& operator=(const Stack&) = delete;

  bool push(word val) {
    ThreadSlot& self = this_slot();
    Node* node = pool::alloc<Node>(self, kPoolNodes);
    node->val = val;
    Backoff backoff(backoff_);
    for (;;) {
      word ltop = Policy::read(top_, self);
      node->next = ltop;
      ScasResult res =
          Policy::scas_insert(self, top_, ltop, next_top(as_word(node), ltop), 0);
      if (res == ScasResult::kAbort) {
        pool::release_unshared_block(self, node, kPoolNodes);
        self.stats.insert_aborts++;
        return false;
      }
      if (res == ScasResult::kTrue) return true;
      self.stats.retries++;
      backoff.pause();
    }
  }

  bool pop(word& out) {
    ThreadSlot& self = this_slot();
    Backoff backoff(backoff_);
    for (;;) {
      word ltop = Policy::read(top_, self);
      if (ptr_of(ltop) == 0) return false;  // empty: the non-CAS exit
      self.publish(kHzStackTop, ltop);
      if (Policy::read(top_, self) != ltop) continue;
      Node* n = node_at(ltop);
      out = n->val;
      ScasResult res = Policy::scas_remove(
          self, top_, ltop, next_top(ptr_of(n->next), ltop), out, 0);
      if (res == ScasResult::kAbort) {
        self.clear(kHzStackTop);
        return false;
      }
      if (res == ScasResult::kTrue) {
        self.clear(kHzStackTop);
        pool::retire_block(self, n, kPoolNodes);
        return true;
      }
      self.stats.retries++;
      backoff.pause();
    }
  }

 private:
  static word as_word(Node* n) { return reinterpret_cast<word>(n); }

  static constexpr word ptr_of(word top) {
    if constexpr (VersionedTop) return top & ~kTagMask;
    return top;
  }

  // New top value: the node address, with the successor version when
  // versioning is on.
  static constexpr word next_top(word node_addr, word prev_top) {
    if constexpr (VersionedTop) {
      word ver = ((prev_top & kThreadIdMask) >> 1) + 1;
      return node_addr | ((ver << 1) & kThreadIdMask);
    }
    return node_addr;
  }

  static Node* node_at(word v) {
    assert(!is_descriptor(v));
    Node* n = reinterpret_cast<Node*>(ptr_of(v));
    assert(pool::block_accessible(n));
    return n;
  }

  AtomicCell top_;
  BackoffConfig backoff_;
};

template <class P, bool V>
bool container_insert(Stack<P, V>& s, word value) {
  return s.push(value);
}

template <class P, bool V>
bool container_remove(Stack<P, V>& s, word& out) {
  return s.pop(out);
}

}  // namespace lfc
