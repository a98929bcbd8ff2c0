#pragma once

#include <cassert>

#include "lfc/compose.hpp"
#include "lfc/dcas.hpp"

// Synchronization policy for the containers. MoveReadyPolicy routes
// linearization CASes through the scas hooks and cell loads through the
// descriptor-aware read; PlainCasPolicy keeps the unmodified algorithms
// and exists for the transparency differential tests (a plain-CAS
// container must be observationally identical to a move-ready one that is
// never used in a move).

namespace lfc {

struct MoveReadyPolicy {
  static word read(AtomicCell& cell, ThreadSlot& self) {
    return lfc::read(cell, self);
  }
  static ScasResult scas_remove(ThreadSlot& self, AtomicCell& cell,
                                word expected, word desired, word element,
                                word hp) {
    return lfc::scas_remove(self, cell, expected, desired, element, hp);
  }
  static ScasResult scas_insert(ThreadSlot& self, AtomicCell& cell,
                                word expected, word desired, word hp) {
    return lfc::scas_insert(self, cell, expected, desired, hp);
  }
};

struct PlainCasPolicy {
  static word read(AtomicCell& cell, ThreadSlot&) {
    word v = cell.load();
    // Plain instances never host descriptors; seeing one means a raw load
    // leaked into a move-ready code path.
    assert(!is_descriptor(v));
    return v;
  }
  static ScasResult scas_remove(ThreadSlot&, AtomicCell& cell, word expected,
                                word desired, word /*element*/, word /*hp*/) {
    return cell.cas(expected, desired) ? ScasResult::kTrue : ScasResult::kFalse;
  }
  static ScasResult scas_insert(ThreadSlot&, AtomicCell& cell, word expected,
                                word desired, word /*hp*/) {
    return cell.cas(expected, desired) ? ScasResult::kTrue : ScasResult::kFalse;
  }
};

}  // namespace lfc
