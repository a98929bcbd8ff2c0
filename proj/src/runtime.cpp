#include "lfc/runtime.hpp"

#include <cassert>
#include <stdexcept>

#include "lfc/pool.hpp"

namespace lfc {

namespace {
thread_local ThreadSlot* tls_slot = nullptr;
}

Registry& registry() {
  static Registry instance;
  return instance;
}

ThreadSlot& Registry::acquire() {
  // Slot index doubles as the thread id in marked descriptor words, so id
  // 0 stays unused (it encodes the untagged announce form).
  for (unsigned id = 1; id < kSlotCount; ++id) {
    bool expected = false;
    if (slots_[id].in_use.compare_exchange_strong(expected, true)) {
      slots_[id].id = id;
      slots_[id].move = MoveContext{};
      slots_[id].stats = ThreadStats{};
      registered_.fetch_add(1);
      return slots_[id];
    }
  }
  throw std::runtime_error(
      "thread registration failed: all helper ids are in use");
}

void Registry::release(ThreadSlot& slot) {
  assert(slot.move.desc == nullptr && "released mid-move");
  for (auto& h : slot.hazards) h.store(0, std::memory_order_seq_cst);
  // Final sweep; blocks still protected by other threads stay parked on
  // the slot and are inherited by its next owner.
  pool::scan(slot);
  for (unsigned cls = 0; cls < kPoolClassCount; ++cls)
    pool::flush_local(slot, static_cast<PoolClass>(cls));
  registered_.fetch_sub(1);
  slot.in_use.store(false, std::memory_order_seq_cst);
}

ThreadSlot& this_slot() {
  assert(tls_slot != nullptr && "thread not registered");
  return *tls_slot;
}

bool thread_registered() { return tls_slot != nullptr; }

ThreadGuard::ThreadGuard() : slot_(registry().acquire()) {
  assert(tls_slot == nullptr && "thread registered twice");
  tls_slot = &slot_;
}

ThreadGuard::~ThreadGuard() {
  registry().release(slot_);
  tls_slot = nullptr;
}

}  // namespace lfc
