#pragma once

#include <stdexcept>
#include <type_traits>

#include "lfc/dcas.hpp"
#include "lfc/runtime.hpp"

// Composition layer: the scas hooks and the move operation.
//
// A move-ready container calls scas_remove / scas_insert at its
// linearization CAS sites. Outside a move both behave exactly like the
// plain CAS they replaced. Inside a move the remove-side call records the
// first leg and runs the target insert; the insert-side call records the
// second leg and fires the unified DCAS, so remove and insert take effect
// at one instant.

namespace lfc {

enum class ScasResult : unsigned char {
  kTrue = 0,
  kFalse,
  kAbort,
};

namespace detail {
// Scheduling points for deterministic interference tests; unset in normal
// runs. Fired on the moving thread after the corresponding leg is
// captured.
struct ComposeTestHooks {
  void (*before_insert)(void*) = nullptr;
  void (*before_dcas)(void*) = nullptr;
  void* arg = nullptr;
};
extern ComposeTestHooks g_compose_hooks;
}  // namespace detail

// Remove-side hook. `element` is the value being removed (available before
// the linearization point by construction of a move-candidate); `hp` is
// the protected value to transport to helpers, 0 if none.
ScasResult scas_remove(ThreadSlot& self, AtomicCell& cell, word expected,
                       word desired, word element, word hp = 0);

// Insert-side hook.
ScasResult scas_insert(ThreadSlot& self, AtomicCell& cell, word expected,
                       word desired, word hp = 0);

// Containers opt into moves by overloading these two for their type:
//   bool container_remove(C&, word& out);
//   bool container_insert(C&, word value);

namespace detail {
void move_begin(ThreadSlot& self, void* target_erased,
                bool (*insert_fn)(void*, word), word source_key,
                word target_key);
bool move_finish(ThreadSlot& self, bool removed, MoveFailure* why);
}  // namespace detail

// Atomically transfers one element from source to target. Returns true on
// transfer; false when the source was empty or the target rejected the
// element (see `why`), with both containers unchanged. Both containers
// must be distinct move-ready instances; a nested move on one thread is a
// usage error.
template <class Source, class Target>
bool move(Source& source, Target& target, MoveFailure* why = nullptr,
          word source_key = 0, word target_key = 0) {
  static_assert(Source::is_move_ready && Target::is_move_ready,
                "move requires move-ready containers");
  ThreadSlot& self = this_slot();
  if constexpr (std::is_same_v<Source, Target>) {
    if (static_cast<const void*>(&source) == static_cast<const void*>(&target))
      throw std::invalid_argument("move: source and target must be distinct");
  }
  detail::move_begin(
      self, &target,
      [](void* t, word element) {
        return container_insert(*static_cast<Target*>(t), element);
      },
      source_key, target_key);
  word moved = 0;
  bool removed = container_remove(source, moved);
  return detail::move_finish(self, removed, why);
}

}  // namespace lfc
