#include "lfc/compose.hpp"

#include <cassert>

namespace lfc {

namespace detail {
ComposeTestHooks g_compose_hooks;
}

void detail::move_begin(ThreadSlot& self, void* target_erased,
                        bool (*insert_fn)(void*, word), word source_key,
                        word target_key) {
  MoveContext& ctx = self.move;
  if (ctx.desc != nullptr)
    throw std::logic_error("move: a move is already in flight on this thread");
  ctx.desc = make_descriptor(self);
  ctx.target = target_erased;
  ctx.insert_fn = insert_fn;
  ctx.source_key = source_key;
  ctx.target_key = target_key;
  ctx.insfailed = false;
  ctx.failure = MoveFailure::kNone;
}

bool detail::move_finish(ThreadSlot& self, bool removed, MoveFailure* why) {
  MoveContext& ctx = self.move;
  assert(ctx.desc != nullptr);
  dispose_descriptor(self, ctx.desc);
  ctx.desc = nullptr;
  ctx.target = nullptr;
  ctx.insert_fn = nullptr;
  if (!removed && ctx.failure == MoveFailure::kNone)
    ctx.failure = MoveFailure::kSourceEmpty;
  if (why) *why = removed ? MoveFailure::kNone : ctx.failure;
  ctx.failure = MoveFailure::kNone;
  return removed;
}

ScasResult scas_remove(ThreadSlot& self, AtomicCell& cell, word expected,
                       word desired, word element, word hp) {
  MoveContext& ctx = self.move;
  if (ctx.desc == nullptr)
    return cell.cas(expected, desired) ? ScasResult::kTrue : ScasResult::kFalse;

  assert(!is_descriptor(expected) && !is_descriptor(desired));
  DcasDescriptor* d = ctx.desc;
  d->ptr1 = &cell;
  d->old1 = expected;
  d->new1 = desired;
  d->hp1 = hp;
  // Cleared only by the insert-side hook once it ran the DCAS; still set
  // afterwards means the insert failed before reaching its linearization
  // site and the remove must abort.
  ctx.insfailed = true;
  if (detail::g_compose_hooks.before_insert)
    detail::g_compose_hooks.before_insert(detail::g_compose_hooks.arg);
  bool inserted = ctx.insert_fn(ctx.target, element);
  if (ctx.insfailed) {
    ctx.failure = MoveFailure::kTargetRejected;
    return ScasResult::kAbort;
  }
  return inserted ? ScasResult::kTrue : ScasResult::kFalse;
}

ScasResult scas_insert(ThreadSlot& self, AtomicCell& cell, word expected,
                       word desired, word hp) {
  MoveContext& ctx = self.move;
  if (ctx.desc == nullptr)
    return cell.cas(expected, desired) ? ScasResult::kTrue : ScasResult::kFalse;

  assert(!is_descriptor(expected) && !is_descriptor(desired));
  DcasDescriptor* d = ctx.desc;
  if (&cell == d->ptr1)
    throw std::invalid_argument("dcas targets must be two distinct words");
  d->ptr2 = &cell;
  d->old2 = expected;
  d->new2 = desired;
  d->hp2 = hp;
  if (detail::g_compose_hooks.before_dcas)
    detail::g_compose_hooks.before_dcas(detail::g_compose_hooks.arg);

  DcasResult r = dcas(announce_word(d), /*initiator=*/true, self);
  if (r != DcasResult::kSuccess) {
    // res is monotone; a failed descriptor is only reusable as a fresh
    // copy (which keeps the already-captured remove leg).
    DcasDescriptor* fresh = copy_descriptor(self, *d);
    dispose_descriptor(self, d);
    ctx.desc = fresh;
  }
  ctx.insfailed = false;
  if (r == DcasResult::kFirstFailed) return ScasResult::kAbort;
  if (r == DcasResult::kSecondFailed) return ScasResult::kFalse;
  return ScasResult::kTrue;
}

}  // namespace lfc
