#include "lfc/dcas.hpp"

#include <cassert>

namespace lfc {

namespace {

DcasResult result_from_res(word r) {
  assert(r == kResSuccess || r == kResSecondFailed);
  return r == kResSuccess ? DcasResult::kSuccess : DcasResult::kSecondFailed;
}

// Result agreement: the first decided return value is pinned on the
// descriptor and every later return must match it. FIRSTFAILED is outside
// the agreement domain because the operation was never announced, so the
// initiator is the only observer.
void note_result(DcasDescriptor* d, DcasResult r) {
  if (r == DcasResult::kFirstFailed) return;
  word enc = static_cast<word>(r) + 1;
  word expected = 0;
  if (!d->first_result.compare_exchange_strong(expected, enc)) {
    assert(expected == enc && "helpers disagreed on the DCAS result");
  }
}

}  // namespace

DcasDescriptor* make_descriptor(ThreadSlot& self) {
  return pool::alloc<DcasDescriptor>(self, kPoolDescriptors);
}

DcasDescriptor* copy_descriptor(ThreadSlot& self, const DcasDescriptor& old) {
  DcasDescriptor* d = make_descriptor(self);
  d->ptr1 = old.ptr1;
  d->ptr2 = old.ptr2;
  d->old1 = old.old1;
  d->old2 = old.old2;
  d->new1 = old.new1;
  d->new2 = old.new2;
  d->hp1 = old.hp1;
  d->hp2 = old.hp2;
  return d;
}

void dispose_descriptor(ThreadSlot& self, DcasDescriptor* d) {
  if (d->announced)
    pool::retire_block(self, d, kPoolDescriptors);
  else
    pool::release_unshared_block(self, d, kPoolDescriptors);
}

DcasResult dcas(word desc_word, bool initiator, ThreadSlot& self) {
  assert(is_descriptor(desc_word));
  DcasDescriptor* d = descriptor_of(desc_word);

  if (!initiator) {
    // Adopt the initiator's protections before touching either cell. The
    // initiator cannot return (and drop its own protections) before res is
    // decided, so these payloads are still covered at publication time.
    self.publish(kHzHelpFirst, d->hp1);
    self.publish(kHzHelpSecond, d->hp2);
  }

  const word announce = announce_word(d);

  word r = d->res.load();
  if (r == kResSuccess || r == kResSecondFailed) {
    // Already decided. The cell this value was read from may still hold
    // the descriptor (a stranded ABA install); put the old value back.
    bool wrote;
    if (thread_of(desc_word) != 0)
      wrote = d->ptr2->cas(desc_word, d->old2);
    else
      wrote = d->ptr1->cas(desc_word, d->old1);
    if (wrote && !initiator) self.stats.helper_writes++;
    DcasResult out = result_from_res(d->res.load());
    note_result(d, out);
    return out;
  }

  if (initiator) {
    if (!d->ptr1->cas(d->old1, announce)) return DcasResult::kFirstFailed;
    d->announced = true;
  }

  const word my_mark = mark(unmark(desc_word), self.id);
  bool p2set = d->ptr2->cas(d->old2, my_mark);
  word commit_mark = my_mark;
  if (p2set) {
    d->p2set_installs.fetch_add(1);
    if (!initiator) self.stats.helper_writes++;
  } else {
    word cur2 = d->ptr2->load();
    if (unmark(cur2) != unmark(desc_word)) {
      // Second word genuinely mismatched: try to decide SECONDFAILED.
      d->res.cas(kResUndecided, kResSecondFailed);
      word now = d->res.load();
      if (now == kResSuccess) {
        note_result(d, DcasResult::kSuccess);
        return DcasResult::kSuccess;
      }
      if (now == kResSecondFailed) {
        if (d->ptr1->cas(announce, d->old1) && !initiator)
          self.stats.helper_writes++;
        note_result(d, DcasResult::kSecondFailed);
        return DcasResult::kSecondFailed;
      }
      // A mark already committed; fall through and help it finish.
      commit_mark = now;
    } else {
      // Another thread's install is in place. Commit that mark, not our
      // own: committing a mark that is not in the cell would let the DCAS
      // report success without *ptr2 ever receiving new2.
      commit_mark = cur2;
    }
  }

  // Commit point for the success path: res remembers which install wins,
  // so exactly one value can be swapped to new2 even if ABA re-installs
  // marks later.
  d->res.cas(kResUndecided, commit_mark);
  word decided = d->res.load();
  if (decided == kResSecondFailed) {
    if (p2set) {
      // Our install lost to a SECONDFAILED decision; undo it.
      if (d->ptr2->cas(my_mark, d->old2) && !initiator)
        self.stats.helper_writes++;
    }
    note_result(d, DcasResult::kSecondFailed);
    return DcasResult::kSecondFailed;
  }

  if (d->ptr1->cas(announce, d->new1)) {
    d->new1_writes.fetch_add(1);
    if (!initiator) self.stats.helper_writes++;
  }
  // Only the mark stored in res can be swapped out of *ptr2; a stale or
  // losing install never matches.
  if (d->ptr2->cas(d->res.load(), d->new2)) {
    if (!initiator) self.stats.helper_writes++;
  }
  d->res.store(kResSuccess);
  note_result(d, DcasResult::kSuccess);
  return DcasResult::kSuccess;
}

word read(AtomicCell& cell, ThreadSlot& self) {
  word v = cell.load();
  if (!is_descriptor(v)) return v;
  do {
    // Publish-then-revalidate: only help a descriptor the cell still
    // holds after the protection is visible.
    self.publish(kHzDescriptor, v);
    if (cell.load() == v) dcas(v, false, self);
    v = cell.load();
  } while (is_descriptor(v));
  self.clear(kHzDescriptor);
  self.clear(kHzHelpFirst);
  self.clear(kHzHelpSecond);
  return v;
}

}  // namespace lfc
